#pragma once

#include <string>
#include <vector>

#include "wavekin/core.hpp"

namespace wavekin {

// Shortest round-trip decimal form of v (std::to_chars): locale-independent
// and bit-exact under re-parsing, so identical data always serializes to
// identical bytes.
std::string format_double(double v);

// Plain numeric CSV: one header line, comma separators, '\n' line endings.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

void write_csv(const std::string& path, const CsvTable& table);
// Reads a CSV written by write_csv (or any numeric CSV with a header row).
// Throws std::runtime_error on unreadable files, ragged rows, or
// non-numeric cells.
CsvTable read_csv(const std::string& path);

// Format helpers for the domain types. Column layouts:
//   spectrum   k,n
//   rate field k,gamma,eta,gamma_err,eta_err
//   hierarchy  k,p,M     (k-major, p = 1..P)
//   deviation  k,p,F     (k-major, p = 2..P)
void write_spectrum_csv(const std::string& path,
                        const IsotropicSpectrum& spectrum);
void write_rate_csv(const std::string& path, const RateField& rates);
void write_hierarchy_csv(const std::string& path,
                         const MomentHierarchy& hierarchy);
void write_deviation_csv(const std::string& path,
                         const DeviationField& deviations);

} // namespace wavekin
