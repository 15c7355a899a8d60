#include "wavekin/csvio.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace wavekin {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc()) {
        throw std::runtime_error("double formatting failed");
    }
    return std::string(buf, res.ptr);
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c > 0) out << ',';
        out << table.header[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) {
            throw std::runtime_error("csv row width does not match header");
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out << ',';
            out << format_double(row[c]);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("empty csv file: " + path);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) table.header.push_back(cell);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (start <= line.size()) {
            const auto comma = line.find(',', start);
            const std::string token = line.substr(
                start,
                comma == std::string::npos ? std::string::npos : comma - start);
            char* end = nullptr;
            const double v = std::strtod(token.c_str(), &end);
            if (end != token.c_str() + token.size() || token.empty()) {
                throw std::runtime_error(path + ": non-numeric cell \"" +
                                         token + "\"");
            }
            row.push_back(v);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (row.size() != table.header.size()) {
            throw std::runtime_error(path + ": ragged csv row");
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_spectrum_csv(const std::string& path,
                        const IsotropicSpectrum& spectrum) {
    CsvTable table;
    table.header = {"k", "n"};
    const auto& grid = spectrum.grid();
    const auto& values = spectrum.values();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        table.rows.push_back({grid[i], values[i]});
    }
    write_csv(path, table);
}

void write_rate_csv(const std::string& path, const RateField& rates) {
    CsvTable table;
    table.header = {"k", "gamma", "eta", "gamma_err", "eta_err"};
    for (std::size_t i = 0; i < rates.grid.size(); ++i) {
        table.rows.push_back({rates.grid[i], rates.gamma[i], rates.eta[i],
                              rates.gamma_err[i], rates.eta_err[i]});
    }
    write_csv(path, table);
}

void write_hierarchy_csv(const std::string& path,
                         const MomentHierarchy& hierarchy) {
    CsvTable table;
    table.header = {"k", "p", "M"};
    const auto& grid = hierarchy.grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (int p = 1; p <= hierarchy.max_order(); ++p) {
            table.rows.push_back(
                {grid[i], static_cast<double>(p), hierarchy.order(p)[i]});
        }
    }
    write_csv(path, table);
}

void write_deviation_csv(const std::string& path,
                         const DeviationField& deviations) {
    CsvTable table;
    table.header = {"k", "p", "F"};
    const auto& grid = deviations.grid();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (int p = 2; p <= deviations.max_order(); ++p) {
            table.rows.push_back(
                {grid[i], static_cast<double>(p), deviations.order(p)[i]});
        }
    }
    write_csv(path, table);
}

} // namespace wavekin
