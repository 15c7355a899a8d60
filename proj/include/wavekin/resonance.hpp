#pragma once

#include <optional>

#include "wavekin/core.hpp"

namespace wavekin {

// Geometry of one resonant triad at fixed wavenumber magnitudes.
struct TriadGeometry {
    double k, k1, k2;
    double s;              // triangle factor, twice the triangle area
    double angular_weight; // value of the reduced angular integral, 2/s
};

// Twice the area of the triangle with side lengths (k, k1, k2): the angular
// average of the 2D momentum delta is controlled by 1/S. Returns 0 exactly on
// collinear (degenerate) triads and nullopt when the triangle inequality
// fails. Throws std::domain_error for non-positive sides. Stable for needle
// triangles: sides are sorted and the factors are grouped so no catastrophic
// cancellation occurs.
std::optional<double> triangle_factor(double k, double k1, double k2);

// Value of the angular integral of the 2D momentum delta at fixed magnitudes:
// a double integral over d2k1 d2k2 of delta2(k - k1 - k2) * G, for isotropic
// G, reduces to the 1D form  integral k1 k2 * (2/S) * G dk1 dk2.  Returns
// 2/S; nullopt off the triangle domain and on degenerate triads (where the
// angular integral diverges).
std::optional<double> angular_weight(double k, double k1, double k2);

struct ResonantPartner {
    double k2;       // root of omega(k) = omega(k1) + omega(k2)
    double jacobian; // 1/|omega'(k2)|, the frequency-delta reduction weight
};

// Solves the decay resonance condition omega(k) = omega(k1) + omega(k2) for
// k2. Requires omega(k1) < omega(k); otherwise there is no partner and
// nullopt is returned. Power-law dispersions use the closed-form root
// k2 = (k^a - k1^a)^{1/a}; general dispersions use bracketed root-finding to
// relative 1e-12.
std::optional<ResonantPartner> resonant_partner(const WaveSystem& system,
                                                double k, double k1);

// Full geometry for a triad, or nullopt outside the (closed) triangle domain.
std::optional<TriadGeometry> triad_geometry(double k, double k1, double k2);

} // namespace wavekin
