#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace wavekin {

// Thrown when a quadrature or ODE step fails in a way the caller cannot
// recover from (non-convergence, step underflow, NaN contamination).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what)
        : std::runtime_error(what) {}
};

inline constexpr double kPi = 3.14159265358979323846;

// log(1 - exp(-x)) for x > 0 without cancellation on either end.
inline double log1mexp(double x) {
    if (x <= 0.0) throw std::domain_error("log1mexp: argument must be positive");
    return x > 0.6931471805599453 ? std::log1p(-std::exp(-x))
                                  : std::log(-std::expm1(-x));
}

inline double log_factorial(int n) {
    return std::lgamma(static_cast<double>(n) + 1.0);
}

inline double log_binomial(int n, int k) {
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// splitmix64: used only to decorrelate stream seeds, never as the main engine.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic uniform stream: mt19937_64 is bit-stable across platforms and
// the top-53-bit mapping avoids the library-dependent distribution classes.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(seed) {}

    // Independent substream for task `id` under a common user seed.
    static RngStream derive(std::uint64_t seed, std::uint64_t id) {
        return RngStream(splitmix64(seed ^ splitmix64(id + 1)));
    }

    double uniform() { // [0, 1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

private:
    std::mt19937_64 eng_;
};

} // namespace wavekin
