#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wavekin {

// Malformed, unknown, or ill-typed configuration input.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Flat, typed key-value configuration with `[section]` headers.
//
//   [grid]
//   k_min = 0.5     # comments start with '#' or ';'
//   k_max = 50.0
//
// Parsing is strict: only the known section names (system, spectrum, grid,
// quadrature, integrator, scenario) are accepted, keys must be unique within
// their section, and every line must be blank, a comment, a header, or a
// `key = value` pair. Typed getters mark keys as consumed; after a consumer
// has read everything it understands, require_all_consumed() turns any
// leftover key into an error. Silent typos in tolerance keys would destroy
// reproducibility, so an unknown key is never ignored.
class Config {
  public:
    Config() = default;

    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text,
                               const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;

    // Getters without a fallback throw ConfigError when the key is absent;
    // the fallback overloads return it instead. All getters validate the
    // full value text (trailing garbage is an error) and mark the key
    // consumed whether or not it was present.
    std::string get_string(const std::string& section,
                           const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section,
                      const std::string& key) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    long long get_int(const std::string& section,
                      const std::string& key) const;
    long long get_int(const std::string& section, const std::string& key,
                      long long fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key,
                          std::uint64_t fallback) const;
    bool get_bool(const std::string& section, const std::string& key,
                  bool fallback) const;
    // Comma-separated list of numbers; an absent key yields the fallback.
    std::vector<double> get_double_list(const std::string& section,
                                        const std::string& key,
                                        std::vector<double> fallback) const;

    // Keys never touched by any getter, as "section.key" in file order.
    std::vector<std::string> unconsumed() const;
    // Throws ConfigError naming every unconsumed key.
    void require_all_consumed() const;

    // All entries in file order as ("section.key", raw value); used to echo
    // the configuration into the run manifest.
    const std::vector<std::pair<std::string, std::string>>& entries() const {
        return entries_;
    }

  private:
    const std::string* find(const std::string& section,
                            const std::string& key) const;

    std::vector<std::pair<std::string, std::string>> entries_;
    mutable std::vector<bool> consumed_;
};

} // namespace wavekin
