#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "wavekin/config.hpp"

namespace wavekin {

// Hex-encoded SHA-256 digests (OpenSSL EVP).
std::string sha256_hex(std::string_view data);
std::string sha256_hex_file(const std::string& path);

// Reproducibility record of one CLI run: configuration echo, tool version,
// seed, per-check status with measured values, the artifact list with
// content digests, and wall time. Serialized as JSON with insertion-ordered
// keys so identical runs produce identical records up to wall time.
class RunManifest {
  public:
    RunManifest(std::string subcommand, std::uint64_t seed);

    void set_config_echo(const Config& config, const std::string& path);
    // Free-form top-level field (controls, theta tables, ...).
    void set_field(const std::string& key, nlohmann::ordered_json value);
    void add_check(const std::string& name, bool passed,
                   const std::string& detail,
                   nlohmann::ordered_json measured);
    void add_error(const std::string& code, const std::string& message);
    // Records the file under its basename together with its content digest.
    void add_artifact(const std::string& path);
    void set_wall_seconds(double seconds);

    bool all_passed() const { return failures_ == 0; }
    int failures() const { return failures_; }

    nlohmann::ordered_json to_json() const { return doc_; }
    // Writes the JSON document; the manifest does not list itself.
    void write(const std::string& path) const;

  private:
    nlohmann::ordered_json doc_;
    int failures_ = 0;
};

} // namespace wavekin
