#include "wavekin/manifest.hpp"

#include <array>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "wavekin/version.hpp"

namespace wavekin {

namespace {

std::string hex_digest(const unsigned char* digest, unsigned int len) {
    static const char* hexchars = "0123456789abcdef";
    std::string out(2 * len, '0');
    for (unsigned int i = 0; i < len; ++i) {
        out[2 * i] = hexchars[digest[i] >> 4];
        out[2 * i + 1] = hexchars[digest[i] & 0x0f];
    }
    return out;
}

class Sha256 {
  public:
    Sha256() : ctx_(EVP_MD_CTX_new()) {
        if (ctx_ == nullptr ||
            EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) {
            throw std::runtime_error("sha256 init failed");
        }
    }
    ~Sha256() { EVP_MD_CTX_free(ctx_); }
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    void update(const char* data, std::size_t len) {
        if (EVP_DigestUpdate(ctx_, data, len) != 1) {
            throw std::runtime_error("sha256 update failed");
        }
    }
    std::string finish() {
        std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
        unsigned int len = 0;
        if (EVP_DigestFinal_ex(ctx_, digest.data(), &len) != 1) {
            throw std::runtime_error("sha256 final failed");
        }
        return hex_digest(digest.data(), len);
    }

  private:
    EVP_MD_CTX* ctx_;
};

std::string basename_of(const std::string& path) {
    const auto slash = path.find_last_of('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

} // namespace

std::string sha256_hex(std::string_view data) {
    Sha256 h;
    h.update(data.data(), data.size());
    return h.finish();
}

std::string sha256_hex_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for digest: " + path);
    Sha256 h;
    std::array<char, 65536> buf;
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return h.finish();
}

RunManifest::RunManifest(std::string subcommand, std::uint64_t seed) {
    doc_["tool"] = kToolName;
    doc_["version"] = kToolVersion;
    doc_["subcommand"] = std::move(subcommand);
    doc_["seed"] = seed;
    doc_["config_path"] = nullptr;
    doc_["config"] = nlohmann::ordered_json::object();
    doc_["checks"] = nlohmann::ordered_json::array();
    doc_["artifacts"] = nlohmann::ordered_json::array();
    doc_["errors"] = nlohmann::ordered_json::array();
    doc_["wall_seconds"] = 0.0;
}

void RunManifest::set_config_echo(const Config& config,
                                  const std::string& path) {
    doc_["config_path"] = path;
    auto& echo = doc_["config"];
    for (const auto& [key, value] : config.entries()) {
        echo[key] = value;
    }
}

void RunManifest::set_field(const std::string& key,
                            nlohmann::ordered_json value) {
    doc_[key] = std::move(value);
}

void RunManifest::add_check(const std::string& name, bool passed,
                            const std::string& detail,
                            nlohmann::ordered_json measured) {
    nlohmann::ordered_json rec;
    rec["name"] = name;
    rec["passed"] = passed;
    rec["detail"] = detail;
    rec["measured"] = std::move(measured);
    doc_["checks"].push_back(std::move(rec));
    if (!passed) ++failures_;
}

void RunManifest::add_error(const std::string& code,
                            const std::string& message) {
    nlohmann::ordered_json rec;
    rec["code"] = code;
    rec["message"] = message;
    doc_["errors"].push_back(std::move(rec));
}

void RunManifest::add_artifact(const std::string& path) {
    nlohmann::ordered_json rec;
    rec["file"] = basename_of(path);
    rec["sha256"] = sha256_hex_file(path);
    doc_["artifacts"].push_back(std::move(rec));
}

void RunManifest::set_wall_seconds(double seconds) {
    doc_["wall_seconds"] = seconds;
}

void RunManifest::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << doc_.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace wavekin
