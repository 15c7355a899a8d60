#include "wavekin/config.hpp"

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace wavekin {

namespace {

constexpr std::array<const char*, 6> kKnownSections = {
    "system", "spectrum", "grid", "quadrature", "integrator", "scenario"};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& origin, std::size_t line,
                       const std::string& message) {
    std::ostringstream os;
    os << origin << ":" << line << ": " << message;
    throw ConfigError(os.str());
}

double parse_double_token(const std::string& text, const std::string& where) {
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError(where + ": empty numeric value");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE) {
        throw ConfigError(where + ": expected a number, got \"" + t + "\"");
    }
    return v;
}

} // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path);
}

Config Config::parse_string(const std::string& text,
                            const std::string& origin) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // Comments run from '#' or ';' to end of line, whether the marker
        // starts the line or trails a value.
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']') fail(origin, lineno, "unterminated section");
            section = trim(t.substr(1, t.size() - 2));
            if (std::find(kKnownSections.begin(), kKnownSections.end(),
                          section) == kKnownSections.end()) {
                fail(origin, lineno, "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            fail(origin, lineno, "expected key = value, got \"" + t + "\"");
        }
        if (section.empty()) {
            fail(origin, lineno, "key outside of any [section]");
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) fail(origin, lineno, "empty key");
        const std::string qualified = section + "." + key;
        for (const auto& e : cfg.entries_) {
            if (e.first == qualified) {
                fail(origin, lineno, "duplicate key " + qualified);
            }
        }
        cfg.entries_.emplace_back(qualified, value);
    }
    cfg.consumed_.assign(cfg.entries_.size(), false);
    return cfg;
}

const std::string* Config::find(const std::string& section,
                                const std::string& key) const {
    const std::string qualified = section + "." + key;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].first == qualified) {
            consumed_[i] = true;
            return &entries_[i].second;
        }
    }
    return nullptr;
}

bool Config::has(const std::string& section, const std::string& key) const {
    const std::string qualified = section + "." + key;
    for (const auto& e : entries_) {
        if (e.first == qualified) return true;
    }
    return false;
}

std::string Config::get_string(const std::string& section,
                               const std::string& key) const {
    const std::string* v = find(section, key);
    if (v == nullptr) {
        throw ConfigError("missing required key " + section + "." + key);
    }
    return *v;
}

std::string Config::get_string(const std::string& section,
                               const std::string& key,
                               const std::string& fallback) const {
    const std::string* v = find(section, key);
    return v == nullptr ? fallback : *v;
}

double Config::get_double(const std::string& section,
                          const std::string& key) const {
    return parse_double_token(get_string(section, key), section + "." + key);
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    const std::string* v = find(section, key);
    if (v == nullptr) return fallback;
    return parse_double_token(*v, section + "." + key);
}

long long Config::get_int(const std::string& section,
                          const std::string& key) const {
    const std::string text = get_string(section, key);
    const std::string where = section + "." + key;
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size() || errno == ERANGE || text.empty()) {
        throw ConfigError(where + ": expected an integer, got \"" + text +
                          "\"");
    }
    return v;
}

long long Config::get_int(const std::string& section, const std::string& key,
                          long long fallback) const {
    if (find(section, key) == nullptr) return fallback;
    return get_int(section, key);
}

std::uint64_t Config::get_u64(const std::string& section,
                              const std::string& key,
                              std::uint64_t fallback) const {
    const std::string* v = find(section, key);
    if (v == nullptr) return fallback;
    const std::string where = section + "." + key;
    errno = 0;
    char* end = nullptr;
    const unsigned long long u = std::strtoull(v->c_str(), &end, 10);
    if (end != v->c_str() + v->size() || errno == ERANGE || v->empty() ||
        v->front() == '-') {
        throw ConfigError(where + ": expected an unsigned integer, got \"" +
                          *v + "\"");
    }
    return static_cast<std::uint64_t>(u);
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
    const std::string* v = find(section, key);
    if (v == nullptr) return fallback;
    if (*v == "true" || *v == "1") return true;
    if (*v == "false" || *v == "0") return false;
    throw ConfigError(section + "." + key +
                      ": expected true/false/1/0, got \"" + *v + "\"");
}

std::vector<double> Config::get_double_list(
    const std::string& section, const std::string& key,
    std::vector<double> fallback) const {
    const std::string* v = find(section, key);
    if (v == nullptr) return fallback;
    const std::string where = section + "." + key;
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= v->size()) {
        const auto comma = v->find(',', start);
        const std::string token =
            v->substr(start, comma == std::string::npos ? std::string::npos
                                                        : comma - start);
        out.push_back(parse_double_token(token, where));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::vector<std::string> Config::unconsumed() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!consumed_[i]) out.push_back(entries_[i].first);
    }
    return out;
}

void Config::require_all_consumed() const {
    const std::vector<std::string> left = unconsumed();
    if (left.empty()) return;
    std::string msg = "unknown configuration key";
    if (left.size() > 1) msg += "s";
    msg += ":";
    for (const auto& k : left) msg += " " + k;
    throw ConfigError(msg);
}

} // namespace wavekin
