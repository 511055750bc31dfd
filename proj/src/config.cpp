#include "mlab/config.hpp"

#include <cstdlib>
#include <sstream>

namespace mlab::experiments {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            require(t.back() == ']', ErrorCode::config,
                    "config line " + std::to_string(lineno) + ": unterminated section");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        std::size_t eq = t.find('=');
        require(eq != std::string::npos, ErrorCode::config,
                "config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        require(!key.empty(), ErrorCode::config,
                "config line " + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        cfg.kv_[key] = value;
    }
    return cfg;
}

void ExperimentConfig::merge(const ExperimentConfig& overrides) {
    for (const auto& [k, v] : overrides.kv_) kv_[k] = v;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    kv_[key] = value;
}

bool ExperimentConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string ExperimentConfig::get_string(const std::string& key,
                                         const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

std::string ExperimentConfig::require_string(const std::string& key) const {
    auto it = kv_.find(key);
    require(it != kv_.end(), ErrorCode::config, "config: missing field '" + key + "'");
    return it->second;
}

double ExperimentConfig::get_number(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    char* end = nullptr;
    double v = std::strtod(it->second.c_str(), &end);
    require(end && *end == '\0' && end != it->second.c_str(), ErrorCode::config,
            "config: field '" + key + "' is not a number: '" + it->second + "'");
    return v;
}

int ExperimentConfig::get_int(const std::string& key, int fallback) const {
    double v = get_number(key, fallback);
    int i = static_cast<int>(v);
    require(static_cast<double>(i) == v, ErrorCode::config,
            "config: field '" + key + "' must be an integer");
    return i;
}

std::uint64_t ExperimentConfig::get_u64(const std::string& key,
                                        std::uint64_t fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    char* end = nullptr;
    unsigned long long v = std::strtoull(it->second.c_str(), &end, 10);
    require(end && *end == '\0' && end != it->second.c_str(), ErrorCode::config,
            "config: field '" + key + "' is not an unsigned integer");
    return v;
}

std::vector<double> ExperimentConfig::get_numbers(
    const std::string& key, const std::vector<double>& fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::vector<double> out;
    std::string item;
    std::istringstream is(it->second);
    while (std::getline(is, item, ',')) {
        char* end = nullptr;
        double v = std::strtod(item.c_str(), &end);
        require(end && *end == '\0' && end != item.c_str(), ErrorCode::config,
                "config: field '" + key + "' has a non-numeric entry: '" + item + "'");
        out.push_back(v);
    }
    require(!out.empty(), ErrorCode::config, "config: field '" + key + "' is empty");
    return out;
}

std::string ExperimentConfig::canonical_text() const {
    std::string out;
    for (const auto& [k, v] : kv_) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

} // namespace mlab::experiments
