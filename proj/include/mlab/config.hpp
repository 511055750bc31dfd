#pragma once

#include <map>
#include <string>
#include <vector>

#include "mlab/error.hpp"

namespace mlab::experiments {

// Key-value experiment description. Text form is INI-like:
//   command = partition-check
//   [grid]
//   N = 256
// Section names prefix keys as "section.key". Flags parsed by the CLI
// override file values ("last write wins").
class ExperimentConfig {
public:
    ExperimentConfig() = default;

    static ExperimentConfig parse(const std::string& text);
    void merge(const ExperimentConfig& overrides);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::string require_string(const std::string& key) const;
    double get_number(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_numbers(const std::string& key,
                                    const std::vector<double>& fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

    // Canonical text form; part of the reproducibility contract.
    std::string canonical_text() const;

private:
    std::map<std::string, std::string> kv_;
};

} // namespace mlab::experiments
