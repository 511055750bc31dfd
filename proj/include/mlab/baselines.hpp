#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mlab::baselines {

// Versioned text store for fitted constants and recorded intervals:
// one "key = v1 v2 ..." line per entry. Entries are recorded once and
// regression-checked thereafter.
class Baselines {
public:
    static Baselines load(const std::string& path);  // missing file -> empty
    void save(const std::string& path) const;

    std::optional<std::vector<double>> lookup(const std::string& key) const;
    void record(const std::string& key, std::vector<double> values);
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, std::vector<double>> entries_;
};

} // namespace mlab::baselines
