#include "mlab/baselines.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mlab/error.hpp"

namespace mlab::baselines {

namespace {
constexpr const char* header = "# mlab baselines v1";
}

Baselines Baselines::load(const std::string& path) {
    Baselines b;
    std::ifstream is(path);
    if (!is.good()) return b;
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (first) {
            require(line == header, ErrorCode::io,
                    "baselines: unrecognized header in " + path);
            first = false;
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        // keys may contain '='; the separator is the spaced " = "
        std::size_t eq = line.find(" = ");
        require(eq != std::string::npos, ErrorCode::io,
                "baselines: malformed line in " + path);
        std::string key = line.substr(0, eq);
        std::istringstream vs(line.substr(eq + 3));
        std::vector<double> vals;
        double v;
        while (vs >> v) vals.push_back(v);
        require(!vals.empty(), ErrorCode::io, "baselines: empty entry for " + key);
        b.entries_[key] = std::move(vals);
    }
    return b;
}

void Baselines::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    require(os.good(), ErrorCode::io, "baselines: cannot open " + path);
    os << header << '\n';
    char buf[40];
    for (const auto& [k, vals] : entries_) {
        os << k << " =";
        for (double v : vals) {
            std::snprintf(buf, sizeof(buf), " %.17g", v);
            os << buf;
        }
        os << '\n';
    }
    require(os.good(), ErrorCode::io, "baselines: write failed " + path);
}

std::optional<std::vector<double>> Baselines::lookup(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void Baselines::record(const std::string& key, std::vector<double> values) {
    entries_[key] = std::move(values);
}

} // namespace mlab::baselines
