#pragma once

#include <string>
#include <vector>

namespace mlab::csvio {

// Deterministic CSV: fixed %.17g formatting, '\n' endings, no timestamps.
// Identical rows serialize to identical bytes.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);

    void add_row(const std::vector<double>& values);
    void add_row_mixed(const std::vector<std::string>& values);
    void write(const std::string& path) const;
    std::string to_string() const;

    static std::string format_number(double v);

private:
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;
};

} // namespace mlab::csvio
