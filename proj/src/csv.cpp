#include "mlab/csv.hpp"

#include <cstdio>
#include <fstream>

#include "mlab/error.hpp"

namespace mlab::csvio {

CsvWriter::CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {
    require(!columns_.empty(), ErrorCode::invalid_argument, "csv: no columns");
}

std::string CsvWriter::format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::add_row(const std::vector<double>& values) {
    require(values.size() == columns_.size(), ErrorCode::invalid_argument,
            "csv: row width mismatch");
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += format_number(values[i]);
    }
    rows_.push_back(std::move(line));
}

void CsvWriter::add_row_mixed(const std::vector<std::string>& values) {
    require(values.size() == columns_.size(), ErrorCode::invalid_argument,
            "csv: row width mismatch");
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += values[i];
    }
    rows_.push_back(std::move(line));
}

std::string CsvWriter::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) out += ',';
        out += columns_[i];
    }
    out += '\n';
    for (const std::string& r : rows_) {
        out += r;
        out += '\n';
    }
    return out;
}

void CsvWriter::write(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    require(os.good(), ErrorCode::io, "csv: cannot open " + path);
    std::string body = to_string();
    os.write(body.data(), static_cast<std::streamsize>(body.size()));
    require(os.good(), ErrorCode::io, "csv: write failed " + path);
}

} // namespace mlab::csvio
