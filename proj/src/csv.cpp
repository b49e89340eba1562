#include "csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace cutpath {

std::string format_g12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path), path_(path) {
    if (!out_) throw std::runtime_error("cannot open for writing: " + path);
}

void CsvWriter::comment(const std::string& line) {
    if (header_written_) throw std::logic_error("comments must precede the header");
    out_ << "# " << line << '\n';
}

void CsvWriter::header(const std::vector<std::string>& cols) {
    header_written_ = true;
    for (std::size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (!header_written_) throw std::logic_error("header row is mandatory");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    if (!out_) throw std::runtime_error("write failed: " + path_);
}

}  // namespace cutpath
