#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <type_traits>
#include <vector>

namespace cutpath {

// Floating-point cell format: 12 significant digits.
std::string format_g12(double x);

// Comma-separated writer with a mandatory header row; comment lines start
// with '#' and carry the config echo so outputs are self-describing.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void comment(const std::string& line);
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<std::string>& cells);

    static std::string cell(double x) { return format_g12(x); }
    static std::string cell(bool x) { return x ? "true" : "false"; }
    static std::string cell(const char* x) { return x; }
    static std::string cell(const std::string& x) { return x; }
    template <typename T>
        requires(std::is_integral_v<T> && !std::is_same_v<T, bool>)
    static std::string cell(T x) {
        return std::to_string(x);
    }

private:
    std::ofstream out_;
    std::string path_;
    bool header_written_ = false;
};

}  // namespace cutpath
