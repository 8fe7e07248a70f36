#include "nowcast/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace nowcast::csv {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::vector<std::vector<std::string>> read_rows(const std::string& path,
                                                const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw FormatError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header)
        throw FormatError(path + ": expected header '" + expected_header +
                          "', found '" + line + "'");
    std::vector<std::vector<std::string>> rows;
    const std::size_t columns = split(expected_header).size();
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split(line);
        if (fields.size() != columns)
            throw FormatError(path + ": row with " + std::to_string(fields.size()) +
                              " fields, expected " + std::to_string(columns));
        rows.push_back(std::move(fields));
    }
    return rows;
}

long long to_int(const std::string& s, const char* what) {
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size())
        throw FormatError(std::string(what) + ": not an integer: '" + s + "'");
    return v;
}

double to_double(const std::string& s, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw FormatError(std::string(what) + ": not a number: '" + s + "'");
    return v;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace nowcast::csv
