#pragma once

#include <string>
#include <vector>

#include "nowcast/errors.hpp"

// Minimal CSV helpers. The fixed schemas never contain quoting or embedded
// commas, so a plain split is all that is needed.
namespace nowcast::csv {

std::vector<std::string> split(const std::string& line);

/// Reads a file, checks the exact header, returns the split data rows.
std::vector<std::vector<std::string>> read_rows(const std::string& path,
                                                const std::string& expected_header);

long long to_int(const std::string& s, const char* what);
double to_double(const std::string& s, const char* what);

/// Round-trip formatting for doubles ("%.17g").
std::string fmt(double v);

} // namespace nowcast::csv
