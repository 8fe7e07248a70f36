#pragma once

#include <cstdio>
#include <string>
#include <string_view>
#include <tuple>

#include "nowcast/errors.hpp"

namespace nowcast {

// Civil date <-> day count since 1970-01-01 (Howard Hinnant's algorithms).

constexpr long long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const long long yoe = y - era * 400;
    const long long doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const long long doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + doe - 719468;
}

constexpr std::tuple<int, int, int> civil_from_days(long long z) {
    z += 719468;
    const long long era = (z >= 0 ? z : z - 146096) / 146097;
    const long long doe = z - era * 146097;
    const long long yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long long y = yoe + era * 400;
    const long long doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const long long mp = (5 * doy + 2) / 153;
    const long long d = doy - (153 * mp + 2) / 5 + 1;
    const long long m = mp + (mp < 10 ? 3 : -9);
    return {static_cast<int>(y + (m <= 2)), static_cast<int>(m),
            static_cast<int>(d)};
}

/// Parses "YYYY-MM-DD" to an epoch day. Throws FormatError otherwise.
inline long long parse_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-')
        throw FormatError("bad date '" + std::string(s) + "' (expected YYYY-MM-DD)");
    auto digits = [&](int from, int len) {
        int v = 0;
        for (int i = from; i < from + len; ++i) {
            const char c = s[static_cast<std::size_t>(i)];
            if (c < '0' || c > '9')
                throw FormatError("bad date '" + std::string(s) + "' (expected YYYY-MM-DD)");
            v = v * 10 + (c - '0');
        }
        return v;
    };
    const int y = digits(0, 4), m = digits(5, 2), d = digits(8, 2);
    if (m < 1 || m > 12 || d < 1 || d > 31)
        throw FormatError("bad date '" + std::string(s) + "' (out-of-range month or day)");
    return days_from_civil(y, m, d);
}

inline std::string format_iso_date(long long epoch_day) {
    auto [y, m, d] = civil_from_days(epoch_day);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
    return buf;
}

} // namespace nowcast
