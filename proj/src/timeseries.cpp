#include "nowcast/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nowcast {

void TimeSeries::validate() const {
    if (values.empty()) throw DomainError("series must hold at least one value");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] < 0.0)
            throw DomainError("series value at day " + std::to_string(day(i)) +
                              " is negative or not finite");
    }
}

TimeSeries make_series(int start_day, std::vector<double> values) {
    TimeSeries s{start_day, std::move(values)};
    s.validate();
    return s;
}

namespace {

void require_positive(const TimeSeries& s, const char* op) {
    s.validate();
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] <= 0.0)
            throw DomainError(std::string(op) + ": zero value at day " +
                              std::to_string(s.day(i)));
    }
}

} // namespace

TimeSeries first_diff_ratio(const TimeSeries& s) {
    require_positive(s, "first_diff_ratio");
    if (s.size() < 2) throw DomainError("first_diff_ratio: need at least 2 values");
    TimeSeries out{s.start_day, {}};
    out.values.reserve(s.size() - 1);
    for (std::size_t t = 0; t + 1 < s.size(); ++t)
        out.values.push_back(std::abs(s[t + 1] - s[t]) / s[t]);
    return out;
}

TimeSeries second_diff_ratio(const TimeSeries& s) {
    require_positive(s, "second_diff_ratio");
    if (s.size() < 3) throw DomainError("second_diff_ratio: need at least 3 values");
    TimeSeries out{s.start_day + 1, {}};
    out.values.reserve(s.size() - 2);
    for (std::size_t t = 1; t + 1 < s.size(); ++t)
        out.values.push_back(std::abs(s[t + 1] - 2.0 * s[t] + s[t - 1]) / s[t]);
    return out;
}

TimeSeries range_normalize(const TimeSeries& s) {
    s.validate();
    const auto [lo_it, hi_it] = std::minmax_element(s.values.begin(), s.values.end());
    const double lo = *lo_it, hi = *hi_it;
    TimeSeries out{s.start_day, std::vector<double>(s.size(), 0.0)};
    if (hi > lo) {
        const double span = hi - lo;
        for (std::size_t i = 0; i < s.size(); ++i) out[i] = (s[i] - lo) / span;
    }
    return out;
}

double mae(const TimeSeries& a, const TimeSeries& b) {
    if (a.size() != b.size())
        throw ShapeError("mae: length mismatch (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
    if (a.size() == 0) throw ShapeError("mae: empty series");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
    return sum / static_cast<double>(a.size());
}

DiffBounds empirical_smoothness(const TimeSeries& s) {
    const TimeSeries d1 = first_diff_ratio(s);
    const TimeSeries d2 = second_diff_ratio(s);
    DiffBounds b;
    b.eps1 = *std::max_element(d1.values.begin(), d1.values.end());
    b.eps2 = *std::max_element(d2.values.begin(), d2.values.end());
    return b;
}

} // namespace nowcast
