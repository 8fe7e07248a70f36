#pragma once

#include <cstddef>
#include <vector>

#include "nowcast/errors.hpp"

namespace nowcast {

/// Ordered non-negative real values on consecutive integer days. This is the
/// carrier for everything a caller tags as a series: incidence fractions,
/// hidden-population fractions, per-bin estimates, case counts.
struct TimeSeries {
    int start_day = 0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    int day(std::size_t i) const { return start_day + static_cast<int>(i); }
    int last_day() const { return start_day + static_cast<int>(values.size()) - 1; }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }

    /// Throws DomainError unless non-empty with all values finite and >= 0.
    void validate() const;
};

/// Validating constructor.
TimeSeries make_series(int start_day, std::vector<double> values);

/// |s[t+1] - s[t]| / s[t]. Requires strictly positive values.
/// Output anchored at the same start day, length len - 1.
TimeSeries first_diff_ratio(const TimeSeries& s);

/// |s[t+1] - 2 s[t] + s[t-1]| / s[t] for interior t. Requires strictly
/// positive values and len >= 3. Output starts one day later, length len - 2.
TimeSeries second_diff_ratio(const TimeSeries& s);

/// Affine map of the values onto [0, 1]. A constant series maps to all
/// zeros (declared convention for the degenerate range).
TimeSeries range_normalize(const TimeSeries& s);

/// Mean absolute difference of equal-length series. ShapeError on mismatch.
double mae(const TimeSeries& a, const TimeSeries& b);

struct DiffBounds {
    double eps1 = 0.0;  // max first-difference ratio
    double eps2 = 0.0;  // max second-difference ratio
};

/// Empirical smoothness: maxima of the two difference-ratio series.
DiffBounds empirical_smoothness(const TimeSeries& s);

} // namespace nowcast
