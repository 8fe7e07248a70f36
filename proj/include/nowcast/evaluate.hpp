#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nowcast/estimator.hpp"
#include "nowcast/timeseries.hpp"

namespace nowcast {

struct MaeEntry {
    Method method = Method::Ind;
    Smoothing smoothing = Smoothing::NoS;
    int accum = 1;
    int w = 0;
    double mae = 0.0;
    std::string mark;  // "best", "second", or empty, per (accum, w) group
};

/// MAE between an estimate and a day-indexed reference curve after range
/// normalisation, on the comparable bins only. The reference is re-binned to
/// the estimate's accum (mean over each block of days, blocks anchored at
/// day 0); a bin is comparable when the estimate has responses there, the
/// reference covers the whole block, and the bin is not the flagged partial
/// tail. nullopt when no bin is comparable.
std::optional<double> mae_vs_reference(const EstimateSeries& e,
                                       const TimeSeries& reference);

/// One MAE row per estimate, best and second-best marked within each
/// (accum, w) group. RangeError when an estimate shares no bins with the
/// reference.
std::vector<MaeEntry> evaluate_estimates(const std::vector<EstimateSeries>& estimates,
                                         const TimeSeries& reference);

} // namespace nowcast
