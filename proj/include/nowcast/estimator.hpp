#pragma once

#include <string>
#include <vector>

#include "nowcast/survey.hpp"
#include "nowcast/timeseries.hpp"

namespace nowcast {

enum class Method { Ind, Nsum, Dir };
enum class Smoothing { NoS, WA, UA };

std::string to_string(Method m);
std::string to_string(Smoothing s);
Method method_from_string(const std::string& s);      // ConfigError otherwise
Smoothing smoothing_from_string(const std::string& s);

/// Per-bin estimate series. Bins with counts[i] == 0 are "missing" (no
/// responses fell in the bin); their value is stored as 0 and skipped by the
/// moving averages and by evaluation.
struct EstimateSeries {
    TimeSeries values;
    std::vector<long long> counts;  // n_t per bin, aligned with values
    Method method = Method::Ind;
    Smoothing smoothing = Smoothing::NoS;
    int accum = 1;
    int w = 0;
    bool last_bin_partial = false;  // trailing block spanned fewer than accum days

    std::size_t size() const { return values.size(); }
    bool defined(std::size_t i) const { return counts[i] > 0; }
    void validate() const;
};

/// Pools responses into calendar blocks of `accum` days (block = day / accum,
/// anchored at day 0). Merged batch day = block index. A trailing block
/// spanning fewer than accum days is kept and flagged partial.
std::vector<ResponseBatch> accumulate(const std::vector<ResponseBatch>& batches,
                                      int accum);

/// Per-bin mean of the indirect counts.
EstimateSeries indirect_mean(const std::vector<ResponseBatch>& batches);

/// Per-bin mean of indirect_count / degree. DomainError on degree 0 or when
/// degrees were not collected.
EstimateSeries nsum_mean(const std::vector<ResponseBatch>& batches);

/// Per-bin mean of the direct flags.
EstimateSeries direct_mean(const std::vector<ResponseBatch>& batches);

/// Count-weighted moving average over [t-w, t+w], truncated at the series
/// boundaries with weights renormalised; missing bins carry weight 0.
/// Output counts are the in-range count sums.
EstimateSeries weighted_ma(const EstimateSeries& e, int w);

/// Plain moving average over the defined bins in [t-w, t+w]; counts carried
/// as in-range sums like weighted_ma.
EstimateSeries unweighted_ma(const EstimateSeries& e, int w);

/// mu_D estimate from one anchor day with known truth: values[tau] / f_tau.
/// tau is addressed in the series' own day domain.
double calibrate_mu_d(const EstimateSeries& e, double f_tau, int tau);

} // namespace nowcast
