#include "nowcast/window.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace nowcast {

namespace {

struct CountStats {
    double mu_n = 0.0;
    double sigma_n = 0.0;
};

CountStats count_stats(const EstimateSeries& e) {
    double sum = 0.0, sum_sq = 0.0;
    long long bins = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e.defined(i)) continue;
        const double n = static_cast<double>(e.counts[i]);
        sum += n;
        sum_sq += n * n;
        ++bins;
    }
    if (bins == 0) throw DomainError("aggregated_estimate: series has no responses");
    CountStats st;
    st.mu_n = sum / static_cast<double>(bins);
    st.sigma_n = std::sqrt(std::max(0.0, sum_sq / static_cast<double>(bins) -
                                             st.mu_n * st.mu_n));
    return st;
}

std::optional<double> gamma_or_infeasible(double eps1, double eps2, int w,
                                          double snr) {
    if (static_cast<double>(w) * eps1 >= 1.0) return std::nullopt;
    return gamma_factor(eps1, eps2, w, snr);
}

} // namespace

WindowSearchResult aggregated_estimate(const EstimateSeries& e, double lambda,
                                       int w_init, const SmoothnessProfile& smooth) {
    if (!(lambda > 0.0)) throw DomainError("aggregated_estimate: lambda must be positive");
    if (w_init < 1) throw DomainError("aggregated_estimate: w_init must be >= 1");
    e.validate();
    const CountStats st = count_stats(e);
    const double snr = st.sigma_n / st.mu_n;
    constexpr double kInf = std::numeric_limits<double>::infinity();

    WindowSearchResult res;
    int w = w_init;
    while (w > 0) {
        const double n_t = st.mu_n;
        const double n_w = static_cast<double>(2 * w + 1) * st.mu_n;

        WindowBoundInputs in;
        in.eps_f1 = smooth.eps_f1;
        in.eps_f2 = smooth.eps_f2;
        in.eps_s1 = smooth.eps_s1;
        in.eps_s2 = smooth.eps_s1;  // no separate second-diff bound is estimated
        in.w = w;
        in.n_t = n_t;
        in.n_w = n_w;
        in.sigma_n_over_mu_n = snr;
        res.lambda1 = lambda_threshold_thm3(in);

        const auto gamma_f = gamma_or_infeasible(smooth.eps_f1, smooth.eps_f2, w, snr);
        const auto gamma_s2 = gamma_or_infeasible(smooth.eps_s1, smooth.eps_s1, w, snr);
        res.lambda2 = (gamma_f && gamma_s2)
                          ? lambda_threshold_thm4(*gamma_f, *gamma_s2, n_t, n_w)
                          : std::nullopt;

        const double best = std::min(res.lambda1.value_or(kInf), res.lambda2.value_or(kInf));
        if (best <= lambda) {
            res.satisfied = true;
            break;
        }
        --w;
    }
    res.w_selected = w;
    res.estimate = w == 0 ? e : weighted_ma(e, w);
    return res;
}

namespace {

/// Max of |x[t+1] - x[t]| / x[t] over adjacent defined pairs with positive
/// denominator. A 0 -> 0 step counts as ratio 0; a step out of 0 is skipped
/// (no meaningful relative change).
double max_first_ratio(const std::vector<double>& x, const std::vector<bool>& ok) {
    double best = 0.0;
    for (std::size_t t = 0; t + 1 < x.size(); ++t) {
        if (!ok[t] || !ok[t + 1]) continue;
        if (x[t] > 0.0)
            best = std::max(best, std::abs(x[t + 1] - x[t]) / x[t]);
        else if (x[t + 1] == 0.0)
            best = std::max(best, 0.0);
    }
    return best;
}

double max_second_ratio(const std::vector<double>& x, const std::vector<bool>& ok) {
    double best = 0.0;
    for (std::size_t t = 1; t + 1 < x.size(); ++t) {
        if (!ok[t - 1] || !ok[t] || !ok[t + 1]) continue;
        if (x[t] > 0.0)
            best = std::max(best, std::abs(x[t + 1] - 2.0 * x[t] + x[t - 1]) / x[t]);
    }
    return best;
}

} // namespace

SmoothnessProfile smoothness_from_pilot(const EstimateSeries& e) {
    e.validate();
    long long positive_bins = 0;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e.defined(i) && e.values[i] > 0.0) ++positive_bins;
    if (positive_bins < 3)
        throw DomainError("smoothness_from_pilot: need at least 3 positive bins");

    const EstimateSeries pilot = unweighted_ma(e, 3);
    std::vector<bool> pilot_ok(pilot.size());
    for (std::size_t i = 0; i < pilot.size(); ++i) pilot_ok[i] = pilot.defined(i);

    SmoothnessProfile p;
    p.eps_f1 = 1.5 * max_first_ratio(pilot.values.values, pilot_ok);
    p.eps_f2 = 1.5 * max_second_ratio(pilot.values.values, pilot_ok);

    // Rolling 7-bin sample variance of the raw bin values stands in for the
    // response-variance series.
    const std::size_t n = e.size();
    std::vector<double> rolling_var(n, 0.0);
    std::vector<bool> var_ok(n, false);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t lo = t >= 3 ? t - 3 : 0;
        const std::size_t hi = std::min(n - 1, t + 3);
        double sum = 0.0, sum_sq = 0.0;
        long long m = 0;
        for (std::size_t i = lo; i <= hi; ++i) {
            if (!e.defined(i)) continue;
            sum += e.values[i];
            sum_sq += e.values[i] * e.values[i];
            ++m;
        }
        if (m >= 2) {
            const double mean = sum / static_cast<double>(m);
            rolling_var[t] =
                std::max(0.0, (sum_sq - static_cast<double>(m) * mean * mean) /
                                  static_cast<double>(m - 1));
            var_ok[t] = true;
        }
    }
    p.eps_s1 = 1.5 * max_first_ratio(rolling_var, var_ok);
    return p;
}

} // namespace nowcast
