#pragma once

#include <optional>

#include "nowcast/bounds.hpp"
#include "nowcast/estimator.hpp"

namespace nowcast {

/// Smoothness parameters of the series being estimated: first/second
/// difference bounds on f and the first-difference bound on the response
/// variance. The variance's second-difference bound is taken equal to
/// eps_s1 where one is needed.
struct SmoothnessProfile {
    double eps_f1 = 0.0;
    double eps_f2 = 0.0;
    double eps_s1 = 0.0;
};

struct WindowSearchResult {
    int w_selected = 0;
    std::optional<double> lambda1;  // first threshold at the last examined w
    std::optional<double> lambda2;  // second threshold at the last examined w
    bool satisfied = false;
    EstimateSeries estimate;
};

/// Descending window search: starting at w_init, evaluates both lambda
/// thresholds per w and stops at the first w where min(lambda1, lambda2) <=
/// lambda, returning the weighted moving average at that w. Exhausting the
/// search (w == 0) returns the input unsmoothed with satisfied == false.
/// Infeasible thresholds count as +infinity.
///
/// sigma_n and mu_n are computed once over all defined bins of e; the
/// per-window counts enter the thresholds as n_t := mu_n and
/// n_w := (2w+1) mu_n.
WindowSearchResult aggregated_estimate(const EstimateSeries& e, double lambda,
                                       int w_init, const SmoothnessProfile& smooth);

/// Estimates the smoothness parameters from the series itself: a w=3
/// unweighted moving average acts as the pilot, eps_f1/eps_f2 are its
/// empirical difference-ratio maxima, and eps_s1 is the first-difference
/// bound of a 7-bin rolling sample variance of the values. All three are
/// inflated by a 1.5 safety factor. DomainError when fewer than 3 strictly
/// positive bins are available.
SmoothnessProfile smoothness_from_pilot(const EstimateSeries& e);

} // namespace nowcast
