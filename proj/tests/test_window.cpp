#include <doctest.h>

#include <cmath>
#include <limits>

#include "nowcast/window.hpp"

using namespace nowcast;

namespace {

EstimateSeries series_with_counts(std::vector<double> values,
                                  std::vector<long long> counts) {
    EstimateSeries e;
    e.values = TimeSeries{0, std::move(values)};
    e.counts = std::move(counts);
    return e;
}

EstimateSeries uniform_series(std::size_t bins, double value, long long count) {
    return series_with_counts(std::vector<double>(bins, value),
                              std::vector<long long>(bins, count));
}

// Independent re-derivation of the search: evaluate both thresholds at every
// w from w_init down and take the first satisfying one.
int oracle_selected_w(const EstimateSeries& e, double lambda, int w_init,
                      const SmoothnessProfile& p) {
    double sum = 0.0, sq = 0.0;
    long long bins = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e.counts[i] <= 0) continue;
        sum += static_cast<double>(e.counts[i]);
        sq += static_cast<double>(e.counts[i]) * static_cast<double>(e.counts[i]);
        ++bins;
    }
    const double mu_n = sum / static_cast<double>(bins);
    const double sigma_n = std::sqrt(std::max(0.0, sq / static_cast<double>(bins) - mu_n * mu_n));
    const double snr = sigma_n / mu_n;
    constexpr double inf = std::numeric_limits<double>::infinity();

    for (int w = w_init; w > 0; --w) {
        const double ratio = 1.0 / static_cast<double>(2 * w + 1);  // n_t / n_w
        double l1 = inf;
        if (w * p.eps_f1 < 1.0 && w * p.eps_s1 < 1.0) {
            const double num = w * p.eps_f1 / (1.0 - w * p.eps_f1);
            const double den =
                1.0 - (1.0 + w * p.eps_s1 / (1.0 - w * p.eps_s1)) * std::sqrt(ratio);
            if (den > 0.0) l1 = num / den;
        }
        double l2 = inf;
        if (w * p.eps_f1 < 1.0 && w * p.eps_s1 < 1.0) {
            const double gf = w * (w + 1) * p.eps_f2 / 6.0 +
                              p.eps_f1 * snr * (w * p.eps_f1 / (1.0 - w * p.eps_f1));
            const double gs = w * (w + 1) * p.eps_s1 / 6.0 +
                              p.eps_s1 * snr * (w * p.eps_s1 / (1.0 - w * p.eps_s1));
            const double den = 1.0 - std::sqrt(ratio * (1.0 + gs));
            if (den > 0.0) l2 = gf / den;
        }
        if (std::min(l1, l2) <= lambda) return w;
    }
    return 0;
}

double box_muller(rng::Engine& g) {
    const double u1 = 1.0 - rng::uniform_real(g);
    const double u2 = rng::uniform_real(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

} // namespace

TEST_CASE("constant truth keeps the largest window") {
    const EstimateSeries e = uniform_series(40, 2.0, 100);
    const WindowSearchResult r = aggregated_estimate(e, 0.05, 5, {0.0, 0.0, 0.0});
    CHECK(r.w_selected == 5);
    CHECK(r.satisfied);
    REQUIRE(r.lambda1.has_value());
    CHECK(*r.lambda1 == 0.0);
    CHECK(r.estimate.smoothing == Smoothing::WA);
    CHECK(r.estimate.w == 5);
}

TEST_CASE("unreachable lambda exhausts the loop and returns the input unsmoothed") {
    EstimateSeries e = uniform_series(40, 2.0, 100);
    for (std::size_t i = 0; i < e.size(); ++i) e.values[i] = 2.0 + 0.01 * (i % 5);
    const WindowSearchResult r = aggregated_estimate(e, 1e-9, 6, {0.05, 0.01, 0.05});
    CHECK(r.w_selected == 0);
    CHECK_FALSE(r.satisfied);
    CHECK(r.estimate.values.values == e.values.values);
    CHECK(r.estimate.smoothing == Smoothing::NoS);
    CHECK(r.estimate.w == 0);
}

TEST_CASE("selected w matches the exhaustive threshold evaluation") {
    const SmoothnessProfile p{0.02, 0.004, 0.02};
    const EstimateSeries e = uniform_series(60, 1.0, 100);
    const WindowSearchResult r = aggregated_estimate(e, 0.12, 5, p);
    CHECK(r.w_selected == oracle_selected_w(e, 0.12, 5, p));
    CHECK(r.satisfied);
    CHECK(r.w_selected >= 1);
    CHECK(r.w_selected <= 5);
    // with uniform counts the second threshold collapses when eps_f2 = 0
    const WindowSearchResult free2 = aggregated_estimate(e, 0.12, 5, {0.02, 0.0, 0.02});
    CHECK(free2.w_selected == 5);
    REQUIRE(free2.lambda2.has_value());
    CHECK(*free2.lambda2 == 0.0);
}

TEST_CASE("random instances agree with the oracle") {
    rng::Engine g(1234);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t bins = 12 + rng::uniform_below(g, 50);
        std::vector<double> values(bins);
        std::vector<long long> counts(bins);
        for (std::size_t i = 0; i < bins; ++i) {
            values[i] = rng::uniform_range(g, 0.5, 3.0);
            counts[i] = rng::uniform_int(g, 1, 200);
        }
        const EstimateSeries e = series_with_counts(std::move(values), std::move(counts));
        SmoothnessProfile p;
        p.eps_f1 = rng::uniform_range(g, 0.0, 0.15);
        p.eps_f2 = rng::uniform_range(g, 0.0, 0.02);
        p.eps_s1 = rng::uniform_range(g, 0.0, 0.15);
        const double lambda = rng::uniform_range(g, 0.001, 0.5);
        const int w_init = 1 + static_cast<int>(rng::uniform_below(g, 10));

        const WindowSearchResult r = aggregated_estimate(e, lambda, w_init, p);
        CHECK(r.w_selected == oracle_selected_w(e, lambda, w_init, p));
        CHECK(r.w_selected >= 0);
        CHECK(r.w_selected <= w_init);
        CHECK(r.satisfied == (r.w_selected > 0));

        // determinism
        const WindowSearchResult again = aggregated_estimate(e, lambda, w_init, p);
        CHECK(again.w_selected == r.w_selected);
        CHECK(again.estimate.values.values == r.estimate.values.values);
    }
}

TEST_CASE("aggregated_estimate validates inputs") {
    const EstimateSeries e = uniform_series(10, 1.0, 5);
    CHECK_THROWS_AS(aggregated_estimate(e, 0.0, 5, {}), DomainError);
    CHECK_THROWS_AS(aggregated_estimate(e, 0.1, 0, {}), DomainError);
}

TEST_CASE("smoothness_from_pilot on a constant series") {
    const SmoothnessProfile p = smoothness_from_pilot(uniform_series(30, 4.0, 50));
    CHECK(p.eps_f1 == 0.0);
    CHECK(p.eps_f2 == 0.0);
    CHECK(p.eps_s1 == 0.0);
}

TEST_CASE("smoothness_from_pilot on a geometric series") {
    // The w=3 pilot of a geometric series is geometric away from the edges,
    // so the max first-difference ratio is r - 1 and the reported bound is
    // 1.5 times that.
    std::vector<double> v(50);
    double x = 1.0;
    for (auto& e : v) {
        e = x;
        x *= 1.03;
    }
    const SmoothnessProfile p =
        smoothness_from_pilot(series_with_counts(std::move(v), std::vector<long long>(50, 10)));
    CHECK(std::abs(p.eps_f1 - 1.5 * 0.03) < 1e-6);
}

TEST_CASE("smoothness_from_pilot needs three positive bins") {
    CHECK_THROWS_AS(smoothness_from_pilot(uniform_series(30, 0.0, 50)), DomainError);
    CHECK_THROWS_AS(smoothness_from_pilot(series_with_counts({1.0, 2.0}, {3, 3})),
                    DomainError);
}

TEST_CASE("smoothness_from_pilot calibration on noisy constant truth") {
    // CV 10% noise around a constant, n_t = 200: the pilot smoothing should
    // keep the inflated eps_f1 at or below 0.1 in at least 95 of 100 trials.
    rng::Engine g(555);
    int ok = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t bins = 40;
        std::vector<double> values(bins);
        for (auto& v : values) v = std::max(0.01, 1.0 + 0.1 * box_muller(g));
        const SmoothnessProfile p =
            smoothness_from_pilot(series_with_counts(std::move(values),
                                                     std::vector<long long>(bins, 200)));
        if (p.eps_f1 <= 0.1) ++ok;
    }
    CHECK(ok >= 95);
}
