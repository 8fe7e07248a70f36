#include <doctest.h>

#include <cmath>

#include "nowcast/estimator.hpp"
#include "nowcast/rng.hpp"

using namespace nowcast;

namespace {

ResponseBatch batch(int day, std::vector<double> counts, std::vector<int> degrees = {},
                    std::vector<std::uint8_t> flags = {}) {
    ResponseBatch b;
    b.day = day;
    if (flags.empty()) flags.assign(counts.size(), 0);
    b.indirect_counts = std::move(counts);
    b.degrees = std::move(degrees);
    b.direct_flags = std::move(flags);
    return b;
}

std::vector<ResponseBatch> random_batches(rng::Engine& g, int days, int max_n) {
    std::vector<ResponseBatch> out;
    for (int day = 0; day < days; ++day) {
        const int n = static_cast<int>(rng::uniform_int(g, 1, max_n));
        ResponseBatch b;
        b.day = day;
        for (int i = 0; i < n; ++i) {
            b.indirect_counts.push_back(static_cast<double>(rng::uniform_int(g, 0, 6)));
            b.degrees.push_back(static_cast<int>(rng::uniform_int(g, 1, 9)));
            b.direct_flags.push_back(rng::bernoulli(g, 0.3) ? 1 : 0);
        }
        out.push_back(std::move(b));
    }
    return out;
}

EstimateSeries random_estimate(rng::Engine& g, std::size_t bins) {
    EstimateSeries e;
    e.values = TimeSeries{0, std::vector<double>(bins)};
    e.counts.resize(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        e.values[i] = rng::uniform_range(g, 0.0, 5.0);
        e.counts[i] = rng::uniform_int(g, 1, 40);
    }
    return e;
}

} // namespace

TEST_CASE("accumulate") {
    SUBCASE("accum 1 is the identity") {
        rng::Engine g(5);
        const auto batches = random_batches(g, 5, 4);
        const auto out = accumulate(batches, 1);
        REQUIRE(out.size() == batches.size());
        for (std::size_t k = 0; k < out.size(); ++k) {
            CHECK(out[k].indirect_counts == batches[k].indirect_counts);
            CHECK(out[k].day == batches[k].day);
        }
        CHECK_FALSE(out.back().partial);
    }
    SUBCASE("two days concatenate into a full block") {
        const auto out =
            accumulate({batch(0, {1, 2, 3}), batch(1, {4, 5, 6, 7, 8})}, 2);
        REQUIRE(out.size() == 1);
        CHECK(out[0].size() == 8);
        CHECK(out[0].day == 0);
        CHECK_FALSE(out[0].partial);
    }
    SUBCASE("15 days at accum 7 leave a flagged 1-day tail") {
        std::vector<ResponseBatch> batches;
        for (int day = 0; day < 15; ++day) batches.push_back(batch(day, {1.0, 2.0}));
        const auto out = accumulate(batches, 7);
        REQUIRE(out.size() == 3);
        CHECK(out[0].size() == 14);
        CHECK(out[1].size() == 14);
        CHECK(out[2].size() == 2);
        CHECK(out[0].day == 0);
        CHECK(out[2].day == 2);
        CHECK_FALSE(out[0].partial);
        CHECK(out.back().partial);
    }
    SUBCASE("14 days at accum 7 have no partial tail") {
        std::vector<ResponseBatch> batches;
        for (int day = 0; day < 14; ++day) batches.push_back(batch(day, {1.0}));
        const auto out = accumulate(batches, 7);
        REQUIRE(out.size() == 2);
        CHECK_FALSE(out.back().partial);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(accumulate({}, 1), ShapeError);
        CHECK_THROWS_AS(accumulate({batch(1, {1}), batch(1, {1})}, 1), ShapeError);
    }
}

TEST_CASE("per-bin means") {
    SUBCASE("indirect") {
        const auto e = indirect_mean({batch(0, {2, 4})});
        CHECK(e.values[0] == 3.0);
        CHECK(e.counts[0] == 2);
        CHECK(e.method == Method::Ind);
        CHECK(e.smoothing == Smoothing::NoS);
        CHECK(indirect_mean({batch(0, {0, 0, 0})}).values[0] == 0.0);
    }
    SUBCASE("nsum") {
        const auto e = nsum_mean({batch(0, {2, 3}, {4, 6})});
        CHECK(e.values[0] == doctest::Approx(0.5));
        const auto full = nsum_mean({batch(0, {4, 6}, {4, 6})});
        CHECK(full.values[0] == 1.0);
        const auto zero = nsum_mean({batch(0, {0, 0}, {4, 6})});
        CHECK(zero.values[0] == 0.0);
        CHECK_THROWS_AS(nsum_mean({batch(0, {1, 2})}), ShapeError);  // degrees absent
        ResponseBatch bad = batch(0, {1}, {1});
        bad.degrees[0] = 0;
        CHECK_THROWS_AS(nsum_mean({bad}), DomainError);
    }
    SUBCASE("direct") {
        const auto e = direct_mean({batch(0, {0, 0, 0, 0}, {}, {1, 0, 1, 0})});
        CHECK(e.values[0] == 0.5);
        const auto ones = direct_mean({batch(0, {0, 0}, {}, {1, 1})});
        CHECK(ones.values[0] == 1.0);
    }
    SUBCASE("direct Monte Carlo against the binomial oracle") {
        rng::Engine g(42);
        ResponseBatch b;
        b.day = 0;
        const int n = 10000;
        for (int i = 0; i < n; ++i) {
            b.indirect_counts.push_back(0);
            b.direct_flags.push_back(rng::bernoulli(g, 0.3) ? 1 : 0);
        }
        const auto e = direct_mean({b});
        CHECK(std::abs(e.values[0] - 0.3) < 3 * std::sqrt(0.3 * 0.7 / n));
    }
    SUBCASE("day gaps become missing bins") {
        const auto e = indirect_mean({batch(2, {1, 1}), batch(5, {3})});
        REQUIRE(e.size() == 4);
        CHECK(e.values.start_day == 2);
        CHECK(e.defined(0));
        CHECK_FALSE(e.defined(1));
        CHECK_FALSE(e.defined(2));
        CHECK(e.defined(3));
        CHECK(e.values[3] == 3.0);
    }
}

TEST_CASE("moving averages: examples") {
    EstimateSeries e;
    e.values = TimeSeries{0, {1, 3}};
    e.counts = {1, 3};

    SUBCASE("w = 0 is the identity") {
        const auto wa = weighted_ma(e, 0);
        CHECK(wa.values.values == e.values.values);
        CHECK(wa.smoothing == Smoothing::WA);
        const auto ua = unweighted_ma(e, 0);
        CHECK(ua.values.values == e.values.values);
    }
    SUBCASE("count-weighted window") {
        const auto wa = weighted_ma(e, 1);
        CHECK(wa.values[0] == doctest::Approx(2.5).epsilon(1e-15));
        CHECK(wa.values[1] == doctest::Approx(2.5).epsilon(1e-15));
        CHECK(wa.counts == std::vector<long long>{4, 4});
    }
    SUBCASE("unweighted window") {
        EstimateSeries u;
        u.values = TimeSeries{0, {0, 3, 6}};
        u.counts = {5, 1, 2};
        const auto ua = unweighted_ma(u, 1);
        CHECK(ua.values[1] == doctest::Approx(3.0));
        CHECK(ua.counts[1] == 8);
    }
    SUBCASE("missing bins carry no weight") {
        EstimateSeries u;
        u.values = TimeSeries{0, {2, 0, 4}};
        u.counts = {1, 0, 1};
        const auto wa = weighted_ma(u, 1);
        CHECK(wa.values[1] == doctest::Approx(3.0));
        const auto ua = unweighted_ma(u, 1);
        CHECK(ua.values[1] == doctest::Approx(3.0));
    }
}

TEST_CASE("moving averages: properties") {
    rng::Engine g(99);
    for (int rep = 0; rep < 100; ++rep) {
        EstimateSeries e = random_estimate(g, 2 + rng::uniform_below(g, 30));
        const int w = static_cast<int>(rng::uniform_below(g, 5));

        // equal counts collapse the weights: bitwise identical paths
        EstimateSeries eq = e;
        for (auto& c : eq.counts) c = 13;
        const auto wa_eq = weighted_ma(eq, w);
        const auto ua_eq = unweighted_ma(eq, w);
        CHECK(wa_eq.values.values == ua_eq.values.values);

        const auto wa = weighted_ma(e, w);
        const auto ua = unweighted_ma(e, w);
        const double lo = *std::min_element(e.values.values.begin(), e.values.values.end());
        const double hi = *std::max_element(e.values.values.begin(), e.values.values.end());
        for (std::size_t i = 0; i < e.size(); ++i) {
            CHECK(wa.values[i] >= lo - 1e-12);
            CHECK(wa.values[i] <= hi + 1e-12);
            CHECK(ua.values[i] >= lo - 1e-12);
            CHECK(ua.values[i] <= hi + 1e-12);
        }

        // constants are preserved identically
        EstimateSeries c = e;
        for (auto& v : c.values.values) v = 0.1;
        const auto wa_c = weighted_ma(c, w);
        const auto ua_c = unweighted_ma(c, w);
        for (std::size_t i = 0; i < c.size(); ++i) {
            CHECK(wa_c.values[i] == 0.1);
            CHECK(ua_c.values[i] == 0.1);
        }

        // monotone operator: a <= b pointwise with shared counts
        EstimateSeries b = e;
        for (auto& v : b.values.values) v += rng::uniform_range(g, 0.0, 2.0);
        const auto wa_b = weighted_ma(b, w);
        for (std::size_t i = 0; i < e.size(); ++i)
            CHECK(wa.values[i] <= wa_b.values[i] + 1e-12);

        // scaling by a power of two is exact
        EstimateSeries s2 = e;
        for (auto& v : s2.values.values) v *= 2.0;
        const auto wa_s2 = weighted_ma(s2, w);
        for (std::size_t i = 0; i < e.size(); ++i)
            CHECK(wa_s2.values[i] == 2.0 * wa.values[i]);
    }
}

TEST_CASE("accumulate equals a rectangular count-weighted average of daily means") {
    // With integer counts, block sums can be reconstructed exactly from the
    // daily means, so the pooled mean and the rectangular weighted average
    // are the same float.
    rng::Engine g(7);
    for (int rep = 0; rep < 50; ++rep) {
        const int days = 4 + static_cast<int>(rng::uniform_below(g, 25));
        const int accum = 1 + static_cast<int>(rng::uniform_below(g, 8));
        const auto daily_batches = random_batches(g, days, 6);
        const auto binned = accumulate(daily_batches, accum);
        const auto pooled = indirect_mean(binned);
        const auto daily = indirect_mean(daily_batches);

        for (std::size_t bin = 0; bin < pooled.size(); ++bin) {
            long long n_sum = 0;
            double s_sum = 0.0;
            for (std::size_t t = 0; t < daily.size(); ++t) {
                if (daily.values.day(t) / accum != pooled.values.day(bin)) continue;
                n_sum += daily.counts[t];
                s_sum += std::round(static_cast<double>(daily.counts[t]) * daily.values[t]);
            }
            REQUIRE(n_sum > 0);
            CHECK(pooled.values[bin] == s_sum / static_cast<double>(n_sum));
        }
    }
}

TEST_CASE("calibrate_mu_d") {
    EstimateSeries e;
    e.values = TimeSeries{0, {1.5, 0.0}};
    e.counts = {4, 4};
    CHECK(calibrate_mu_d(e, 0.1, 0) == doctest::Approx(15.0));
    CHECK(calibrate_mu_d(e, 0.2, 1) == 0.0);
    CHECK_THROWS_AS(calibrate_mu_d(e, 0.0, 0), DomainError);
    CHECK_THROWS_AS(calibrate_mu_d(e, 0.1, 9), DomainError);
}

TEST_CASE("calibrate_mu_d recovers the realized mean degree") {
    // Known truth at one anchor: a large pooled bin calibrates mu_D to within
    // 10% of the mean recorded degree.
    SurveyConfig cfg;
    cfg.d = 5;
    cfg.n = 2000;
    cfg.n_d = 480;
    cfg.seed = 270;
    const TimeSeries f{0, std::vector<double>(30, 0.2)};
    const auto batches = simulate_survey(f, cfg);
    auto pooled = indirect_mean(accumulate(batches, 30));
    pooled.accum = 30;

    double degree_sum = 0.0;
    long long respondents = 0;
    for (const auto& b : batches) {
        for (int deg : b.degrees) degree_sum += deg;
        respondents += static_cast<long long>(b.size());
    }
    const double realized_mu = degree_sum / static_cast<double>(respondents);
    const double calibrated = calibrate_mu_d(pooled, 0.2, 0);
    CHECK(std::abs(calibrated - realized_mu) / realized_mu < 0.10);
}
