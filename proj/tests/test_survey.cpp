#include <doctest.h>

#include <cmath>

#include "nowcast/bounds.hpp"
#include "nowcast/survey.hpp"

using namespace nowcast;

namespace {

// Independent oracle: recompute the pmf mean for every k_max by direct
// summation and pick the best fit, ties toward smaller k_max.
struct DegreeOracle {
    int k_max;
    double mean;
};

DegreeOracle degree_oracle(double d, int n_d) {
    DegreeOracle best{1, 1.0};
    double best_gap = std::abs(1.0 - d);
    for (int k_max = 1; k_max <= n_d / 2; ++k_max) {
        double total = 0.0, first = 0.0;
        for (int k = 1; k <= k_max; ++k) {
            const double p = 1.0 / (static_cast<double>(k) * k);
            total += p;
            first += k * p;
        }
        const double mean = first / total;
        if (std::abs(mean - d) < best_gap) {
            best_gap = std::abs(mean - d);
            best = {k_max, mean};
        }
    }
    return best;
}

double sample_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

} // namespace

TEST_CASE("degree_distribution degenerate and invalid targets") {
    const DegreeDistribution d1 = degree_distribution(1.0, 100);
    CHECK(d1.k_max == 1);
    CHECK(d1.pmf == std::vector<double>{1.0});
    CHECK(d1.mean == doctest::Approx(1.0));

    CHECK_THROWS_AS(degree_distribution(480.0, 480), ConfigError);  // d > n_d/2
    CHECK_THROWS_AS(degree_distribution(0.5, 100), ConfigError);
}

TEST_CASE("degree_distribution matches the exhaustive k_max search oracle") {
    // The k^-2 pmf mean saturates near ln(k_max)/zeta(2), so for large d the
    // search stops at the support cap; the contract is agreement with the
    // exhaustive search, not closeness to d.
    for (const auto& [d, n_d] : std::vector<std::pair<double, int>>{
             {1.2, 100}, {2.0, 60}, {2.4, 60}, {3.0, 480}, {3.5, 480}, {5.0, 480},
             {5.0, 60}}) {
        const DegreeOracle oracle = degree_oracle(d, n_d);
        const DegreeDistribution dist = degree_distribution(d, n_d);
        CHECK(dist.k_max == oracle.k_max);
        CHECK(dist.mean == doctest::Approx(oracle.mean).epsilon(1e-12));
        CHECK(dist.k_max <= n_d / 2);
    }
}

TEST_CASE("run_day degenerate rates") {
    SurveyConfig cfg;
    cfg.d = 5;
    cfg.n = 50;
    cfg.n_d = 480;
    cfg.seed = 3;
    SurveySimulator sim(cfg);
    rng::Engine g(99);

    const ResponseBatch zero = sim.run_day(0, 0.0, g);
    for (double c : zero.indirect_counts) CHECK(c == 0.0);
    for (auto f : zero.direct_flags) CHECK(f == 0);

    const ResponseBatch one = sim.run_day(1, 1.0, g);
    for (std::size_t i = 0; i < one.size(); ++i)
        CHECK(one.indirect_counts[i] == static_cast<double>(one.degrees[i]));
    for (auto f : one.direct_flags) CHECK(f == 1);

    CHECK(zero.size() >= 1);
    CHECK(zero.size() <= 50);
}

TEST_CASE("counts never exceed degrees and batches are reproducible") {
    SurveyConfig cfg;
    cfg.d = 3;
    cfg.n = 20;
    cfg.n_d = 60;
    cfg.period = 7;
    cfg.seed = 11;
    TimeSeries f{0, std::vector<double>(30, 0.0)};
    for (std::size_t t = 0; t < f.size(); ++t)
        f[t] = 0.5 * (1 + std::sin(t / 5.0)) * 0.3;
    const auto batches = simulate_survey(f, cfg);
    REQUIRE(batches.size() == f.size());
    for (const auto& b : batches) {
        REQUIRE(b.has_degrees());
        for (std::size_t i = 0; i < b.size(); ++i) {
            CHECK(b.indirect_counts[i] <= b.degrees[i]);
            CHECK(b.degrees[i] >= 1);
        }
    }
    const auto again = simulate_survey(f, cfg);
    REQUIRE(again.size() == batches.size());
    for (std::size_t k = 0; k < batches.size(); ++k) {
        CHECK(again[k].indirect_counts == batches[k].indirect_counts);
        CHECK(again[k].degrees == batches[k].degrees);
        CHECK(again[k].direct_flags == batches[k].direct_flags);
    }
}

TEST_CASE("theorem 1 proportionality: mean response tracks mu_D * f") {
    // Ratio-estimator check: mean(X)/mean(realized degree) ~ f, with the
    // delta-method standard error from the residuals X_i - f_hat * D_i.
    SurveyConfig cfg;
    cfg.d = 5;
    cfg.n_d = 480;
    SurveySimulator sim(cfg);
    rng::Engine g(2024);
    const double f = 0.1;
    const int n = 20000;
    std::vector<double> xs(n), ds(n);
    for (int i = 0; i < n; ++i) {
        const int delta = sim.degrees().sample(g);
        const int b = realized_neighbor_count(g, delta, cfg.n_d);
        xs[static_cast<std::size_t>(i)] =
            static_cast<double>(indirect_response(g, b, f));
        ds[static_cast<std::size_t>(i)] = b;
    }
    const double mean_x = sample_mean(xs);
    const double mu_hat = sample_mean(ds);
    const double f_hat = mean_x / mu_hat;
    std::vector<double> resid(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) resid[i] = xs[i] - f_hat * ds[i];
    const double se = sample_sd(resid, 0.0) / (std::sqrt(n) * mu_hat);
    CHECK(std::abs(f_hat - f) < 3 * se);
}

TEST_CASE("lemma 1 on a degree-regular draw: variance matches k f (1-f)") {
    rng::Engine g(515);
    const int k = 7, n = 100000;
    const double f = 0.1;
    std::vector<double> xs(n);
    for (auto& x : xs) x = static_cast<double>(indirect_response(g, k, f));
    const double mean = sample_mean(xs);
    double m2 = 0, m4 = 0;
    for (double x : xs) {
        const double d2 = (x - mean) * (x - mean);
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= n - 1;
    m4 /= n;
    const double se_var = std::sqrt((m4 - m2 * m2) / n);
    const double expected = variance_indirect({f, static_cast<double>(k), 0.0, f});
    CHECK(expected == doctest::Approx(k * f * (1 - f)).epsilon(1e-12));
    CHECK(std::abs(m2 - expected) < 3 * se_var);
}

TEST_CASE("apply_bias") {
    SurveyConfig cfg;
    cfg.d = 4;
    cfg.n = 30;
    cfg.n_d = 200;
    cfg.seed = 5;
    TimeSeries f{0, std::vector<double>(10, 0.1)};
    const auto batches = simulate_survey(f, cfg);

    SUBCASE("single group alpha = 1 is the identity") {
        rng::Engine g(1);
        const auto biased = apply_bias(batches, BiasGroups{{{1.0, 1.0}}}, g);
        for (std::size_t k = 0; k < batches.size(); ++k)
            CHECK(biased[k].indirect_counts == batches[k].indirect_counts);
    }
    SUBCASE("single group alpha = 2 doubles every count exactly") {
        rng::Engine g(1);
        const auto biased = apply_bias(batches, BiasGroups{{{1.0, 2.0}}}, g);
        for (std::size_t k = 0; k < batches.size(); ++k) {
            REQUIRE(biased[k].size() == batches[k].size());
            CHECK(biased[k].degrees == batches[k].degrees);
            CHECK(biased[k].direct_flags == batches[k].direct_flags);
            for (std::size_t i = 0; i < batches[k].size(); ++i)
                CHECK(biased[k].indirect_counts[i] == 2.0 * batches[k].indirect_counts[i]);
        }
    }
    SUBCASE("two groups: mean ratio approaches B") {
        // B = 0.5*0.5 + 0.5*1.5 = 1; paired ratio with delta-method se.
        const BiasGroups groups{{{0.5, 0.5}, {0.5, 1.5}}};
        const double B = bias_factor(groups);
        CHECK(B == doctest::Approx(1.0));
        rng::Engine g(77);
        const int n = 100000;
        std::vector<double> x(n), z(n);
        SurveySimulator sim(cfg);
        ResponseBatch pool;
        pool.day = 0;
        while (pool.size() < static_cast<std::size_t>(n)) {
            const ResponseBatch b = sim.run_day(0, 0.1, g);
            pool.indirect_counts.insert(pool.indirect_counts.end(),
                                        b.indirect_counts.begin(),
                                        b.indirect_counts.end());
            pool.degrees.insert(pool.degrees.end(), b.degrees.begin(), b.degrees.end());
            pool.direct_flags.insert(pool.direct_flags.end(), b.direct_flags.begin(),
                                     b.direct_flags.end());
        }
        pool.indirect_counts.resize(n);
        pool.degrees.resize(n);
        pool.direct_flags.resize(n);
        const ResponseBatch biased = apply_bias(pool, groups, g);
        const double mean_x = sample_mean(pool.indirect_counts);
        const double mean_z = sample_mean(biased.indirect_counts);
        std::vector<double> resid(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i)
            resid[i] = biased.indirect_counts[i] - B * pool.indirect_counts[i];
        const double se = sample_sd(resid, 0.0) / (std::sqrt(n) * mean_x);
        CHECK(std::abs(mean_z / mean_x - B) < 3 * se);
    }
}

TEST_CASE("bias group validation") {
    const BiasGroups wrong_total{{{0.5, 1.0}, {0.4, 1.0}}};
    CHECK_THROWS_AS(wrong_total.validate(), ConfigError);
    const BiasGroups zero_alpha{{{1.0, 0.0}}};
    CHECK_THROWS_AS(zero_alpha.validate(), ConfigError);
    const BiasGroups empty{};
    CHECK_THROWS_AS(empty.validate(), ConfigError);
    const BiasGroups ok{{{0.25, 0.5}, {0.75, 2.0}}};
    CHECK_NOTHROW(ok.validate());
}
