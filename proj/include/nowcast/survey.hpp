#pragma once

#include <cstdint>
#include <vector>

#include "nowcast/rng.hpp"
#include "nowcast/timeseries.hpp"

namespace nowcast {

struct SurveyConfig {
    double d = 5.0;     // target mean degree of the latent graph
    int n = 10;         // daily respondent cap; actual count ~ Uniform{1..n}
    int n_d = 480;      // population coverable by the respondents
    int period = 7;     // look-back window named in the survey question
    std::uint64_t seed = 1;

    void validate() const;  // ConfigError naming the field
};

/// Truncated power-law pmf(k) proportional to k^-2 on {1..k_max}.
struct DegreeDistribution {
    int k_max = 1;
    std::vector<double> pmf;  // pmf[j] is the weight of degree j+1
    double mean = 1.0;
    double variance = 0.0;
    rng::DiscreteSampler sampler;

    int sample(rng::Engine& g) const {
        return static_cast<int>(sampler.sample(g)) + 1;
    }
};

/// Chooses k_max <= n_d/2 by integer search minimising |mean - d|, ties
/// toward smaller k_max. ConfigError when d lies outside [1, n_d/2].
/// Note the achievable mean saturates well below n_d/2 (the k^-2 tail is
/// light), so the best k_max may still leave |mean - d| large; the search
/// returns the closest achievable distribution.
DegreeDistribution degree_distribution(double d, int n_d);

/// One day's responses: aligned per-respondent columns.
struct ResponseBatch {
    int day = 0;
    std::vector<double> indirect_counts;  // reals after bias, integers before
    std::vector<int> degrees;             // empty means "not collected"
    std::vector<std::uint8_t> direct_flags;
    bool partial = false;  // trailing accumulation block shorter than accum

    std::size_t size() const { return indirect_counts.size(); }
    bool has_degrees() const { return !degrees.empty(); }
    void validate() const;
};

struct BiasGroup {
    double q = 1.0;      // membership probability
    double alpha = 1.0;  // multiplicative reporting factor
};

struct BiasGroups {
    std::vector<BiasGroup> groups;
    void validate() const;  // sum q == 1 +- 1e-12, alpha > 0, q >= 0
};

/// Respondent-level primitives, shared by the simulator and the Monte Carlo
/// suites (which need to force specific degree draws).

/// Realised neighbour count: Binomial(n_d, delta/n_d) conditioned on >= 1.
/// The conditioning keeps NSUM's per-respondent denominator defined.
int realized_neighbor_count(rng::Engine& g, int delta, int n_d);

/// Indirect response of a respondent with b neighbours: Binomial(b, f).
long long indirect_response(rng::Engine& g, int b, double f);

class SurveySimulator {
public:
    explicit SurveySimulator(const SurveyConfig& cfg);

    /// n_t ~ Uniform{1..n} respondents; each draws a power-law degree, a
    /// realised neighbour count, an indirect count at rate f_t, and an
    /// independent direct flag ~ Bernoulli(f_t).
    ResponseBatch run_day(int day, double f_t, rng::Engine& g) const;

    const DegreeDistribution& degrees() const { return dist_; }
    const SurveyConfig& config() const { return cfg_; }

private:
    SurveyConfig cfg_;
    DegreeDistribution dist_;
};

/// Free-function form of SurveySimulator::run_day.
ResponseBatch run_day(int day, double f_t, const SurveyConfig& cfg, rng::Engine& g);

/// One batch per day of f, generator seeded from cfg.seed.
std::vector<ResponseBatch> simulate_survey(const TimeSeries& f, const SurveyConfig& cfg);

/// Each respondent independently joins group j with probability q_j and has
/// its indirect count scaled by alpha_j (unrounded). Degrees and direct
/// flags pass through.
ResponseBatch apply_bias(const ResponseBatch& batch, const BiasGroups& bias,
                         rng::Engine& g);
std::vector<ResponseBatch> apply_bias(const std::vector<ResponseBatch>& batches,
                                      const BiasGroups& bias, rng::Engine& g);

} // namespace nowcast
