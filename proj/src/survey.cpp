#include "nowcast/survey.hpp"

#include <cmath>
#include <string>

namespace nowcast {

void SurveyConfig::validate() const {
    if (n <= 0) throw ConfigError("n: must be positive");
    if (n_d <= 1) throw ConfigError("n_d: must exceed 1");
    if (period < 1) throw ConfigError("period: must be >= 1");
    if (!(d >= 1.0 && d <= n_d / 2.0))
        throw ConfigError("d: must lie in [1, n_d/2]");
}

void ResponseBatch::validate() const {
    const std::size_t n = indirect_counts.size();
    if (n == 0) throw ShapeError("response batch is empty");
    if (direct_flags.size() != n)
        throw ShapeError("response batch: direct_flags misaligned");
    if (!degrees.empty() && degrees.size() != n)
        throw ShapeError("response batch: degrees misaligned");
    for (int deg : degrees)
        if (deg <= 0) throw DomainError("response batch: non-positive degree");
    for (double c : indirect_counts)
        if (!(c >= 0.0) || !std::isfinite(c))
            throw DomainError("response batch: negative or non-finite count");
}

void BiasGroups::validate() const {
    if (groups.empty()) throw ConfigError("bias groups: none given");
    double total = 0.0;
    for (const auto& g : groups) {
        if (g.q < 0.0) throw ConfigError("bias groups: negative probability");
        if (!(g.alpha > 0.0)) throw ConfigError("bias groups: alpha must be positive");
        total += g.q;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ConfigError("bias groups: probabilities must sum to 1");
}

DegreeDistribution degree_distribution(double d, int n_d) {
    if (n_d <= 1) throw ConfigError("n_d: must exceed 1");
    if (!(d >= 1.0 && d <= n_d / 2.0))
        throw ConfigError("d: must lie in [1, n_d/2]");

    const int k_limit = std::max(1, n_d / 2);
    // mean(k_max) = sum(1/k) / sum(1/k^2) is increasing in k_max.
    int best_k = 1;
    double best_gap = std::abs(1.0 - d);
    double h1 = 0.0, h2 = 0.0;
    for (int k = 1; k <= k_limit; ++k) {
        h1 += 1.0 / k;
        h2 += 1.0 / (static_cast<double>(k) * k);
        const double gap = std::abs(h1 / h2 - d);
        if (gap < best_gap) {  // strict: ties keep the smaller k_max
            best_gap = gap;
            best_k = k;
        }
    }

    DegreeDistribution dist;
    dist.k_max = best_k;
    dist.pmf.resize(static_cast<std::size_t>(best_k));
    double total = 0.0;
    for (int k = 1; k <= best_k; ++k)
        total += dist.pmf[static_cast<std::size_t>(k - 1)] =
            1.0 / (static_cast<double>(k) * k);
    double mean = 0.0, second = 0.0;
    for (int k = 1; k <= best_k; ++k) {
        const double p = dist.pmf[static_cast<std::size_t>(k - 1)] /= total;
        mean += k * p;
        second += static_cast<double>(k) * k * p;
    }
    dist.mean = mean;
    dist.variance = second - mean * mean;
    dist.sampler = rng::DiscreteSampler(dist.pmf);
    return dist;
}

int realized_neighbor_count(rng::Engine& g, int delta, int n_d) {
    if (delta <= 0 || n_d <= 0)
        throw DomainError("realized_neighbor_count: need positive delta and n_d");
    const double p = static_cast<double>(delta) / n_d;
    for (;;) {
        const long long b = rng::binomial(g, n_d, p);
        if (b >= 1) return static_cast<int>(b);
    }
}

long long indirect_response(rng::Engine& g, int b, double f) {
    if (!(f >= 0.0 && f <= 1.0))
        throw DomainError("indirect_response: f must lie in [0, 1]");
    return rng::binomial(g, b, f);
}

SurveySimulator::SurveySimulator(const SurveyConfig& cfg)
    : cfg_(cfg), dist_(degree_distribution(cfg.d, cfg.n_d)) {
    cfg.validate();
}

ResponseBatch SurveySimulator::run_day(int day, double f_t, rng::Engine& g) const {
    if (!(f_t >= 0.0 && f_t <= 1.0))
        throw DomainError("run_day: f_t must lie in [0, 1]");
    const int n_t = static_cast<int>(rng::uniform_int(g, 1, cfg_.n));
    ResponseBatch batch;
    batch.day = day;
    batch.indirect_counts.reserve(static_cast<std::size_t>(n_t));
    batch.degrees.reserve(static_cast<std::size_t>(n_t));
    batch.direct_flags.reserve(static_cast<std::size_t>(n_t));
    for (int u = 0; u < n_t; ++u) {
        const int delta = dist_.sample(g);
        const int b = realized_neighbor_count(g, delta, cfg_.n_d);
        batch.indirect_counts.push_back(
            static_cast<double>(indirect_response(g, b, f_t)));
        batch.degrees.push_back(b);
        batch.direct_flags.push_back(rng::bernoulli(g, f_t) ? 1 : 0);
    }
    return batch;
}

ResponseBatch run_day(int day, double f_t, const SurveyConfig& cfg, rng::Engine& g) {
    return SurveySimulator(cfg).run_day(day, f_t, g);
}

std::vector<ResponseBatch> simulate_survey(const TimeSeries& f, const SurveyConfig& cfg) {
    cfg.validate();
    f.validate();
    SurveySimulator sim(cfg);
    rng::Engine g(rng::derive_seed(cfg.seed, 0x5A7E));
    std::vector<ResponseBatch> batches;
    batches.reserve(f.size());
    for (std::size_t t = 0; t < f.size(); ++t)
        batches.push_back(sim.run_day(f.day(t), f[t], g));
    return batches;
}

ResponseBatch apply_bias(const ResponseBatch& batch, const BiasGroups& bias,
                         rng::Engine& g) {
    bias.validate();
    std::vector<double> weights;
    weights.reserve(bias.groups.size());
    for (const auto& grp : bias.groups) weights.push_back(grp.q);
    const rng::DiscreteSampler pick(weights);

    ResponseBatch out = batch;
    for (double& c : out.indirect_counts)
        c *= bias.groups[pick.sample(g)].alpha;
    return out;
}

std::vector<ResponseBatch> apply_bias(const std::vector<ResponseBatch>& batches,
                                      const BiasGroups& bias, rng::Engine& g) {
    std::vector<ResponseBatch> out;
    out.reserve(batches.size());
    for (const auto& b : batches) out.push_back(apply_bias(b, bias, g));
    return out;
}

} // namespace nowcast
