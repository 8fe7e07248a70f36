#include "nowcast/epidemic.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nowcast/rng.hpp"

namespace nowcast {

void SirConfig::validate() const {
    if (population <= 0) throw ConfigError("population: must be positive");
    if (!(recovery_rate > 0.0 && recovery_rate <= 1.0))
        throw ConfigError("recovery_rate: must lie in (0, 1]");
    if (horizon_days <= 0) throw ConfigError("horizon_days: must be positive");
    if (intervention_ramp_days <= 0)
        throw ConfigError("intervention_ramp_days: must be positive");
    if (horizon_days < 2 * intervention_ramp_days)
        throw ConfigError("horizon_days: must be at least twice intervention_ramp_days");
    if (intervention_count_range.first < 0 ||
        intervention_count_range.second < intervention_count_range.first)
        throw ConfigError("intervention_count_range: need 0 <= min <= max");
    if (!(initial_infected_fraction > 0.0 && initial_infected_fraction < 1.0))
        throw ConfigError("initial_infected_fraction: must lie in (0, 1)");
    if (!std::isfinite(r0_initial) || r0_initial < 0.0)
        throw ConfigError("r0_initial: must be a non-negative number");
    const bool has_interventions = intervention_count_range.second > 0;
    if (has_interventions) {
        if (r0_initial <= 2.0)
            throw ConfigError("r0_initial: must exceed 2 when interventions are enabled");
        if (!(r0_low_range.first > 0.0 && r0_low_range.first <= r0_low_range.second &&
              r0_low_range.second < 1.0))
            throw ConfigError("r0_low_range: must satisfy 0 < min <= max < 1");
        if (!(r0_high_range.first > 1.0 && r0_high_range.first <= r0_high_range.second))
            throw ConfigError("r0_high_range: must satisfy 1 < min <= max");
    }
}

namespace {

// R0 over [0, horizon): plateau at r0_initial, then for each transition a
// linear ramp of `ramp` days toward an alternating low/high target.
std::vector<double> build_r0_series(const SirConfig& cfg, rng::Engine& gen) {
    std::vector<double> r0(static_cast<std::size_t>(cfg.horizon_days), cfg.r0_initial);
    const int interventions =
        static_cast<int>(rng::uniform_int(gen, cfg.intervention_count_range.first,
                                          cfg.intervention_count_range.second));
    if (interventions == 0) return r0;

    const int ramp = cfg.intervention_ramp_days;
    const int transitions = 2 * interventions;  // down, up, down, up, ...
    std::vector<int> starts(static_cast<std::size_t>(transitions));
    for (auto& t : starts)
        t = static_cast<int>(rng::uniform_int(gen, ramp, cfg.horizon_days - ramp));
    std::sort(starts.begin(), starts.end());

    std::vector<double> targets(static_cast<std::size_t>(transitions));
    for (int j = 0; j < transitions; ++j) {
        targets[static_cast<std::size_t>(j)] =
            (j % 2 == 0) ? rng::uniform_range(gen, cfg.r0_low_range.first,
                                              cfg.r0_low_range.second)
                         : rng::uniform_range(gen, cfg.r0_high_range.first,
                                              cfg.r0_high_range.second);
    }

    double current = cfg.r0_initial;
    int free_from = 0;  // first day not yet written by a plateau or ramp
    for (int j = 0; j < transitions; ++j) {
        int start = std::max(starts[static_cast<std::size_t>(j)], free_from);
        if (start >= cfg.horizon_days) break;
        const double target = targets[static_cast<std::size_t>(j)];
        for (int t = free_from; t < start; ++t)
            r0[static_cast<std::size_t>(t)] = current;
        for (int k = 0; k < ramp && start + k < cfg.horizon_days; ++k) {
            const double frac = static_cast<double>(k + 1) / ramp;
            r0[static_cast<std::size_t>(start + k)] = current + frac * (target - current);
        }
        current = target;
        free_from = std::min(start + ramp, cfg.horizon_days);
    }
    for (int t = free_from; t < cfg.horizon_days; ++t)
        r0[static_cast<std::size_t>(t)] = current;
    return r0;
}

} // namespace

EpidemicTrajectory simulate(const SirConfig& config) {
    config.validate();
    rng::Engine gen(rng::derive_seed(config.seed, 0xE51D));
    const std::vector<double> r0 = build_r0_series(config, gen);

    const int n = config.horizon_days;
    const double gamma = config.recovery_rate;
    std::vector<double> s(static_cast<std::size_t>(n));
    std::vector<double> i(static_cast<std::size_t>(n));
    std::vector<double> r(static_cast<std::size_t>(n));
    std::vector<double> inc(static_cast<std::size_t>(n));

    s[0] = 1.0 - config.initial_infected_fraction;
    i[0] = config.initial_infected_fraction;
    r[0] = 0.0;
    inc[0] = config.initial_infected_fraction;  // the seeding counts as day-0 incidence

    for (int t = 1; t < n; ++t) {
        const double beta = r0[static_cast<std::size_t>(t)] * gamma;
        const std::size_t u = static_cast<std::size_t>(t);
        const double prev_s = s[u - 1], prev_i = i[u - 1];
        const double new_inf = std::min(beta * prev_s * prev_i, prev_s);
        const double recovered = gamma * prev_i;
        s[u] = prev_s - new_inf;
        i[u] = prev_i + new_inf - recovered;
        r[u] = r[u - 1] + recovered;
        inc[u] = new_inf;
    }

    EpidemicTrajectory traj;
    traj.s = TimeSeries{0, std::move(s)};
    traj.i = TimeSeries{0, std::move(i)};
    traj.r = TimeSeries{0, std::move(r)};
    traj.incidence = TimeSeries{0, std::move(inc)};
    traj.r0 = TimeSeries{0, r0};
    return traj;
}

TimeSeries hidden_fraction(const TimeSeries& incidence, int period) {
    if (period < 1) throw DomainError("hidden_fraction: period must be >= 1");
    incidence.validate();
    TimeSeries f{incidence.start_day, std::vector<double>(incidence.size(), 0.0)};
    for (std::size_t t = 0; t < incidence.size(); ++t) {
        double window_sum = 0.0;
        const std::size_t lo = t + 1 >= static_cast<std::size_t>(period)
                                   ? t + 1 - static_cast<std::size_t>(period)
                                   : 0;
        for (std::size_t tau = lo; tau <= t; ++tau) window_sum += incidence[tau];
        f[t] = std::clamp(window_sum, 0.0, 1.0);
    }
    return f;
}

TimeSeries hidden_fraction(const EpidemicTrajectory& traj, int period) {
    return hidden_fraction(traj.incidence, period);
}

int peak_count(const TimeSeries& s, double min_prominence) {
    if (!(min_prominence > 0.0)) throw DomainError("peak_count: min_prominence must be > 0");
    s.validate();
    const std::size_t n = s.size();

    // Local maxima, plateau-aware: first index of a flat run that is higher
    // than the nearest differing values on both sides.
    std::vector<std::size_t> maxima;
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t left = t;
        while (left > 0 && s[left - 1] == s[t]) --left;
        std::size_t right = t;
        while (right + 1 < n && s[right + 1] == s[t]) ++right;
        if (left != t) continue;  // count each plateau once
        const bool rises = left > 0 && s[left - 1] < s[t];
        const bool falls = right + 1 < n && s[right + 1] < s[t];
        if (rises && falls) maxima.push_back(t);
    }
    if (maxima.empty()) return 0;

    auto min_between = [&](std::size_t a, std::size_t b) {
        double m = s[a];
        for (std::size_t k = a; k <= b; ++k) m = std::min(m, s[k]);
        return m;
    };

    int count = 0;
    for (std::size_t p = 0; p < maxima.size(); ++p) {
        const std::size_t idx = maxima[p];
        const std::size_t lo = p == 0 ? 0 : maxima[p - 1];
        const std::size_t hi = p + 1 == maxima.size() ? n - 1 : maxima[p + 1];
        const double left_min = min_between(lo, idx);
        const double right_min = min_between(idx, hi);
        if (s[idx] - left_min >= min_prominence && s[idx] - right_min >= min_prominence)
            ++count;
    }
    return count;
}

MultiwaveResult simulate_multiwave(const SirConfig& config, int max_attempts) {
    SirConfig cfg = config;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        EpidemicTrajectory traj = simulate(cfg);
        const double top =
            *std::max_element(traj.incidence.values.begin(), traj.incidence.values.end());
        if (top > 0.0 && peak_count(traj.incidence, 0.1 * top) >= 2)
            return {std::move(traj), cfg.seed, attempt};
        ++cfg.seed;
    }
    throw ConfigError("simulate_multiwave: no multi-peak run within " +
                      std::to_string(max_attempts) + " attempts; widen r0 ranges");
}

} // namespace nowcast
