#pragma once

#include <cstdint>
#include <utility>

#include "nowcast/timeseries.hpp"

namespace nowcast {

/// Extended-SIR configuration. R0 starts on a high plateau and is driven
/// below 1 and back by randomly timed interventions with linear ramps, which
/// is what produces multi-wave incidence.
struct SirConfig {
    long long population = 1'000'000;
    double r0_initial = 3.0;
    double recovery_rate = 0.1;  // per day, in (0, 1]
    int horizon_days = 600;
    std::pair<int, int> intervention_count_range{3, 6};
    int intervention_ramp_days = 14;
    std::pair<double, double> r0_low_range{0.5, 0.9};    // entirely below 1
    std::pair<double, double> r0_high_range{1.5, 2.5};   // entirely above 1
    double initial_infected_fraction = 1e-4;
    std::uint64_t seed = 1;

    /// ConfigError naming the offending field. r0_initial > 2 is required
    /// only when interventions are requested; fixed-R0 regimes (count 0,0)
    /// accept any non-negative r0_initial.
    void validate() const;
};

struct EpidemicTrajectory {
    TimeSeries s, i, r;    // compartment fractions, s+i+r == 1
    TimeSeries incidence;  // newly infected fraction per day
    TimeSeries r0;         // effective reproduction number applied
};

/// Daily-step SIR with time-varying R0. Deterministic given (config, seed).
/// incidence[0] is the initial seeding; for t >= 1,
/// incidence[t] = r0[t] * recovery_rate * s[t-1] * i[t-1].
EpidemicTrajectory simulate(const SirConfig& config);

/// f_t = sum of incidence over the trailing `period` days (zero before day 0),
/// clamped to [0, 1]: the fraction infected within the survey question's window.
TimeSeries hidden_fraction(const TimeSeries& incidence, int period);
TimeSeries hidden_fraction(const EpidemicTrajectory& traj, int period);

/// Local maxima exceeding both flanking minima by at least min_prominence.
int peak_count(const TimeSeries& s, double min_prominence);

struct MultiwaveResult {
    EpidemicTrajectory trajectory;
    std::uint64_t seed_used = 0;
    int attempts = 0;
};

/// Re-seeds simulate() (seed, seed+1, ...) until the incidence has at least
/// two peaks with prominence >= 10% of its maximum. Automates the protocol of
/// running several simulations and keeping a multi-peaked one.
MultiwaveResult simulate_multiwave(const SirConfig& config, int max_attempts = 256);

} // namespace nowcast
