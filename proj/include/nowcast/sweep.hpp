#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nowcast/epidemic.hpp"
#include "nowcast/estimator.hpp"

namespace nowcast {

/// Cross-product of survey parameters, replicated over `seeds` seeded runs.
/// The shipped default is a desk-scale slice (minutes, not days).
struct SweepGrid {
    std::vector<double> d{5.0};
    std::vector<int> n{5, 10, 20, 40};
    std::vector<int> n_d{60};
    std::vector<int> accum{7};
    std::vector<int> period{7};
    std::vector<int> w{2};
    int seeds = 16;
    std::uint64_t base_seed = 1;
    SirConfig sir;  // epidemic settings shared by all cells; seed set per cell

    void validate() const;
};

struct SweepCell {
    double d = 5.0;
    int n = 10;
    int n_d = 60;
    int accum = 7;
    int period = 7;
    int w = 2;
    int seed_index = 0;
};

/// Canonical cell name; doubles as the checkpoint file stem.
std::string cell_key(const SweepCell& c);

struct SweepRow {
    SweepCell cell;
    Method method = Method::Ind;
    Smoothing smoothing = Smoothing::NoS;
    double mae = 0.0;
};

std::vector<SweepCell> expand_grid(const SweepGrid& grid);

/// One fully isolated (parameters, seed) run: multi-wave epidemic, daily
/// survey, the three estimators with NoS/WA/UA post-processing, and the MAE
/// of each against the range-normalised incidence curve. 9 rows.
std::vector<SweepRow> run_cell(const SweepGrid& grid, const SweepCell& cell);

/// Runs every cell of the grid across `jobs` workers. Each finished cell is
/// checkpointed under checkpoint_dir and reused on restart, so interrupted
/// sweeps resume; the returned rows follow the canonical grid order no
/// matter how execution was scheduled.
std::vector<SweepRow> run_sweep(const SweepGrid& grid, const std::string& checkpoint_dir,
                                int jobs);

/// `d,n,n_d,accum,period,w,seed,method,smoothing,mae`
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(const std::string& path);

} // namespace nowcast
