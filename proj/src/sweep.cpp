#include "nowcast/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "nowcast/csv.hpp"
#include "nowcast/evaluate.hpp"
#include "nowcast/rng.hpp"
#include "nowcast/survey.hpp"

namespace nowcast {

namespace fs = std::filesystem;

void SweepGrid::validate() const {
    if (d.empty() || n.empty() || n_d.empty() || accum.empty() || period.empty() ||
        w.empty())
        throw ConfigError("sweep grid: every parameter list needs at least one value");
    if (seeds < 1) throw ConfigError("seeds: must be >= 1");
    for (int v : accum)
        if (v < 1) throw ConfigError("accum: must be >= 1");
    for (int v : w)
        if (v < 0) throw ConfigError("w: must be >= 0");
    sir.validate();
}

std::string cell_key(const SweepCell& c) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "d%.10g_n%d_nd%d_a%d_p%d_w%d_s%d", c.d, c.n, c.n_d,
                  c.accum, c.period, c.w, c.seed_index);
    return buf;
}

std::vector<SweepCell> expand_grid(const SweepGrid& grid) {
    grid.validate();
    std::vector<SweepCell> cells;
    for (double d : grid.d)
        for (int n : grid.n)
            for (int n_d : grid.n_d)
                for (int accum : grid.accum)
                    for (int period : grid.period)
                        for (int w : grid.w)
                            for (int s = 0; s < grid.seeds; ++s)
                                cells.push_back({d, n, n_d, accum, period, w, s});
    return cells;
}

namespace {

std::uint64_t cell_hash(const SweepCell& c) {
    std::uint64_t h = 0x243F6A8885A308D3ull;
    for (char ch : cell_key(c)) h = rng::splitmix64(h ^ static_cast<std::uint64_t>(ch));
    return h;
}

} // namespace

std::vector<SweepRow> run_cell(const SweepGrid& grid, const SweepCell& cell) {
    const std::uint64_t h = cell_hash(cell);

    SirConfig sir = grid.sir;
    sir.seed = rng::derive_seed(grid.base_seed, h);
    const MultiwaveResult mw = simulate_multiwave(sir);
    const TimeSeries f = hidden_fraction(mw.trajectory, cell.period);

    SurveyConfig sc;
    sc.d = cell.d;
    sc.n = cell.n;
    sc.n_d = cell.n_d;
    sc.period = cell.period;
    sc.seed = rng::derive_seed(grid.base_seed, h + 1);
    const std::vector<ResponseBatch> batches = simulate_survey(f, sc);
    const std::vector<ResponseBatch> binned = accumulate(batches, cell.accum);

    std::vector<SweepRow> rows;
    rows.reserve(9);
    // I(t), the infectious fraction, is the curve the estimates are judged
    // against; f is a trailing window sum of new infections, so both trace
    // the same waves.
    const TimeSeries& reference = mw.trajectory.i;
    for (Method method : {Method::Ind, Method::Nsum, Method::Dir}) {
        EstimateSeries base = method == Method::Ind    ? indirect_mean(binned)
                              : method == Method::Nsum ? nsum_mean(binned)
                                                       : direct_mean(binned);
        base.accum = cell.accum;
        for (Smoothing smoothing : {Smoothing::NoS, Smoothing::WA, Smoothing::UA}) {
            EstimateSeries est = smoothing == Smoothing::NoS ? base
                                 : smoothing == Smoothing::WA
                                     ? weighted_ma(base, cell.w)
                                     : unweighted_ma(base, cell.w);
            const auto value = mae_vs_reference(est, reference);
            if (!value) throw RangeError("sweep: no comparable bins in cell " + cell_key(cell));
            rows.push_back({cell, method, smoothing, *value});
        }
    }
    return rows;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << "d,n,n_d,accum,period,w,seed,method,smoothing,mae\n";
    for (const auto& r : rows)
        out << csv::fmt(r.cell.d) << ',' << r.cell.n << ',' << r.cell.n_d << ','
            << r.cell.accum << ',' << r.cell.period << ',' << r.cell.w << ','
            << r.cell.seed_index << ',' << to_string(r.method) << ','
            << to_string(r.smoothing) << ',' << csv::fmt(r.mae) << '\n';
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
    const auto raw = csv::read_rows(path, "d,n,n_d,accum,period,w,seed,method,smoothing,mae");
    std::vector<SweepRow> rows;
    rows.reserve(raw.size());
    for (const auto& r : raw) {
        SweepRow row;
        row.cell.d = csv::to_double(r[0], "d");
        row.cell.n = static_cast<int>(csv::to_int(r[1], "n"));
        row.cell.n_d = static_cast<int>(csv::to_int(r[2], "n_d"));
        row.cell.accum = static_cast<int>(csv::to_int(r[3], "accum"));
        row.cell.period = static_cast<int>(csv::to_int(r[4], "period"));
        row.cell.w = static_cast<int>(csv::to_int(r[5], "w"));
        row.cell.seed_index = static_cast<int>(csv::to_int(r[6], "seed"));
        row.method = method_from_string(r[7]);
        row.smoothing = smoothing_from_string(r[8]);
        row.mae = csv::to_double(r[9], "mae");
        rows.push_back(row);
    }
    return rows;
}

std::vector<SweepRow> run_sweep(const SweepGrid& grid, const std::string& checkpoint_dir,
                                int jobs) {
    const std::vector<SweepCell> cells = expand_grid(grid);
    fs::create_directories(checkpoint_dir);
    if (jobs < 1) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;

    std::vector<std::vector<SweepRow>> results(cells.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= cells.size() || failed.load()) return;
            const SweepCell& cell = cells[idx];
            const fs::path done = fs::path(checkpoint_dir) / (cell_key(cell) + ".csv");
            try {
                if (fs::exists(done)) {
                    results[idx] = read_sweep_csv(done.string());
                } else {
                    results[idx] = run_cell(grid, cell);
                    const fs::path tmp = done.string() + ".tmp";
                    write_sweep_csv(tmp.string(), results[idx]);
                    fs::rename(tmp, done);
                }
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) first_error = e.what();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failed.load()) throw std::runtime_error("sweep: " + first_error);

    std::vector<SweepRow> all;
    all.reserve(cells.size() * 9);
    for (const auto& rows : results) all.insert(all.end(), rows.begin(), rows.end());
    return all;
}

} // namespace nowcast
