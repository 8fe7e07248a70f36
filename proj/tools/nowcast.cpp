// Batch front end: simulate epidemics and surveys, estimate, evaluate,
// sweep parameter grids, diagnose smoothness, ingest real survey files.
//
// Exit codes: 2 bad configuration, 3 malformed or misshapen data,
// 4 disjoint ranges, 5 domain errors (zeros, vacuous bounds), 1 anything else.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nowcast/bounds.hpp"
#include "nowcast/csv.hpp"
#include "nowcast/epidemic.hpp"
#include "nowcast/estimator.hpp"
#include "nowcast/evaluate.hpp"
#include "nowcast/ingest.hpp"
#include "nowcast/io.hpp"
#include "nowcast/manifest.hpp"
#include "nowcast/svg.hpp"
#include "nowcast/sweep.hpp"
#include "nowcast/timeseries.hpp"
#include "nowcast/window.hpp"

namespace fs = std::filesystem;
using namespace nowcast;

namespace {

// ---------------------------------------------------------------------------
// flat key-value config files

std::map<std::string, std::string> read_kv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ": expected key=value, found '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (kv.count(key)) throw ConfigError(path + ": duplicate key '" + key + "'");
        kv[key] = value;
    }
    return kv;
}

double kv_double(const std::map<std::string, std::string>& kv, const std::string& key,
                 double fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        return csv::to_double(it->second, key.c_str());
    } catch (const FormatError& e) {
        throw ConfigError(e.what());
    }
}

long long kv_int(const std::map<std::string, std::string>& kv, const std::string& key,
                 long long fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        return csv::to_int(it->second, key.c_str());
    } catch (const FormatError& e) {
        throw ConfigError(e.what());
    }
}

std::pair<double, double> kv_real_range(const std::map<std::string, std::string>& kv,
                                        const std::string& key,
                                        std::pair<double, double> fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const auto parts = csv::split(it->second);
    if (parts.size() != 2) throw ConfigError(key + ": expected 'min,max'");
    try {
        return {csv::to_double(parts[0], key.c_str()), csv::to_double(parts[1], key.c_str())};
    } catch (const FormatError& e) {
        throw ConfigError(e.what());
    }
}

std::pair<int, int> kv_int_range(const std::map<std::string, std::string>& kv,
                                 const std::string& key, std::pair<int, int> fallback) {
    const auto [lo, hi] = kv_real_range(
        kv, key, {static_cast<double>(fallback.first), static_cast<double>(fallback.second)});
    return {static_cast<int>(lo), static_cast<int>(hi)};
}

void reject_unknown(const std::map<std::string, std::string>& kv,
                    const std::vector<std::string>& known, const std::string& path) {
    for (const auto& [key, value] : kv) {
        bool ok = false;
        for (const auto& k : known) ok = ok || k == key;
        if (!ok) throw ConfigError(path + ": unknown key '" + key + "'");
    }
}

SirConfig sir_from_file(const std::string& path) {
    const auto kv = read_kv(path);
    reject_unknown(kv,
                   {"population", "r0_initial", "recovery_rate", "horizon_days",
                    "intervention_count_range", "intervention_ramp_days", "r0_low_range",
                    "r0_high_range", "initial_infected_fraction", "seed"},
                   path);
    SirConfig cfg;
    cfg.population = kv_int(kv, "population", cfg.population);
    cfg.r0_initial = kv_double(kv, "r0_initial", cfg.r0_initial);
    cfg.recovery_rate = kv_double(kv, "recovery_rate", cfg.recovery_rate);
    cfg.horizon_days = static_cast<int>(kv_int(kv, "horizon_days", cfg.horizon_days));
    cfg.intervention_count_range =
        kv_int_range(kv, "intervention_count_range", cfg.intervention_count_range);
    cfg.intervention_ramp_days =
        static_cast<int>(kv_int(kv, "intervention_ramp_days", cfg.intervention_ramp_days));
    cfg.r0_low_range = kv_real_range(kv, "r0_low_range", cfg.r0_low_range);
    cfg.r0_high_range = kv_real_range(kv, "r0_high_range", cfg.r0_high_range);
    cfg.initial_infected_fraction =
        kv_double(kv, "initial_infected_fraction", cfg.initial_infected_fraction);
    cfg.seed = static_cast<std::uint64_t>(kv_int(kv, "seed", static_cast<long long>(cfg.seed)));
    return cfg;
}

SurveyConfig survey_from_file(const std::string& path) {
    const auto kv = read_kv(path);
    reject_unknown(kv, {"d", "n", "n_d", "period", "seed"}, path);
    SurveyConfig cfg;
    cfg.d = kv_double(kv, "d", cfg.d);
    cfg.n = static_cast<int>(kv_int(kv, "n", cfg.n));
    cfg.n_d = static_cast<int>(kv_int(kv, "n_d", cfg.n_d));
    cfg.period = static_cast<int>(kv_int(kv, "period", cfg.period));
    cfg.seed = static_cast<std::uint64_t>(kv_int(kv, "seed", static_cast<long long>(cfg.seed)));
    return cfg;
}

std::vector<std::string> kv_list(const std::map<std::string, std::string>& kv,
                                 const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) return {};
    return csv::split(it->second);
}

SweepGrid grid_from_file(const std::string& path) {
    const auto kv = read_kv(path);
    reject_unknown(kv, {"d", "n", "n_d", "accum", "period", "w", "seeds", "seed"}, path);
    SweepGrid grid;
    auto fill_doubles = [&](const std::string& key, std::vector<double>& dst) {
        const auto items = kv_list(kv, key);
        if (items.empty()) return;
        dst.clear();
        for (const auto& s : items) {
            try {
                dst.push_back(csv::to_double(s, key.c_str()));
            } catch (const FormatError& e) {
                throw ConfigError(e.what());
            }
        }
    };
    auto fill_ints = [&](const std::string& key, std::vector<int>& dst) {
        const auto items = kv_list(kv, key);
        if (items.empty()) return;
        dst.clear();
        for (const auto& s : items) {
            try {
                dst.push_back(static_cast<int>(csv::to_int(s, key.c_str())));
            } catch (const FormatError& e) {
                throw ConfigError(e.what());
            }
        }
    };
    fill_doubles("d", grid.d);
    fill_ints("n", grid.n);
    fill_ints("n_d", grid.n_d);
    fill_ints("accum", grid.accum);
    fill_ints("period", grid.period);
    fill_ints("w", grid.w);
    grid.seeds = static_cast<int>(kv_int(kv, "seeds", grid.seeds));
    grid.base_seed =
        static_cast<std::uint64_t>(kv_int(kv, "seed", static_cast<long long>(grid.base_seed)));
    return grid;
}

BiasGroups bias_from_string(const std::string& spec) {
    // "q:alpha,q:alpha", e.g. "0.5:0.5,0.5:1.5"
    BiasGroups bias;
    for (const auto& part : csv::split(spec)) {
        const auto colon = part.find(':');
        if (colon == std::string::npos)
            throw ConfigError("bias: expected q:alpha pairs, found '" + part + "'");
        try {
            bias.groups.push_back({csv::to_double(part.substr(0, colon), "bias q"),
                                   csv::to_double(part.substr(colon + 1), "bias alpha")});
        } catch (const FormatError& e) {
            throw ConfigError(e.what());
        }
    }
    bias.validate();
    return bias;
}

// ---------------------------------------------------------------------------
// manifests

std::string out_path(const std::string& out_dir, const std::string& name) {
    fs::create_directories(out_dir);
    return (fs::path(out_dir) / name).string();
}

void emit_manifest(const std::string& out_dir, RunManifest m) {
    const std::string path = out_path(out_dir, m.command + "_manifest.json");
    write_manifest(m, path);
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

// ---------------------------------------------------------------------------
// subcommand options

struct SimulateOpts {
    std::string config;
    std::string out_dir = ".";
    bool multiwave = false;
    std::optional<std::uint64_t> seed;
};

void cmd_simulate(const SimulateOpts& opt) {
    SirConfig cfg = sir_from_file(opt.config);
    if (opt.seed) cfg.seed = *opt.seed;
    cfg.validate();

    EpidemicTrajectory traj;
    std::uint64_t seed_used = cfg.seed;
    if (opt.multiwave) {
        MultiwaveResult mw = simulate_multiwave(cfg);
        traj = std::move(mw.trajectory);
        seed_used = mw.seed_used;
    } else {
        traj = simulate(cfg);
    }
    io::write_trajectory_csv(out_path(opt.out_dir, "trajectory.csv"), traj);

    RunManifest m;
    m.command = "simulate";
    m.seed = cfg.seed;
    m.config["config"] = opt.config;
    m.config["multiwave"] = format_bool(opt.multiwave);
    m.config["seed"] = std::to_string(cfg.seed);
    m.config["resolved.population"] = std::to_string(cfg.population);
    m.config["resolved.r0_initial"] = csv::fmt(cfg.r0_initial);
    m.config["resolved.recovery_rate"] = csv::fmt(cfg.recovery_rate);
    m.config["resolved.horizon_days"] = std::to_string(cfg.horizon_days);
    m.config["resolved.intervention_count_range"] =
        std::to_string(cfg.intervention_count_range.first) + "," +
        std::to_string(cfg.intervention_count_range.second);
    m.config["resolved.intervention_ramp_days"] = std::to_string(cfg.intervention_ramp_days);
    m.config["resolved.r0_low_range"] =
        csv::fmt(cfg.r0_low_range.first) + "," + csv::fmt(cfg.r0_low_range.second);
    m.config["resolved.r0_high_range"] =
        csv::fmt(cfg.r0_high_range.first) + "," + csv::fmt(cfg.r0_high_range.second);
    m.config["resolved.initial_infected_fraction"] = csv::fmt(cfg.initial_infected_fraction);
    m.config["resolved.seed_used"] = std::to_string(seed_used);
    m.output_paths = {"trajectory.csv"};
    emit_manifest(opt.out_dir, std::move(m));
}

struct SurveyOpts {
    std::string trajectory;
    std::string config;
    std::string bias;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
};

void cmd_survey(const SurveyOpts& opt) {
    SurveyConfig cfg = survey_from_file(opt.config);
    if (opt.seed) cfg.seed = *opt.seed;
    cfg.validate();

    const EpidemicTrajectory traj = io::read_trajectory_csv(opt.trajectory);
    const TimeSeries f = hidden_fraction(traj.incidence, cfg.period);
    std::vector<ResponseBatch> batches = simulate_survey(f, cfg);
    if (!opt.bias.empty()) {
        const BiasGroups bias = bias_from_string(opt.bias);
        rng::Engine g(rng::derive_seed(cfg.seed, 0xB1A5));
        batches = apply_bias(batches, bias, g);
    }
    io::write_responses_csv(out_path(opt.out_dir, "responses.csv"), batches);

    RunManifest m;
    m.command = "survey";
    m.seed = cfg.seed;
    m.config["trajectory"] = opt.trajectory;
    m.config["config"] = opt.config;
    if (!opt.bias.empty()) m.config["bias"] = opt.bias;
    m.config["seed"] = std::to_string(cfg.seed);
    m.config["resolved.d"] = csv::fmt(cfg.d);
    m.config["resolved.n"] = std::to_string(cfg.n);
    m.config["resolved.n_d"] = std::to_string(cfg.n_d);
    m.config["resolved.period"] = std::to_string(cfg.period);
    m.output_paths = {"responses.csv"};
    emit_manifest(opt.out_dir, std::move(m));
}

struct EstimateOpts {
    std::string responses;
    std::string method = "ind";
    std::string smoothing = "nos";
    int accum = 1;
    int w = 0;
    bool auto_window = false;
    double lambda = 0.1;
    int w_init = 5;
    std::optional<double> eps_f1, eps_f2, eps_s1;
    std::string out_dir = ".";
};

void cmd_estimate(const EstimateOpts& opt) {
    if (opt.accum < 1) throw ConfigError("accum: must be >= 1");
    if (opt.w < 0) throw ConfigError("w: must be >= 0");
    const Method method = method_from_string(opt.method);

    const std::vector<ResponseBatch> batches = io::read_responses_csv(opt.responses);
    const std::vector<ResponseBatch> binned = accumulate(batches, opt.accum);
    EstimateSeries base = method == Method::Ind    ? indirect_mean(binned)
                          : method == Method::Nsum ? nsum_mean(binned)
                                                   : direct_mean(binned);
    base.accum = opt.accum;

    EstimateSeries est;
    std::optional<WindowSearchResult> search;
    if (opt.auto_window) {
        SmoothnessProfile profile;
        if (opt.eps_f1 && opt.eps_f2 && opt.eps_s1) {
            profile = {*opt.eps_f1, *opt.eps_f2, *opt.eps_s1};
        } else {
            profile = smoothness_from_pilot(base);
            if (opt.eps_f1) profile.eps_f1 = *opt.eps_f1;
            if (opt.eps_f2) profile.eps_f2 = *opt.eps_f2;
            if (opt.eps_s1) profile.eps_s1 = *opt.eps_s1;
        }
        search = aggregated_estimate(base, opt.lambda, opt.w_init, profile);
        est = search->estimate;

        std::ofstream win(out_path(opt.out_dir, "window_result.csv"));
        if (!win) throw FormatError("cannot write window_result.csv");
        auto fmt_lambda = [](const std::optional<double>& v) {
            return v ? csv::fmt(*v) : std::string("inf");
        };
        win << "w_selected,lambda1,lambda2,satisfied\n";
        win << search->w_selected << ',' << fmt_lambda(search->lambda1) << ','
            << fmt_lambda(search->lambda2) << ',' << format_bool(search->satisfied)
            << '\n';
    } else {
        const Smoothing smoothing = smoothing_from_string(opt.smoothing);
        est = smoothing == Smoothing::NoS  ? base
              : smoothing == Smoothing::WA ? weighted_ma(base, opt.w)
                                           : unweighted_ma(base, opt.w);
    }
    io::write_estimates_csv(out_path(opt.out_dir, "estimates.csv"), est);

    RunManifest m;
    m.command = "estimate";
    m.config["responses"] = opt.responses;
    m.config["method"] = opt.method;
    m.config["smoothing"] = opt.smoothing;
    m.config["accum"] = std::to_string(opt.accum);
    m.config["w"] = std::to_string(opt.w);
    m.config["auto-window"] = format_bool(opt.auto_window);
    if (opt.auto_window) {
        m.config["lambda"] = csv::fmt(opt.lambda);
        m.config["w-init"] = std::to_string(opt.w_init);
        if (opt.eps_f1) m.config["eps-f1"] = csv::fmt(*opt.eps_f1);
        if (opt.eps_f2) m.config["eps-f2"] = csv::fmt(*opt.eps_f2);
        if (opt.eps_s1) m.config["eps-s1"] = csv::fmt(*opt.eps_s1);
        m.config["resolved.w_selected"] = std::to_string(search->w_selected);
        m.config["resolved.satisfied"] = format_bool(search->satisfied);
        m.output_paths = {"estimates.csv", "window_result.csv"};
    } else {
        m.output_paths = {"estimates.csv"};
    }
    emit_manifest(opt.out_dir, std::move(m));
}

struct EvaluateOpts {
    std::vector<std::string> estimates;
    std::string reference;
    std::string out_dir = ".";
};

// A `day,value` series, or a trajectory CSV whose infectious fraction is the
// reference the paper's synthetic comparisons use.
TimeSeries read_reference(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) throw FormatError("cannot open '" + path + "'");
    std::string header;
    std::getline(probe, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    probe.close();
    if (header == "day,s,i,r,incidence,r0") return io::read_trajectory_csv(path).i;
    return io::read_timeseries_csv(path);
}

void cmd_evaluate(const EvaluateOpts& opt) {
    if (opt.estimates.empty()) throw ConfigError("estimates: at least one file required");
    std::vector<EstimateSeries> estimates;
    estimates.reserve(opt.estimates.size());
    for (const auto& path : opt.estimates)
        estimates.push_back(io::read_estimates_csv(path));
    const TimeSeries reference = read_reference(opt.reference);

    const std::vector<MaeEntry> table = evaluate_estimates(estimates, reference);
    std::ofstream out(out_path(opt.out_dir, "mae_table.csv"));
    if (!out) throw FormatError("cannot write mae_table.csv");
    out << "method,smoothing,accum,w,mae,mark\n";
    for (const auto& row : table)
        out << to_string(row.method) << ',' << to_string(row.smoothing) << ','
            << row.accum << ',' << row.w << ',' << csv::fmt(row.mae) << ',' << row.mark
            << '\n';
    out.close();

    RunManifest m;
    m.command = "evaluate";
    std::string joined;
    for (const auto& p : opt.estimates) {
        if (!joined.empty()) joined += ';';
        joined += p;
    }
    m.config["estimates"] = joined;
    m.config["reference"] = opt.reference;
    m.output_paths = {"mae_table.csv"};
    emit_manifest(opt.out_dir, std::move(m));
}

struct SweepOpts {
    std::string grid;
    std::string sir;
    int jobs = 0;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
};

void cmd_sweep(const SweepOpts& opt) {
    SweepGrid grid = opt.grid.empty() ? SweepGrid{} : grid_from_file(opt.grid);
    if (!opt.sir.empty()) grid.sir = sir_from_file(opt.sir);
    if (opt.seed) grid.base_seed = *opt.seed;
    grid.validate();

    const std::string checkpoints = out_path(opt.out_dir, "checkpoints");
    const std::vector<SweepRow> rows = run_sweep(grid, checkpoints, opt.jobs);
    write_sweep_csv(out_path(opt.out_dir, "results.csv"), rows);

    RunManifest m;
    m.command = "sweep";
    m.seed = grid.base_seed;
    if (!opt.grid.empty()) m.config["grid"] = opt.grid;
    if (!opt.sir.empty()) m.config["sir"] = opt.sir;
    m.config["seed"] = std::to_string(grid.base_seed);
    auto join_doubles = [](const std::vector<double>& v) {
        std::string s;
        for (double x : v) {
            if (!s.empty()) s += ',';
            s += csv::fmt(x);
        }
        return s;
    };
    auto join_ints = [](const std::vector<int>& v) {
        std::string s;
        for (int x : v) {
            if (!s.empty()) s += ',';
            s += std::to_string(x);
        }
        return s;
    };
    m.config["resolved.d"] = join_doubles(grid.d);
    m.config["resolved.n"] = join_ints(grid.n);
    m.config["resolved.n_d"] = join_ints(grid.n_d);
    m.config["resolved.accum"] = join_ints(grid.accum);
    m.config["resolved.period"] = join_ints(grid.period);
    m.config["resolved.w"] = join_ints(grid.w);
    m.config["resolved.seeds"] = std::to_string(grid.seeds);
    m.output_paths = {"results.csv"};
    emit_manifest(opt.out_dir, std::move(m));
}

struct DiagnoseOpts {
    std::string series;
    int w_max = 10;
    double sn_over_mn = 0.3;
    double mu_d = 15.0;
    double sigma_d2 = 100.0;
    double population = 0.0;  // 0 = values are already fractions
    std::string out_dir = ".";
};

void cmd_diagnose(const DiagnoseOpts& opt) {
    if (opt.w_max < 1) throw ConfigError("w-max: must be >= 1");
    TimeSeries f = io::read_timeseries_csv(opt.series);
    for (std::size_t t = 0; t < f.size(); ++t)
        if (f[t] <= 0.0)
            throw DomainError("diagnose: zero value at day " + std::to_string(f.day(t)));
    if (opt.population > 0.0)
        for (double& v : f.values) v /= opt.population;
    for (double v : f.values)
        if (v > 1.0)
            throw ConfigError(
                "series: values exceed 1; diagnose expects a fraction series "
                "(pass --population to scale counts)");

    const TimeSeries d1 = first_diff_ratio(f);
    const TimeSeries d2 = second_diff_ratio(f);
    const DiffBounds f_bounds = empirical_smoothness(f);

    // Response-variance series from the variance formula at phi = f.
    TimeSeries sigma2{f.start_day, std::vector<double>(f.size(), 0.0)};
    for (std::size_t t = 0; t < f.size(); ++t)
        sigma2[t] = variance_indirect({f[t], opt.mu_d, opt.sigma_d2, f[t]});
    const DiffBounds s_bounds = empirical_smoothness(sigma2);

    {
        std::ofstream out(out_path(opt.out_dir, "ratios.csv"));
        if (!out) throw FormatError("cannot write ratios.csv");
        out << "day,first_diff_ratio,second_diff_ratio\n";
        for (std::size_t i = 0; i < d1.size(); ++i) {
            out << d1.day(i) << ',' << csv::fmt(d1[i]) << ',';
            const int day = d1.day(i);
            if (day >= d2.start_day && day <= d2.last_day())
                out << csv::fmt(d2[static_cast<std::size_t>(day - d2.start_day)]);
            out << '\n';
        }
    }
    {
        std::ofstream out(out_path(opt.out_dir, "smoothness.csv"));
        if (!out) throw FormatError("cannot write smoothness.csv");
        out << "eps_f1,eps_f2,eps_s1,eps_s2\n";
        out << csv::fmt(f_bounds.eps1) << ',' << csv::fmt(f_bounds.eps2) << ','
            << csv::fmt(s_bounds.eps1) << ',' << csv::fmt(s_bounds.eps2) << '\n';
    }

    svg::Series gamma_f_series{"gamma_f", {}, {}};
    svg::Series gamma_s_series{"gamma_sigma2", {}, {}};
    {
        std::ofstream out(out_path(opt.out_dir, "gamma.csv"));
        if (!out) throw FormatError("cannot write gamma.csv");
        out << "w,gamma_f,gamma_sigma2,lambda_thm3,lambda_thm4\n";
        for (int w = 1; w <= opt.w_max; ++w) {
            std::optional<double> gf, gs;
            if (w * f_bounds.eps1 < 1.0)
                gf = gamma_factor(f_bounds.eps1, f_bounds.eps2, w, opt.sn_over_mn);
            if (w * s_bounds.eps1 < 1.0)
                gs = gamma_factor(s_bounds.eps1, s_bounds.eps2, w, opt.sn_over_mn);

            WindowBoundInputs in;
            in.eps_f1 = f_bounds.eps1;
            in.eps_f2 = f_bounds.eps2;
            in.eps_s1 = s_bounds.eps1;
            in.eps_s2 = s_bounds.eps2;
            in.w = w;
            in.n_t = 1.0;
            in.n_w = static_cast<double>(2 * w + 1);
            in.sigma_n_over_mu_n = opt.sn_over_mn;
            const auto l1 = lambda_threshold_thm3(in);
            const auto l2 = (gf && gs)
                                ? lambda_threshold_thm4(*gf, *gs, 1.0,
                                                        static_cast<double>(2 * w + 1))
                                : std::nullopt;
            auto cell = [](const std::optional<double>& v) {
                return v ? csv::fmt(*v) : std::string("inf");
            };
            out << w << ',' << cell(gf) << ',' << cell(gs) << ',' << cell(l1) << ','
                << cell(l2) << '\n';
            if (gf) {
                gamma_f_series.x.push_back(w);
                gamma_f_series.y.push_back(*gf);
            }
            if (gs) {
                gamma_s_series.x.push_back(w);
                gamma_s_series.y.push_back(*gs);
            }
        }
    }

    svg::Panel ratios_panel;
    ratios_panel.title = "Relative first and second differences";
    ratios_panel.x_label = "day";
    ratios_panel.y_label = "ratio";
    svg::Series r1{"|delta f|/f", {}, {}}, r2{"|delta2 f|/f", {}, {}};
    for (std::size_t i = 0; i < d1.size(); ++i) {
        r1.x.push_back(d1.day(i));
        r1.y.push_back(d1[i]);
    }
    for (std::size_t i = 0; i < d2.size(); ++i) {
        r2.x.push_back(d2.day(i));
        r2.y.push_back(d2[i]);
    }
    ratios_panel.series = {r1, r2};

    svg::Panel gamma_panel;
    gamma_panel.title = "Aggregation error factors by half-window";
    gamma_panel.x_label = "w";
    gamma_panel.y_label = "gamma";
    gamma_panel.series = {gamma_f_series, gamma_s_series};
    svg::write_chart(out_path(opt.out_dir, "diagnose.svg"), {ratios_panel, gamma_panel});

    RunManifest m;
    m.command = "diagnose";
    m.config["series"] = opt.series;
    m.config["w-max"] = std::to_string(opt.w_max);
    m.config["sn-over-mn"] = csv::fmt(opt.sn_over_mn);
    m.config["mu-d"] = csv::fmt(opt.mu_d);
    m.config["sigma-d2"] = csv::fmt(opt.sigma_d2);
    m.config["population"] = csv::fmt(opt.population);
    m.output_paths = {"ratios.csv", "smoothness.csv", "gamma.csv", "diagnose.svg"};
    emit_manifest(opt.out_dir, std::move(m));
}

struct IngestOpts {
    std::string survey;
    std::string question = "household";
    std::string reference;
    std::string reference_mode = "daily";
    std::string out_dir = ".";
};

void cmd_ingest(const IngestOpts& opt) {
    const Question question = question_from_string(opt.question);
    const std::vector<RawSurveyRow> rows = read_survey_csv(opt.survey);
    const auto [kept, report] = outlier_filter(rows, question);
    const std::vector<ResponseBatch> batches = to_batches(kept, question);
    if (batches.empty()) throw ShapeError(opt.survey + ": no rows survive the filter");
    io::write_responses_csv(out_path(opt.out_dir, "responses.csv"), batches);

    {
        std::ofstream out(out_path(opt.out_dir, "filter_report.csv"));
        if (!out) throw FormatError("cannot write filter_report.csv");
        out << "rows_in,rows_out,negative,over_100,inconsistent,missing\n";
        out << report.rows_in << ',' << report.rows_out << ',' << report.removed("negative")
            << ',' << report.removed("over_100") << ',' << report.removed("inconsistent")
            << ',' << report.removed("missing") << '\n';
    }

    RunManifest m;
    m.command = "ingest";
    m.config["survey"] = opt.survey;
    m.config["question"] = opt.question;
    m.output_paths = {"responses.csv", "filter_report.csv"};

    if (!opt.reference.empty()) {
        const ReferenceMode mode = opt.reference_mode == "cumulative"
                                       ? ReferenceMode::Cumulative
                                   : opt.reference_mode == "daily"
                                       ? ReferenceMode::Daily
                                       : throw ConfigError(
                                             "reference-mode: expected cumulative|daily");
        TimeSeries ref = load_reference(opt.reference, mode);
        // Shift to the survey's day domain (day 0 = first kept survey date).
        long long first_date = std::numeric_limits<long long>::max();
        for (const auto& r : kept) first_date = std::min(first_date, r.date_day);
        ref.start_day -= static_cast<int>(first_date);
        io::write_timeseries_csv(out_path(opt.out_dir, "reference.csv"), ref);
        m.config["reference"] = opt.reference;
        m.config["reference-mode"] = opt.reference_mode;
        m.output_paths.push_back("reference.csv");
    }
    emit_manifest(opt.out_dir, std::move(m));
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const ShapeError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << '\n';
        return 3;
    } catch (const RangeError& e) {
        std::cerr << "range error: " << e.what() << '\n';
        return 4;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "nowcast: hidden-population trend estimation from indirect surveys.\n"
        "Exit codes: 2 config, 3 data shape/format, 4 disjoint ranges, 5 domain."};
    app.require_subcommand(1);

    SimulateOpts sim;
    auto* c_sim = app.add_subcommand("simulate", "Generate an epidemic trajectory");
    c_sim->add_option("--config", sim.config, "SirConfig key-value file")->required();
    c_sim->add_flag("--multiwave", sim.multiwave,
                    "re-seed until incidence shows at least two peaks");
    c_sim->add_option("--seed", sim.seed, "override the config seed");
    c_sim->add_option("--out-dir", sim.out_dir, "output directory");

    SurveyOpts sur;
    auto* c_sur = app.add_subcommand("survey", "Simulate daily survey responses");
    c_sur->add_option("--trajectory", sur.trajectory, "trajectory CSV")->required();
    c_sur->add_option("--config", sur.config, "SurveyConfig key-value file")->required();
    c_sur->add_option("--bias", sur.bias, "reporting bias groups 'q:alpha,q:alpha'");
    c_sur->add_option("--seed", sur.seed, "override the config seed");
    c_sur->add_option("--out-dir", sur.out_dir, "output directory");

    EstimateOpts est;
    auto* c_est = app.add_subcommand("estimate", "Turn responses into an estimate series");
    c_est->add_option("--responses", est.responses, "responses CSV")->required();
    c_est->add_option("--method", est.method, "ind|nsum|dir");
    c_est->add_option("--smoothing", est.smoothing, "nos|wa|ua");
    c_est->add_option("--accum", est.accum, "days pooled per bin");
    c_est->add_option("--w", est.w, "half-window of the moving average");
    c_est->add_flag("--auto-window", est.auto_window,
                    "adaptive window selection by the lambda thresholds");
    c_est->add_option("--lambda", est.lambda, "acceptable fractional error");
    c_est->add_option("--w-init", est.w_init, "starting half-window of the search");
    c_est->add_option("--eps-f1", est.eps_f1, "override the pilot eps_f1");
    c_est->add_option("--eps-f2", est.eps_f2, "override the pilot eps_f2");
    c_est->add_option("--eps-s1", est.eps_s1, "override the pilot eps_s1");
    c_est->add_option("--out-dir", est.out_dir, "output directory");

    EvaluateOpts ev;
    auto* c_ev = app.add_subcommand("evaluate", "MAE table against a reference curve");
    c_ev->add_option("--estimates", ev.estimates, "estimate CSVs")->required()->expected(-1);
    c_ev->add_option("--reference", ev.reference,
                     "reference day,value CSV (a trajectory CSV is accepted; its "
                     "infectious fraction is used)")
        ->required();
    c_ev->add_option("--out-dir", ev.out_dir, "output directory");

    SweepOpts sw;
    auto* c_sw = app.add_subcommand("sweep", "Parameter-grid experiment runner");
    c_sw->add_option("--grid,--config", sw.grid,
                     "grid key-value file (default: built-in slice)");
    c_sw->add_option("--sir", sw.sir, "SirConfig key-value file for the epidemic");
    c_sw->add_option("--jobs", sw.jobs, "worker threads (default: hardware)");
    c_sw->add_option("--seed", sw.seed, "override the base seed");
    c_sw->add_option("--out-dir", sw.out_dir, "output directory");

    DiagnoseOpts dg;
    auto* c_dg = app.add_subcommand("diagnose", "Smoothness and gamma diagnostics");
    c_dg->add_option("--series", dg.series, "day,value CSV (strictly positive)")->required();
    c_dg->add_option("--w-max", dg.w_max, "largest half-window to tabulate");
    c_dg->add_option("--sn-over-mn", dg.sn_over_mn, "assumed sigma_n / mu_n");
    c_dg->add_option("--mu-d", dg.mu_d, "mean degree for the variance curve");
    c_dg->add_option("--sigma-d2", dg.sigma_d2, "degree variance for the variance curve");
    c_dg->add_option("--population", dg.population,
                     "divide the series by this to obtain fractions");
    c_dg->add_option("--out-dir", dg.out_dir, "output directory");

    IngestOpts ing;
    auto* c_ing = app.add_subcommand("ingest", "Clean and batch a survey CSV");
    c_ing->add_option("--survey", ing.survey, "survey CSV")->required();
    c_ing->add_option("--question", ing.question, "household|community|direct");
    c_ing->add_option("--reference", ing.reference, "official date,cases CSV");
    c_ing->add_option("--reference-mode", ing.reference_mode, "cumulative|daily");
    c_ing->add_option("--out-dir", ing.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    if (c_sim->parsed()) return guarded([&] { cmd_simulate(sim); });
    if (c_sur->parsed()) return guarded([&] { cmd_survey(sur); });
    if (c_est->parsed()) return guarded([&] { cmd_estimate(est); });
    if (c_ev->parsed()) return guarded([&] { cmd_evaluate(ev); });
    if (c_sw->parsed()) return guarded([&] { cmd_sweep(sw); });
    if (c_dg->parsed()) return guarded([&] { cmd_diagnose(dg); });
    if (c_ing->parsed()) return guarded([&] { cmd_ingest(ing); });
    return 1;
}
