#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmtc/analytic.hpp"
#include "mmtc/errors.hpp"
#include "mmtc/io.hpp"
#include "mmtc/presets.hpp"
#include "mmtc/scenario.hpp"
#include "mmtc/simulate.hpp"
#include "mmtc/stats.hpp"

namespace {

using namespace mmtc;

// Loads and validates; prints findings and returns false when invalid.
bool load_checked(const std::string& file, Scenario& s) {
    s = load_scenario(file);
    const auto findings = validate_scenario(s);
    if (findings.empty()) return true;
    std::fprintf(stderr, "scenario %s failed validation:\n", file.c_str());
    for (const auto& f : findings) std::fprintf(stderr, "  - %s\n", f.c_str());
    return false;
}

void print_stats(const RunStats& m, int runs) {
    std::printf("runs            %d\n", runs);
    std::printf("E[X] (s)        %.6g\n", m.ex);
    std::printf("E[X^2]          %.6g\n", m.ex2);
    std::printf("E[X^3]          %.6g\n", m.ex3);
    std::printf("c_V             %.6g\n", m.cv);
    std::printf("arrivals/run    %lld\n", m.arrivals);
}

void print_report(const ComparisonReport& r) {
    std::printf("[%s]\n", r.id.c_str());
    std::printf("analytic mean (s)   %.6g\n", r.analytic_mean_s);
    std::printf("simulated E[X] (s)  %.6g\n", r.sim_mean.ex);
    std::printf("simulated c_V       %.6g\n", r.sim_mean.cv);
    std::printf("KS exact            %.6g\n", r.ks_exact);
    std::printf("KS paper            %.6g\n", r.ks_paper);
    std::printf("matching mode       %s\n", r.matching_mode.c_str());
    if (!r.analytic.batch_exact.pmf.count.empty())
        std::printf("batch TV exact/paper  %.6g / %.6g\n", r.tv_exact, r.tv_paper);
    const Diagnostics& d = r.diagnostics;
    std::printf("negative mass       %.3g\n", d.negative_mass);
    std::printf("product cdf valid   %s (max %.6g)\n", d.cdf_valid ? "yes" : "no",
                d.max_cdf_value);
}

std::vector<std::pair<double, double>> parse_ranges(const std::vector<std::string>& raw) {
    std::vector<std::pair<double, double>> out;
    for (const auto& r : raw) {
        const auto colon = r.find(':');
        if (colon == std::string::npos)
            throw InvalidParameter("range '" + r + "' must look like lo:hi");
        try {
            out.emplace_back(std::stod(r.substr(0, colon)), std::stod(r.substr(colon + 1)));
        } catch (const std::exception&) {
            throw InvalidParameter("range '" + r + "' must look like lo:hi");
        }
    }
    return out;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Analytic and Monte-Carlo models of aggregated uplink traffic"};
    app.require_subcommand(1);

    std::string scenario_file, out_dir, preset_name, data_dir = "data/fig7";
    std::string sweep_kind = "rate", sweep_out = "sweep.csv";
    int runs = 100, grid_points = 512, generations = 0;
    std::uint64_t seed = 1;
    double horizon = 0, warmup = 0;
    bool stationary = false, leading_gap = false, skip_batch = false;
    bool serial = false, dump_gaps = false;
    std::vector<double> factors;
    std::vector<int> populations;
    std::vector<std::string> ranges_raw;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_flag("--serial", serial, "disable the parallel execution path");
    };

    CLI::App* analyze_cmd =
        app.add_subcommand("analyze", "inter-arrival laws and batch pmf for a scenario");
    analyze_cmd->add_option("--scenario", scenario_file, "scenario JSON")->required();
    analyze_cmd->add_option("--out", out_dir, "directory for CSV/JSON artifacts");
    analyze_cmd->add_option("--grid", grid_points, "CDF grid points")
        ->check(CLI::PositiveNumber);
    analyze_cmd->add_flag("--skip-batch", skip_batch, "skip the batch-size pmf");
    add_common(analyze_cmd);

    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "Monte-Carlo runs of a scenario");
    simulate_cmd->add_option("--scenario", scenario_file, "scenario JSON")->required();
    simulate_cmd->add_option("--seed", seed, "RNG seed")->required();
    simulate_cmd->add_option("--runs", runs, "independent runs")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--horizon", horizon, "observation window (s)");
    simulate_cmd->add_option("--generations", generations, "generations per user");
    simulate_cmd->add_option("--warmup", warmup, "drop arrivals before this time (s)");
    simulate_cmd->add_flag("--stationary", stationary, "equilibrium start");
    simulate_cmd->add_flag("--leading-gap", leading_gap,
                           "count window start to first arrival as a gap");
    simulate_cmd->add_option("--out", out_dir, "directory for CSV artifacts");
    simulate_cmd->add_flag("--dump-gaps", dump_gaps, "also write pooled gaps CSV");
    add_common(simulate_cmd);

    CLI::App* validate_cmd = app.add_subcommand(
        "validate", "simulate, run the analytic pass, and compare the two");
    validate_cmd->add_option("--scenario", scenario_file, "scenario JSON")->required();
    validate_cmd->add_option("--seed", seed, "RNG seed")->required();
    validate_cmd->add_option("--runs", runs, "independent runs")->check(CLI::PositiveNumber);
    validate_cmd->add_option("--horizon", horizon, "observation window (s), default 1000");
    validate_cmd->add_option("--grid", grid_points, "CDF grid points")
        ->check(CLI::PositiveNumber);
    validate_cmd->add_flag("--skip-batch", skip_batch, "skip the batch-size pmf");
    validate_cmd->add_option("--out", out_dir, "directory for CSV/JSON artifacts");
    add_common(validate_cmd);

    CLI::App* preset_cmd =
        app.add_subcommand("preset", "built-in comparison scenarios");
    preset_cmd->add_option("name", preset_name, "table2 | table3 | table4 | fig7")
        ->required();
    preset_cmd->add_option("--runs", runs, "independent runs")->check(CLI::PositiveNumber);
    preset_cmd->add_option("--seed", seed, "RNG seed");
    preset_cmd->add_option("--data", data_dir, "trace directory for fig7");
    preset_cmd->add_option("--out", out_dir, "directory for CSV/JSON artifacts");
    preset_cmd->add_option("--grid", grid_points, "CDF grid points")
        ->check(CLI::PositiveNumber);
    add_common(preset_cmd);

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "simulated moments across scenario variations");
    sweep_cmd->add_option("--kind", sweep_kind, "rate | population | distance")
        ->check(CLI::IsMember({"rate", "population", "distance"}));
    sweep_cmd->add_option("--scenario", scenario_file,
                          "base scenario JSON (default: built-in heterogeneous mix)");
    sweep_cmd->add_option("--factors", factors, "rate multipliers")->delimiter(',');
    sweep_cmd->add_option("--populations", populations, "per-class user counts")
        ->delimiter(',');
    sweep_cmd->add_option("--ranges", ranges_raw, "distance ranges lo:hi in km")
        ->delimiter(',');
    sweep_cmd->add_option("--runs", runs, "independent runs")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--seed", seed, "RNG seed");
    sweep_cmd->add_option("--generations", generations,
                          "generations per user, default 20");
    sweep_cmd->add_option("--horizon", horizon, "observation window (s)");
    sweep_cmd->add_option("--out", sweep_out, "output CSV path");
    add_common(sweep_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const ExecPolicy policy = serial ? ExecPolicy::Serial : ExecPolicy::Parallel;

    if (analyze_cmd->parsed()) {
        Scenario s;
        if (!load_checked(scenario_file, s)) return 1;
        AnalyticReport rep = analyze(s, grid_points, !skip_batch, policy);
        std::printf("grid points         %zu\n", rep.grid_s.size());
        std::printf("grid span (s)       [%.6g, %.6g]\n", rep.grid_s.front(),
                    rep.grid_s.back());
        std::printf("negative mass       %.3g\n", rep.diagnostics.negative_mass);
        std::printf("product cdf valid   %s (max %.6g)\n",
                    rep.diagnostics.cdf_valid ? "yes" : "no",
                    rep.diagnostics.max_cdf_value);
        if (!skip_batch)
            std::printf("sum pi (product)    %.6g\n", rep.diagnostics.sum_pi_paper);
        if (!out_dir.empty()) {
            const auto base = std::filesystem::path(out_dir) /
                              std::filesystem::path(scenario_file).stem();
            write_analytic_csv(rep, base.string() + "_analytic.csv");
            write_diagnostics_json(rep.diagnostics, "none",
                                   base.string() + "_diagnostics.json");
            if (!skip_batch)
                write_batch_csv(rep.batch_exact, rep.batch_paper, {},
                                base.string() + "_batch.csv");
        }
        return 0;
    }

    if (simulate_cmd->parsed()) {
        Scenario s;
        if (!load_checked(scenario_file, s)) return 1;
        SimConfig cfg;
        cfg.runs = runs;
        cfg.seed = seed;
        cfg.horizon_s = horizon;
        cfg.generations = generations;
        cfg.warmup_s = warmup;
        cfg.start = stationary ? StartMode::Stationary : StartMode::Synchronized;
        cfg.leading_gap = leading_gap;
        SimResult r = run_scenario(s, cfg, policy);
        print_stats(r.mean, runs);
        if (!out_dir.empty()) {
            const auto base = std::filesystem::path(out_dir) /
                              std::filesystem::path(scenario_file).stem();
            write_run_stats_csv(r, base.string() + "_stats.csv");
            if (dump_gaps) write_gaps_csv(r.gaps, base.string() + "_gaps.csv");
        }
        return 0;
    }

    if (validate_cmd->parsed()) {
        Scenario s;
        if (!load_checked(scenario_file, s)) return 1;
        SimConfig cfg;
        cfg.runs = runs;
        cfg.seed = seed;
        cfg.horizon_s = horizon > 0 ? horizon : 1000.0;
        cfg.start = StartMode::Stationary;
        const std::string id = std::filesystem::path(scenario_file).stem().string();
        ComparisonReport rep = compare(id, s, cfg, !skip_batch, grid_points, policy);
        print_report(rep);
        if (!out_dir.empty()) {
            const auto base = std::filesystem::path(out_dir) / id;
            write_analytic_csv(rep.analytic, base.string() + "_analytic.csv");
            SimResult stats;
            stats.per_run = rep.per_run;
            stats.mean = rep.sim_mean;
            write_run_stats_csv(stats, base.string() + "_stats.csv");
            write_diagnostics_json(rep.diagnostics, rep.matching_mode,
                                   base.string() + "_diagnostics.json");
            if (!skip_batch)
                write_batch_csv(rep.analytic.batch_exact, rep.analytic.batch_paper,
                                rep.batch_hist, base.string() + "_batch.csv");
        }
        return 0;
    }

    if (preset_cmd->parsed()) {
        PresetOptions opt;
        opt.runs = runs;
        opt.seed = seed;
        opt.data_dir = data_dir;
        opt.out_dir = out_dir;
        opt.grid_points = grid_points;
        opt.policy = policy;
        PresetOutcome outcome = run_preset(preset_name, opt);
        for (const auto& rep : outcome.reports) print_report(rep);
        return 0;
    }

    // sweep
    Scenario base;
    if (!scenario_file.empty()) {
        if (!load_checked(scenario_file, base)) return 1;
    } else {
        base = table4_scenario();
    }
    SweepSpec spec;
    if (sweep_kind == "rate") {
        spec.kind = SweepSpec::Kind::RateScale;
        spec.factors = factors.empty() ? std::vector<double>{1, 2, 3, 4, 5, 6} : factors;
    } else if (sweep_kind == "population") {
        spec.kind = SweepSpec::Kind::Population;
        spec.per_class_population = populations.empty()
                                        ? std::vector<int>{50, 100, 150, 200, 250, 300}
                                        : populations;
    } else {
        spec.kind = SweepSpec::Kind::DistanceRange;
        spec.ranges_km = ranges_raw.empty()
                             ? std::vector<std::pair<double, double>>{
                                   {0.1, 0.5}, {0.1, 1.0}, {0.1, 2.0}, {0.1, 3.0}}
                             : parse_ranges(ranges_raw);
    }
    SimConfig cfg;
    cfg.runs = sweep_cmd->count("--runs") ? runs : 32;
    cfg.seed = seed;
    cfg.horizon_s = horizon;
    cfg.generations = horizon > 0 ? 0 : (generations > 0 ? generations : 20);
    const auto rows = run_sweep(base, spec, cfg, policy);
    std::printf("x,ex_seconds,cv,analytic_mean_s\n");
    for (const auto& r : rows)
        std::printf("%.6g,%.6g,%.6g,%.6g\n", r.x, r.ex, r.cv, r.analytic_mean_s);
    if (!sweep_out.empty()) write_sweep_csv(rows, sweep_out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const mmtc::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
