#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mmtc/analytic.hpp"
#include "mmtc/io.hpp"
#include "mmtc/simulate.hpp"

namespace mmtc {

// Built-in per-block rate table; row t holds the pmf of user type t+1.
const RateTable& builtin_rate_table();

struct ComparisonReport {
    std::string id;
    AnalyticReport analytic;
    std::vector<RunStats> per_run;
    RunStats sim_mean;
    std::map<int, long long> batch_hist;
    double ks_paper = 0;
    double ks_exact = 0;
    std::string matching_mode;  // mode with the smaller KS distance
    double analytic_mean_s = 0;  // 1 / total arrival rate
    double tv_exact = 0;  // batch pmf vs simulated histogram
    double tv_paper = 0;
    Diagnostics diagnostics;
};

// Simulates the scenario, runs the analytic pass, and compares the two.
// KS distances are taken against a fine piecewise-linear snapshot of each
// aggregate law, which keeps million-gap samples cheap to score.
ComparisonReport compare(const std::string& id, const Scenario& s,
                         const SimConfig& cfg, bool with_batch,
                         int grid_points = 512,
                         ExecPolicy policy = ExecPolicy::Parallel);

// Homogeneous channel-sensitivity scenarios: n users of one type, uniform
// inter-generation times on (0.25, 1.75) of the mean, 10..20 packets.
Scenario table2_scenario(double lambda_per_s, int user_type, int n = 1500);

// Bounded-Pareto variant; (L, H) pairs are defined for nominal rates
// 0.01, 0.05 and 0.1. The class rate is 1/mean of the truncated law, which
// lands within a percent of the nominal value.
Scenario table3_scenario(double lambda_nominal, int user_type, int n = 1500);

// Six heterogeneous 250-user classes mixing uniform, deterministic and
// exponential generation.
Scenario table4_scenario(int per_class = 250);

// Trace-driven scenario: one empirical class per device CSV
// (device_01.csv .. device_21.csv), 30 packets per batch, user type drawn
// per device from the seed.
Scenario fig7_scenario(const std::filesystem::path& trace_dir, std::uint64_t seed);

struct PresetOptions {
    int runs = 100;
    std::uint64_t seed = 1;
    std::filesystem::path data_dir;  // fig7 traces
    std::filesystem::path out_dir;   // empty: keep results in memory only
    int grid_points = 512;
    ExecPolicy policy = ExecPolicy::Parallel;
};

struct PresetOutcome {
    std::vector<ComparisonReport> reports;
};

// Presets: "table2", "table3" (one report per rate and user type),
// "table4", "fig7". Moment presets window each run to 18 mean gaps from a
// synchronized start and count the leading idle gap; validation presets
// start stationary and drop it.
PresetOutcome run_preset(const std::string& name, const PresetOptions& opt);

struct SweepSpec {
    enum class Kind { RateScale, Population, DistanceRange };
    Kind kind = Kind::RateScale;
    std::vector<double> factors;                       // RateScale
    std::vector<int> per_class_population;             // Population
    std::vector<std::pair<double, double>> ranges_km;  // DistanceRange
};

struct SweepRow {
    double x = 0;  // axis value: summed class rate, total users, or range top
    double ex = 0;
    double cv = 0;
    double analytic_mean_s = 0;
};

std::vector<SweepRow> run_sweep(const Scenario& base, const SweepSpec& spec,
                                const SimConfig& cfg,
                                ExecPolicy policy = ExecPolicy::Parallel);

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::filesystem::path& out);

}  // namespace mmtc
