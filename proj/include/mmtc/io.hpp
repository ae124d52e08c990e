#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mmtc/analytic.hpp"
#include "mmtc/scenario.hpp"
#include "mmtc/simulate.hpp"

namespace mmtc {

// Rate table CSV: first row the kbps levels, one pmf row per user type.
struct RateTable {
    std::vector<double> levels_kbps;
    std::vector<std::vector<double>> rows;
};

RateTable load_rate_table(const std::filesystem::path& csv);
RatePmf rate_pmf(const RateTable& table, std::size_t row);

// One-column CSV of inter-generation times with header dt_seconds.
std::vector<double> load_gap_csv(const std::filesystem::path& csv);

// Scenario JSON. cell{K, theta_kbits, frame_s, c_km_s} (all optional with
// defaults); classes[{label, population, lambda_per_s, inter_gen{family,
// params}, packets{values, probs}, rates{csv_ref, row | levels, probs},
// distance{fixed_km | range_km}}]. Relative csv_ref paths resolve against
// the scenario file's directory.
Scenario load_scenario(const std::filesystem::path& json_file);

void write_analytic_csv(const AnalyticReport& r, const std::filesystem::path& out);
void write_diagnostics_json(const Diagnostics& d, const std::string& matching_mode,
                            const std::filesystem::path& out);
void write_run_stats_csv(const SimResult& r, const std::filesystem::path& out);
void write_gaps_csv(const std::vector<double>& gaps, const std::filesystem::path& out);
void write_batch_csv(const BatchResult& exact, const BatchResult& paper,
                     const std::map<int, long long>& sim_hist,
                     const std::filesystem::path& out);

}  // namespace mmtc
