#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "mmtc/exec.hpp"
#include "mmtc/scenario.hpp"

namespace mmtc {

// PaperProduct is the product-form aggregation of the per-user excess CDFs;
// it is the law of the largest excess, so it can disagree with the merged
// process and is reported without clamping. ExactMin is the complement
// product, the law of the smallest excess, and is always a valid CDF.
enum class AggregateMode { PaperProduct, ExactMin };

// Single-user inter-arrival law: weighted shifted copies of the base law.
double single_user_pdf(const ShiftMixture& mix, double x);
double single_user_cdf(const ShiftMixture& mix, double x);

// Mean of the mixture. Shift terms of a symmetric mixture cancel pairwise,
// so this equals mean(base) exactly, not just in expectation.
double single_user_mean(const ShiftMixture& mix);

// Probability the mixture assigns below zero (shifts can push mass past the
// origin); diagnostic only, nothing downstream clamps it away.
double negative_mass(const ShiftMixture& mix);

// Excess-law CDF of one user's arrival process at the cell,
// lambda * integral over (0, x] of (1 - single_user_cdf). The first form is
// the reference path through adaptive quadrature; the second integrates the
// base CDF in closed form per family and is what aggregation uses.
double user_excess_cdf(const ShiftMixture& mix, double lambda_per_s, double x);
double user_excess_cdf_exact(const ShiftMixture& mix, double lambda_per_s, double x);

// Scenario-level laws with the per-class mixtures built once.
class AggregateLaw {
 public:
    explicit AggregateLaw(const Scenario& s);

    std::size_t classes() const { return mixes_.size(); }
    const ShiftMixture& mixture(std::size_t c) const { return mixes_[c]; }
    double lambda(std::size_t c) const { return lambda_[c]; }
    int population(std::size_t c) const { return pop_[c]; }
    double total_rate() const;

    double excess_cdf(std::size_t c, double x) const;
    double excess_pdf(std::size_t c, double x) const;
    double cdf(AggregateMode mode, double x) const;
    double quantile(AggregateMode mode, double p) const;
    double max_negative_mass() const;

 private:
    struct Fast;  // sorted-shift prefix sums for O(log terms) evaluation

    std::vector<ShiftMixture> mixes_;
    std::vector<int> pop_;
    std::vector<double> lambda_;
    std::shared_ptr<const Fast> fast_;
};

double aggregate_cdf(const Scenario& s, AggregateMode mode, double x);

// Single-class shortcut: population-n power of one user's excess law.
double homogeneous_aggregate_cdf(const UserClass& cls, const CellConfig& cell,
                                 int n, AggregateMode mode, double x);

// Closed forms of the homogeneous product aggregation for exponential and
// Pareto inter-generation laws. Both integrate the shifted survival function
// termwise in exact piecewise algebra, so they are valid for all x >= 0.
double exponential_closed_form_cdf(const UserClass& cls, const CellConfig& cell,
                                   int n, double x);
double pareto_closed_form_cdf(const UserClass& cls, const CellConfig& cell,
                              int n, double x);

// Batch-size law of the merged process. win_per_user[c] is the probability
// that one given user of class c supplies the next arrival. ExactMin
// conditions on that user having the smallest excess (weights sum to 1 and
// the pmf is normalized); PaperProduct multiplies pairwise win probabilities
// as if independent and is reported exactly as computed.
struct BatchResult {
    PacketPmf pmf;
    std::vector<double> win_per_user;
    double weight_sum = 0;  // sum over classes of population * win_per_user
};
BatchResult batch_pmf(const Scenario& s, AggregateMode mode);

// P(excess of a class-i user <= excess of a class-j user).
double pairwise_win_prob(std::size_t i, std::size_t j, const Scenario& s);

// Probe for the homogeneous batch reduction, which implicitly assumes
// n * (lambda * integral of F_excess * (1 - F_mix))^(n-1) equals 1.
// Returns that factor so callers can report how far from 1 it lands.
double homogeneous_batch_factor(const ShiftMixture& mix, double lambda_per_s, int n);

struct Diagnostics {
    double negative_mass = 0;   // worst class
    bool cdf_valid = true;      // product-form CDF stayed within [0, 1+1e-9]
    double max_cdf_value = 0;   // largest product-form value on the grid
    double sum_pi_paper = 0;    // sum of product-form batch weights
};

struct AnalyticReport {
    std::vector<ShiftMixture> mixtures;  // one per class
    std::vector<double> grid_s;          // geometric, strictly increasing
    std::vector<double> cdf_paper;
    std::vector<double> cdf_exact;
    BatchResult batch_exact;
    BatchResult batch_paper;
    Diagnostics diagnostics;
};

// Full analytic pass: grid spans 1e-6 s up to the 99.99th percentile of the
// ExactMin law. Batch integrals dominate runtime; with_batch=false skips them.
AnalyticReport analyze(const Scenario& s, int grid_points = 512,
                       bool with_batch = true,
                       ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace mmtc
