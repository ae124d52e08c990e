#pragma once

#include <string>
#include <vector>

#include "mmtc/distributions.hpp"

namespace mmtc {

// Cell-wide radio configuration. Rates are in kbps, payload in kbits, so
// transmission delays come out in seconds.
struct CellConfig {
    int blocks = 275;           // K, physical resource blocks
    double theta_kbits = 5.0;   // payload per packet
    double frame_s = 0.010;
    double c_km_s = 300000.0;   // signal speed
};

// Discrete per-block rate law (one row of the rate table).
struct RatePmf {
    std::vector<double> rate_kbps;  // strictly increasing
    std::vector<double> prob;
};

// Discrete batch-size law.
struct PacketPmf {
    std::vector<int> count;
    std::vector<double> prob;
};

struct Distance {
    enum class Kind { Fixed, Range };
    Kind kind = Kind::Fixed;
    double lo_km = 1.0;
    double hi_km = 1.0;  // == lo_km when Fixed
};

struct UserClass {
    std::string label;
    int population = 1;
    DistributionSpec inter_gen;
    double lambda_per_s = 0;  // must equal 1/mean(inter_gen)
    PacketPmf packets;
    RatePmf rates;
    Distance distance;
};

struct Scenario {
    CellConfig cell;
    std::vector<UserClass> classes;

    int total_users() const;
};

// One weighted shift of the base law; the single-user inter-arrival pdf is
// sum over terms of weight * base_pdf(x - shift).
struct ShiftTerm {
    double shift_s = 0;
    double weight = 0;
};

struct ShiftMixture {
    Distribution base;
    std::vector<ShiftTerm> terms;  // sorted by shift, symmetric about 0
};

// Returns one finding per violated invariant, empty when the scenario is
// well formed. Findings are data, not errors.
std::vector<std::string> validate_scenario(const Scenario& s);

// Per-user share of the cell rate under the equal-share policy, K*r/n.
double equal_share_rate(const CellConfig& cell, int n, double rate_kbps);

double propagation_delay(double d_km, double c_km_s);

// Enumerates the packet-count/rate tuples of two consecutive generations and
// collapses them into the signed shift set of the single-user inter-arrival
// mixture. Shifts closer than merge_tol seconds are merged; the construction
// emits +s and -s with identical weights, so the mixture is symmetric by
// construction rather than up to rounding.
ShiftMixture shift_set(const UserClass& cls, const CellConfig& cell, int n,
                       double merge_tol = 1e-12);

}  // namespace mmtc
