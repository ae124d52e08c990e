#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mmtc/exec.hpp"
#include "mmtc/random.hpp"
#include "mmtc/scenario.hpp"

namespace mmtc {

// Synchronized starts every user's first inter-generation draw at t=0.
// Stationary draws the first event as the forward recurrence time of an
// equilibrium renewal process, removing the initialization transient.
enum class StartMode { Synchronized, Stationary };

// Exactly one of horizon_s / generations selects the run length: a fixed
// observation window with arrivals truncated to it, or a fixed number of
// generations per user with every arrival kept.
struct SimConfig {
    int runs = 100;
    double horizon_s = 0;
    int generations = 0;
    double warmup_s = 0;  // arrivals at or before this instant are discarded
    std::uint64_t seed = 0;
    StartMode start = StartMode::Synchronized;
    bool leading_gap = false;  // count window start to first arrival as a gap
};

struct ArrivalStream {
    std::vector<double> t_s;  // nondecreasing
    std::vector<int> batch;
    std::vector<int> user;
};

struct RunStats {
    double ex = 0;
    double ex2 = 0;
    double ex3 = 0;
    double cv = 0;
    long long arrivals = 0;
};

struct SimResult {
    std::vector<RunStats> per_run;
    RunStats mean;                        // across-run average per metric
    std::vector<double> gaps;             // pooled in run order
    std::map<int, long long> batch_hist;  // pooled
};

// One user's arrivals over a fixed horizon from a synchronized start,
// sorted by time. For Range classes the distance is the first draw taken
// from the stream.
ArrivalStream simulate_user(const UserClass& cls, int user_index,
                            const CellConfig& cell, int n, double horizon_s,
                            RandomStream& stream);

// Signed gaps between consecutive arrivals of one user in generation order.
// Negative values appear when a generation overtakes its predecessor on the
// air interface; the propagation delay cancels and is omitted.
std::vector<double> single_user_arrival_gaps(const UserClass& cls,
                                             const CellConfig& cell, int n,
                                             long count, RandomStream& stream);

// Globally sorted merge; ties are ordered by user id, and within one user by
// generation order.
ArrivalStream merge_streams(const std::vector<ArrivalStream>& streams);

// Runs the full scenario cfg.runs times. Distances are drawn once from
// sequence 0 of the seed and shared by every run; run r gives user u the
// stream (seed, 1 + r*n + u), so results do not depend on thread count.
SimResult run_scenario(const Scenario& s, const SimConfig& cfg,
                       ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace mmtc
