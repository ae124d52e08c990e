#include <chrono>
#include <cstdio>
#include <cstring>

#include "mmtc/analytic.hpp"
#include "mmtc/exec.hpp"
#include "mmtc/presets.hpp"
#include "mmtc/simulate.hpp"

using namespace mmtc;

namespace {

template <typename F>
double time_s(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", max_threads());

    const Scenario s = table2_scenario(0.05, 0, 1500);
    SimConfig cfg;
    cfg.runs = 40;
    cfg.seed = 7;
    cfg.horizon_s = 18.0 / 0.05;
    cfg.leading_gap = true;

    SimResult sim_serial, sim_parallel;
    const double t_sim_serial =
        time_s([&] { sim_serial = run_scenario(s, cfg, ExecPolicy::Serial); });
    const double t_sim_parallel =
        time_s([&] { sim_parallel = run_scenario(s, cfg, ExecPolicy::Parallel); });
    const bool sim_same = same_bits(sim_serial.gaps, sim_parallel.gaps) &&
                          sim_serial.batch_hist == sim_parallel.batch_hist;
    std::printf("simulate %d runs      serial %7.3f s   parallel %7.3f s   x%.2f   %s\n",
                cfg.runs, t_sim_serial, t_sim_parallel, t_sim_serial / t_sim_parallel,
                sim_same ? "bitwise equal" : "MISMATCH");

    AnalyticReport an_serial, an_parallel;
    const double t_an_serial =
        time_s([&] { an_serial = analyze(s, 512, false, ExecPolicy::Serial); });
    const double t_an_parallel =
        time_s([&] { an_parallel = analyze(s, 512, false, ExecPolicy::Parallel); });
    const bool an_same = same_bits(an_serial.cdf_exact, an_parallel.cdf_exact) &&
                         same_bits(an_serial.cdf_paper, an_parallel.cdf_paper);
    std::printf("analyze 512-pt grid   serial %7.3f s   parallel %7.3f s   x%.2f   %s\n",
                t_an_serial, t_an_parallel, t_an_serial / t_an_parallel,
                an_same ? "bitwise equal" : "MISMATCH");

    return sim_same && an_same ? 0 : 1;
}
