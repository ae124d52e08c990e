#include "mmtc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <numeric>

#include "mmtc/errors.hpp"

namespace mmtc {

namespace {

struct ClassRuntime {
    const UserClass* cls;
    Distribution base;
    std::vector<double> packet_cumul;
    std::vector<double> rate_cumul;
};

std::vector<double> cumulative(const std::vector<double>& p) {
    std::vector<double> c(p.size());
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += p[i];
        c[i] = s;
    }
    return c;
}

std::size_t pick(const std::vector<double>& cumul, double u) {
    std::size_t i = std::upper_bound(cumul.begin(), cumul.end(), u) - cumul.begin();
    return i < cumul.size() ? i : cumul.size() - 1;
}

ClassRuntime make_runtime(const UserClass& cls) {
    if (cls.packets.count.empty() ||
        cls.packets.count.size() != cls.packets.prob.size())
        throw InvalidParameter("simulate: malformed packet pmf");
    if (cls.rates.rate_kbps.empty() ||
        cls.rates.rate_kbps.size() != cls.rates.prob.size())
        throw InvalidParameter("simulate: malformed rate pmf");
    return ClassRuntime{&cls, make_distribution(cls.inter_gen),
                        cumulative(cls.packets.prob), cumulative(cls.rates.prob)};
}

double class_distance_km(const Distance& d, RandomStream& stream) {
    return d.kind == Distance::Kind::Range ? stream.uniform(d.lo_km, d.hi_km)
                                           : d.lo_km;
}

// Appends one user's arrivals. Draw order per generation is fixed as
// (dt, packet count, rate) so that classes differing only in their pmfs see
// common random numbers from identical streams. In fixed-horizon mode the
// pmf draws still happen for generations whose arrival lands past the
// horizon, which keeps that alignment intact.
void generate_user(const ClassRuntime& rt, const CellConfig& cell, int n,
                   double horizon_s, int generations, StartMode start,
                   double tprop_s, int user_index, RandomStream& stream,
                   ArrivalStream& out) {
    const double unit = static_cast<double>(n) * cell.theta_kbits / cell.blocks;
    double t = 0;
    for (int g = 0; generations > 0 ? g < generations : true; ++g) {
        double dt;
        if (g == 0 && start == StartMode::Stationary)
            dt = rt.base.length_biased_sample(stream) * stream.uniform01();
        else
            dt = rt.base.sample(stream);
        t += dt;
        if (generations <= 0 && t > horizon_s) break;
        const int np = rt.cls->packets.count[pick(rt.packet_cumul, stream.uniform01())];
        const double r = rt.cls->rates.rate_kbps[pick(rt.rate_cumul, stream.uniform01())];
        const double arrival = t + unit * np / r + tprop_s;
        if (generations <= 0 && arrival > horizon_s) continue;
        out.t_s.push_back(arrival);
        out.batch.push_back(np);
        out.user.push_back(user_index);
    }
}

void sort_stream(ArrivalStream& s) {
    std::vector<std::size_t> idx(s.t_s.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&s](std::size_t a, std::size_t b) {
        if (s.t_s[a] != s.t_s[b]) return s.t_s[a] < s.t_s[b];
        return s.user[a] < s.user[b];
    });
    ArrivalStream sorted;
    sorted.t_s.reserve(idx.size());
    sorted.batch.reserve(idx.size());
    sorted.user.reserve(idx.size());
    for (std::size_t i : idx) {
        sorted.t_s.push_back(s.t_s[i]);
        sorted.batch.push_back(s.batch[i]);
        sorted.user.push_back(s.user[i]);
    }
    s = std::move(sorted);
}

void fill_moments(const std::vector<double>& gaps, RunStats& st) {
    double s1 = 0, s2 = 0, s3 = 0;
    for (double g : gaps) {
        s1 += g;
        s2 += g * g;
        s3 += g * g * g;
    }
    const double m = static_cast<double>(gaps.size());
    st.ex = s1 / m;
    st.ex2 = s2 / m;
    st.ex3 = s3 / m;
    const double var = st.ex2 - st.ex * st.ex;
    st.cv = st.ex > 0 ? std::sqrt(std::max(var, 0.0)) / st.ex : 0.0;
}

}  // namespace

ArrivalStream simulate_user(const UserClass& cls, int user_index,
                            const CellConfig& cell, int n, double horizon_s,
                            RandomStream& stream) {
    if (n < 1) throw InvalidParameter("simulate_user: n must be >= 1");
    if (!(horizon_s >= 0))
        throw InvalidParameter("simulate_user: horizon must be >= 0");
    const ClassRuntime rt = make_runtime(cls);
    const double d = class_distance_km(cls.distance, stream);
    ArrivalStream out;
    generate_user(rt, cell, n, horizon_s, 0, StartMode::Synchronized,
                  propagation_delay(d, cell.c_km_s), user_index, stream, out);
    sort_stream(out);
    return out;
}

std::vector<double> single_user_arrival_gaps(const UserClass& cls,
                                             const CellConfig& cell, int n,
                                             long count, RandomStream& stream) {
    if (count < 1) throw InvalidParameter("single_user_arrival_gaps: count must be >= 1");
    const ClassRuntime rt = make_runtime(cls);
    const double unit = static_cast<double>(n) * cell.theta_kbits / cell.blocks;
    std::vector<double> gaps;
    gaps.reserve(count);
    double t = 0;
    double prev = 0;
    for (long g = 0; g <= count; ++g) {
        t += rt.base.sample(stream);
        const int np = rt.cls->packets.count[pick(rt.packet_cumul, stream.uniform01())];
        const double r = rt.cls->rates.rate_kbps[pick(rt.rate_cumul, stream.uniform01())];
        const double arrival = t + unit * np / r;
        if (g > 0) gaps.push_back(arrival - prev);
        prev = arrival;
    }
    return gaps;
}

ArrivalStream merge_streams(const std::vector<ArrivalStream>& streams) {
    ArrivalStream all;
    std::size_t total = 0;
    for (const auto& s : streams) total += s.t_s.size();
    all.t_s.reserve(total);
    all.batch.reserve(total);
    all.user.reserve(total);
    for (const auto& s : streams) {
        all.t_s.insert(all.t_s.end(), s.t_s.begin(), s.t_s.end());
        all.batch.insert(all.batch.end(), s.batch.begin(), s.batch.end());
        all.user.insert(all.user.end(), s.user.begin(), s.user.end());
    }
    sort_stream(all);
    return all;
}

SimResult run_scenario(const Scenario& s, const SimConfig& cfg, ExecPolicy policy) {
    if (cfg.runs < 1) throw InvalidParameter("run_scenario: runs must be >= 1");
    const bool fixed_count = cfg.generations > 0;
    if (!fixed_count) {
        if (!(cfg.horizon_s > 0))
            throw InvalidParameter("run_scenario: set horizon_s or generations");
        if (cfg.warmup_s < 0 || !(cfg.horizon_s > cfg.warmup_s))
            throw InvalidParameter("run_scenario: need horizon > warmup >= 0");
    } else if (cfg.warmup_s < 0) {
        throw InvalidParameter("run_scenario: warmup must be >= 0");
    }
    if (s.classes.empty())
        throw InvalidParameter("run_scenario: scenario has no user classes");

    const int n = s.total_users();
    std::vector<ClassRuntime> rts;
    rts.reserve(s.classes.size());
    for (const auto& c : s.classes) rts.push_back(make_runtime(c));

    std::vector<int> user_class;
    user_class.reserve(n);
    for (std::size_t c = 0; c < s.classes.size(); ++c)
        for (int k = 0; k < s.classes[c].population; ++k)
            user_class.push_back(static_cast<int>(c));

    // Positions are part of the scenario instance, not of a run: one draw
    // per user, shared across runs.
    std::vector<double> tprop(n);
    {
        RandomStream dstream(cfg.seed, 0);
        for (int u = 0; u < n; ++u)
            tprop[u] = propagation_delay(
                class_distance_km(s.classes[user_class[u]].distance, dstream),
                s.cell.c_km_s);
    }

    SimResult out;
    out.per_run.resize(cfg.runs);
    std::vector<std::vector<double>> run_gaps(cfg.runs);
    std::vector<std::map<int, long long>> run_hist(cfg.runs);
    std::exception_ptr err = nullptr;

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads()) \
    if (policy == ExecPolicy::Parallel)
#endif
    for (int r = 0; r < cfg.runs; ++r) {
        try {
            ArrivalStream merged;
            for (int u = 0; u < n; ++u) {
                RandomStream us(cfg.seed,
                                1ull + static_cast<std::uint64_t>(r) * n + u);
                generate_user(rts[user_class[u]], s.cell, n, cfg.horizon_s,
                              cfg.generations, cfg.start, tprop[u], u, us, merged);
            }
            sort_stream(merged);

            const std::size_t b =
                std::upper_bound(merged.t_s.begin(), merged.t_s.end(), cfg.warmup_s) -
                merged.t_s.begin();
            const long long kept = static_cast<long long>(merged.t_s.size() - b);
            if (kept < 2)
                throw InsufficientData(
                    "run_scenario: a run produced fewer than 2 arrivals after warmup");

            std::vector<double>& gaps = run_gaps[r];
            gaps.reserve(merged.t_s.size() - b + 1);
            if (cfg.leading_gap) gaps.push_back(merged.t_s[b] - cfg.warmup_s);
            for (std::size_t i = b + 1; i < merged.t_s.size(); ++i)
                gaps.push_back(merged.t_s[i] - merged.t_s[i - 1]);

            auto& hist = run_hist[r];
            for (std::size_t i = b; i < merged.t_s.size(); ++i)
                ++hist[merged.batch[i]];

            RunStats& st = out.per_run[r];
            fill_moments(gaps, st);
            st.arrivals = kept;
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                if (!err) err = std::current_exception();
            }
        }
    }
    (void)policy;
    if (err) std::rethrow_exception(err);

    std::size_t total_gaps = 0;
    long long total_arrivals = 0;
    for (int r = 0; r < cfg.runs; ++r) {
        const RunStats& st = out.per_run[r];
        out.mean.ex += st.ex;
        out.mean.ex2 += st.ex2;
        out.mean.ex3 += st.ex3;
        out.mean.cv += st.cv;
        total_arrivals += st.arrivals;
        total_gaps += run_gaps[r].size();
    }
    out.mean.ex /= cfg.runs;
    out.mean.ex2 /= cfg.runs;
    out.mean.ex3 /= cfg.runs;
    out.mean.cv /= cfg.runs;
    out.mean.arrivals = (total_arrivals + cfg.runs / 2) / cfg.runs;

    out.gaps.reserve(total_gaps);
    for (int r = 0; r < cfg.runs; ++r) {
        out.gaps.insert(out.gaps.end(), run_gaps[r].begin(), run_gaps[r].end());
        for (const auto& [bsz, cnt] : run_hist[r]) out.batch_hist[bsz] += cnt;
    }
    return out;
}

}  // namespace mmtc
