#include "mmtc/presets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "mmtc/errors.hpp"
#include "mmtc/stats.hpp"

namespace mmtc {

const RateTable& builtin_rate_table() {
    static const RateTable table = [] {
        RateTable t;
        t.levels_kbps = {48,    73.6,  121.8,  192.2,  282,    378,    474.2, 712,
                         772.2, 874.8, 1063.8, 1249.6, 1448.4, 1640.6, 1778.4};
        t.rows = {
            {0, 0, 0, 0, 0, 0, 0.01, 0.05, 0.11, 0.13, 0.14, 0.18, 0.06, 0.11, 0.21},
            {0, 0, 0, 0, 0, 0.01, 0.02, 0.06, 0.13, 0.14, 0.2, 0.21, 0.07, 0.09, 0.07},
            {0.01, 0, 0, 0, 0, 0.01, 0.01, 0.02, 0.06, 0.13, 0.17, 0.18, 0.08, 0.18, 0.15},
            {0, 0, 0, 0, 0, 0.02, 0.03, 0.13, 0.06, 0.2, 0.32, 0.11, 0.01, 0.09, 0.03},
            {0, 0, 0, 0, 0, 0, 0.04, 0.07, 0.13, 0.17, 0.22, 0.2, 0.05, 0.06, 0.06},
            {0, 0, 0, 0, 0.01, 0.03, 0.11, 0.12, 0.19, 0.15, 0.15, 0.12, 0.05, 0.04, 0.03},
        };
        return t;
    }();
    return table;
}

namespace {

PacketPmf uniform_packets(int lo, int hi) {
    PacketPmf p;
    const double w = 1.0 / (hi - lo + 1);
    for (int k = lo; k <= hi; ++k) {
        p.count.push_back(k);
        p.prob.push_back(w);
    }
    return p;
}

Distance cell_range() { return Distance{Distance::Kind::Range, 0.1, 3.0}; }

void check_user_type(int user_type) {
    if (user_type < 0 || user_type > 5)
        throw InvalidParameter("user_type must be in 0..5");
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::ofstream open_csv(const std::filesystem::path& out) {
    if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
    std::ofstream f(out);
    if (!f) throw IoError("cannot write " + out.string());
    return f;
}

}  // namespace

Scenario table2_scenario(double lambda_per_s, int user_type, int n) {
    check_user_type(user_type);
    if (!(lambda_per_s > 0)) throw InvalidParameter("lambda_per_s must be positive");
    if (n < 1) throw InvalidParameter("n must be positive");
    const double mean = 1.0 / lambda_per_s;
    UserClass c;
    c.label = "type" + std::to_string(user_type + 1);
    c.population = n;
    c.inter_gen = Uniform{0.25 * mean, 1.75 * mean};
    c.lambda_per_s = lambda_per_s;
    c.packets = uniform_packets(10, 20);
    c.rates = rate_pmf(builtin_rate_table(), user_type);
    c.distance = cell_range();
    Scenario s;
    s.classes.push_back(std::move(c));
    return s;
}

Scenario table3_scenario(double lambda_nominal, int user_type, int n) {
    check_user_type(user_type);
    if (n < 1) throw InvalidParameter("n must be positive");
    double lower = 0, upper = 0;
    if (std::abs(lambda_nominal - 0.01) < 1e-12) {
        lower = 48.75;
        upper = 1e4;
    } else if (std::abs(lambda_nominal - 0.05) < 1e-12) {
        lower = 9.81;
        upper = 2e3;
    } else if (std::abs(lambda_nominal - 0.1) < 1e-12) {
        lower = 4.905;
        upper = 1e3;
    } else {
        throw InvalidParameter("table3 nominal rate must be 0.01, 0.05 or 0.1");
    }
    DistributionSpec gen = BoundedPareto{1.95, lower, upper};
    UserClass c;
    c.label = "type" + std::to_string(user_type + 1);
    c.population = n;
    c.inter_gen = gen;
    c.lambda_per_s = 1.0 / make_distribution(gen).mean();
    c.packets = uniform_packets(10, 20);
    c.rates = rate_pmf(builtin_rate_table(), user_type);
    c.distance = cell_range();
    Scenario s;
    s.classes.push_back(std::move(c));
    return s;
}

Scenario table4_scenario(int per_class) {
    if (per_class < 1) throw InvalidParameter("per_class must be positive");
    enum Family { Unif, Det, Exp };
    struct Row {
        double lambda;
        int n_lo, n_hi;
        Family family;
    };
    static const Row rows[6] = {
        {0.010, 10, 20, Unif}, {0.020, 10, 15, Det}, {0.030, 10, 25, Exp},
        {0.011, 10, 20, Det},  {0.019, 10, 15, Exp}, {0.015, 10, 15, Unif},
    };
    Scenario s;
    for (int i = 0; i < 6; ++i) {
        const Row& r = rows[i];
        UserClass c;
        c.label = "type" + std::to_string(i + 1);
        c.population = per_class;
        const double mean = 1.0 / r.lambda;
        switch (r.family) {
            case Unif: c.inter_gen = Uniform{0.0, 2.0 * mean}; break;
            case Det: c.inter_gen = Deterministic{mean}; break;
            case Exp: c.inter_gen = Exponential{r.lambda}; break;
        }
        c.lambda_per_s = r.lambda;
        c.packets = uniform_packets(r.n_lo, r.n_hi);
        c.rates = rate_pmf(builtin_rate_table(), static_cast<std::size_t>(i));
        c.distance = cell_range();
        s.classes.push_back(std::move(c));
    }
    return s;
}

Scenario fig7_scenario(const std::filesystem::path& trace_dir, std::uint64_t seed) {
    std::vector<std::filesystem::path> files;
    std::string missing;
    for (int d = 1; d <= 21; ++d) {
        char name[32];
        std::snprintf(name, sizeof(name), "device_%02d.csv", d);
        files.push_back(trace_dir / name);
        if (!std::filesystem::exists(files.back()))
            missing += (missing.empty() ? "" : ", ") + files.back().string();
    }
    if (!missing.empty()) throw IoError("missing trace files: " + missing);

    RandomStream types(seed, 0x7261636573ULL);  // independent of sim streams
    Scenario s;
    for (int d = 0; d < 21; ++d) {
        const int type = std::min(5, static_cast<int>(types.uniform01() * 6));
        UserClass c;
        char label[32];
        std::snprintf(label, sizeof(label), "device%02d_type%d", d + 1, type + 1);
        c.label = label;
        c.population = 1;
        Empirical emp{load_gap_csv(files[d])};
        const double mean = make_distribution(emp).mean();
        c.inter_gen = std::move(emp);
        c.lambda_per_s = 1.0 / mean;
        c.packets = PacketPmf{{30}, {1.0}};
        c.rates = rate_pmf(builtin_rate_table(), static_cast<std::size_t>(type));
        c.distance = cell_range();
        s.classes.push_back(std::move(c));
    }
    return s;
}

ComparisonReport compare(const std::string& id, const Scenario& s,
                         const SimConfig& cfg, bool with_batch, int grid_points,
                         ExecPolicy policy) {
    ComparisonReport rep;
    rep.id = id;

    SimResult sim = run_scenario(s, cfg, policy);
    rep.per_run = std::move(sim.per_run);
    rep.sim_mean = sim.mean;
    rep.batch_hist = std::move(sim.batch_hist);

    rep.analytic = analyze(s, grid_points, with_batch, policy);
    rep.diagnostics = rep.analytic.diagnostics;

    AggregateLaw law(s);
    rep.analytic_mean_s = 1.0 / law.total_rate();

    double hi = rep.analytic.grid_s.back();
    for (double g : sim.gaps) hi = std::max(hi, g);
    hi = hi * 1.01 + 1e-9;
    GridCdf exact_grid([&law](double x) { return law.cdf(AggregateMode::ExactMin, x); },
                       1e-9, hi);
    GridCdf paper_grid([&law](double x) { return law.cdf(AggregateMode::PaperProduct, x); },
                       1e-9, hi);
    rep.ks_exact = ks_distance(sim.gaps, [&exact_grid](double x) { return exact_grid(x); });
    rep.ks_paper = ks_distance(sim.gaps, [&paper_grid](double x) { return paper_grid(x); });
    rep.matching_mode = rep.ks_exact <= rep.ks_paper ? "exact" : "paper";

    if (with_batch) {
        rep.tv_exact = total_variation(rep.batch_hist, rep.analytic.batch_exact.pmf);
        rep.tv_paper = total_variation(rep.batch_hist, rep.analytic.batch_paper.pmf);
    }
    return rep;
}

namespace {

void write_report_files(const ComparisonReport& rep, bool with_batch,
                        const std::filesystem::path& out_dir) {
    const std::string base = (out_dir / rep.id).string();
    write_analytic_csv(rep.analytic, base + "_analytic.csv");
    SimResult stats;
    stats.per_run = rep.per_run;
    stats.mean = rep.sim_mean;
    write_run_stats_csv(stats, base + "_stats.csv");
    write_diagnostics_json(rep.diagnostics, rep.matching_mode, base + "_diagnostics.json");
    if (with_batch)
        write_batch_csv(rep.analytic.batch_exact, rep.analytic.batch_paper,
                        rep.batch_hist, base + "_batch.csv");
}

void write_summary(const std::vector<ComparisonReport>& reports,
                   const std::filesystem::path& out) {
    std::ofstream f = open_csv(out);
    f << "id,ex_seconds,ex2,ex3,cv,arrivals,analytic_mean_s,"
         "ks_exact,ks_paper,matching_mode,tv_exact,tv_paper\n";
    for (const auto& r : reports) {
        f << r.id << ',' << fmt17(r.sim_mean.ex) << ',' << fmt17(r.sim_mean.ex2)
          << ',' << fmt17(r.sim_mean.ex3) << ',' << fmt17(r.sim_mean.cv) << ','
          << r.sim_mean.arrivals << ',' << fmt17(r.analytic_mean_s) << ','
          << fmt17(r.ks_exact) << ',' << fmt17(r.ks_paper) << ','
          << r.matching_mode << ',' << fmt17(r.tv_exact) << ','
          << fmt17(r.tv_paper) << '\n';
    }
}

// One CSV per generation rate with a row per user type, the layout the
// channel-insensitivity check reads.
void write_per_rate_csv(const std::string& name, double lambda,
                        const std::vector<const ComparisonReport*>& reports,
                        const std::filesystem::path& out_dir) {
    std::ofstream f = open_csv(out_dir / (name + "_lam" + fmt_short(lambda) + ".csv"));
    f << "id,ex_seconds,ex2,ex3,cv,arrivals,analytic_mean_s,ks_exact,ks_paper,"
         "matching_mode\n";
    for (const ComparisonReport* r : reports) {
        f << r->id << ',' << fmt17(r->sim_mean.ex) << ',' << fmt17(r->sim_mean.ex2)
          << ',' << fmt17(r->sim_mean.ex3) << ',' << fmt17(r->sim_mean.cv) << ','
          << r->sim_mean.arrivals << ',' << fmt17(r->analytic_mean_s) << ','
          << fmt17(r->ks_exact) << ',' << fmt17(r->ks_paper) << ','
          << r->matching_mode << '\n';
    }
}

}  // namespace

PresetOutcome run_preset(const std::string& name, const PresetOptions& opt) {
    PresetOutcome out;
    const bool moments = name == "table2" || name == "table3";

    if (moments) {
        static const double lambdas[3] = {0.01, 0.05, 0.1};
        const bool bp = name == "table3";
        for (double lam : lambdas) {
            for (int slot = 0; slot < 3; ++slot) {
                const int type = 2 * slot + (bp ? 1 : 0);
                Scenario s = bp ? table3_scenario(lam, type) : table2_scenario(lam, type);
                SimConfig cfg;
                cfg.runs = opt.runs;
                cfg.seed = opt.seed;
                cfg.horizon_s = 18.0 / lam;
                cfg.leading_gap = true;
                const std::string id =
                    name + "_lam" + fmt_short(lam) + "_type" + std::to_string(type + 1);
                out.reports.push_back(
                    compare(id, s, cfg, false, opt.grid_points, opt.policy));
            }
        }
    } else if (name == "table4" || name == "fig7") {
        Scenario s = name == "table4" ? table4_scenario()
                                      : fig7_scenario(opt.data_dir, opt.seed);
        SimConfig cfg;
        cfg.runs = opt.runs;
        cfg.seed = opt.seed;
        cfg.horizon_s = name == "table4" ? 1000.0 : 600.0;
        cfg.start = StartMode::Stationary;
        out.reports.push_back(compare(name, s, cfg, true, opt.grid_points, opt.policy));
    } else {
        throw InvalidParameter("unknown preset: " + name);
    }

    if (!opt.out_dir.empty()) {
        for (const auto& rep : out.reports)
            write_report_files(rep, !moments, opt.out_dir);
        if (moments) {
            static const double lambdas[3] = {0.01, 0.05, 0.1};
            for (int i = 0; i < 3; ++i) {
                std::vector<const ComparisonReport*> group;
                for (int slot = 0; slot < 3; ++slot)
                    group.push_back(&out.reports[3 * i + slot]);
                write_per_rate_csv(name, lambdas[i], group, opt.out_dir);
            }
        }
        write_summary(out.reports, opt.out_dir / (name + "_summary.csv"));
    }
    return out;
}

std::vector<SweepRow> run_sweep(const Scenario& base, const SweepSpec& spec,
                                const SimConfig& cfg, ExecPolicy policy) {
    std::vector<SweepRow> rows;
    auto add_point = [&](const Scenario& s, double x) {
        SimResult r = run_scenario(s, cfg, policy);
        double rate = 0;
        for (const auto& c : s.classes) rate += c.population * c.lambda_per_s;
        rows.push_back(SweepRow{x, r.mean.ex, r.mean.cv, 1.0 / rate});
    };

    switch (spec.kind) {
        case SweepSpec::Kind::RateScale: {
            if (spec.factors.empty()) throw InvalidParameter("sweep has no factors");
            for (double f : spec.factors) {
                if (!(f > 0)) throw InvalidParameter("rate factors must be positive");
                Scenario s = base;
                double total = 0;
                for (auto& c : s.classes) {
                    c.inter_gen = scale_spec(c.inter_gen, 1.0 / f);
                    c.lambda_per_s *= f;
                    total += c.lambda_per_s;
                }
                add_point(s, total);
            }
            break;
        }
        case SweepSpec::Kind::Population: {
            if (spec.per_class_population.empty())
                throw InvalidParameter("sweep has no population points");
            for (int p : spec.per_class_population) {
                if (p < 1) throw InvalidParameter("population points must be positive");
                Scenario s = base;
                for (auto& c : s.classes) c.population = p;
                add_point(s, static_cast<double>(p) * s.classes.size());
            }
            break;
        }
        case SweepSpec::Kind::DistanceRange: {
            if (spec.ranges_km.empty())
                throw InvalidParameter("sweep has no distance ranges");
            for (auto [lo, hi] : spec.ranges_km) {
                if (!(lo > 0) || !(hi > lo))
                    throw InvalidParameter("distance ranges must satisfy 0 < lo < hi");
                Scenario s = base;
                for (auto& c : s.classes)
                    c.distance = Distance{Distance::Kind::Range, lo, hi};
                add_point(s, hi);
            }
            break;
        }
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::filesystem::path& out) {
    std::ofstream f = open_csv(out);
    f << "x,ex_seconds,cv,analytic_mean_s\n";
    for (const auto& r : rows)
        f << fmt17(r.x) << ',' << fmt17(r.ex) << ',' << fmt17(r.cv) << ','
          << fmt17(r.analytic_mean_s) << '\n';
}

}  // namespace mmtc
