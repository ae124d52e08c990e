#include "mmtc/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "mmtc/errors.hpp"

namespace mmtc {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream f(p);
    if (!f) throw IoError("cannot open for writing: " + p.string());
    return f;
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
    std::ifstream f(p);
    if (!f) throw IoError("cannot open: " + p.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::vector<double> split_numbers(const std::string& line,
                                  const std::filesystem::path& src) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            out.push_back(std::stod(cell));
        } catch (...) {
            throw IoError("non-numeric cell '" + cell + "' in " + src.string());
        }
    }
    return out;
}

DistributionSpec parse_inter_gen(const json& jg,
                                 const std::filesystem::path& base_dir) {
    const std::string fam = jg.at("family").get<std::string>();
    const json& p = jg.at("params");
    if (fam == "deterministic") return Deterministic{p.at("period").get<double>()};
    if (fam == "uniform")
        return Uniform{p.at("a").get<double>(), p.at("b").get<double>()};
    if (fam == "exponential") return Exponential{p.at("rate").get<double>()};
    if (fam == "pareto")
        return Pareto{p.at("alpha").get<double>(), p.at("scale").get<double>()};
    if (fam == "bounded_pareto")
        return BoundedPareto{p.at("alpha").get<double>(), p.at("lower").get<double>(),
                             p.at("upper").get<double>()};
    if (fam == "empirical")
        return Empirical{
            load_gap_csv(base_dir / p.at("csv_ref").get<std::string>())};
    throw IoError("unknown inter_gen family: " + fam);
}

UserClass parse_class(const json& jc, const std::filesystem::path& base_dir) {
    UserClass c;
    c.label = jc.value("label", std::string{});
    c.population = jc.at("population").get<int>();
    c.lambda_per_s = jc.at("lambda_per_s").get<double>();
    c.inter_gen = parse_inter_gen(jc.at("inter_gen"), base_dir);

    const json& jp = jc.at("packets");
    c.packets.count = jp.at("values").get<std::vector<int>>();
    c.packets.prob = jp.at("probs").get<std::vector<double>>();

    const json& jr = jc.at("rates");
    if (jr.contains("csv_ref")) {
        RateTable t = load_rate_table(base_dir / jr.at("csv_ref").get<std::string>());
        c.rates = rate_pmf(t, jr.at("row").get<std::size_t>());
    } else {
        c.rates.rate_kbps = jr.at("levels").get<std::vector<double>>();
        c.rates.prob = jr.at("probs").get<std::vector<double>>();
    }

    const json& jd = jc.at("distance");
    if (jd.contains("fixed_km")) {
        c.distance.kind = Distance::Kind::Fixed;
        c.distance.lo_km = c.distance.hi_km = jd.at("fixed_km").get<double>();
    } else {
        auto r = jd.at("range_km").get<std::vector<double>>();
        if (r.size() != 2) throw IoError("distance.range_km must be [lo, hi]");
        c.distance.kind = Distance::Kind::Range;
        c.distance.lo_km = r[0];
        c.distance.hi_km = r[1];
    }
    return c;
}

}  // namespace

RateTable load_rate_table(const std::filesystem::path& csv) {
    RateTable t;
    for (const std::string& line : read_lines(csv)) {
        if (line.empty()) continue;
        auto row = split_numbers(line, csv);
        if (t.levels_kbps.empty())
            t.levels_kbps = std::move(row);
        else if (row.size() == t.levels_kbps.size())
            t.rows.push_back(std::move(row));
        else
            throw IoError("rate table row width mismatch in " + csv.string());
    }
    if (t.levels_kbps.empty() || t.rows.empty())
        throw IoError("rate table has no data: " + csv.string());
    return t;
}

RatePmf rate_pmf(const RateTable& table, std::size_t row) {
    if (row >= table.rows.size())
        throw IoError("rate table row out of range");
    // Drop zero-probability levels so downstream enumerations stay small.
    RatePmf p;
    for (std::size_t i = 0; i < table.levels_kbps.size(); ++i) {
        if (table.rows[row][i] > 0) {
            p.rate_kbps.push_back(table.levels_kbps[i]);
            p.prob.push_back(table.rows[row][i]);
        }
    }
    return p;
}

std::vector<double> load_gap_csv(const std::filesystem::path& csv) {
    auto lines = read_lines(csv);
    if (lines.empty() || lines.front() != "dt_seconds")
        throw IoError("expected header dt_seconds in " + csv.string());
    std::vector<double> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        try {
            out.push_back(std::stod(lines[i]));
        } catch (...) {
            throw IoError("non-numeric value '" + lines[i] + "' in " + csv.string());
        }
    }
    return out;
}

Scenario load_scenario(const std::filesystem::path& json_file) {
    std::ifstream f(json_file);
    if (!f) throw IoError("cannot open: " + json_file.string());
    json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw IoError("bad JSON in " + json_file.string() + ": " + e.what());
    }
    const std::filesystem::path base_dir = json_file.parent_path();
    try {
        Scenario s;
        if (j.contains("cell")) {
            const json& jc = j.at("cell");
            s.cell.blocks = jc.value("K", s.cell.blocks);
            s.cell.theta_kbits = jc.value("theta_kbits", s.cell.theta_kbits);
            s.cell.frame_s = jc.value("frame_s", s.cell.frame_s);
            s.cell.c_km_s = jc.value("c_km_s", s.cell.c_km_s);
        }
        for (const json& jc : j.at("classes")) s.classes.push_back(parse_class(jc, base_dir));
        return s;
    } catch (const json::exception& e) {
        throw IoError("bad scenario in " + json_file.string() + ": " + e.what());
    }
}

void write_analytic_csv(const AnalyticReport& r, const std::filesystem::path& out) {
    std::ofstream f = open_out(out);
    f << "x_seconds,cdf_paper,cdf_exact\n";
    for (std::size_t i = 0; i < r.grid_s.size(); ++i)
        f << fmt(r.grid_s[i]) << ',' << fmt(r.cdf_paper[i]) << ','
          << fmt(r.cdf_exact[i]) << '\n';
}

void write_diagnostics_json(const Diagnostics& d, const std::string& matching_mode,
                            const std::filesystem::path& out) {
    json j;
    j["negative_mass"] = d.negative_mass;
    j["cdf_valid"] = d.cdf_valid;
    j["max_cdf_value"] = d.max_cdf_value;
    j["sum_pi_paper"] = d.sum_pi_paper;
    j["matching_mode"] = matching_mode;
    std::ofstream f = open_out(out);
    f << j.dump(2) << '\n';
}

void write_run_stats_csv(const SimResult& r, const std::filesystem::path& out) {
    std::ofstream f = open_out(out);
    f << "run,ex_seconds,ex2,ex3,cv,arrivals\n";
    for (std::size_t i = 0; i < r.per_run.size(); ++i) {
        const RunStats& st = r.per_run[i];
        f << i << ',' << fmt(st.ex) << ',' << fmt(st.ex2) << ',' << fmt(st.ex3)
          << ',' << fmt(st.cv) << ',' << st.arrivals << '\n';
    }
    f << "mean," << fmt(r.mean.ex) << ',' << fmt(r.mean.ex2) << ','
      << fmt(r.mean.ex3) << ',' << fmt(r.mean.cv) << ',' << r.mean.arrivals
      << '\n';
}

void write_gaps_csv(const std::vector<double>& gaps, const std::filesystem::path& out) {
    std::ofstream f = open_out(out);
    f << "dt_seconds\n";
    for (double g : gaps) f << fmt(g) << '\n';
}

void write_batch_csv(const BatchResult& exact, const BatchResult& paper,
                     const std::map<int, long long>& sim_hist,
                     const std::filesystem::path& out) {
    long long total = 0;
    for (const auto& [k, c] : sim_hist) total += c;

    std::set<int> sizes;
    for (int k : exact.pmf.count) sizes.insert(k);
    for (int k : paper.pmf.count) sizes.insert(k);
    for (const auto& [k, c] : sim_hist) sizes.insert(k);

    auto lookup = [](const PacketPmf& p, int k) {
        for (std::size_t i = 0; i < p.count.size(); ++i)
            if (p.count[i] == k) return p.prob[i];
        return 0.0;
    };

    std::ofstream f = open_out(out);
    f << "batch_size,pmf_exact,pmf_paper,sim_freq\n";
    for (int k : sizes) {
        double sim = 0;
        if (auto it = sim_hist.find(k); it != sim_hist.end() && total > 0)
            sim = static_cast<double>(it->second) / static_cast<double>(total);
        f << k << ',' << fmt(lookup(exact.pmf, k)) << ',' << fmt(lookup(paper.pmf, k))
          << ',' << fmt(sim) << '\n';
    }
}

}  // namespace mmtc
