#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mmtc/analytic.hpp"
#include "mmtc/errors.hpp"
#include "mmtc/io.hpp"
#include "mmtc/random.hpp"
#include "mmtc/stats.hpp"

using namespace mmtc;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    fs::path p = fs::temp_directory_path() / "mmtc_io_test";
    fs::create_directories(p);
    return p;
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(f, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("sample moments") {
    Moments m = moments({1.0, 3.0});
    CHECK(m.ex == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(m.ex2 == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(m.ex3 == doctest::Approx(14.0).epsilon(1e-15));
    CHECK(m.cv == doctest::Approx(0.5).epsilon(1e-12));

    Moments c = moments({4.0, 4.0, 4.0});
    CHECK(c.cv == 0.0);

    CHECK_THROWS_AS(moments({1.0}), InsufficientData);
    CHECK_THROWS_AS(moments({0.0, 0.0}), InsufficientData);

    RandomStream rs(2);
    std::vector<double> ex(100000);
    for (auto& x : ex) x = -std::log(1.0 - rs.uniform01()) * 7.0;
    Moments em = moments(ex);
    CHECK(em.cv == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("ks distance") {
    SUBCASE("single sample against a half-crossing cdf") {
        double d = ks_distance({2.0}, [](double) { return 0.5; });
        CHECK(d == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("any sample against a flat zero function") {
        double d = ks_distance({1.0, 2.0, 3.0}, [](double) { return 0.0; });
        CHECK(d == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("two samples against a linear cdf, both step sides checked") {
        double d = ks_distance({1.0, 2.0}, [](double x) { return x / 3.0; });
        CHECK(d == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("consistency at scale") {
        RandomStream rs(5);
        std::vector<double> xs(100000);
        for (auto& x : xs) x = rs.uniform01() * rs.uniform01();
        auto cdf = [](double x) {
            if (x <= 0) return 0.0;
            if (x >= 1) return 1.0;
            return x * (1.0 - std::log(x));  // product of two uniforms
        };
        CHECK(ks_distance(xs, cdf) < 0.01);
    }
    SUBCASE("atoms need the two-sided read") {
        std::vector<double> xs(50, 100.0);
        auto step = [](double x) { return x < 100.0 ? 0.0 : 1.0; };
        CHECK(ks_distance(xs, step, 1e-9) == doctest::Approx(0.0).scale(1.0));
        CHECK(ks_distance(xs, step) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("empty sample") {
        CHECK_THROWS_AS(ks_distance({}, [](double) { return 0.5; }), InsufficientData);
    }
}

TEST_CASE("grid cdf snapshot tracks the law between knots") {
    auto cdf = [](double x) { return x <= 0 ? 0.0 : 1.0 - std::exp(-x); };
    GridCdf g(cdf, 1e-6, 25.0, 4096);
    RandomStream rs(8);
    for (int i = 0; i < 500; ++i) {
        double x = std::exp(rs.uniform(-13.0, 3.2));
        CHECK(g(x) == doctest::Approx(cdf(x)).epsilon(1e-3).scale(1e-4));
    }
    CHECK(g(1e-9) == doctest::Approx(0.0).scale(1.0).epsilon(1e-5));
    CHECK(g(100.0) == doctest::Approx(cdf(25.0)).epsilon(1e-9));
}

TEST_CASE("total variation between histogram and pmf") {
    std::map<int, long long> hist{{1, 50}, {3, 50}};
    PacketPmf pmf{{1, 3}, {2.0 / 3.0, 1.0 / 3.0}};
    CHECK(total_variation(hist, pmf) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));

    PacketPmf same{{1, 3}, {0.5, 0.5}};
    CHECK(total_variation(hist, same) == doctest::Approx(0.0).scale(1.0));

    // disjoint supports are maximally far apart
    PacketPmf other{{7}, {1.0}};
    CHECK(total_variation(hist, other) == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(total_variation({}, pmf), InsufficientData);
}

TEST_CASE("gap csv round trip preserves every bit") {
    fs::path p = temp_dir() / "gaps.csv";
    std::vector<double> gaps{1.0 / 3.0, 2.5e-9, 123456.75, 0.1};
    write_gaps_csv(gaps, p);
    std::vector<double> back = load_gap_csv(p);
    REQUIRE(back.size() == gaps.size());
    for (size_t i = 0; i < gaps.size(); ++i) CHECK(back[i] == gaps[i]);

    CHECK_THROWS_AS(load_gap_csv(temp_dir() / "missing.csv"), IoError);

    fs::path bad = temp_dir() / "bad.csv";
    std::ofstream(bad) << "wrong_header\n1.0\n";
    CHECK_THROWS_AS(load_gap_csv(bad), IoError);

    fs::path junk = temp_dir() / "junk.csv";
    std::ofstream(junk) << "dt_seconds\nnot_a_number\n";
    CHECK_THROWS_AS(load_gap_csv(junk), IoError);
}

TEST_CASE("analytic csv layout") {
    UserClass c;
    c.label = "u";
    c.population = 2;
    c.inter_gen = Exponential{0.01};
    c.lambda_per_s = 0.01;
    c.packets = {{1}, {1.0}};
    c.rates = {{1000.0}, {1.0}};
    c.distance = {Distance::Kind::Fixed, 1.0, 1.0};
    Scenario s;
    s.classes = {c};

    AnalyticReport r = analyze(s, 64);
    fs::path p = temp_dir() / "analytic.csv";
    write_analytic_csv(r, p);
    auto lines = read_lines(p);
    REQUIRE(lines.size() == 65);
    CHECK(lines[0] == "x_seconds,cdf_paper,cdf_exact");
    // columns parse back to the report values
    for (size_t i = 1; i < lines.size(); ++i) {
        std::istringstream is(lines[i]);
        std::string x, paper, exact;
        REQUIRE(std::getline(is, x, ','));
        REQUIRE(std::getline(is, paper, ','));
        REQUIRE(std::getline(is, exact, ','));
        CHECK(std::stod(x) == r.grid_s[i - 1]);
        CHECK(std::stod(paper) == r.cdf_paper[i - 1]);
        CHECK(std::stod(exact) == r.cdf_exact[i - 1]);
    }

    fs::path d = temp_dir() / "diag.json";
    write_diagnostics_json(r.diagnostics, "exact", d);
    std::ifstream jf(d);
    nlohmann::json j;
    jf >> j;
    CHECK(j.at("negative_mass").get<double>() == r.diagnostics.negative_mass);
    CHECK(j.at("cdf_valid").get<bool>() == r.diagnostics.cdf_valid);
    CHECK(j.at("max_cdf_value").get<double>() == r.diagnostics.max_cdf_value);
    CHECK(j.at("sum_pi_paper").get<double>() == r.diagnostics.sum_pi_paper);
    CHECK(j.at("matching_mode").get<std::string>() == "exact");

    fs::path b = temp_dir() / "batch.csv";
    std::map<int, long long> hist{{1, 10}};
    write_batch_csv(r.batch_exact, r.batch_paper, hist, b);
    auto blines = read_lines(b);
    CHECK(blines[0] == "batch_size,pmf_exact,pmf_paper,sim_freq");
    REQUIRE(blines.size() == 2);
    CHECK(blines[1].substr(0, 2) == "1,");
}

TEST_CASE("run stats csv has one row per run plus the mean") {
    Scenario s;
    UserClass c;
    c.label = "u";
    c.population = 5;
    c.inter_gen = Exponential{0.1};
    c.lambda_per_s = 0.1;
    c.packets = {{2}, {1.0}};
    c.rates = {{1000.0}, {1.0}};
    c.distance = {Distance::Kind::Fixed, 1.0, 1.0};
    s.classes = {c};

    SimConfig cfg;
    cfg.runs = 4;
    cfg.horizon_s = 200;
    cfg.seed = 5;
    SimResult r = run_scenario(s, cfg);
    fs::path p = temp_dir() / "runs.csv";
    write_run_stats_csv(r, p);
    auto lines = read_lines(p);
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "run,ex_seconds,ex2,ex3,cv,arrivals");
    CHECK(lines[1].substr(0, 2) == "0,");
    CHECK(lines[5].substr(0, 5) == "mean,");
}

TEST_CASE("rate table loading errors") {
    CHECK_THROWS_AS(load_rate_table(temp_dir() / "nope.csv"), IoError);
    fs::path p = temp_dir() / "short.csv";
    std::ofstream(p) << "100,200\n";
    CHECK_THROWS_AS(load_rate_table(p), IoError);  // needs at least one pmf row

    fs::path ragged = temp_dir() / "ragged.csv";
    std::ofstream(ragged) << "100,200\n0.5,0.25,0.25\n";
    CHECK_THROWS_AS(load_rate_table(ragged), IoError);
}
