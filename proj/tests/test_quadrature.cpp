#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mmtc/errors.hpp"
#include "mmtc/quadrature.hpp"

using namespace mmtc;

TEST_CASE("polynomials and smooth integrands") {
    auto sq = [](double x) { return x * x; };
    QuadResult r = integrate(sq, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(r.evals > 0);

    r = integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));

    r = integrate([](double x) { return std::exp(-x); }, 0.0, 30.0);
    CHECK(r.value == doctest::Approx(1.0 - std::exp(-30.0)).epsilon(1e-10));
}

TEST_CASE("degenerate interval") {
    auto f = [](double x) { return x; };
    CHECK(integrate(f, 2.0, 2.0).value == 0.0);
}

TEST_CASE("step discontinuity") {
    auto step = [](double x) { return x < 1.0 ? 0.0 : 1.0; };

    SUBCASE("with breakpoint hint") {
        QuadResult r = integrate(step, 0.0, 2.0, {1.0});
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("unhinted step still converges") {
        QuadResult r = integrate(step, 0.0, 2.0);
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-7));
    }
    SUBCASE("breakpoints outside the interval are ignored") {
        QuadResult r = integrate(step, 0.0, 2.0, {-3.0, 1.0, 7.0});
        CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("kink integrand") {
    auto f = [](double x) { return std::abs(x - 0.3); };
    QuadResult r = integrate(f, 0.0, 1.0, {0.3});
    CHECK(r.value == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-12));
}

TEST_CASE("tail integrals") {
    QuadResult r = integrate_tail([](double x) { return std::exp(-x); }, 0.0);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));

    r = integrate_tail([](double x) { return std::exp(-x); }, 5.0);
    CHECK(r.value == doctest::Approx(std::exp(-5.0)).epsilon(1e-9));

    r = integrate_tail([](double x) { return 1.0 / (x * x); }, 1.0);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));

    // heavy algebraic tail: a full density over its support
    const double a = 1.95, s = 48.75;
    auto pdf = [a, s](double x) { return a * std::pow(s, a) * std::pow(x, -a - 1.0); };
    r = integrate_tail(pdf, s);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));

    // breakpoints beyond the start are honored
    auto stepped = [](double x) { return (x < 2.0 ? 2.0 : 0.5) * std::exp(-x); };
    r = integrate_tail(stepped, 0.0, {2.0});
    double want = 2.0 * (1.0 - std::exp(-2.0)) + 0.5 * std::exp(-2.0);
    CHECK(r.value == doctest::Approx(want).epsilon(1e-9));
}

TEST_CASE("reported error bound is honest on smooth problems") {
    auto f = [](double x) { return std::cos(3.0 * x); };
    QuadResult r = integrate(f, 0.0, 2.0);
    CHECK(std::abs(r.value - std::sin(6.0) / 3.0) <= std::max(r.error, 1e-12));
}

TEST_CASE("eval budget exhaustion throws") {
    QuadOptions opt;
    opt.max_evals = 60;  // one level of subdivision at most
    auto f = [](double x) { return std::sin(50.0 * x); };
    CHECK_THROWS_AS(integrate(f, 0.0, 10.0, {}, opt), QuadratureError);
}

TEST_CASE("tolerance options control acceptance") {
    QuadOptions loose;
    loose.abs_tol = 1e-3;
    loose.rel_tol = 1e-3;
    auto f = [](double x) { return std::sqrt(x); };
    QuadResult r = integrate(f, 0.0, 1.0, {}, loose);
    CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-3));

    QuadOptions tight;
    tight.abs_tol = 1e-10;
    tight.rel_tol = 1e-10;
    QuadResult rt = integrate(f, 0.0, 1.0, {}, tight);
    CHECK(rt.value == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(rt.evals >= r.evals);
}
