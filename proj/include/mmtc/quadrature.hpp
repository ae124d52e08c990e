#pragma once

#include <functional>
#include <vector>

#include "mmtc/errors.hpp"

namespace mmtc {

struct QuadOptions {
    double abs_tol = 1e-8;
    double rel_tol = 1e-8;
    long max_evals = 1'000'000;
};

struct QuadResult {
    double value = 0;
    double error = 0;
    long evals = 0;
};

// Adaptive Gauss-Kronrod (7,15) over [a, b]. Interior breakpoints become
// initial segment boundaries so step discontinuities and kinks never sit
// inside a panel's interior at the first level. Throws QuadratureError when
// the tolerance is not reached within max_evals.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const std::vector<double>& breakpoints = {}, QuadOptions opt = {});

// Integral over [a, +inf) via the substitution x = a + u/(1-u), u in [0,1).
QuadResult integrate_tail(const std::function<double(double)>& f, double a,
                          const std::vector<double>& breakpoints = {}, QuadOptions opt = {});

}  // namespace mmtc
