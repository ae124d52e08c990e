#pragma once

#include <functional>
#include <map>
#include <vector>

#include "mmtc/scenario.hpp"

namespace mmtc {

struct Moments {
    double ex = 0;
    double ex2 = 0;
    double ex3 = 0;
    double cv = 0;
};

// Raw sample moments and the coefficient of variation.
Moments moments(const std::vector<double>& gaps);

// Kolmogorov-Smirnov distance, checking both sides of every ECDF step.
// step_eps > 0 reads the cdf just left and right of each sample instead of
// exactly on it, so laws with atoms are compared on the intended side of
// their own jumps even when samples sit a few ulps off the atom.
double ks_distance(const std::vector<double>& samples,
                   const std::function<double(double)>& cdf,
                   double step_eps = 0.0);

// Total-variation distance between a batch-size histogram and a pmf.
double total_variation(const std::map<int, long long>& hist, const PacketPmf& pmf);

// Piecewise-linear snapshot of an expensive CDF on a geometric grid, for KS
// against samples too numerous to evaluate the law on directly.
class GridCdf {
 public:
    GridCdf(const std::function<double(double)>& cdf, double lo, double hi,
            int points = 4096);
    double operator()(double x) const;

 private:
    double lo_, hi_, step_;  // log-space knots
    std::vector<double> values_;
};

}  // namespace mmtc
