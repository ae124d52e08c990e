#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "mmtc/random.hpp"

namespace mmtc {

struct Deterministic {
    double period;
};

struct Uniform {
    double a;
    double b;
};

struct Exponential {
    double rate;
};

struct Pareto {
    double alpha;
    double scale;
};

struct BoundedPareto {
    double alpha;
    double lower;
    double upper;
};

struct Empirical {
    std::vector<double> samples;
};

using DistributionSpec =
    std::variant<Deterministic, Uniform, Exponential, Pareto, BoundedPareto, Empirical>;

// An inter-generation time law. Point-mass families (Deterministic, Empirical)
// use right-continuous step CDFs; pdf() at an atom returns the atom's mass,
// consumers that integrate must use atoms() for the discrete part.
class Distribution {
  public:
    explicit Distribution(DistributionSpec spec);

    double pdf(double x) const;
    double cdf(double x) const;
    // I(y) = integral of cdf over [0, y], exact per family; 0 for y <= 0.
    double cdf_integral(double y) const;
    double mean() const { return mean_; }
    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }  // +inf when unbounded
    bool discrete() const;
    std::vector<std::pair<double, double>> atoms() const;  // (position, mass)

    double sample(RandomStream& rs) const;
    // Draw with density x*pdf(x)/mean; U*draw is a residual-life variate.
    double length_biased_sample(RandomStream& rs) const;

    // (1/mean_interarrival) * integral of (1 - cdf) over [0, x]
    double excess_cdf(double mean_interarrival, double x) const;

    const DistributionSpec& spec() const { return spec_; }

  private:
    DistributionSpec spec_;
    double mean_ = 0;
    double lo_ = 0;
    double hi_ = 0;
    std::vector<double> prefix_;     // Empirical: prefix sums of sorted samples
    std::vector<double> lb_cumul_;   // Empirical: cumulative length-bias weights
};

Distribution make_distribution(const DistributionSpec& spec);

double eval_pdf(const Distribution& d, double x);
double eval_cdf(const Distribution& d, double x);
double excess_cdf(const Distribution& d, double mean_interarrival, double x);

// Same law with every sample value multiplied by factor (rate scaled by 1/factor).
DistributionSpec scale_spec(const DistributionSpec& spec, double factor);

const char* family_name(const DistributionSpec& spec);

}  // namespace mmtc
