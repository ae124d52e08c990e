#include "mmtc/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mmtc/errors.hpp"

namespace mmtc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
    if (!ok) throw InvalidParameter(std::string("distribution: ") + what);
}

// integral of ((L/w)^alpha) dw over [u, v], 0 < u <= v
double pareto_tail_integral(double alpha, double L, double u, double v) {
    if (alpha == 1.0) return L * std::log(v / u);
    double La = std::pow(L, alpha);
    return La * (std::pow(u, 1.0 - alpha) - std::pow(v, 1.0 - alpha)) / (alpha - 1.0);
}

}  // namespace

Distribution::Distribution(DistributionSpec spec) : spec_(std::move(spec)) {
    std::visit(
        [this](auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Deterministic>) {
                require(s.period > 0, "Deterministic period must be > 0");
                mean_ = s.period;
                lo_ = hi_ = s.period;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                require(s.a >= 0, "Uniform lower bound must be >= 0");
                require(s.a < s.b, "Uniform requires a < b");
                mean_ = 0.5 * (s.a + s.b);
                lo_ = s.a;
                hi_ = s.b;
            } else if constexpr (std::is_same_v<T, Exponential>) {
                require(s.rate > 0, "Exponential rate must be > 0");
                mean_ = 1.0 / s.rate;
                lo_ = 0;
                hi_ = kInf;
            } else if constexpr (std::is_same_v<T, Pareto>) {
                require(s.alpha > 1, "Pareto shape must be > 1");
                require(s.scale > 0, "Pareto scale must be > 0");
                mean_ = s.scale * s.alpha / (s.alpha - 1.0);
                lo_ = s.scale;
                hi_ = kInf;
            } else if constexpr (std::is_same_v<T, BoundedPareto>) {
                require(s.alpha > 0, "BoundedPareto shape must be > 0");
                require(s.lower > 0, "BoundedPareto lower bound must be > 0");
                require(s.lower < s.upper, "BoundedPareto requires lower < upper");
                double q = std::pow(s.lower / s.upper, s.alpha);
                double tail = pareto_tail_integral(s.alpha, s.lower, s.lower, s.upper);
                mean_ = s.lower + (tail - q * (s.upper - s.lower)) / (1.0 - q);
                lo_ = s.lower;
                hi_ = s.upper;
            } else if constexpr (std::is_same_v<T, Empirical>) {
                require(s.samples.size() >= 2, "Empirical requires >= 2 samples");
                for (double v : s.samples) require(v >= 0, "Empirical samples must be >= 0");
                std::sort(s.samples.begin(), s.samples.end());
                prefix_.resize(s.samples.size() + 1);
                prefix_[0] = 0;
                for (std::size_t i = 0; i < s.samples.size(); ++i)
                    prefix_[i + 1] = prefix_[i] + s.samples[i];
                mean_ = prefix_.back() / static_cast<double>(s.samples.size());
                lo_ = s.samples.front();
                hi_ = s.samples.back();
                lb_cumul_.resize(s.samples.size());
                double acc = 0;
                for (std::size_t i = 0; i < s.samples.size(); ++i) {
                    acc += s.samples[i];
                    lb_cumul_[i] = acc;
                }
            }
        },
        spec_);
}

double Distribution::pdf(double x) const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Deterministic>) {
                return x == s.period ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return (x >= s.a && x <= s.b) ? 1.0 / (s.b - s.a) : 0.0;
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return x >= 0 ? s.rate * std::exp(-s.rate * x) : 0.0;
            } else if constexpr (std::is_same_v<T, Pareto>) {
                if (x < s.scale) return 0.0;
                return s.alpha * std::pow(s.scale, s.alpha) * std::pow(x, -s.alpha - 1.0);
            } else if constexpr (std::is_same_v<T, BoundedPareto>) {
                if (x < s.lower || x > s.upper) return 0.0;
                double q = std::pow(s.lower / s.upper, s.alpha);
                return s.alpha * std::pow(s.lower, s.alpha) * std::pow(x, -s.alpha - 1.0) /
                       (1.0 - q);
            } else if constexpr (std::is_same_v<T, Empirical>) {
                auto [first, last] = std::equal_range(s.samples.begin(), s.samples.end(), x);
                return static_cast<double>(last - first) /
                       static_cast<double>(s.samples.size());
            }
        },
        spec_);
}

double Distribution::cdf(double x) const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Deterministic>) {
                return x >= s.period ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                if (x <= s.a) return 0.0;
                if (x >= s.b) return 1.0;
                return (x - s.a) / (s.b - s.a);
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return x > 0 ? -std::expm1(-s.rate * x) : 0.0;
            } else if constexpr (std::is_same_v<T, Pareto>) {
                if (x <= s.scale) return 0.0;
                return 1.0 - std::pow(s.scale / x, s.alpha);
            } else if constexpr (std::is_same_v<T, BoundedPareto>) {
                if (x <= s.lower) return 0.0;
                if (x >= s.upper) return 1.0;
                double q = std::pow(s.lower / s.upper, s.alpha);
                return (1.0 - std::pow(s.lower / x, s.alpha)) / (1.0 - q);
            } else if constexpr (std::is_same_v<T, Empirical>) {
                auto it = std::upper_bound(s.samples.begin(), s.samples.end(), x);
                return static_cast<double>(it - s.samples.begin()) /
                       static_cast<double>(s.samples.size());
            }
        },
        spec_);
}

double Distribution::cdf_integral(double y) const {
    if (y <= 0) return 0.0;
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Deterministic>) {
                return y > s.period ? y - s.period : 0.0;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                if (y <= s.a) return 0.0;
                if (y <= s.b) return 0.5 * (y - s.a) * (y - s.a) / (s.b - s.a);
                return 0.5 * (s.b - s.a) + (y - s.b);
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return y + std::expm1(-s.rate * y) / s.rate;
            } else if constexpr (std::is_same_v<T, Pareto>) {
                if (y <= s.scale) return 0.0;
                return (y - s.scale) - pareto_tail_integral(s.alpha, s.scale, s.scale, y);
            } else if constexpr (std::is_same_v<T, BoundedPareto>) {
                if (y <= s.lower) return 0.0;
                double q = std::pow(s.lower / s.upper, s.alpha);
                double v = std::min(y, s.upper);
                double part = ((v - s.lower) - pareto_tail_integral(s.alpha, s.lower, s.lower, v)) /
                              (1.0 - q);
                if (y > s.upper) part += y - s.upper;
                return part;
            } else if constexpr (std::is_same_v<T, Empirical>) {
                auto it = std::upper_bound(s.samples.begin(), s.samples.end(), y);
                auto c = static_cast<std::size_t>(it - s.samples.begin());
                return (static_cast<double>(c) * y - prefix_[c]) /
                       static_cast<double>(s.samples.size());
            }
        },
        spec_);
}

bool Distribution::discrete() const {
    return std::holds_alternative<Deterministic>(spec_) ||
           std::holds_alternative<Empirical>(spec_);
}

std::vector<std::pair<double, double>> Distribution::atoms() const {
    std::vector<std::pair<double, double>> out;
    if (const auto* d = std::get_if<Deterministic>(&spec_)) {
        out.emplace_back(d->period, 1.0);
    } else if (const auto* e = std::get_if<Empirical>(&spec_)) {
        double n = static_cast<double>(e->samples.size());
        std::size_t i = 0;
        while (i < e->samples.size()) {
            std::size_t j = i;
            while (j < e->samples.size() && e->samples[j] == e->samples[i]) ++j;
            out.emplace_back(e->samples[i], static_cast<double>(j - i) / n);
            i = j;
        }
    }
    return out;
}

double Distribution::sample(RandomStream& rs) const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Deterministic>) {
                return s.period;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return rs.uniform(s.a, s.b);
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return -std::log1p(-rs.uniform01()) / s.rate;
            } else if constexpr (std::is_same_v<T, Pareto>) {
                return s.scale * std::pow(1.0 - rs.uniform01(), -1.0 / s.alpha);
            } else if constexpr (std::is_same_v<T, BoundedPareto>) {
                double q = std::pow(s.lower / s.upper, s.alpha);
                double u = rs.uniform01();
                return s.lower * std::pow(1.0 - u * (1.0 - q), -1.0 / s.alpha);
            } else if constexpr (std::is_same_v<T, Empirical>) {
                auto idx = static_cast<std::size_t>(rs.uniform01() *
                                                    static_cast<double>(s.samples.size()));
                if (idx >= s.samples.size()) idx = s.samples.size() - 1;
                return s.samples[idx];
            }
        },
        spec_);
}

double Distribution::length_biased_sample(RandomStream& rs) const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Deterministic>) {
                return s.period;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                double u = rs.uniform01();
                return std::sqrt(s.a * s.a + u * (s.b * s.b - s.a * s.a));
            } else if constexpr (std::is_same_v<T, Exponential>) {
                // gamma(2): sum of two exponentials
                double u1 = rs.uniform01();
                double u2 = rs.uniform01();
                return (-std::log1p(-u1) - std::log1p(-u2)) / s.rate;
            } else if constexpr (std::is_same_v<T, Pareto>) {
                // density ~ x^{-alpha} on [scale, inf): Pareto with shape alpha-1
                return s.scale * std::pow(1.0 - rs.uniform01(), -1.0 / (s.alpha - 1.0));
            } else if constexpr (std::is_same_v<T, BoundedPareto>) {
                double u = rs.uniform01();
                if (s.alpha == 1.0) {
                    return s.lower * std::pow(s.upper / s.lower, u);
                }
                double e = 1.0 - s.alpha;
                double lo = std::pow(s.lower, e);
                double hi = std::pow(s.upper, e);
                return std::pow(lo + u * (hi - lo), 1.0 / e);
            } else if constexpr (std::is_same_v<T, Empirical>) {
                double target = rs.uniform01() * lb_cumul_.back();
                auto it = std::upper_bound(lb_cumul_.begin(), lb_cumul_.end(), target);
                auto idx = static_cast<std::size_t>(it - lb_cumul_.begin());
                if (idx >= s.samples.size()) idx = s.samples.size() - 1;
                return s.samples[idx];
            }
        },
        spec_);
}

double Distribution::excess_cdf(double mean_interarrival, double x) const {
    if (x <= 0) return 0.0;
    if (mean_interarrival <= 0) throw InvalidParameter("excess_cdf: mean must be > 0");
    return (x - cdf_integral(x)) / mean_interarrival;
}

Distribution make_distribution(const DistributionSpec& spec) { return Distribution(spec); }

double eval_pdf(const Distribution& d, double x) { return d.pdf(x); }
double eval_cdf(const Distribution& d, double x) { return d.cdf(x); }
double excess_cdf(const Distribution& d, double mean_interarrival, double x) {
    return d.excess_cdf(mean_interarrival, x);
}

DistributionSpec scale_spec(const DistributionSpec& spec, double factor) {
    if (factor <= 0) throw InvalidParameter("scale_spec: factor must be > 0");
    return std::visit(
        [&](const auto& s) -> DistributionSpec {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Deterministic>) {
                return Deterministic{s.period * factor};
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return Uniform{s.a * factor, s.b * factor};
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return Exponential{s.rate / factor};
            } else if constexpr (std::is_same_v<T, Pareto>) {
                return Pareto{s.alpha, s.scale * factor};
            } else if constexpr (std::is_same_v<T, BoundedPareto>) {
                return BoundedPareto{s.alpha, s.lower * factor, s.upper * factor};
            } else if constexpr (std::is_same_v<T, Empirical>) {
                Empirical e = s;
                for (double& v : e.samples) v *= factor;
                return e;
            }
        },
        spec);
}

const char* family_name(const DistributionSpec& spec) {
    switch (spec.index()) {
        case 0: return "deterministic";
        case 1: return "uniform";
        case 2: return "exponential";
        case 3: return "pareto";
        case 4: return "bounded_pareto";
        default: return "empirical";
    }
}

}  // namespace mmtc
