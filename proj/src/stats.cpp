#include "mmtc/stats.hpp"

#include <algorithm>
#include <cmath>

#include "mmtc/errors.hpp"

namespace mmtc {

Moments moments(const std::vector<double>& gaps) {
    if (gaps.size() < 2)
        throw InsufficientData("moments: need at least 2 values");
    double s1 = 0, s2 = 0, s3 = 0;
    for (double g : gaps) {
        s1 += g;
        s2 += g * g;
        s3 += g * g * g;
    }
    const double m = static_cast<double>(gaps.size());
    Moments out;
    out.ex = s1 / m;
    out.ex2 = s2 / m;
    out.ex3 = s3 / m;
    if (out.ex == 0)
        throw InsufficientData("moments: degenerate sample with zero mean");
    out.cv = std::sqrt(std::max(out.ex2 - out.ex * out.ex, 0.0)) / out.ex;
    return out;
}

double ks_distance(const std::vector<double>& samples,
                   const std::function<double(double)>& cdf, double step_eps) {
    if (samples.empty()) throw InsufficientData("ks_distance: empty sample");
    std::vector<double> x = samples;
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0;
    // tied samples form one ECDF jump; the values strictly inside a tie
    // block are not attained by the ECDF and must not enter the sup.
    // samples within step_eps of each other count as tied so that an atom
    // smeared by floating-point accumulation still reads as one jump
    std::size_t i = 0;
    while (i < x.size()) {
        std::size_t j = i + 1;
        while (j < x.size() && x[j] - x[j - 1] <= step_eps) ++j;
        const double hi = cdf(x[j - 1] + step_eps);
        const double lo = step_eps > 0 ? cdf(x[i] - step_eps) : cdf(x[i]);
        d = std::max(d, std::abs(static_cast<double>(j) / n - hi));
        d = std::max(d, std::abs(static_cast<double>(i) / n - lo));
        i = j;
    }
    return d;
}

double total_variation(const std::map<int, long long>& hist, const PacketPmf& pmf) {
    long long total = 0;
    for (const auto& [k, c] : hist) total += c;
    if (total <= 0) throw InsufficientData("total_variation: empty histogram");

    std::map<int, double> diff;
    for (const auto& [k, c] : hist)
        diff[k] += static_cast<double>(c) / static_cast<double>(total);
    for (std::size_t i = 0; i < pmf.count.size(); ++i) diff[pmf.count[i]] -= pmf.prob[i];

    double tv = 0;
    for (const auto& [k, v] : diff) tv += std::abs(v);
    return 0.5 * tv;
}

GridCdf::GridCdf(const std::function<double(double)>& cdf, double lo, double hi,
                 int points) {
    if (!(lo > 0) || !(hi > lo) || points < 2)
        throw InvalidParameter("GridCdf: need 0 < lo < hi and points >= 2");
    lo_ = std::log(lo);
    hi_ = std::log(hi);
    step_ = (hi_ - lo_) / (points - 1);
    values_.resize(points);
    for (int i = 0; i < points; ++i) values_[i] = cdf(std::exp(lo_ + step_ * i));
}

double GridCdf::operator()(double x) const {
    if (!(x > 0)) return 0;
    const double z = std::log(x);
    if (z <= lo_) {
        // below the first knot, taper linearly toward the origin
        return values_.front() * (x / std::exp(lo_));
    }
    if (z >= hi_) return values_.back();
    const double pos = (z - lo_) / step_;
    const std::size_t i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return values_[i] + frac * (values_[i + 1] - values_[i]);
}

}  // namespace mmtc
