#include "mmtc/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <variant>

#include "mmtc/errors.hpp"
#include "mmtc/exec.hpp"
#include "mmtc/quadrature.hpp"

namespace mmtc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void thin_sorted(std::vector<double>& v, std::size_t cap) {
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.size() <= cap) return;
    std::vector<double> kept;
    kept.reserve(cap + 1);
    std::size_t stride = v.size() / cap + 1;
    for (std::size_t i = 0; i < v.size(); i += stride) kept.push_back(v[i]);
    if (kept.back() != v.back()) kept.push_back(v.back());
    v = std::move(kept);
}

// Abscissas where 1 - F_mix kinks or jumps: shifted support edges, plus the
// shifted atoms when the base is discrete with few of them. Thinned so the
// seed panel count of the adaptive pass stays bounded for large mixtures.
std::vector<double> mixture_breakpoints(const ShiftMixture& mix, double lo_clip,
                                        double hi_clip) {
    const Distribution& d = mix.base;
    std::vector<double> marks;
    marks.push_back(d.support_lo());
    if (std::isfinite(d.support_hi())) marks.push_back(d.support_hi());
    if (d.discrete() && d.atoms().size() <= 64)
        for (const auto& a : d.atoms()) marks.push_back(a.first);

    std::vector<double> bp;
    bp.reserve(marks.size() * mix.terms.size());
    for (const auto& t : mix.terms)
        for (double m : marks) {
            double v = m + t.shift_s;
            if (v > lo_clip && v < hi_clip) bp.push_back(v);
        }
    std::sort(bp.begin(), bp.end());
    thin_sorted(bp, 200);
    return bp;
}

std::vector<double> law_breakpoints(const AggregateLaw& law) {
    std::vector<double> bp;
    for (std::size_t c = 0; c < law.classes(); ++c) {
        auto b = mixture_breakpoints(law.mixture(c), 0.0, kInf);
        bp.insert(bp.end(), b.begin(), b.end());
    }
    std::sort(bp.begin(), bp.end());
    thin_sorted(bp, 200);
    return bp;
}

// P(excess of class i <= excess of class j): integral of F_i^e against the
// density of class j's excess law.
double win_integral(const AggregateLaw& law, std::size_t i, std::size_t j,
                    const std::vector<double>& bp) {
    auto f = [&law, i, j](double x) {
        double dens = law.excess_pdf(j, x);
        if (dens <= 0) return 0.0;
        // At astronomic tail abscissae the excess form x - integral loses all
        // of its cancellation to rounding; the true value is in [0, 1].
        double F = std::clamp(law.excess_cdf(i, x), 0.0, 1.0);
        return F * dens;
    };
    return integrate_tail(f, 0.0, bp).value;
}

// P(a given class-c user has the smallest excess among all n users).
double exact_win_integral(const AggregateLaw& law, std::size_t c,
                          const std::vector<double>& bp) {
    auto f = [&law, c](double x) {
        double dens = law.excess_pdf(c, x);
        if (dens <= 0) return 0.0;
        double acc = 0;
        for (std::size_t k = 0; k < law.classes(); ++k) {
            double others = law.population(k) - (k == c ? 1.0 : 0.0);
            if (others <= 0) continue;
            double F = std::max(law.excess_cdf(k, x), 0.0);
            if (F >= 1) return 0.0;
            acc += others * std::log1p(-F);
        }
        return dens * std::exp(acc);
    };
    return integrate_tail(f, 0.0, bp).value;
}

// Empirical bases give the excess densities one microscopic step per
// (sample, shift) pair; the panel estimator sees those steps but can only
// shrink their first-order error with panel width, so it exhausts any eval
// budget before certifying a tight tolerance. The win integrals then switch
// to a dense trapezoid grid, whose step error is bounded by the total jump
// mass (about 1/mean) times the grid step.
bool has_sampled_base(const AggregateLaw& law) {
    for (std::size_t c = 0; c < law.classes(); ++c)
        if (std::holds_alternative<Empirical>(law.mixture(c).base.spec()))
            return true;
    return false;
}

// Mixtures with thousands of terms defeat the adaptive estimator in a second
// way: every term contributes a kink or step, panels hold many of them, and
// the Gauss/Kronrod difference under-reports the combined error. The grid
// handles both regimes, so any large law goes through it too.
bool prefers_grid(const AggregateLaw& law) {
    if (has_sampled_base(law)) return true;
    std::size_t terms = 0;
    for (std::size_t c = 0; c < law.classes(); ++c)
        terms += law.mixture(c).terms.size();
    return terms > 512;
}

struct ExcessGrid {
    double step = 0;
    std::vector<std::vector<double>> F;  // excess cdf per class, per node
    std::vector<std::vector<double>> f;  // excess pdf per class, per node
};

// Nodes cover every finite excess support; unbounded classes extend the edge
// until their excess tail mass drops below 1e-7 (the truncated remainder of
// the win integrals is corrected analytically below).
ExcessGrid fill_excess_grid(const AggregateLaw& law) {
    double hi = 1e-6;
    for (std::size_t c = 0; c < law.classes(); ++c) {
        const ShiftMixture& mix = law.mixture(c);
        double smax = 0;
        for (const auto& t : mix.terms) smax = std::max(smax, t.shift_s);
        const double base_hi = mix.base.support_hi();
        if (std::isfinite(base_hi)) {
            hi = std::max(hi, base_hi + smax);
        } else {
            double x = std::max(1.0, 1.0 / law.lambda(c));
            while (1.0 - law.excess_cdf(c, x) > 1e-7 && x < 1e12) x *= 2;
            hi = std::max(hi, x);
        }
    }

    constexpr long kCells = 1 << 18;
    ExcessGrid g;
    g.step = hi / kCells;
    g.F.assign(law.classes(), std::vector<double>(kCells + 1));
    g.f.assign(law.classes(), std::vector<double>(kCells + 1));
#pragma omp parallel for schedule(static) num_threads(max_threads())
    for (long i = 0; i <= kCells; ++i) {
        const double x = g.step * static_cast<double>(i);
        for (std::size_t c = 0; c < law.classes(); ++c) {
            g.F[c][i] = std::clamp(law.excess_cdf(c, x), 0.0, 1.0);
            g.f[c][i] = std::max(law.excess_pdf(c, x), 0.0);
        }
    }
    return g;
}

double grid_exact_win(const AggregateLaw& law, const ExcessGrid& g, std::size_t c) {
    const std::size_t nodes = g.F[c].size();
    double sum = 0;
    for (std::size_t i = 0; i < nodes; ++i) {
        if (g.F[c][i] >= 1) break;  // class-c excess support has ended
        double acc = 0;
        for (std::size_t k = 0; k < law.classes(); ++k) {
            const double others = law.population(k) - (k == c ? 1.0 : 0.0);
            if (others <= 0) continue;
            const double F = g.F[k][i];
            if (F >= 1) {
                acc = -kInf;
                break;
            }
            acc += others * std::log1p(-F);
        }
        const double v = g.f[c][i] * std::exp(acc);
        sum += (i == 0 || i + 1 == nodes) ? 0.5 * v : v;
    }
    return sum * g.step;
}

double grid_win(const ExcessGrid& g, std::size_t i, std::size_t j) {
    const std::size_t nodes = g.F[i].size();
    double sum = 0.5 * (g.F[i][0] * g.f[j][0] + g.F[i].back() * g.f[j].back());
    for (std::size_t a = 1; a + 1 < nodes; ++a) sum += g.F[i][a] * g.f[j][a];
    // remaining mass of excess j beyond the grid, against F_i^e in [F_i(hi), 1]
    return sum * g.step + (1.0 - g.F[j].back()) * 0.5 * (1.0 + g.F[i].back());
}

BatchResult batch_impl(const AggregateLaw& law, const Scenario& s,
                       AggregateMode mode) {
    const std::size_t nc = law.classes();
    BatchResult out;
    out.win_per_user.resize(nc);

    const bool gridded = prefers_grid(law);
    ExcessGrid grid;
    std::vector<double> bp;
    if (gridded)
        grid = fill_excess_grid(law);
    else
        bp = law_breakpoints(law);

    for (std::size_t c = 0; c < nc; ++c) {
        if (mode == AggregateMode::ExactMin) {
            out.win_per_user[c] = gridded ? grid_exact_win(law, grid, c)
                                          : exact_win_integral(law, c, bp);
            continue;
        }
        double acc = 0;
        bool zero = false;
        for (std::size_t k = 0; k < nc && !zero; ++k) {
            double others = law.population(k) - (k == c ? 1.0 : 0.0);
            if (others <= 0) continue;
            double w = gridded ? grid_win(grid, c, k) : win_integral(law, c, k, bp);
            if (w <= 0)
                zero = true;
            else
                acc += others * std::log(w);
        }
        out.win_per_user[c] = zero ? 0.0 : std::exp(acc);
    }

    std::map<int, double> mass;
    for (std::size_t c = 0; c < nc; ++c) {
        double weight = law.population(c) * out.win_per_user[c];
        out.weight_sum += weight;
        const PacketPmf& p = s.classes[c].packets;
        for (std::size_t a = 0; a < p.count.size(); ++a)
            mass[p.count[a]] += weight * p.prob[a];
    }
    const bool renorm = mode == AggregateMode::ExactMin && out.weight_sum > 0;
    for (const auto& [count, prob] : mass) {
        out.pmf.count.push_back(count);
        out.pmf.prob.push_back(renorm ? prob / out.weight_sum : prob);
    }
    return out;
}

}  // namespace

double single_user_pdf(const ShiftMixture& mix, double x) {
    double v = 0;
    for (const auto& t : mix.terms) v += t.weight * mix.base.pdf(x - t.shift_s);
    return v;
}

double single_user_cdf(const ShiftMixture& mix, double x) {
    double v = 0;
    for (const auto& t : mix.terms) v += t.weight * mix.base.cdf(x - t.shift_s);
    return v;
}

// 1 - single_user_cdf, summed term by term so the tail reaches zero instead
// of freezing at the rounding error of the total weight.
static double single_user_survival(const ShiftMixture& mix, double x) {
    double v = 0;
    for (const auto& t : mix.terms)
        v += t.weight * (1.0 - mix.base.cdf(x - t.shift_s));
    return v;
}

double single_user_mean(const ShiftMixture& mix) {
    // Add mirrored terms together so the +s and -s contributions cancel
    // exactly instead of up to rounding.
    double shift_mean = 0;
    const std::size_t m = mix.terms.size();
    for (std::size_t i = 0; i < m - i; ++i) {
        const std::size_t j = m - 1 - i;
        shift_mean += mix.terms[i].weight * mix.terms[i].shift_s;
        if (j != i) shift_mean += mix.terms[j].weight * mix.terms[j].shift_s;
    }
    return mix.base.mean() + shift_mean;
}

double negative_mass(const ShiftMixture& mix) {
    double v = 0;
    for (const auto& t : mix.terms) {
        double y = -t.shift_s;
        // Strictly-below-zero mass: atoms sitting exactly on the origin are
        // simultaneous arrivals, not negative gaps.
        double F = mix.base.discrete() ? mix.base.cdf(std::nextafter(y, -kInf))
                                       : mix.base.cdf(y);
        v += t.weight * F;
    }
    return v;
}

double user_excess_cdf(const ShiftMixture& mix, double lambda_per_s, double x) {
    if (!(x > 0)) return 0;
    auto bp = mixture_breakpoints(mix, 0.0, x);
    auto f = [&mix](double w) { return 1.0 - single_user_cdf(mix, w); };
    return lambda_per_s * integrate(f, 0.0, x, bp).value;
}

double user_excess_cdf_exact(const ShiftMixture& mix, double lambda_per_s,
                             double x) {
    if (!(x > 0)) return 0;
    double cum = 0;
    for (const auto& t : mix.terms)
        cum += t.weight * (mix.base.cdf_integral(x - t.shift_s) -
                           mix.base.cdf_integral(-t.shift_s));
    return lambda_per_s * (x - cum);
}

// Large mixtures make the per-term walk the cost center of everything built
// on the law, so the step, ramp and decay bases get prefix sums over the
// sorted shifts: their cdf integrals split into polynomial or exponential
// pieces whose sums over "shift before x" telescope. Two binary searches
// replace the walk. Bases without that structure keep the per-term path.
struct AggregateLaw::Fast {
    enum class Kind { Generic, Step, Ramp, Decay };
    struct PerClass {
        Kind kind = Kind::Generic;
        double p1 = 0, p2 = 0;  // Step: period | Ramp: a, b | Decay: rate
        std::vector<double> s;  // term shifts, ascending
        std::vector<double> w, ws, ws2, we;  // prefix sums of weight * {1, s, s^2, e^(rate*s)}
        double j0 = 0;  // sum of weight * I(-s), the x-independent excess part
    };
    std::vector<PerClass> cls;

    static PerClass build(const ShiftMixture& mix) {
        PerClass pc;
        const DistributionSpec& spec = mix.base.spec();
        if (const auto* d = std::get_if<Deterministic>(&spec)) {
            pc.kind = Kind::Step;
            pc.p1 = d->period;
        } else if (const auto* u = std::get_if<Uniform>(&spec)) {
            pc.kind = Kind::Ramp;
            pc.p1 = u->a;
            pc.p2 = u->b;
        } else if (const auto* e = std::get_if<Exponential>(&spec)) {
            pc.kind = Kind::Decay;
            pc.p1 = e->rate;
        }
        if (pc.kind == Kind::Generic) return pc;

        const auto& terms = mix.terms;
        const double span = terms.empty() ? 0
                                          : std::max(std::abs(terms.front().shift_s),
                                                     std::abs(terms.back().shift_s));
        if (pc.kind == Kind::Decay && pc.p1 * span > 30) {
            // e^(rate*s) would swamp the prefix sums
            pc.kind = Kind::Generic;
            return pc;
        }

        const std::size_t T = terms.size();
        pc.s.resize(T);
        pc.w.assign(T + 1, 0);
        pc.ws.assign(T + 1, 0);
        pc.ws2.assign(T + 1, 0);
        if (pc.kind == Kind::Decay) pc.we.assign(T + 1, 0);
        for (std::size_t t = 0; t < T; ++t) {
            const double sv = terms[t].shift_s;
            const double wv = terms[t].weight;
            pc.s[t] = sv;
            pc.w[t + 1] = pc.w[t] + wv;
            pc.ws[t + 1] = pc.ws[t] + wv * sv;
            pc.ws2[t + 1] = pc.ws2[t] + wv * sv * sv;
            if (pc.kind == Kind::Decay) pc.we[t + 1] = pc.we[t] + wv * std::exp(pc.p1 * sv);
            pc.j0 += wv * mix.base.cdf_integral(-sv);
        }
        return pc;
    }

    static std::size_t below(const PerClass& pc, double y) {
        return std::upper_bound(pc.s.begin(), pc.s.end(), y) - pc.s.begin();
    }
    static std::size_t strictly_below(const PerClass& pc, double y) {
        return std::lower_bound(pc.s.begin(), pc.s.end(), y) - pc.s.begin();
    }

    // sum over terms of weight * F_base(x - s)
    static double mix_cdf(const PerClass& pc, double x) {
        switch (pc.kind) {
            case Kind::Step:
                return pc.w[below(pc, x - pc.p1)];
            case Kind::Ramp: {
                const std::size_t il = below(pc, x - pc.p2);
                const std::size_t ih = strictly_below(pc, x - pc.p1);
                const double wm = pc.w[ih] - pc.w[il];
                const double wsm = pc.ws[ih] - pc.ws[il];
                return pc.w[il] + ((x - pc.p1) * wm - wsm) / (pc.p2 - pc.p1);
            }
            case Kind::Decay: {
                const std::size_t i = strictly_below(pc, x);
                return pc.w[i] - std::exp(-pc.p1 * x) * pc.we[i];
            }
            case Kind::Generic: break;
        }
        return 0;
    }

    // sum over terms of weight * (1 - F_base(x - s)). Summing survivals
    // directly lets the tail decay to an exact zero; 1 - mix_cdf would freeze
    // at the rounding gap of the weight sum and turn tail integrals divergent.
    static double mix_survival(const PerClass& pc, double x) {
        const std::size_t T = pc.s.size();
        switch (pc.kind) {
            case Kind::Step:
                return pc.w[T] - pc.w[below(pc, x - pc.p1)];
            case Kind::Ramp: {
                const std::size_t il = below(pc, x - pc.p2);
                const std::size_t ih = strictly_below(pc, x - pc.p1);
                const double wm = pc.w[ih] - pc.w[il];
                const double wsm = pc.ws[ih] - pc.ws[il];
                return (pc.w[T] - pc.w[ih]) +
                       (wsm - (x - pc.p2) * wm) / (pc.p2 - pc.p1);
            }
            case Kind::Decay: {
                const std::size_t i = strictly_below(pc, x);
                return (pc.w[T] - pc.w[i]) + std::exp(-pc.p1 * x) * pc.we[i];
            }
            case Kind::Generic: break;
        }
        return 0;
    }

    // sum over terms of weight * I(x - s), I the running integral of F_base
    static double mix_cdf_integral(const PerClass& pc, double x) {
        switch (pc.kind) {
            case Kind::Step: {
                const std::size_t i = below(pc, x - pc.p1);
                return (x - pc.p1) * pc.w[i] - pc.ws[i];
            }
            case Kind::Ramp: {
                const std::size_t il = below(pc, x - pc.p2);
                const std::size_t ih = strictly_below(pc, x - pc.p1);
                const double mid = pc.p1 + 0.5 * (pc.p2 - pc.p1);
                double acc = (x - mid) * pc.w[il] - pc.ws[il];
                const double wm = pc.w[ih] - pc.w[il];
                const double wsm = pc.ws[ih] - pc.ws[il];
                const double ws2m = pc.ws2[ih] - pc.ws2[il];
                const double xa = x - pc.p1;
                acc += (xa * xa * wm - 2 * xa * wsm + ws2m) / (2 * (pc.p2 - pc.p1));
                return acc;
            }
            case Kind::Decay: {
                const std::size_t i = strictly_below(pc, x);
                return x * pc.w[i] - pc.ws[i] +
                       (std::exp(-pc.p1 * x) * pc.we[i] - pc.w[i]) / pc.p1;
            }
            case Kind::Generic: break;
        }
        return 0;
    }
};

AggregateLaw::AggregateLaw(const Scenario& s) {
    if (s.classes.empty())
        throw InvalidParameter("AggregateLaw: scenario has no user classes");
    const int n = s.total_users();
    mixes_.reserve(s.classes.size());
    for (const auto& c : s.classes) {
        mixes_.push_back(shift_set(c, s.cell, n));
        pop_.push_back(c.population);
        lambda_.push_back(c.lambda_per_s);
    }
    auto fast = std::make_shared<Fast>();
    fast->cls.reserve(mixes_.size());
    for (const auto& m : mixes_) fast->cls.push_back(Fast::build(m));
    fast_ = std::move(fast);
}

double AggregateLaw::total_rate() const {
    double r = 0;
    for (std::size_t c = 0; c < pop_.size(); ++c) r += pop_[c] * lambda_[c];
    return r;
}

double AggregateLaw::excess_cdf(std::size_t c, double x) const {
    const Fast::PerClass& pc = fast_->cls[c];
    if (pc.kind == Fast::Kind::Generic)
        return user_excess_cdf_exact(mixes_[c], lambda_[c], x);
    if (!(x > 0)) return 0;
    return lambda_[c] * (x - (Fast::mix_cdf_integral(pc, x) - pc.j0));
}

double AggregateLaw::excess_pdf(std::size_t c, double x) const {
    const Fast::PerClass& pc = fast_->cls[c];
    if (pc.kind == Fast::Kind::Generic)
        return lambda_[c] * single_user_survival(mixes_[c], x);
    return lambda_[c] * Fast::mix_survival(pc, x);
}

double AggregateLaw::cdf(AggregateMode mode, double x) const {
    if (!(x > 0)) return 0;
    if (mode == AggregateMode::PaperProduct) {
        double acc = 0;
        for (std::size_t c = 0; c < mixes_.size(); ++c) {
            double F = excess_cdf(c, x);
            if (F <= 0) return 0;
            acc += pop_[c] * std::log(F);
        }
        return std::exp(acc);
    }
    double acc = 0;
    for (std::size_t c = 0; c < mixes_.size(); ++c) {
        double F = excess_cdf(c, x);
        if (F >= 1) return 1;
        acc += pop_[c] * std::log1p(-F);
    }
    return -std::expm1(acc);
}

double AggregateLaw::quantile(AggregateMode mode, double p) const {
    if (!(p > 0)) return 0;
    double hi = 1e-6;
    for (int i = 0; i < 120 && cdf(mode, hi) < p; ++i) hi *= 2;
    double lo = 0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (!(mid > lo) || !(mid < hi)) break;
        (cdf(mode, mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double AggregateLaw::max_negative_mass() const {
    double worst = 0;
    for (const auto& m : mixes_) worst = std::max(worst, negative_mass(m));
    return worst;
}

double aggregate_cdf(const Scenario& s, AggregateMode mode, double x) {
    return AggregateLaw(s).cdf(mode, x);
}

double homogeneous_aggregate_cdf(const UserClass& cls, const CellConfig& cell,
                                 int n, AggregateMode mode, double x) {
    if (n < 1) throw InvalidParameter("homogeneous_aggregate_cdf: n must be >= 1");
    ShiftMixture mix = shift_set(cls, cell, n);
    double Fe = user_excess_cdf_exact(mix, cls.lambda_per_s, x);
    if (mode == AggregateMode::PaperProduct) return std::pow(std::max(Fe, 0.0), n);
    if (Fe >= 1) return 1;
    return -std::expm1(n * std::log1p(-std::max(Fe, 0.0)));
}

double exponential_closed_form_cdf(const UserClass& cls, const CellConfig& cell,
                                   int n, double x) {
    const auto* e = std::get_if<Exponential>(&cls.inter_gen);
    if (!e)
        throw InvalidParameter(
            "exponential_closed_form_cdf: inter-generation law is not exponential");
    if (!(x > 0)) return 0;
    const ShiftMixture mix = shift_set(cls, cell, n);
    const double rate = e->rate;
    // Termwise integral of the shifted survival function: below max(s, 0)
    // the integrand is 1, beyond it decays exponentially.
    double J = 0;
    for (const auto& t : mix.terms) {
        const double sp = std::max(t.shift_s, 0.0);
        double term = std::min(x, sp);
        if (x > sp)
            term += (std::exp(-rate * (sp - t.shift_s)) -
                     std::exp(-rate * (x - t.shift_s))) /
                    rate;
        J += t.weight * term;
    }
    return std::pow(cls.lambda_per_s * J, n);
}

double pareto_closed_form_cdf(const UserClass& cls, const CellConfig& cell,
                              int n, double x) {
    const auto* p = std::get_if<Pareto>(&cls.inter_gen);
    if (!p)
        throw InvalidParameter(
            "pareto_closed_form_cdf: inter-generation law is not Pareto");
    if (!(x > 0)) return 0;
    const ShiftMixture mix = shift_set(cls, cell, n);
    const double a = p->scale;
    const double al = p->alpha;
    // The shifted survival function is 1 until the shifted scale point
    // u0 = max(0, s + a) and a power tail beyond it.
    double J = 0;
    for (const auto& t : mix.terms) {
        const double u0 = std::max(0.0, t.shift_s + a);
        double term = std::min(x, u0);
        if (x > u0)
            term += std::pow(a, al) *
                    (std::pow(u0 - t.shift_s, 1 - al) - std::pow(x - t.shift_s, 1 - al)) /
                    (al - 1);
        J += t.weight * term;
    }
    return std::pow(cls.lambda_per_s * J, n);
}

BatchResult batch_pmf(const Scenario& s, AggregateMode mode) {
    AggregateLaw law(s);
    return batch_impl(law, s, mode);
}

double pairwise_win_prob(std::size_t i, std::size_t j, const Scenario& s) {
    AggregateLaw law(s);
    if (i >= law.classes() || j >= law.classes())
        throw InvalidParameter("pairwise_win_prob: class index out of range");
    if (prefers_grid(law)) return grid_win(fill_excess_grid(law), i, j);
    return win_integral(law, i, j, law_breakpoints(law));
}

double homogeneous_batch_factor(const ShiftMixture& mix, double lambda_per_s,
                                int n) {
    auto bp = mixture_breakpoints(mix, 0.0, kInf);
    auto f = [&mix, lambda_per_s](double x) {
        double surv = single_user_survival(mix, x);
        if (surv <= 0) return 0.0;
        return user_excess_cdf_exact(mix, lambda_per_s, x) * lambda_per_s * surv;
    };
    double q = integrate_tail(f, 0.0, bp).value;
    return n * std::pow(q, n - 1);
}

AnalyticReport analyze(const Scenario& s, int grid_points, bool with_batch,
                       ExecPolicy policy) {
    if (grid_points < 2)
        throw InvalidParameter("analyze: grid_points must be >= 2");
    AggregateLaw law(s);
    AnalyticReport r;
    for (std::size_t c = 0; c < law.classes(); ++c)
        r.mixtures.push_back(law.mixture(c));

    const double lo = 1e-6;
    double hi = law.quantile(AggregateMode::ExactMin, 0.9999);
    if (!(hi > lo * 2)) hi = lo * 1e3;
    r.grid_s.resize(grid_points);
    const double step = std::log(hi / lo) / (grid_points - 1);
    for (int i = 0; i < grid_points; ++i) r.grid_s[i] = lo * std::exp(step * i);
    r.grid_s.back() = hi;
    for (int i = 1; i < grid_points; ++i)
        if (r.grid_s[i] <= r.grid_s[i - 1])
            r.grid_s[i] = std::nextafter(r.grid_s[i - 1], kInf);

    r.cdf_paper.assign(grid_points, 0.0);
    r.cdf_exact.assign(grid_points, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads()) \
    if (policy == ExecPolicy::Parallel)
#endif
    for (int i = 0; i < grid_points; ++i) {
        r.cdf_paper[i] = law.cdf(AggregateMode::PaperProduct, r.grid_s[i]);
        r.cdf_exact[i] = law.cdf(AggregateMode::ExactMin, r.grid_s[i]);
    }
    (void)policy;

    r.diagnostics.negative_mass = law.max_negative_mass();
    double worst = 0;
    for (double v : r.cdf_paper) worst = std::max(worst, v);
    r.diagnostics.max_cdf_value = worst;
    r.diagnostics.cdf_valid = worst <= 1.0 + 1e-9;

    if (with_batch) {
        r.batch_exact = batch_impl(law, s, AggregateMode::ExactMin);
        r.batch_paper = batch_impl(law, s, AggregateMode::PaperProduct);
        r.diagnostics.sum_pi_paper = r.batch_paper.weight_sum;
    }
    return r;
}

}  // namespace mmtc
