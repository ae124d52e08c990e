#include "mmtc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mmtc/errors.hpp"

namespace mmtc {

int Scenario::total_users() const {
    int n = 0;
    for (const auto& c : classes) n += c.population;
    return n;
}

double equal_share_rate(const CellConfig& cell, int n, double rate_kbps) {
    if (n < 1) throw InvalidParameter("equal_share_rate: n must be >= 1");
    if (rate_kbps <= 0) throw InvalidParameter("equal_share_rate: rate must be positive");
    return cell.blocks * rate_kbps / n;
}

double propagation_delay(double d_km, double c_km_s) {
    if (d_km < 0) throw InvalidParameter("propagation_delay: distance must be >= 0");
    if (c_km_s <= 0) throw InvalidParameter("propagation_delay: signal speed must be positive");
    return d_km / c_km_s;
}

namespace {

bool normalized(const std::vector<double>& prob, double tol = 1e-9) {
    double s = 0;
    for (double p : prob) {
        if (p < 0) return false;
        s += p;
    }
    return std::abs(s - 1.0) <= tol;
}

std::string pmf_sum(const std::vector<double>& prob) {
    double s = 0;
    for (double p : prob) s += p;
    std::ostringstream os;
    os << s;
    return os.str();
}

}  // namespace

std::vector<std::string> validate_scenario(const Scenario& s) {
    std::vector<std::string> findings;
    auto add = [&](const std::string& msg) { findings.push_back(msg); };

    if (s.cell.blocks < 1) add("cell.blocks: must be >= 1");
    if (!(s.cell.theta_kbits > 0)) add("cell.theta_kbits: must be positive");
    if (!(s.cell.frame_s > 0)) add("cell.frame_s: must be positive");
    if (!(s.cell.c_km_s > 0)) add("cell.c_km_s: must be positive");

    if (s.classes.empty()) add("classes: scenario has no user classes");

    for (size_t i = 0; i < s.classes.size(); ++i) {
        const UserClass& c = s.classes[i];
        std::ostringstream tag;
        tag << "classes[" << i << "]";
        if (!c.label.empty()) tag << " (" << c.label << ")";
        const std::string at = tag.str() + ": ";

        if (c.population < 1) add(at + "population must be >= 1");

        if (c.rates.rate_kbps.empty()) {
            add(at + "rate pmf is empty");
        } else {
            if (c.rates.rate_kbps.size() != c.rates.prob.size())
                add(at + "rate pmf levels and probabilities differ in length");
            else if (!normalized(c.rates.prob))
                add(at + "rate pmf not normalized (sum=" + pmf_sum(c.rates.prob) + ")");
            bool increasing = true;
            for (size_t k = 0; k < c.rates.rate_kbps.size(); ++k) {
                if (c.rates.rate_kbps[k] <= 0 ||
                    (k > 0 && c.rates.rate_kbps[k] <= c.rates.rate_kbps[k - 1]))
                    increasing = false;
            }
            if (!increasing) add(at + "rate levels must be positive and strictly increasing");
        }

        if (c.packets.count.empty()) {
            add(at + "packet pmf is empty");
        } else {
            if (c.packets.count.size() != c.packets.prob.size())
                add(at + "packet pmf counts and probabilities differ in length");
            else if (!normalized(c.packets.prob))
                add(at + "packet pmf not normalized (sum=" + pmf_sum(c.packets.prob) + ")");
            for (int k : c.packets.count)
                if (k < 1) {
                    add(at + "packet counts must be >= 1");
                    break;
                }
        }

        if (!(c.lambda_per_s > 0)) {
            add(at + "lambda_per_s must be positive");
        } else {
            try {
                Distribution d = make_distribution(c.inter_gen);
                if (std::abs(c.lambda_per_s * d.mean() - 1.0) > 1e-6)
                    add(at + "rate/mean mismatch (lambda * mean(inter_gen) != 1)");
            } catch (const InvalidParameter& e) {
                add(at + "inter_gen invalid: " + e.what());
            }
        }

        if (!(c.distance.lo_km > 0))
            add(at + "distance bounds must be positive");
        else if (c.distance.kind == Distance::Kind::Range &&
                 !(c.distance.hi_km > c.distance.lo_km))
            add(at + "distance range must satisfy lo < hi");
    }

    return findings;
}

ShiftMixture shift_set(const UserClass& cls, const CellConfig& cell, int n,
                       double merge_tol) {
    if (n < 1) throw InvalidParameter("shift_set: n must be >= 1");
    if (cls.packets.count.empty() || cls.packets.count.size() != cls.packets.prob.size())
        throw InvalidParameter("shift_set: malformed packet pmf");
    if (cls.rates.rate_kbps.empty() || cls.rates.rate_kbps.size() != cls.rates.prob.size())
        throw InvalidParameter("shift_set: malformed rate pmf");

    // Transmission delay of one generation under the equal-share policy is
    // count * theta / (K * rate / n); enumerate its joint pmf once.
    const double scale = n * cell.theta_kbits / cell.blocks;
    std::vector<double> delay;
    std::vector<double> q;
    delay.reserve(cls.packets.count.size() * cls.rates.rate_kbps.size());
    q.reserve(delay.capacity());
    for (size_t a = 0; a < cls.packets.count.size(); ++a)
        for (size_t b = 0; b < cls.rates.rate_kbps.size(); ++b) {
            delay.push_back(scale * cls.packets.count[a] / cls.rates.rate_kbps[b]);
            q.push_back(cls.packets.prob[a] * cls.rates.prob[b]);
        }

    // The shift of a consecutive-generation pair (a, b) is delay[a]-delay[b].
    // Enumerating unordered pairs and emitting both signs with one weight
    // makes the mixture symmetric by construction.
    double zero_w = 0;
    std::vector<std::pair<double, double>> mag;  // (|shift|, weight per sign)
    for (size_t a = 0; a < delay.size(); ++a) {
        zero_w += q[a] * q[a];
        for (size_t b = a + 1; b < delay.size(); ++b) {
            double d = std::abs(delay[a] - delay[b]);
            double w = q[a] * q[b];
            if (d <= merge_tol)
                zero_w += 2 * w;
            else
                mag.emplace_back(d, w);
        }
    }

    std::sort(mag.begin(), mag.end());
    std::vector<std::pair<double, double>> merged;  // weighted-mean magnitude
    double prev = -1;
    for (const auto& [d, w] : mag) {
        if (!merged.empty() && d - prev <= merge_tol) {
            auto& [rd, rw] = merged.back();
            rd = (rd * rw + d * w) / (rw + w);
            rw += w;
        } else {
            merged.emplace_back(d, w);
        }
        prev = d;
    }

    std::vector<ShiftTerm> terms;
    terms.reserve(2 * merged.size() + 1);
    for (auto it = merged.rbegin(); it != merged.rend(); ++it)
        terms.push_back({-it->first, it->second});
    terms.push_back({0.0, zero_w});
    for (const auto& [d, w] : merged) terms.push_back({d, w});

    return ShiftMixture{make_distribution(cls.inter_gen), std::move(terms)};
}

}  // namespace mmtc
