#include "fidelity/fidelity_core.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "fidelity/special_functions.hpp"

namespace fidelity {

namespace {

double log_or_neg_inf(double v) {
    return v > 0.0 ? std::log(v) : neg_inf;
}

void check_cumulative(std::span<const double> c) {
    if (c.empty()) throw std::domain_error("fidelity: requires n >= 1");
    double prev = 0.0;
    for (double v : c) {
        if (!(v >= prev) || !(v <= 1.0)) {
            throw std::domain_error("fidelity: cumulative values must be sorted in [0,1]");
        }
        prev = v;
    }
}

} // namespace

double fidelity_line(std::span<const double> c) {
    check_cumulative(c);
    const double n = static_cast<double>(c.size());
    double f = 0.5 / n * log_or_neg_inf(2.0 * n * c.front()) +
               0.5 / n * log_or_neg_inf(2.0 * n * (1.0 - c.back()));
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        f += log_or_neg_inf(n * (c[i + 1] - c[i])) / n;
    }
    return f;
}

double fidelity_circle(std::span<const double> c) {
    check_cumulative(c);
    const double n = static_cast<double>(c.size());
    double f = log_or_neg_inf(n * ((1.0 - c.back()) + c.front())) / n;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        f += log_or_neg_inf(n * (c[i + 1] - c[i])) / n;
    }
    return f;
}

double spacings_line(std::span<const double> c) {
    check_cumulative(c);
    const double m = static_cast<double>(c.size()) + 1.0;
    double s = log_or_neg_inf(m * c.front()) / m +
               log_or_neg_inf(m * (1.0 - c.back())) / m;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        s += log_or_neg_inf(m * (c[i + 1] - c[i])) / m;
    }
    return s;
}

double fidelity_statistic(const CumulativeVector& cv) {
    return cv.geometry == Geometry::Kind::circle ? fidelity_circle(cv.c)
                                                 : fidelity_line(cv.c);
}

double discrete_fidelity(std::span<const double> R, std::span<const double> Q) {
    if (R.size() != Q.size()) {
        throw std::domain_error("discrete_fidelity: R and Q must have the same length");
    }
    double sr = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < R.size(); ++i) {
        sr += R[i];
        sq += Q[i];
    }
    if (std::abs(sr - 1.0) > 1e-12 || std::abs(sq - 1.0) > 1e-12) {
        throw std::domain_error("discrete_fidelity: R and Q must each sum to 1");
    }
    double f = 0.0;
    for (std::size_t i = 0; i < R.size(); ++i) {
        if (R[i] == 0.0) continue;
        if (Q[i] <= 0.0) return neg_inf;
        f += R[i] * std::log(Q[i] / R[i]);
    }
    return f;
}

NullMoments null_moments(std::size_t n, Geometry::Kind geometry, NullStatistic statistic) {
    if (n < 1) throw std::domain_error("null_moments: requires n >= 1");
    const double dn = static_cast<double>(n);
    const double pi2_6 = M_PI * M_PI / 6.0;
    if (statistic == NullStatistic::spacings && geometry == Geometry::Kind::line) {
        const double m = dn + 1.0;
        return {-sf::euler_gamma + (std::log(m) - sf::digamma(m)),
                (pi2_6 - 1.0 - (m * sf::trigamma(m) - 1.0)) / m};
    }
    // the circular spacings statistic coincides with the circular fidelity
    if (geometry == Geometry::Kind::circle) {
        return {-sf::euler_gamma + (std::log(dn) - sf::digamma(dn)),
                (pi2_6 - 1.0 - (dn * sf::trigamma(dn) - 1.0)) / dn};
    }
    return {-sf::euler_gamma + (std::log(dn) - sf::digamma(dn + 1.0) + std::log(2.0) / dn),
            (pi2_6 - 1.0 -
             (dn * sf::trigamma(dn + 1.0) - 1.0 + M_PI * M_PI / (12.0 * dn))) /
                dn};
}

namespace {

NullApprox make_null_approx(std::size_t n, Geometry::Kind geometry) {
    NullApprox a;
    a.n = n;
    a.geometry = geometry;
    const bool circle = geometry == Geometry::Kind::circle;
    if (circle && n == 1) {
        a.mu = 0.0;
        a.sigma2 = 0.0;
        a.alpha = a.beta = std::numeric_limits<double>::quiet_NaN();
        a.rule = PValueRule::trivial;
        return a;
    }
    const auto m = null_moments(n, geometry);
    a.mu = m.mu;
    a.sigma2 = m.sigma2;
    a.alpha = m.mu * m.mu / m.sigma2;
    a.beta = -m.mu / m.sigma2;
    if ((circle && n == 2) || (!circle && n == 1)) {
        a.rule = PValueRule::exact_sqrt;
    } else if ((circle && n == 3) || (!circle && n == 2)) {
        a.rule = PValueRule::exponential;
    } else {
        a.rule = PValueRule::gamma;
    }
    return a;
}

} // namespace

const NullApprox& null_approx(std::size_t n, Geometry::Kind geometry) {
    static std::map<std::pair<std::size_t, int>, NullApprox> cache;
    static std::shared_mutex mutex;
    const auto key = std::make_pair(n, static_cast<int>(geometry));
    {
        std::shared_lock lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    std::unique_lock lock(mutex);
    return cache.try_emplace(key, make_null_approx(n, geometry)).first->second;
}

double p_value(double f, const NullApprox& approx) {
    if (f > 0.0) {
        if (f > 1e-9) throw std::domain_error("p_value: requires f <= 0");
        f = 0.0;
    }
    if (std::isinf(f)) return 0.0;
    switch (approx.rule) {
        case PValueRule::trivial: return 1.0;
        case PValueRule::exact_sqrt: {
            const double e = std::exp(2.0 * f);
            return 1.0 - std::sqrt(std::max(0.0, 1.0 - e));
        }
        case PValueRule::exponential: return std::exp(-f / approx.mu);
        case PValueRule::gamma: return sf::regularized_gamma_q(approx.alpha, -approx.beta * f);
    }
    return 0.0;
}

std::vector<std::string> degeneracy_warnings(const CumulativeVector& cv) {
    std::vector<std::string> out;
    char buf[128];
    const auto& c = cv.c;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        if (c[i + 1] - c[i] <= 0.0) {
            std::snprintf(buf, sizeof(buf),
                          "tied cumulative values at sorted indices %zu,%zu (c=%.12g)", i,
                          i + 1, c[i]);
            out.emplace_back(buf);
        }
    }
    if (cv.geometry == Geometry::Kind::line) {
        if (!c.empty() && c.front() <= 0.0) {
            out.emplace_back("data point at the lower support boundary (c=0)");
        }
        if (!c.empty() && c.back() >= 1.0) {
            out.emplace_back("data point at the upper support boundary (c=1)");
        }
    } else if (!c.empty() && c.back() - c.front() >= 1.0) {
        out.emplace_back("wrap interval collapsed on the circle");
    }
    return out;
}

FidelityReport concordance(const ModelDistribution& model, const Sample& sample) {
    const CumulativeVector cv = model.cumulative_map(sample);
    FidelityReport rep;
    rep.n = cv.size();
    rep.geometry = to_string(cv.geometry);
    rep.f = fidelity_statistic(cv);
    rep.p = p_value(rep.f, null_approx(cv.size(), cv.geometry));
    rep.warnings = degeneracy_warnings(cv);
    return rep;
}

FidelityReport joint_fidelity(std::span<const JointComponent> parts) {
    if (parts.empty()) throw std::domain_error("joint_fidelity: requires >= 1 component");

    FidelityReport rep;
    rep.geometry = "joint";
    rep.composition.assign(parts.begin(), parts.end());

    if (parts.size() == 1) {
        const auto& c = parts.front();
        rep.f = c.f;
        rep.n = c.n;
        rep.p = p_value(c.f, null_approx(c.n, c.geometry));
        return rep;
    }

    double n = 0.0, fsum = 0.0, musum = 0.0, s2sum = 0.0;
    for (const auto& c : parts) {
        if (c.n < 1) throw std::domain_error("joint_fidelity: component n must be >= 1");
        const double ni = static_cast<double>(c.n);
        const auto m = null_moments(c.n, c.geometry);
        n += ni;
        fsum += ni * c.f;
        musum += ni * m.mu;
        s2sum += ni * ni * m.sigma2;
    }
    const double f = fsum / n;
    const double mu = musum / n;
    const double s2 = s2sum / (n * n);
    rep.f = f;
    rep.n = static_cast<std::size_t>(n);

    // the three small compositions where the gamma form is replaced by the
    // exponential rule
    auto is_pair = [&](std::size_t n1, Geometry::Kind g1, std::size_t n2,
                       Geometry::Kind g2) {
        if (parts.size() != 2) return false;
        const auto& a = parts[0];
        const auto& b = parts[1];
        return (a.n == n1 && a.geometry == g1 && b.n == n2 && b.geometry == g2) ||
               (a.n == n2 && a.geometry == g2 && b.n == n1 && b.geometry == g1);
    };
    const auto line = Geometry::Kind::line;
    const auto circ = Geometry::Kind::circle;
    const bool exceptional = is_pair(1, line, 1, line) || is_pair(1, line, 2, circ) ||
                             is_pair(2, circ, 2, circ);

    double fc = f;
    if (fc > 0.0) {
        if (fc > 1e-9) throw std::domain_error("joint_fidelity: requires f <= 0");
        fc = 0.0;
    }
    if (std::isinf(fc)) {
        rep.p = 0.0;
    } else if (s2 == 0.0) {
        // all components trivial (circle n=1)
        rep.p = 1.0;
    } else if (exceptional) {
        rep.p = std::exp(-fc / mu);
    } else {
        rep.p = sf::regularized_gamma_q(mu * mu / s2, mu * fc / s2);
    }
    return rep;
}

} // namespace fidelity
