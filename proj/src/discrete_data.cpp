#include "fidelity/discrete_data.hpp"

#include <algorithm>
#include <cmath>

#include "fidelity/special_functions.hpp"

namespace fidelity {

BinnedSample::BinnedSample(std::vector<double> e, std::vector<std::int64_t> c)
    : edges(std::move(e)), counts(std::move(c)) {
    if (edges.size() != counts.size() + 1 || counts.empty()) {
        throw std::domain_error("BinnedSample: need m+1 edges for m >= 1 bins");
    }
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!(edges[i] < edges[i + 1])) {
            throw std::domain_error("BinnedSample: edges must be strictly increasing");
        }
    }
    for (std::int64_t k : counts) {
        if (k < 0) throw std::domain_error("BinnedSample: counts must be >= 0");
    }
    if (total() < 1) throw std::domain_error("BinnedSample: needs at least one count");
}

std::int64_t BinnedSample::total() const {
    std::int64_t t = 0;
    for (std::int64_t k : counts) t += k;
    return t;
}

namespace {

// cdf values at the edges of occupied bins; returns false when an occupied
// bin carries no model mass
struct BinRanges {
    std::vector<double> lo, hi;       // cumulative edges per occupied bin
    std::vector<std::int64_t> count;  // counts per occupied bin
    bool degenerate = false;
};

BinRanges bin_ranges(const ModelDistribution& model, const BinnedSample& data) {
    BinRanges r;
    for (std::size_t k = 0; k < data.bins(); ++k) {
        if (data.counts[k] == 0) continue;
        const double cl = model.cdf_clamped(data.edges[k]);
        const double ch = model.cdf_clamped(data.edges[k + 1]);
        if (!(ch > cl)) r.degenerate = true;
        r.lo.push_back(cl);
        r.hi.push_back(ch);
        r.count.push_back(data.counts[k]);
    }
    return r;
}

} // namespace

std::vector<double> binned_cumulative_estimate(const ModelDistribution& model,
                                               const BinnedSample& data) {
    const auto r = bin_ranges(model, data);
    std::vector<double> c;
    c.reserve(static_cast<std::size_t>(data.total()));
    for (std::size_t b = 0; b < r.count.size(); ++b) {
        const double p = static_cast<double>(r.count[b]);
        for (std::int64_t i = 1; i <= r.count[b]; ++i) {
            c.push_back((static_cast<double>(i) - 0.5) / p * (r.hi[b] - r.lo[b]) + r.lo[b]);
        }
    }
    std::sort(c.begin(), c.end());
    return c;
}

double binned_fidelity_estimate(const ModelDistribution& model, const BinnedSample& data) {
    const auto r = bin_ranges(model, data);
    if (r.degenerate) return neg_inf;
    const auto c = binned_cumulative_estimate(model, data);
    return fidelity_line(c);
}

FidelityReport binned_fidelity_median(const ModelDistribution& model,
                                      const BinnedSample& data, Rng& rng,
                                      std::size_t replicates) {
    if (replicates < 1) throw std::domain_error("binned_fidelity_median: replicates >= 1");
    const auto n = static_cast<std::size_t>(data.total());
    FidelityReport rep;
    rep.n = n;
    rep.geometry = "line";

    const auto r = bin_ranges(model, data);
    if (r.degenerate) {
        rep.f = neg_inf;
        rep.p = 0.0;
        rep.warnings.push_back("occupied bin with zero model mass");
        return rep;
    }

    std::vector<double> f(replicates);
    std::vector<double> c(n);
    for (std::size_t t = 0; t < replicates; ++t) {
        std::size_t j = 0;
        for (std::size_t b = 0; b < r.count.size(); ++b) {
            for (std::int64_t i = 0; i < r.count[b]; ++i) {
                c[j++] = r.lo[b] + (r.hi[b] - r.lo[b]) * uniform01(rng);
            }
        }
        std::sort(c.begin(), c.end());
        f[t] = fidelity_line(c);
    }
    std::sort(f.begin(), f.end());
    // the (replicates+1)/2-th ordered value, e.g. the 500th of 999
    rep.f = f[(replicates - 1) / 2];
    rep.p = p_value(rep.f, null_approx(n, Geometry::Kind::line));
    return rep;
}

// ---------------------------------------------------------------------------
// binary distributions
// ---------------------------------------------------------------------------

namespace {

double log_choose(std::int64_t n, std::int64_t k) {
    return sf::log_gamma(static_cast<double>(n) + 1.0) -
           sf::log_gamma(static_cast<double>(k) + 1.0) -
           sf::log_gamma(static_cast<double>(n - k) + 1.0);
}

double binomial_pmf(std::int64_t n, double q, std::int64_t k) {
    if (q == 0.0) return k == 0 ? 1.0 : 0.0;
    if (q == 1.0) return k == n ? 1.0 : 0.0;
    return std::exp(log_choose(n, k) + static_cast<double>(k) * std::log(q) +
                    static_cast<double>(n - k) * std::log1p(-q));
}

// Kahan-compensated sum of the pmf from 0 through kmax inclusive
double pmf_prefix_sum(std::int64_t n, double q, std::int64_t kmax) {
    double sum = 0.0, comp = 0.0;
    for (std::int64_t k = 0; k <= kmax; ++k) {
        const double term = binomial_pmf(n, q, k);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return std::min(sum, 1.0);
}

} // namespace

BinaryCumulative binomial_cumulative(std::int64_t n, double q, std::int64_t k0) {
    if (n < 1 || k0 < 0 || k0 > n) {
        throw std::domain_error("binomial_cumulative: requires 0 <= k0 <= n, n >= 1");
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw std::domain_error("binomial_cumulative: requires 0 <= q <= 1");
    }
    const double pmf = binomial_pmf(n, q, k0);
    double ch;
    if (k0 == n) {
        ch = 1.0;
    } else if (n > 10000 && q > 0.0 && q < 1.0) {
        // P(X <= k0) = I_{1-q}(n-k0, k0+1)
        ch = sf::regularized_incomplete_beta(static_cast<double>(n - k0),
                                             static_cast<double>(k0) + 1.0, 1.0 - q);
    } else {
        ch = pmf_prefix_sum(n, q, k0);
    }
    const double cl = std::max(0.0, ch - pmf);
    return {cl, 0.5 * (cl + ch), ch};
}

namespace {

// solve g(q) = target for the strictly decreasing cumulative component
// (0 = c_l, 1 = c_m, 2 = c_h)
double solve_decreasing(std::int64_t n, std::int64_t k0, int which, double target) {
    auto value = [&](double q) {
        const auto c = binomial_cumulative(n, q, k0);
        return which == 0 ? c.c_l : (which == 1 ? c.c_m : c.c_h);
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 64; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (value(mid) > target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double solve_binary_q(std::int64_t n, std::int64_t k0) {
    if (n < 1 || k0 < 0 || k0 > n) {
        throw std::domain_error("solve_binary_q: requires 0 <= k0 <= n, n >= 1");
    }
    if (k0 == 0) return 0.0;       // c_m(n,0;0) = 1/2 already
    if (k0 == n) return 1.0;       // symmetric upper boundary
    if (2 * k0 == n) return 0.5;   // exact by symmetry
    return solve_decreasing(n, k0, 1, 0.5);
}

BinaryInterval binary_interval(std::int64_t n, std::int64_t k0, double level,
                               IntervalMode mode) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::domain_error("binary_interval: requires 0 < level < 1");
    }
    if (n < 1 || k0 < 0 || k0 > n) {
        throw std::domain_error("binary_interval: requires 0 <= k0 <= n, n >= 1");
    }
    const double hi_target = 0.5 * (1.0 + level);
    const double lo_target = 0.5 * (1.0 - level);

    BinaryInterval out{0.0, 1.0, false, false};
    if (mode == IntervalMode::midpoint) {
        // c_m spans (0.5, ...] only away from the boundaries
        if (k0 == 0) {
            out.lo_one_sided = true;
        } else {
            out.q_lo = solve_decreasing(n, k0, 1, hi_target);
        }
        if (k0 == n) {
            out.hi_one_sided = true;
        } else {
            out.q_hi = solve_decreasing(n, k0, 1, lo_target);
        }
        return out;
    }
    // exact mode: bin edges instead of the midpoint
    if (k0 == 0) {
        out.lo_one_sided = true;
        out.q_hi = solve_decreasing(n, k0, 2, lo_target); // c_l is identically 0
    } else if (k0 == n) {
        out.hi_one_sided = true;
        out.q_lo = solve_decreasing(n, k0, 0, hi_target); // c_h is identically 1
    } else {
        out.q_lo = solve_decreasing(n, k0, 2, hi_target);
        out.q_hi = solve_decreasing(n, k0, 0, lo_target);
    }
    return out;
}

} // namespace fidelity
