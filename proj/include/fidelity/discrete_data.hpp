#pragma once

#include <cstdint>
#include <vector>

#include "fidelity/fidelity_core.hpp"

namespace fidelity {

// Histogrammed observations on the line: m+1 strictly increasing edges, m
// nonnegative counts with at least one occupied bin.
struct BinnedSample {
    std::vector<double> edges;
    std::vector<std::int64_t> counts;

    BinnedSample(std::vector<double> e, std::vector<std::int64_t> c);
    std::size_t bins() const { return counts.size(); }
    std::int64_t total() const;
};

// Monte Carlo method: each replicate assigns every point a uniform random
// cumulative value between its bin's cdf edges; the median fidelity over the
// replicates (the 500th ordered value for the default 999) is converted to p
// with the standard n-point null.
FidelityReport binned_fidelity_median(const ModelDistribution& model,
                                      const BinnedSample& data, Rng& rng,
                                      std::size_t replicates = 999);

// Deterministic estimate: the p points of bin k are spread evenly over the
// bin's cumulative range, c_{j+i} = ((i-1/2)/p)(c_k^u - c_k^l) + c_k^l.
double binned_fidelity_estimate(const ModelDistribution& model, const BinnedSample& data);

// The cumulative values used by both binned methods (estimate spacing);
// exposed for tests.
std::vector<double> binned_cumulative_estimate(const ModelDistribution& model,
                                               const BinnedSample& data);

struct BinaryCumulative {
    double c_l; // sum of the pmf below k0
    double c_m; // midpoint of the k0 interval, (c_l + c_h)/2
    double c_h; // sum of the pmf through k0
};

// Partial binomial sums at the observed count, computed with log-space
// binomial coefficients; for n > 10^4 the tail identity
// c_h = I_{1-q}(n-k0, k0+1) (regularized incomplete beta) is used instead.
BinaryCumulative binomial_cumulative(std::int64_t n, double q, std::int64_t k0);

// The q that centers the cumulative interval: c_m(n, q; k0) = 1/2, by
// bisection (c_m is strictly decreasing in q). k0 = 0 -> 0, k0 = n -> 1,
// 2 k0 = n -> exactly 1/2.
double solve_binary_q(std::int64_t n, std::int64_t k0);

enum class IntervalMode { midpoint, exact };

struct BinaryInterval {
    double q_lo;
    double q_hi;
    bool lo_one_sided; // q_lo pinned at 0 (k0 = 0)
    bool hi_one_sided; // q_hi pinned at 1 (k0 = n)
};

// mode = exact: c_h = (1+level)/2 fixes q_lo and c_l = (1-level)/2 fixes
// q_hi. mode = midpoint: both thresholds applied to c_m. At k0 = 0 (resp.
// k0 = n) the interval is one-sided: the boundary-side limit is pinned and
// the attainable side falls back to c_h (resp. c_l) when its own function is
// degenerate there.
BinaryInterval binary_interval(std::int64_t n, std::int64_t k0, double level,
                               IntervalMode mode);

} // namespace fidelity
