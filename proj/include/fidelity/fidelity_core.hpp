#pragma once

#include <span>
#include <string>
#include <vector>

#include "fidelity/distributions.hpp"
#include "fidelity/sample.hpp"

namespace fidelity {

// f_n on the line: half-weight boundary intervals, full-weight interior
// intervals. Returns -inf when an interval collapses (ties, or data mapped
// exactly onto a support boundary).
double fidelity_line(std::span<const double> c);

// f_n on the circle: the two boundary pieces merge into one wrap interval.
double fidelity_circle(std::span<const double> c);

// The older spacings statistic: equal weight 1/(n+1) on all n+1 intervals.
double spacings_line(std::span<const double> c);

double fidelity_statistic(const CumulativeVector& cv);

// f = sum_b R_b ln(Q_b / R_b) with 0 ln(Q/0) := 0. R and Q must each sum to
// 1 within 1e-12; a bin with Q_b = 0 and R_b > 0 makes f = -inf.
double discrete_fidelity(std::span<const double> R, std::span<const double> Q);

enum class NullStatistic { fidelity, spacings };

enum class PValueRule { exact_sqrt, exponential, gamma, trivial };

// Exact first two null cumulants from the polygamma formulas.
struct NullMoments {
    double mu;
    double sigma2;
};
NullMoments null_moments(std::size_t n, Geometry::Kind geometry,
                         NullStatistic statistic = NullStatistic::fidelity);

// Per-(n, geometry) record backing the p-value conversion. alpha/beta are
// NaN for the trivial rule (circle n=1).
struct NullApprox {
    std::size_t n;
    Geometry::Kind geometry;
    double mu;
    double sigma2;
    double alpha; // mu^2 / sigma^2
    double beta;  // -mu / sigma^2
    PValueRule rule;
};

// Memoized: concurrent readers allowed, single writer on a cache miss.
const NullApprox& null_approx(std::size_t n, Geometry::Kind geometry);

// Converts an observed fidelity to its absolute concordance.
// Rules: gamma -> Q(alpha, -beta f); exact_sqrt -> 1 - sqrt(1 - e^{2f});
// exponential -> exp(-f/mu); trivial -> 1. p(-inf) = 0.
// f must be <= 0 (values in (0, 1e-9] are clamped to 0 to absorb roundoff
// from exactly-equally-spaced configurations).
double p_value(double f, const NullApprox& approx);

struct JointComponent {
    double f;
    std::size_t n;
    Geometry::Kind geometry;
};

struct FidelityReport {
    double f = 0.0;
    double p = 1.0;
    std::size_t n = 0;
    std::string geometry;                 // "line", "circle" or "joint"
    std::vector<JointComponent> composition; // joint reports only
    std::vector<std::string> warnings;
};

// Degeneracy diagnostics: names tied cumulative values and boundary hits.
std::vector<std::string> degeneracy_warnings(const CumulativeVector& cv);

// cumulative_map + fidelity + null_approx + p_value in one step.
FidelityReport concordance(const ModelDistribution& model, const Sample& sample);

// Weighted combination of independent analyses:
//   f = (1/n) sum n_i f_i,  mu = (1/n) sum n_i mu_i,
//   sigma^2 = (1/n^2) sum n_i^2 sigma_i^2,  n = sum n_i,
// scored with Q(mu^2/sigma^2, mu f / sigma^2). Three small compositions use
// the exponential rule instead: {line1+line1, line1+circle2,
// circle2+circle2}. A single component reduces to its own p_value rule.
FidelityReport joint_fidelity(std::span<const JointComponent> parts);

} // namespace fidelity
