#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fidelity/common.hpp"
#include "fidelity/sample.hpp"

namespace fidelity {

enum class Family {
    // circle
    theta,
    von_mises,
    wrapped_laplace,
    // line
    beta,
    cauchy,
    exponential,
    extreme_value,
    f_ratio,
    gamma,
    gauss,
    inverse_gamma,
    laplace,
    levy,
    logistic,
    pareto,
    rayleigh,
    student,
    weibull,
    // either geometry
    uniform,
    binomial,
    user_defined,
};

const char* to_string(Family f);
Family family_from_string(const std::string& name);

using ParamMap = std::map<std::string, double>;

struct Interval {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

// Metadata used to build default fit boxes and validate parameters.
struct ParamInfo {
    std::string name;
    double default_value;
    // admissible open/closed lower bound; shape-like parameters are fit on a
    // log scale by default, location-like on a linear scale.
    bool positive;   // requires value > 0
    bool location;   // location-like (linear default scale)
};

// Immutable parametrized probability model with pdf, cdf, quantile and
// inverse-transform sampling. Values are cheap to copy (shared immutable
// implementation); safe to use from multiple threads.
//
// Conventions:
//  - on the line, cdf(x) = P(X <= x);
//  - on the circle, cdf is measured from the model's declared origin
//    (the location parameter where the family has one), and the argument is
//    reduced mod period first;
//  - families without a closed-form cdf integrate the pdf over a cached
//    1024-cell grid; the cached node values are combined with local
//    Gauss-Legendre quadrature so cdf/quantile round-trips hold to ~1e-12
//    (plain interpolation between nodes cannot guarantee that for peaked
//    densities);
//  - pdfs are renormalized by the numerically integrated total where a grid
//    is in use, so user-supplied pdfs need not integrate exactly to 1.
class ModelDistribution {
public:
    using DensityFn = std::function<double(double)>;

    static ModelDistribution make(Family family, const ParamMap& params);
    static ModelDistribution user_defined(DensityFn pdf, std::optional<DensityFn> cdf,
                                          Interval domain, Geometry geometry);

    // "family=gauss,beta=0,alpha=1" (comma or whitespace separated);
    // family-specific aliases are accepted (e.g. mu/sigma for gauss).
    static ModelDistribution parse(const std::string& spec);

    double pdf(double x) const;
    double cdf(double x) const;
    // cdf extended beyond the support by 0/1 (used for binning, where edges
    // may extend past the support).
    double cdf_clamped(double x) const;
    double quantile(double c) const;

    Sample sample(std::size_t n, Rng& rng) const;
    CumulativeVector cumulative_map(const Sample& s) const;

    const Geometry& geometry() const;
    Interval domain() const;
    Family family() const;
    const ParamMap& params() const;

    // Same family/geometry with some parameters replaced.
    ModelDistribution with_params(const ParamMap& overrides) const;

    // Parameter metadata for the family (empty for user_defined).
    static std::vector<ParamInfo> param_info(Family family);
    // Canonical parameter name for a possibly aliased name (e.g. "mu" ->
    // "beta" for gauss); returns the input when no alias applies.
    static std::string canonical_param(Family family, const std::string& name);

    struct Impl;

private:
    explicit ModelDistribution(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

} // namespace fidelity
