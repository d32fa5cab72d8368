#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fidelity/fidelity_core.hpp"

namespace fidelity {

struct Point2D {
    double x;
    double y;
};

using PointSet2D = std::vector<Point2D>;

enum class TransformMethod { r_theta, model_xy, coordinate_xy };

TransformMethod transform_method_from_string(const std::string& name);
const char* to_string(TransformMethod m);

// Elliptically symmetric 2D model: a radial profile stretched along
// major/minor axes a >= b > 0, rotated by phi in [0, pi) and translated to
// (x0, y0). When a = b the major axis is undefined and phi is fixed at 0
// (the scores are invariant to that choice; only the emitted c_theta values
// depend on it).
class Model2D {
public:
    Model2D(double x0, double y0, double a, double b, double phi);
    virtual ~Model2D() = default;

    // cdf/quantile of the radial coordinate in the unit-symmetric frame
    virtual double radial_cdf(double r) const = 0;
    virtual double radial_quantile(double c) const = 0;

    // the x-y decomposition in the unrotated frame (model_xy transform);
    // only product-form models (the Gaussian) support it
    virtual bool product_form() const { return false; }
    virtual double axis_cdf(double z) const; // cdf of one unrotated coordinate / scale

    // marginal cdfs of the full model projected on raw x / y
    // (coordinate_xy transform)
    virtual bool has_marginals() const { return false; }
    virtual double marginal_cdf_x(double x) const;
    virtual double marginal_cdf_y(double y) const;

    double x0, y0, a, b, phi;

    // physical point -> (r, theta) in the unit-symmetric frame; theta in
    // [0, 2pi) measured from the major axis
    void to_symmetric(const Point2D& p, double& r, double& theta) const;
    Point2D from_symmetric(double r, double theta) const;
};

struct Gauss2D final : Model2D {
    using Model2D::Model2D;
    double radial_cdf(double r) const override { return -std::expm1(-0.5 * r * r); }
    double radial_quantile(double c) const override {
        return std::sqrt(-2.0 * std::log1p(-c));
    }
    bool product_form() const override { return true; }
    double axis_cdf(double z) const override { return 0.5 * std::erfc(-z * M_SQRT1_2); }
    bool has_marginals() const override { return true; }
    double marginal_cdf_x(double x) const override;
    double marginal_cdf_y(double y) const override;
};

// Elliptical contours with radial profile e^{-r}; radial cdf 1-(1+r)e^{-r},
// inverted numerically.
struct Exponential2D final : Model2D {
    using Model2D::Model2D;
    double radial_cdf(double r) const override {
        return r <= 0.0 ? 0.0 : 1.0 - (1.0 + r) * std::exp(-r);
    }
    double radial_quantile(double c) const override;
};

// Maps observed points to cumulative coordinates under the hypothesized
// model. r_theta: (c_r on the line, c_theta on the circle). model_xy /
// coordinate_xy: (c_x, c_y), both on the line.
std::pair<CumulativeVector, CumulativeVector> inverse_map_2d(const Model2D& model,
                                                             std::span<const Point2D> pts,
                                                             TransformMethod method);

// Joint fidelity over the two mapped coordinates.
FidelityReport concordance_2d(const Model2D& model, std::span<const Point2D> pts,
                              TransformMethod method);

// Forward Monte Carlo draw (inverse transform in r, uniform in theta).
PointSet2D sample_2d(const Model2D& model, std::size_t n, Rng& rng);

} // namespace fidelity
