#include "fidelity/multidim.hpp"

#include <algorithm>
#include <cmath>

namespace fidelity {

TransformMethod transform_method_from_string(const std::string& name) {
    std::string low = name;
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    std::replace(low.begin(), low.end(), '-', '_');
    if (low == "r_theta" || low == "rtheta") return TransformMethod::r_theta;
    if (low == "model_xy" || low == "xy") return TransformMethod::model_xy;
    if (low == "coordinate_xy" || low == "coord_xy") return TransformMethod::coordinate_xy;
    throw data_error("unknown 2D transform method: " + name);
}

const char* to_string(TransformMethod m) {
    switch (m) {
        case TransformMethod::r_theta: return "r-theta";
        case TransformMethod::model_xy: return "model-xy";
        case TransformMethod::coordinate_xy: return "coordinate-xy";
    }
    return "?";
}

Model2D::Model2D(double x0_, double y0_, double a_, double b_, double phi_)
    : x0(x0_), y0(y0_), a(a_), b(b_), phi(phi_) {
    if (!(b > 0.0) || !(a >= b)) {
        throw std::domain_error("Model2D: requires a >= b > 0");
    }
    if (a == b) {
        phi = 0.0; // major axis undefined; fix the convention
    } else {
        phi = std::fmod(phi, M_PI);
        if (phi < 0.0) phi += M_PI;
    }
}

double Model2D::axis_cdf(double) const {
    throw data_error("model does not admit the model-xy transform");
}
double Model2D::marginal_cdf_x(double) const {
    throw data_error("model does not admit the coordinate-xy transform");
}
double Model2D::marginal_cdf_y(double) const {
    throw data_error("model does not admit the coordinate-xy transform");
}

void Model2D::to_symmetric(const Point2D& p, double& r, double& theta) const {
    const double dx = p.x - x0;
    const double dy = p.y - y0;
    const double c = std::cos(phi), s = std::sin(phi);
    const double u = (dx * c + dy * s) / a;
    const double v = (-dx * s + dy * c) / b;
    r = std::hypot(u, v);
    theta = std::atan2(v, u);
    if (theta < 0.0) theta += 2.0 * M_PI;
}

Point2D Model2D::from_symmetric(double r, double theta) const {
    const double u = a * r * std::cos(theta);
    const double v = b * r * std::sin(theta);
    const double c = std::cos(phi), s = std::sin(phi);
    return {x0 + u * c - v * s, y0 + u * s + v * c};
}

double Gauss2D::marginal_cdf_x(double x) const {
    const double c = std::cos(phi), s = std::sin(phi);
    const double sx = std::sqrt(a * a * c * c + b * b * s * s);
    return 0.5 * std::erfc(-(x - x0) / sx * M_SQRT1_2);
}

double Gauss2D::marginal_cdf_y(double y) const {
    const double c = std::cos(phi), s = std::sin(phi);
    const double sy = std::sqrt(a * a * s * s + b * b * c * c);
    return 0.5 * std::erfc(-(y - y0) / sy * M_SQRT1_2);
}

double Exponential2D::radial_quantile(double c) const {
    if (!(c > 0.0 && c < 1.0)) {
        throw std::domain_error("radial_quantile: requires 0 < c < 1");
    }
    // Newton on 1-(1+r)e^{-r} = c with a bisection safety bracket
    double lo = 0.0, hi = 1.0;
    while (radial_cdf(hi) < c) hi *= 2.0;
    double r = 0.5 * hi;
    for (int it = 0; it < 100; ++it) {
        const double fr = radial_cdf(r) - c;
        if (std::abs(fr) < 1e-14) break;
        if (fr > 0.0) hi = r; else lo = r;
        const double pdf = r * std::exp(-r);
        double nr = pdf > 0.0 ? r - fr / pdf : 0.5 * (lo + hi);
        if (!(nr > lo && nr < hi)) nr = 0.5 * (lo + hi);
        r = nr;
    }
    return r;
}

std::pair<CumulativeVector, CumulativeVector> inverse_map_2d(const Model2D& model,
                                                             std::span<const Point2D> pts,
                                                             TransformMethod method) {
    if (pts.empty()) throw std::domain_error("inverse_map_2d: point set must be nonempty");

    CumulativeVector first, second;
    first.geometry = Geometry::Kind::line;
    second.geometry =
        method == TransformMethod::r_theta ? Geometry::Kind::circle : Geometry::Kind::line;
    first.c.reserve(pts.size());
    second.c.reserve(pts.size());

    switch (method) {
        case TransformMethod::r_theta: {
            for (const auto& p : pts) {
                double r, th;
                model.to_symmetric(p, r, th);
                first.c.push_back(model.radial_cdf(r));
                second.c.push_back(th / (2.0 * M_PI));
            }
            break;
        }
        case TransformMethod::model_xy: {
            if (!model.product_form()) {
                throw data_error("model does not admit the model-xy transform");
            }
            const double c = std::cos(model.phi), s = std::sin(model.phi);
            for (const auto& p : pts) {
                const double dx = p.x - model.x0;
                const double dy = p.y - model.y0;
                first.c.push_back(model.axis_cdf((dx * c + dy * s) / model.a));
                second.c.push_back(model.axis_cdf((-dx * s + dy * c) / model.b));
            }
            break;
        }
        case TransformMethod::coordinate_xy: {
            if (!model.has_marginals()) {
                throw data_error("model does not admit the coordinate-xy transform");
            }
            for (const auto& p : pts) {
                first.c.push_back(model.marginal_cdf_x(p.x));
                second.c.push_back(model.marginal_cdf_y(p.y));
            }
            break;
        }
    }
    std::sort(first.c.begin(), first.c.end());
    std::sort(second.c.begin(), second.c.end());
    return {std::move(first), std::move(second)};
}

FidelityReport concordance_2d(const Model2D& model, std::span<const Point2D> pts,
                              TransformMethod method) {
    const auto [ca, cb] = inverse_map_2d(model, pts, method);
    const JointComponent parts[2] = {
        {fidelity_statistic(ca), ca.size(), ca.geometry},
        {fidelity_statistic(cb), cb.size(), cb.geometry},
    };
    auto rep = joint_fidelity(parts);
    auto warn = degeneracy_warnings(ca);
    auto warn2 = degeneracy_warnings(cb);
    rep.warnings.insert(rep.warnings.end(), warn.begin(), warn.end());
    rep.warnings.insert(rep.warnings.end(), warn2.begin(), warn2.end());
    return rep;
}

PointSet2D sample_2d(const Model2D& model, std::size_t n, Rng& rng) {
    if (n < 1) throw std::domain_error("sample_2d: requires n >= 1");
    PointSet2D out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = model.radial_quantile(uniform01(rng));
        const double th = 2.0 * M_PI * uniform01(rng);
        out.push_back(model.from_symmetric(r, th));
    }
    return out;
}

} // namespace fidelity
