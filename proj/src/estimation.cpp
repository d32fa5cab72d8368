#include "fidelity/estimation.hpp"

#include <algorithm>
#include <cmath>

namespace fidelity {

namespace {

double unscale_axis(const AxisSpec& ax, double t) {
    t = std::clamp(t, 0.0, 1.0);
    if (ax.scale == AxisScale::log) {
        return ax.lower * std::pow(ax.upper / ax.lower, t);
    }
    return ax.lower + (ax.upper - ax.lower) * t;
}

void validate_box(const ParamBox& box) {
    if (box.axes.empty()) throw std::domain_error("fit: parameter box is empty");
    for (const auto& ax : box.axes) {
        if (!(ax.lower < ax.upper)) {
            throw std::domain_error("fit: axis '" + ax.name + "' needs lower < upper");
        }
        if (ax.scale == AxisScale::log && !(ax.lower > 0.0)) {
            throw std::domain_error("fit: log axis '" + ax.name + "' needs lower > 0");
        }
        if (ax.resolution < 2) {
            throw std::domain_error("fit: axis '" + ax.name + "' needs resolution >= 2");
        }
    }
}

} // namespace

OptimizeResult optimize_scaled(const std::function<double(std::span<const double>)>& objective,
                               Sense sense, const std::vector<int>& resolution,
                               double simplex_tolerance, int max_iterations) {
    const std::size_t dim = resolution.size();
    const double sign = sense == Sense::maximize ? 1.0 : -1.0;
    std::size_t evaluations = 0;
    auto eval = [&](std::span<const double> t) {
        ++evaluations;
        const double v = objective(t);
        return std::isnan(v) ? neg_inf : sign * v;
    };

    // grid scan; strict improvement keeps the lowest linear index on plateaus
    std::size_t cells = 1;
    for (int r : resolution) cells *= static_cast<std::size_t>(r);
    std::vector<double> t(dim), best_t(dim);
    double best = neg_inf;
    bool found = false;
    for (std::size_t idx = 0; idx < cells; ++idx) {
        std::size_t rem = idx;
        for (std::size_t d = dim; d-- > 0;) {
            const int r = resolution[d];
            t[d] = static_cast<double>(rem % r) / (r - 1);
            rem /= r;
        }
        const double v = eval(t);
        if (v > best || (!found && v == best)) {
            best = v;
            best_t = t;
            found = true;
        }
    }
    if (!found || std::isinf(best)) {
        throw no_fit_error("every candidate in the parameter box is degenerate");
    }

    // Nelder-Mead refinement, clamped to the unit box
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, shrink = 0.5;
    std::vector<std::vector<double>> vx(dim + 1, best_t);
    std::vector<double> vf(dim + 1);
    for (std::size_t d = 0; d < dim; ++d) {
        const double h = 1.0 / (resolution[d] - 1);
        vx[d + 1][d] = std::clamp(best_t[d] + (best_t[d] + h <= 1.0 ? h : -h), 0.0, 1.0);
    }
    for (std::size_t i = 0; i <= dim; ++i) vf[i] = eval(vx[i]);

    auto order = [&] {
        std::vector<std::size_t> idx(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return vf[a] > vf[b];
        });
        std::vector<std::vector<double>> nx(dim + 1);
        std::vector<double> nf(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) {
            nx[i] = vx[idx[i]];
            nf[i] = vf[idx[i]];
        }
        vx.swap(nx);
        vf.swap(nf);
    };

    for (int it = 0; it < max_iterations; ++it) {
        order();
        double diameter = 0.0;
        for (std::size_t i = 1; i <= dim; ++i) {
            for (std::size_t d = 0; d < dim; ++d) {
                diameter = std::max(diameter, std::abs(vx[i][d] - vx[0][d]));
            }
        }
        if (diameter < simplex_tolerance) break;

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t d = 0; d < dim; ++d) centroid[d] += vx[i][d] / dim;
        }
        auto blend = [&](double coef) {
            std::vector<double> p(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                p[d] = std::clamp(centroid[d] + coef * (centroid[d] - vx[dim][d]), 0.0, 1.0);
            }
            return p;
        };

        auto xr = blend(alpha);
        const double fr = eval(xr);
        if (fr > vf[0]) {
            auto xe = blend(gamma);
            const double fe = eval(xe);
            if (fe > fr) {
                vx[dim] = xe;
                vf[dim] = fe;
            } else {
                vx[dim] = xr;
                vf[dim] = fr;
            }
        } else if (fr > vf[dim - 1]) {
            vx[dim] = xr;
            vf[dim] = fr;
        } else {
            auto xc = blend(-rho);
            const double fc = eval(xc);
            if (fc > vf[dim]) {
                vx[dim] = xc;
                vf[dim] = fc;
            } else {
                for (std::size_t i = 1; i <= dim; ++i) {
                    for (std::size_t d = 0; d < dim; ++d) {
                        vx[i][d] = vx[0][d] + shrink * (vx[i][d] - vx[0][d]);
                    }
                    vf[i] = eval(vx[i]);
                }
            }
        }
    }
    order();

    OptimizeResult out;
    out.scaled = vx[0];
    out.value = sign * vf[0];
    out.evaluations = evaluations;
    return out;
}

AxisSpec default_axis(Family family, const std::string& param, double base_value,
                      const Sample& sample) {
    AxisSpec ax;
    ax.name = param;
    const auto infos = ModelDistribution::param_info(family);
    const std::string canon = ModelDistribution::canonical_param(family, param);
    const ParamInfo* info = nullptr;
    for (const auto& pi : infos) {
        if (pi.name == canon) info = &pi;
    }
    if (!info) throw data_error("family has no parameter named '" + param + "'");

    if (info->location && !info->positive) {
        const auto [mn, mx] =
            std::minmax_element(sample.values.begin(), sample.values.end());
        double span = *mx - *mn;
        if (!(span > 0.0)) span = std::max(1.0, std::abs(*mn));
        ax.lower = *mn - span;
        ax.upper = *mx + span;
        ax.scale = AxisScale::linear;
        // location parameters that double as a support edge must stay below
        // the smallest observation
        if (family == Family::levy) ax.upper = *mn - 1e-9 * std::max(1.0, std::abs(*mn));
        return ax;
    }
    // shape-like: +-1.5 decades around the base value
    if (!(base_value > 0.0)) {
        throw std::domain_error("default_axis: shape parameter needs a positive base value");
    }
    ax.scale = AxisScale::log;
    ax.lower = base_value * std::pow(10.0, -1.5);
    ax.upper = base_value * std::pow(10.0, 1.5);
    if (family == Family::pareto && canon == "beta") {
        // scale doubles as the support minimum
        const double mn = *std::min_element(sample.values.begin(), sample.values.end());
        ax.upper = std::min(ax.upper, mn);
        ax.lower = std::min(ax.lower, ax.upper / 31.622776601683793);
    }
    return ax;
}

namespace {

struct BoxMapping {
    const ParamBox* box;
    Family family;
    const ParamMap* base;

    ParamMap params_at(std::span<const double> t) const {
        ParamMap p = *base;
        for (std::size_t d = 0; d < box->axes.size(); ++d) {
            p[ModelDistribution::canonical_param(family, box->axes[d].name)] =
                unscale_axis(box->axes[d], t[d]);
        }
        return p;
    }
};

} // namespace

FitResult fit(StatisticId statistic, Family family, const ParamMap& base,
              const ParamBox& box, const Sample& sample, const FitOptions& opts) {
    validate_box(box);
    if (sample.size() == 0) throw std::domain_error("fit: sample must be nonempty");

    BoxMapping mapping{&box, family, &base};
    std::vector<std::pair<ParamMap, double>> trace;

    auto objective = [&](std::span<const double> t) -> double {
        ParamMap p = mapping.params_at(t);
        double v;
        try {
            v = statistic_value(statistic, ModelDistribution::make(family, p), sample);
        } catch (const std::domain_error&) {
            v = sense_of(statistic) == Sense::maximize
                    ? neg_inf
                    : std::numeric_limits<double>::infinity();
        }
        if (opts.want_trace) trace.emplace_back(std::move(p), v);
        return v;
    };

    std::vector<int> resolution;
    for (const auto& ax : box.axes) resolution.push_back(ax.resolution);
    const auto res = optimize_scaled(objective, sense_of(statistic), resolution,
                                     opts.simplex_tolerance, opts.max_refine_iterations);

    FitResult out;
    out.params = mapping.params_at(res.scaled);
    out.statistic = res.value;
    out.evaluations = res.evaluations;
    const auto model = ModelDistribution::make(family, out.params);
    const auto rep = concordance(model, sample);
    out.f = rep.f;
    out.p = rep.p;
    if (opts.want_trace) out.trace = std::move(trace);
    return out;
}

Landscape landscape(Family family, const ParamMap& base, const ParamBox& grid,
                    const Sample& sample, std::size_t cell_cap) {
    validate_box(grid);
    std::size_t cells = 1;
    for (const auto& ax : grid.axes) cells *= static_cast<std::size_t>(ax.resolution);
    if (cells > cell_cap) {
        throw std::domain_error("landscape: grid exceeds the configured cell cap");
    }

    Landscape out;
    out.axes = grid.axes;
    out.f.resize(cells);
    out.p.resize(cells);
    BoxMapping mapping{&grid, family, &base};
    const std::size_t dim = grid.axes.size();
    std::vector<double> t(dim);
    for (std::size_t idx = 0; idx < cells; ++idx) {
        std::size_t rem = idx;
        for (std::size_t d = dim; d-- > 0;) {
            const int r = grid.axes[d].resolution;
            t[d] = static_cast<double>(rem % r) / (r - 1);
            rem /= r;
        }
        try {
            const auto rep =
                concordance(ModelDistribution::make(family, mapping.params_at(t)), sample);
            out.f[idx] = rep.f;
            out.p[idx] = rep.p;
        } catch (const std::domain_error&) {
            out.f[idx] = neg_inf;
            out.p[idx] = 0.0;
        } catch (const data_error&) {
            out.f[idx] = neg_inf;
            out.p[idx] = 0.0;
        }
    }
    return out;
}

TwoSampleFitResult two_sample_fit(Family family1, const ParamMap& base1, Family family2,
                                  const ParamMap& base2, const SharingSpec& sharing,
                                  const Sample& s1, const Sample& s2,
                                  const FitOptions& opts) {
    if (s1.size() == 0 || s2.size() == 0) {
        throw std::domain_error("two_sample_fit: both samples must be nonempty");
    }
    if (sharing.shared.empty()) {
        throw std::domain_error("two_sample_fit: sharing spec names no parameters");
    }

    // build the product box: one axis per shared parameter, two per separate
    struct AxisRole {
        std::string param;
        int target; // 0 = both, 1 = model1, 2 = model2
    };
    std::vector<AxisRole> roles;
    ParamBox box;
    Sample pooled = s1;
    pooled.values.insert(pooled.values.end(), s2.values.begin(), s2.values.end());
    pooled.geometry = s1.geometry;
    pooled.canonicalize();

    for (const auto& [param, is_shared] : sharing.shared) {
        if (is_shared) {
            auto ax = default_axis(family1, param, base1.count(param) ? base1.at(param) : 1.0,
                                   pooled);
            box.axes.push_back(ax);
            roles.push_back({param, 0});
        } else {
            auto ax1 =
                default_axis(family1, param, base1.count(param) ? base1.at(param) : 1.0, s1);
            ax1.name = param + ":1";
            box.axes.push_back(ax1);
            roles.push_back({param, 1});
            auto ax2 =
                default_axis(family2, param, base2.count(param) ? base2.at(param) : 1.0, s2);
            ax2.name = param + ":2";
            box.axes.push_back(ax2);
            roles.push_back({param, 2});
        }
    }
    // full grids get expensive past two dimensions
    const int res = box.axes.size() <= 2 ? 101 : (box.axes.size() == 3 ? 21 : 11);
    for (auto& ax : box.axes) ax.resolution = res;

    auto params_for = [&](std::span<const double> t, int which) {
        ParamMap p = which == 1 ? base1 : base2;
        const Family fam = which == 1 ? family1 : family2;
        for (std::size_t d = 0; d < box.axes.size(); ++d) {
            if (roles[d].target == 0 || roles[d].target == which) {
                p[ModelDistribution::canonical_param(fam, roles[d].param)] =
                    unscale_axis(box.axes[d], t[d]);
            }
        }
        return p;
    };

    const double n1 = static_cast<double>(s1.size());
    const double n2 = static_cast<double>(s2.size());
    auto objective = [&](std::span<const double> t) -> double {
        try {
            const auto m1 = ModelDistribution::make(family1, params_for(t, 1));
            const auto m2 = ModelDistribution::make(family2, params_for(t, 2));
            const double f1 = fidelity_statistic(m1.cumulative_map(s1));
            const double f2 = fidelity_statistic(m2.cumulative_map(s2));
            return (n1 * f1 + n2 * f2) / (n1 + n2);
        } catch (const std::exception&) {
            return neg_inf;
        }
    };

    std::vector<int> resolution;
    for (const auto& ax : box.axes) resolution.push_back(ax.resolution);
    const auto best = optimize_scaled(objective, Sense::maximize, resolution,
                                      opts.simplex_tolerance, opts.max_refine_iterations);

    TwoSampleFitResult out;
    out.params1 = params_for(best.scaled, 1);
    out.params2 = params_for(best.scaled, 2);
    out.evaluations = best.evaluations;
    const auto m1 = ModelDistribution::make(family1, out.params1);
    const auto m2 = ModelDistribution::make(family2, out.params2);
    const auto rep1 = concordance(m1, s1);
    const auto rep2 = concordance(m2, s2);
    out.f1 = rep1.f;
    out.f2 = rep2.f;
    out.p1 = rep1.p;
    out.p2 = rep2.p;
    const JointComponent parts[2] = {{out.f1, s1.size(), s1.geometry.kind},
                                     {out.f2, s2.size(), s2.geometry.kind}};
    const auto joint = joint_fidelity(parts);
    out.f_joint = joint.f;
    out.p_joint = joint.p;
    return out;
}

} // namespace fidelity
