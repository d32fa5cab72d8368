#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fidelity/fidelity_core.hpp"
#include "fidelity/statistics.hpp"

namespace fidelity {

enum class AxisScale { linear, log };

struct AxisSpec {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
    AxisScale scale = AxisScale::linear;
    int resolution = 101;
};

struct ParamBox {
    std::vector<AxisSpec> axes;
};

struct FitOptions {
    bool want_trace = false;
    double simplex_tolerance = 1e-6; // diameter in scaled units
    int max_refine_iterations = 500;
};

struct FitResult {
    ParamMap params;
    double statistic = 0.0; // value of the extremized statistic
    double f = 0.0;         // fidelity of the fitted model
    double p = 0.0;         // concordance of the fitted model
    std::size_t evaluations = 0;
    std::optional<std::vector<std::pair<ParamMap, double>>> trace;
};

// Coarse grid scan (per-axis resolution, log-spaced where requested)
// followed by Nelder-Mead refinement from the best cell. Grid plateau ties
// break to the lowest linear index. Throws no_fit_error when the whole
// landscape evaluates to -inf (maximize) or +inf (minimize).
FitResult fit(StatisticId statistic, Family family, const ParamMap& base,
              const ParamBox& box, const Sample& sample, const FitOptions& opts = {});

// Default fit box for one parameter of a family: location-like parameters
// get a linear, data-driven span; shape-like parameters get +-1.5 decades
// (log scale) around the base value.
AxisSpec default_axis(Family family, const std::string& param, double base_value,
                      const Sample& sample);

struct Landscape {
    std::vector<AxisSpec> axes;
    // row-major, last axis fastest
    std::vector<double> f;
    std::vector<double> p;
    std::size_t cells() const { return f.size(); }
};

// Concordance over a dense parameter grid. cell_cap guards against
// accidentally huge grids.
Landscape landscape(Family family, const ParamMap& base, const ParamBox& grid,
                    const Sample& sample, std::size_t cell_cap = 1000000);

// Generic scalar optimizer used by fit/two_sample_fit; exposed for reuse and
// for property tests (sense symmetry). Works on [0,1]^d scaled coordinates.
struct OptimizeResult {
    std::vector<double> scaled;
    double value = 0.0;
    std::size_t evaluations = 0;
};
OptimizeResult optimize_scaled(const std::function<double(std::span<const double>)>& objective,
                               Sense sense, const std::vector<int>& resolution,
                               double simplex_tolerance = 1e-6, int max_iterations = 500);

// Per-parameter sharing between two datasets: true = one shared value,
// false = independent values.
struct SharingSpec {
    std::map<std::string, bool> shared;
};

struct TwoSampleFitResult {
    ParamMap params1;
    ParamMap params2;
    double f1 = 0.0, f2 = 0.0, f_joint = 0.0;
    double p1 = 0.0, p2 = 0.0, p_joint = 0.0;
    std::size_t evaluations = 0;
};

// Maximizes the joint fidelity of (model1 on s1) + (model2 on s2) over the
// shared/separate parameter product space; reports the individual
// concordances and the joint concordance of the fitted pair.
TwoSampleFitResult two_sample_fit(Family family1, const ParamMap& base1, Family family2,
                                  const ParamMap& base2, const SharingSpec& sharing,
                                  const Sample& s1, const Sample& s2,
                                  const FitOptions& opts = {});

} // namespace fidelity
