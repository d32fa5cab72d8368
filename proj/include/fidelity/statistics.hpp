#pragma once

#include <span>
#include <string>

#include "fidelity/distributions.hpp"
#include "fidelity/sample.hpp"

namespace fidelity {

// The statistic catalogue used for parameter estimation and goodness-of-fit
// comparisons. All formulas operate on sorted cumulative values except
// likelihood, which uses raw pdf values.
enum class StatisticId {
    fidelity,
    likelihood,
    spacings,
    ajne,
    gini,
    kuiper,
    rao,
    rayleigh,
    watson,
    anderson_darling,
    cramer_von_mises,
    equal_intervals,
    kolmogorov_smirnov,
    order_statistics,
};

enum class Sense { maximize, minimize };

const char* to_string(StatisticId id);
StatisticId statistic_from_string(const std::string& name);

// anderson_darling here carries the sign convention that makes it a
// maximize-statistic (small values indicate misfit), like fidelity.
Sense sense_of(StatisticId id);

// Whether the statistic is defined for the given geometry.
bool statistic_supports(StatisticId id, Geometry::Kind kind);

// Evaluate on cumulative values (every statistic except likelihood).
double statistic_on_cumulative(StatisticId id, std::span<const double> c,
                               Geometry::Kind kind);

// Evaluate on a model + sample (handles likelihood; everything else goes
// through cumulative_map).
double statistic_value(StatisticId id, const ModelDistribution& model,
                       const Sample& sample);

} // namespace fidelity
