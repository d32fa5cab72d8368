#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fidelity/common.hpp"

namespace fidelity::experiments {

struct ExperimentConfig {
    std::string name;
    std::uint64_t seed = 1;
    std::size_t realizations = 0; // 0 = experiment default
    bool quick = false;           // reduced realizations for CI
    int threads = 0;              // 0 = hardware concurrency
    std::map<std::string, std::string> overrides;
};

struct ExperimentSummary {
    std::string name;
    std::string metric; // what the pass/fail criterion computes
    bool pass = false;
    std::map<std::string, double> values;
};

std::vector<std::string> experiment_names();

// Runs the named experiment; writes one TSV per curve plus summary.json to
// out_dir. Outputs are byte-identical for a given (config, seed) regardless
// of the thread count.
ExperimentSummary run_experiment(const ExperimentConfig& config,
                                 const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------------
// reference comparators (benchmarks only, not public estimators)
// ---------------------------------------------------------------------------

// standard deviation with the n-1 denominator
double sd_estimate(std::span<const double> x);

// two-sided Student t test with pooled variance
double t_test_p(std::span<const double> a, std::span<const double> b);

// two-sided Wilcoxon-Mann-Whitney, normal approximation
double wmw_p(std::span<const double> a, std::span<const double> b);

// two-sample Kolmogorov-Smirnov; exact null by path counting for
// n1*n2 <= 400, asymptotic Kolmogorov distribution otherwise
double ks2_statistic(std::span<const double> a, std::span<const double> b);
double ks2_p(std::span<const double> a, std::span<const double> b);

// one-sample KS statistic between a sample and the uniform cdf on [0,1]
double ks_uniform_statistic(std::span<const double> sorted01);

// sup distance of values (expected uniform on [0,1]) from the uniform cdf
double sup_uniform_distance(std::vector<double> p);

// two-sample KS statistic between two empirical distributions
double ks2_distance(std::vector<double> a, std::vector<double> b);

// deterministic parallel map: fn(i) must write only to its own slot
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

} // namespace fidelity::experiments
