#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "fidelity/fidelity_core.hpp"

namespace fidelity {

// Nonparametric comparison of two samples on the line. Each direction
// treats the other sample as the reference distribution: the n2 reference
// points sit at (j-1/2)/n2 on the cumulative interval, and each observed
// point is placed within the reference bin its rank selects, spread evenly
// when several share a bin. f = (f1 + f2)/2 depends only on the
// interleaving pattern of ranks.
struct TwoSampleResult {
    double f1;
    double f2;
    double f; // (f1 + f2)/2
    std::size_t n1;
    std::size_t n2;
    std::vector<std::string> warnings;
};

TwoSampleResult twosample_fidelity(const Sample& s1, const Sample& s2);

// Monte Carlo null: both samples uniform on the unit interval.
struct EmpiricalNull {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::uint64_t seed = 0;
    std::vector<double> sorted_f;
    std::size_t replicates() const { return sorted_f.size(); }
};

EmpiricalNull build_null(std::size_t n1, std::size_t n2, Rng& rng,
                         std::size_t replicates = 20000);

// Left-tail empirical p with add-one smoothing:
// p = (1 + #{null f <= observed f}) / (replicates + 1).
double twosample_p(const TwoSampleResult& result, const EmpiricalNull& null);

// Disk cache for nulls, keyed by (n1, n2, replicates, seed). Files are TSV
// with a version header; writes go through a temp file + rename.
std::filesystem::path null_cache_path(const std::filesystem::path& dir, std::size_t n1,
                                      std::size_t n2, std::size_t replicates,
                                      std::uint64_t seed);
std::optional<EmpiricalNull> load_null(const std::filesystem::path& file);
void store_null(const std::filesystem::path& file, const EmpiricalNull& null);

// Cached build: loads from dir when present, otherwise builds with a
// dedicated Rng seeded by `seed` and stores. dir empty -> no caching.
EmpiricalNull cached_null(std::size_t n1, std::size_t n2, std::size_t replicates,
                          std::uint64_t seed, const std::filesystem::path& dir);

} // namespace fidelity
