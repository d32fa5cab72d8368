#include "fidelity/twosample.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace fidelity {

namespace {

// One direction of the construction: rank `obs` against `ref`, place each
// observed point by equal spreading within its reference bin, return the
// fidelity of the resulting cumulative configuration.
// Cross-sample ties go to the left bin (with a warning upstream).
double direction_fidelity(std::span<const double> obs, std::span<const double> ref) {
    const std::size_t nr = ref.size();
    // reference bin edges on the cumulative interval: 0, (j-1/2)/nr, ..., 1
    std::vector<double> c;
    c.reserve(obs.size());
    std::size_t i = 0;
    for (std::size_t bin = 0; bin <= nr; ++bin) {
        // bin k holds observations between ref[k-1] and ref[k] (x-space);
        // '<=' sends a cross-sample tie to the left bin
        std::size_t j = i;
        while (j < obs.size() && (bin == nr || obs[j] <= ref[bin])) ++j;
        const std::size_t p = j - i;
        if (p > 0) {
            const double lo = bin == 0 ? 0.0 : (static_cast<double>(bin) - 0.5) / nr;
            const double hi = bin == nr ? 1.0 : (static_cast<double>(bin) + 0.5) / nr;
            for (std::size_t k = 1; k <= p; ++k) {
                c.push_back((static_cast<double>(k) - 0.5) / static_cast<double>(p) *
                                (hi - lo) +
                            lo);
            }
        }
        i = j;
    }
    return fidelity_line(c);
}

} // namespace

TwoSampleResult twosample_fidelity(const Sample& s1, const Sample& s2) {
    if (s1.size() == 0 || s2.size() == 0) {
        throw std::domain_error("twosample_fidelity: both samples must be nonempty");
    }
    if (s1.geometry.is_circle() || s2.geometry.is_circle()) {
        throw data_error("twosample_fidelity: defined on the line only");
    }

    TwoSampleResult out{};
    out.n1 = s1.size();
    out.n2 = s2.size();

    const auto& a = s1.values;
    const auto& b = s2.values;
    // cross-sample ties break deterministically to the left bin
    for (double x : a) {
        if (std::binary_search(b.begin(), b.end(), x)) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "cross-sample tie at value %.12g", x);
            out.warnings.emplace_back(buf);
        }
    }
    out.f1 = direction_fidelity(a, b);
    out.f2 = direction_fidelity(b, a);
    out.f = 0.5 * (out.f1 + out.f2);
    return out;
}

EmpiricalNull build_null(std::size_t n1, std::size_t n2, Rng& rng, std::size_t replicates) {
    if (replicates < 1000) {
        throw std::domain_error("build_null: requires replicates >= 1000");
    }
    EmpiricalNull null;
    null.n1 = n1;
    null.n2 = n2;
    null.sorted_f.resize(replicates);
    std::vector<double> a(n1), b(n2);
    for (std::size_t r = 0; r < replicates; ++r) {
        for (double& x : a) x = uniform01(rng);
        for (double& x : b) x = uniform01(rng);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        null.sorted_f[r] = 0.5 * (direction_fidelity(a, b) + direction_fidelity(b, a));
    }
    std::sort(null.sorted_f.begin(), null.sorted_f.end());
    return null;
}

double twosample_p(const TwoSampleResult& result, const EmpiricalNull& null) {
    if (result.n1 != null.n1 || result.n2 != null.n2) {
        throw data_error("twosample_p: null was built for different sample sizes");
    }
    const auto& f = null.sorted_f;
    const auto le = std::upper_bound(f.begin(), f.end(), result.f) - f.begin();
    return (1.0 + static_cast<double>(le)) / (static_cast<double>(f.size()) + 1.0);
}

std::filesystem::path null_cache_path(const std::filesystem::path& dir, std::size_t n1,
                                      std::size_t n2, std::size_t replicates,
                                      std::uint64_t seed) {
    char name[128];
    std::snprintf(name, sizeof(name), "twosample-null-n1_%zu-n2_%zu-r_%zu-s_%llu.tsv", n1,
                  n2, replicates, static_cast<unsigned long long>(seed));
    return dir / name;
}

std::optional<EmpiricalNull> load_null(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) return std::nullopt;
    std::string header;
    if (!std::getline(in, header) || header.rfind("# fidelity-twosample-null v1", 0) != 0) {
        return std::nullopt;
    }
    EmpiricalNull null;
    std::size_t replicates = 0;
    std::string meta;
    if (!std::getline(in, meta)) return std::nullopt;
    if (std::sscanf(meta.c_str(), "# n1=%zu n2=%zu replicates=%zu seed=%llu", &null.n1,
                    &null.n2, &replicates, (unsigned long long*)&null.seed) != 4) {
        return std::nullopt;
    }
    null.sorted_f.reserve(replicates);
    double v;
    while (in >> v) null.sorted_f.push_back(v);
    if (null.sorted_f.size() != replicates) return std::nullopt;
    return null;
}

void store_null(const std::filesystem::path& file, const EmpiricalNull& null) {
    std::filesystem::create_directories(file.parent_path());
    const auto tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp);
        out << "# fidelity-twosample-null v1\n";
        char meta[160];
        std::snprintf(meta, sizeof(meta), "# n1=%zu n2=%zu replicates=%zu seed=%llu\n",
                      null.n1, null.n2, null.sorted_f.size(),
                      static_cast<unsigned long long>(null.seed));
        out << meta;
        char line[40];
        for (double v : null.sorted_f) {
            std::snprintf(line, sizeof(line), "%.17g\n", v);
            out << line;
        }
    }
    std::filesystem::rename(tmp, file);
}

EmpiricalNull cached_null(std::size_t n1, std::size_t n2, std::size_t replicates,
                          std::uint64_t seed, const std::filesystem::path& dir) {
    if (!dir.empty()) {
        const auto file = null_cache_path(dir, n1, n2, replicates, seed);
        if (auto cached = load_null(file)) return *cached;
    }
    Rng rng(seed);
    EmpiricalNull null = build_null(n1, n2, rng, replicates);
    null.seed = seed;
    if (!dir.empty()) {
        store_null(null_cache_path(dir, n1, n2, replicates, seed), null);
    }
    return null;
}

} // namespace fidelity
