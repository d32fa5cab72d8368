#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace fidelity {

// Input data violates a precondition of the requested analysis
// (ties where the theory assumes continuity, points outside the
// model support, mismatched geometries, ...).
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Every candidate in a parameter search evaluated to -inf (e.g. tied
// observations make the whole fidelity landscape degenerate).
class no_fit_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

using Rng = std::mt19937_64;

// Strictly inside (0,1): inverse-transform sampling needs open-interval
// variates so that quantile() stays defined.
inline double uniform01(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// splitmix64; used to derive independent per-task seeds from a master seed
// so results do not depend on how work is partitioned across threads.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t task) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (task + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace fidelity
