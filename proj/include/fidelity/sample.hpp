#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "fidelity/common.hpp"

namespace fidelity {

struct Geometry {
    enum class Kind { line, circle };

    Kind kind = Kind::line;
    double period = 0.0; // circle only

    static Geometry line() { return {Kind::line, 0.0}; }
    static Geometry circle(double period = 2.0 * M_PI) {
        if (!(period > 0.0)) throw std::domain_error("Geometry: period must be > 0");
        return {Kind::circle, period};
    }

    bool is_circle() const { return kind == Kind::circle; }
};

inline const char* to_string(Geometry::Kind k) {
    return k == Geometry::Kind::line ? "line" : "circle";
}

// Observations on a declared geometry. canonicalize() reduces circle values
// mod period and sorts ascending; all downstream statistics assume sorted
// input.
struct Sample {
    std::vector<double> values;
    Geometry geometry = Geometry::line();
    bool sorted = false;

    Sample() = default;
    Sample(std::vector<double> v, Geometry g) : values(std::move(v)), geometry(g) {
        canonicalize();
    }

    std::size_t size() const { return values.size(); }

    void canonicalize() {
        if (geometry.is_circle()) {
            const double per = geometry.period;
            for (double& x : values) {
                x = std::fmod(x, per);
                if (x < 0.0) x += per;
            }
        }
        std::sort(values.begin(), values.end());
        sorted = true;
    }
};

// Sorted model-cdf values on the unit interval: the sole input to every
// fidelity statistic.
struct CumulativeVector {
    std::vector<double> c;
    Geometry::Kind geometry = Geometry::Kind::line;

    std::size_t size() const { return c.size(); }
};

// Explicit pre-jitter for tied measurements: adds U(-resolution/2,
// +resolution/2) to every value. Never applied implicitly; a tie fed to the
// fidelity yields f = -inf with a warning instead.
Sample jitter_sample(const Sample& s, double resolution, Rng& rng);

} // namespace fidelity
