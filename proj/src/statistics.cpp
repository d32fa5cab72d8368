#include "fidelity/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fidelity/fidelity_core.hpp"

namespace fidelity {

namespace {

struct StatMeta {
    StatisticId id;
    const char* name;
    Sense sense;
    bool line;
    bool circle;
};

constexpr StatMeta stat_table[] = {
    {StatisticId::fidelity, "fidelity", Sense::maximize, true, true},
    {StatisticId::likelihood, "likelihood", Sense::maximize, true, true},
    {StatisticId::spacings, "spacings", Sense::maximize, true, true},
    {StatisticId::ajne, "ajne", Sense::minimize, false, true},
    {StatisticId::gini, "gini", Sense::minimize, true, true},
    {StatisticId::kuiper, "kuiper", Sense::minimize, false, true},
    {StatisticId::rao, "rao", Sense::minimize, false, true},
    {StatisticId::rayleigh, "rayleigh", Sense::minimize, false, true},
    {StatisticId::watson, "watson", Sense::minimize, false, true},
    {StatisticId::anderson_darling, "anderson_darling", Sense::maximize, true, false},
    {StatisticId::cramer_von_mises, "cramer_von_mises", Sense::minimize, true, false},
    {StatisticId::equal_intervals, "equal_intervals", Sense::minimize, true, false},
    {StatisticId::kolmogorov_smirnov, "kolmogorov_smirnov", Sense::minimize, true, false},
    {StatisticId::order_statistics, "order_statistics", Sense::maximize, true, false},
};

const StatMeta& meta_of(StatisticId id) {
    for (const auto& m : stat_table) {
        if (m.id == id) return m;
    }
    throw std::domain_error("unknown statistic id");
}

double log_or_neg_inf(double v) {
    return v > 0.0 ? std::log(v) : neg_inf;
}

// intervals created by the cumulative mapping: line has n+1 including the
// two boundary pieces, circle has n including the wrap interval
std::vector<double> intervals_of(std::span<const double> c, Geometry::Kind kind) {
    std::vector<double> iv;
    if (kind == Geometry::Kind::line) {
        iv.reserve(c.size() + 1);
        iv.push_back(c.front());
        for (std::size_t i = 0; i + 1 < c.size(); ++i) iv.push_back(c[i + 1] - c[i]);
        iv.push_back(1.0 - c.back());
    } else {
        iv.reserve(c.size());
        for (std::size_t i = 0; i + 1 < c.size(); ++i) iv.push_back(c[i + 1] - c[i]);
        iv.push_back((1.0 - c.back()) + c.front());
    }
    return iv;
}

double ajne_stat(std::span<const double> c) {
    const double n = static_cast<double>(c.size());
    double s = 0.0;
    for (double ci : c) {
        for (double cj : c) {
            s += M_PI - std::abs(M_PI - 2.0 * M_PI * std::abs(ci - cj));
        }
    }
    return n / 4.0 - s / (2.0 * M_PI * n);
}

double gini_stat(std::span<const double> c, Geometry::Kind kind) {
    // 2 sum_{i<j} |d_j - d_i| over the cumulative intervals; with the
    // intervals sorted this is 2 sum_k (2k - m - 1) d_(k)
    std::vector<double> d = intervals_of(c, kind);
    std::sort(d.begin(), d.end());
    const double m = static_cast<double>(d.size());
    double s = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        s += (2.0 * (static_cast<double>(k) + 1.0) - m - 1.0) * d[k];
    }
    return 2.0 * s;
}

double kuiper_stat(std::span<const double> c) {
    const double n = static_cast<double>(c.size());
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double di = static_cast<double>(i);
        a = std::max(a, std::abs(c[i] - di / n));
        b = std::max(b, std::abs(c[i] - (di + 1.0) / n));
    }
    return a + b;
}

double rao_stat(std::span<const double> c) {
    const double n = static_cast<double>(c.size());
    const auto iv = intervals_of(c, Geometry::Kind::circle);
    double s = 0.0;
    for (double d : iv) s += std::abs(d - 1.0 / n);
    return s;
}

double rayleigh_stat(std::span<const double> c) {
    const double n = static_cast<double>(c.size());
    double cs = 0.0, sn = 0.0;
    for (double ci : c) {
        cs += std::cos(2.0 * M_PI * ci);
        sn += std::sin(2.0 * M_PI * ci);
    }
    return 2.0 * n * (cs * cs + sn * sn);
}

double watson_stat(std::span<const double> c) {
    const double n = static_cast<double>(c.size());
    double sc = 0.0, sc2 = 0.0, sic = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        sc += c[i];
        sc2 += c[i] * c[i];
        sic += (static_cast<double>(i) + 1.0) * c[i];
    }
    return n / 12.0 + sc2 - sc * sc / n - 2.0 * sic / n + (n + 1.0) / n * sc;
}

double anderson_darling_stat(std::span<const double> c) {
    const double n = static_cast<double>(c.size());
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double w = 2.0 * (static_cast<double>(i) + 0.5) / n;
        s += w * (log_or_neg_inf(c[i]) + log_or_neg_inf(1.0 - c[c.size() - 1 - i]));
    }
    return s;
}

double cramer_von_mises_stat(std::span<const double> c) {
    const double n = static_cast<double>(c.size());
    double s = 1.0 / (12.0 * n);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double d = (static_cast<double>(i) + 0.5) / n - c[i];
        s += d * d;
    }
    return s;
}

double equal_intervals_stat(std::span<const double> c) {
    const auto iv = intervals_of(c, Geometry::Kind::line);
    const double m = static_cast<double>(iv.size());
    double s = 0.0;
    for (double d : iv) s += std::abs(d - 1.0 / m);
    return s;
}

double kolmogorov_smirnov_stat(std::span<const double> c) {
    const double n = static_cast<double>(c.size());
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double di = static_cast<double>(i);
        s = std::max({s, std::abs(c[i] - di / n), std::abs(c[i] - (di + 1.0) / n)});
    }
    return s;
}

double order_statistics_stat(std::span<const double> c) {
    const double n = static_cast<double>(c.size());
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double di = static_cast<double>(i) + 1.0;
        s += (di - 1.0) * log_or_neg_inf(c[i]) + (n - di) * log_or_neg_inf(1.0 - c[i]);
    }
    return s;
}

} // namespace

const char* to_string(StatisticId id) { return meta_of(id).name; }

StatisticId statistic_from_string(const std::string& name) {
    std::string low = name;
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    std::replace(low.begin(), low.end(), '-', '_');
    for (const auto& m : stat_table) {
        if (low == m.name) return m.id;
    }
    if (low == "ad") return StatisticId::anderson_darling;
    if (low == "cvm") return StatisticId::cramer_von_mises;
    if (low == "ks") return StatisticId::kolmogorov_smirnov;
    throw data_error("unknown statistic: " + name);
}

Sense sense_of(StatisticId id) { return meta_of(id).sense; }

bool statistic_supports(StatisticId id, Geometry::Kind kind) {
    const auto& m = meta_of(id);
    return kind == Geometry::Kind::line ? m.line : m.circle;
}

double statistic_on_cumulative(StatisticId id, std::span<const double> c,
                               Geometry::Kind kind) {
    if (c.empty()) throw std::domain_error("statistic: sample must be nonempty");
    if (!statistic_supports(id, kind)) {
        throw data_error(std::string("statistic ") + to_string(id) +
                         " is not defined on the " + to_string(kind));
    }
    switch (id) {
        case StatisticId::fidelity:
            return kind == Geometry::Kind::circle ? fidelity_circle(c) : fidelity_line(c);
        case StatisticId::spacings:
            return kind == Geometry::Kind::circle ? fidelity_circle(c) : spacings_line(c);
        case StatisticId::ajne: return ajne_stat(c);
        case StatisticId::gini: return gini_stat(c, kind);
        case StatisticId::kuiper: return kuiper_stat(c);
        case StatisticId::rao: return rao_stat(c);
        case StatisticId::rayleigh: return rayleigh_stat(c);
        case StatisticId::watson: return watson_stat(c);
        case StatisticId::anderson_darling: return anderson_darling_stat(c);
        case StatisticId::cramer_von_mises: return cramer_von_mises_stat(c);
        case StatisticId::equal_intervals: return equal_intervals_stat(c);
        case StatisticId::kolmogorov_smirnov: return kolmogorov_smirnov_stat(c);
        case StatisticId::order_statistics: return order_statistics_stat(c);
        case StatisticId::likelihood:
            throw std::domain_error("likelihood needs the model; use statistic_value");
    }
    throw std::domain_error("unknown statistic id");
}

double statistic_value(StatisticId id, const ModelDistribution& model,
                       const Sample& sample) {
    if (sample.size() == 0) throw std::domain_error("statistic: sample must be nonempty");
    if (id == StatisticId::likelihood) {
        double s = 0.0;
        for (double x : sample.values) {
            const double p = model.pdf(x);
            if (!(p > 0.0)) return neg_inf;
            s += std::log(p);
        }
        return s;
    }
    const CumulativeVector cv = model.cumulative_map(sample);
    return statistic_on_cumulative(id, cv.c, cv.geometry);
}

} // namespace fidelity
