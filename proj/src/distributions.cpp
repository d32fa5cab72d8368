#include "fidelity/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fidelity/special_functions.hpp"

namespace fidelity {

namespace {

// 7-point Gauss-Legendre nodes/weights on [-1,1]
constexpr int gl_n = 7;
constexpr double gl_x[gl_n] = {
    -0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
    0.4058451513773972,  0.7415311855993945,  0.9491079123427585};
constexpr double gl_w[gl_n] = {
    0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
    0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
    0.1294849661688697};

template <typename F>
double gauss_legendre(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < gl_n; ++i) {
        s += gl_w[i] * f(mid + half * gl_x[i]);
    }
    return s * half;
}

double get_param(const ParamMap& p, const std::string& name, double fallback) {
    auto it = p.find(name);
    return it == p.end() ? fallback : it->second;
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::domain_error(msg);
}

} // namespace

struct ModelDistribution::Impl {
    Family fam = Family::user_defined;
    ParamMap prm;
    Geometry geom = Geometry::line();
    Interval dom;

    virtual ~Impl() = default;
    virtual double pdf(double x) const = 0;
    virtual double cdf(double x) const = 0;
    // circle models: cumulative origin (c = 0 there)
    virtual double origin() const { return 0.0; }
    // closed-form quantile if the family has one
    virtual std::optional<double> quantile_closed(double c) const {
        (void)c;
        return std::nullopt;
    }
};

namespace {

using Impl = ModelDistribution::Impl;

// ---------------------------------------------------------------------------
// line families (closed-form cdf)
// ---------------------------------------------------------------------------

struct GaussImpl final : Impl {
    double beta, alpha;
    GaussImpl(double b, double a) : beta(b), alpha(a) {
        require(alpha > 0.0, "gauss: alpha must be > 0");
    }
    double pdf(double x) const override {
        const double z = (x - beta) / alpha;
        return std::exp(-0.5 * z * z) / (alpha * std::sqrt(2.0 * M_PI));
    }
    double cdf(double x) const override {
        const double z = (x - beta) / alpha;
        return 0.5 * std::erfc(-z * M_SQRT1_2);
    }
};

struct CauchyImpl final : Impl {
    double beta, alpha;
    CauchyImpl(double b, double a) : beta(b), alpha(a) {
        require(alpha > 0.0, "cauchy: alpha must be > 0");
    }
    double pdf(double x) const override {
        const double z = (x - beta) / alpha;
        return 1.0 / (alpha * M_PI * (1.0 + z * z));
    }
    double cdf(double x) const override {
        return 0.5 + std::atan((x - beta) / alpha) / M_PI;
    }
    std::optional<double> quantile_closed(double c) const override {
        return beta + alpha * std::tan(M_PI * (c - 0.5));
    }
};

struct ExponentialImpl final : Impl {
    double alpha; // rate
    explicit ExponentialImpl(double a) : alpha(a) {
        require(alpha > 0.0, "exponential: alpha must be > 0");
    }
    double pdf(double x) const override { return alpha * std::exp(-alpha * x); }
    double cdf(double x) const override { return -std::expm1(-alpha * x); }
    std::optional<double> quantile_closed(double c) const override {
        return -std::log1p(-c) / alpha;
    }
};

struct ExtremeValueImpl final : Impl {
    double beta, alpha;
    ExtremeValueImpl(double b, double a) : beta(b), alpha(a) {
        require(alpha > 0.0, "extreme_value: alpha must be > 0");
    }
    double pdf(double x) const override {
        const double z = (x - beta) / alpha;
        return std::exp(-z - std::exp(-z)) / alpha;
    }
    double cdf(double x) const override {
        return std::exp(-std::exp(-(x - beta) / alpha));
    }
    std::optional<double> quantile_closed(double c) const override {
        return beta - alpha * std::log(-std::log(c));
    }
};

struct FRatioImpl final : Impl {
    double beta, alpha; // beta = denominator-like first parameter
    FRatioImpl(double b, double a) : beta(b), alpha(a) {
        require(alpha > 0.0 && beta > 0.0, "f_ratio: alpha, beta must be > 0");
    }
    double pdf(double x) const override {
        if (x < 0.0) return 0.0;
        const double lg = 0.5 * beta * std::log(beta) + 0.5 * alpha * std::log(alpha) +
                          (0.5 * alpha - 1.0) * std::log(x) -
                          0.5 * (alpha + beta) * std::log(beta + alpha * x) -
                          sf::log_beta(0.5 * beta, 0.5 * alpha);
        return std::exp(lg);
    }
    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        return sf::regularized_incomplete_beta(0.5 * alpha, 0.5 * beta,
                                               alpha * x / (beta + alpha * x));
    }
};

struct GammaImpl final : Impl {
    double beta, alpha; // shape beta, scale alpha
    GammaImpl(double b, double a) : beta(b), alpha(a) {
        require(alpha > 0.0 && beta > 0.0, "gamma: alpha, beta must be > 0");
    }
    double pdf(double x) const override {
        if (x < 0.0) return 0.0;
        if (x == 0.0) return beta < 1.0 ? std::numeric_limits<double>::infinity()
                                        : (beta == 1.0 ? 1.0 / alpha : 0.0);
        return std::exp((beta - 1.0) * std::log(x) - x / alpha -
                        sf::log_gamma(beta) - beta * std::log(alpha));
    }
    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        return sf::regularized_gamma_p(beta, x / alpha);
    }
};

struct InverseGammaImpl final : Impl {
    double beta, alpha; // shape beta, scale alpha
    InverseGammaImpl(double b, double a) : beta(b), alpha(a) {
        require(alpha > 0.0 && beta > 0.0, "inverse_gamma: alpha, beta must be > 0");
    }
    double pdf(double x) const override {
        if (x <= 0.0) return 0.0;
        return std::exp(beta * std::log(alpha) - (beta + 1.0) * std::log(x) -
                        alpha / x - sf::log_gamma(beta));
    }
    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        return sf::regularized_gamma_q(beta, alpha / x);
    }
};

struct LaplaceImpl final : Impl {
    double beta, alpha;
    LaplaceImpl(double b, double a) : beta(b), alpha(a) {
        require(alpha > 0.0, "laplace: alpha must be > 0");
    }
    double pdf(double x) const override {
        return std::exp(-std::abs(x - beta) / alpha) / (2.0 * alpha);
    }
    double cdf(double x) const override {
        const double z = (x - beta) / alpha;
        return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    }
    std::optional<double> quantile_closed(double c) const override {
        return c < 0.5 ? beta + alpha * std::log(2.0 * c)
                       : beta - alpha * std::log(2.0 * (1.0 - c));
    }
};

struct LevyImpl final : Impl {
    double beta, alpha; // location beta (left edge), scale alpha
    LevyImpl(double b, double a) : beta(b), alpha(a) {
        require(alpha > 0.0, "levy: alpha must be > 0");
    }
    double pdf(double x) const override {
        if (x <= beta) return 0.0;
        const double u = x - beta;
        return std::sqrt(alpha / (2.0 * M_PI)) * std::exp(-0.5 * alpha / u) /
               (u * std::sqrt(u));
    }
    double cdf(double x) const override {
        if (x <= beta) return 0.0;
        return std::erfc(std::sqrt(0.5 * alpha / (x - beta)));
    }
};

struct LogisticImpl final : Impl {
    double beta, alpha;
    LogisticImpl(double b, double a) : beta(b), alpha(a) {
        require(alpha > 0.0, "logistic: alpha must be > 0");
    }
    double pdf(double x) const override {
        const double e = std::exp(-std::abs(x - beta) / alpha);
        const double d = 1.0 + e;
        return e / (alpha * d * d);
    }
    double cdf(double x) const override {
        return 1.0 / (1.0 + std::exp(-(x - beta) / alpha));
    }
    std::optional<double> quantile_closed(double c) const override {
        return beta + alpha * std::log(c / (1.0 - c));
    }
};

struct ParetoImpl final : Impl {
    double beta, alpha; // scale (minimum) beta, shape alpha
    ParetoImpl(double b, double a) : beta(b), alpha(a) {
        require(alpha > 0.0 && beta > 0.0, "pareto: alpha, beta must be > 0");
    }
    double pdf(double x) const override {
        if (x < beta) return 0.0;
        return alpha * std::pow(beta, alpha) * std::pow(x, -alpha - 1.0);
    }
    double cdf(double x) const override {
        if (x <= beta) return 0.0;
        return 1.0 - std::pow(beta / x, alpha);
    }
    std::optional<double> quantile_closed(double c) const override {
        return beta * std::pow(1.0 - c, -1.0 / alpha);
    }
};

struct RayleighImpl final : Impl {
    double alpha;
    explicit RayleighImpl(double a) : alpha(a) {
        require(alpha > 0.0, "rayleigh: alpha must be > 0");
    }
    double pdf(double x) const override {
        if (x < 0.0) return 0.0;
        const double z = x / alpha;
        return z / alpha * std::exp(-0.5 * z * z);
    }
    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        const double z = x / alpha;
        return -std::expm1(-0.5 * z * z);
    }
    std::optional<double> quantile_closed(double c) const override {
        return alpha * std::sqrt(-2.0 * std::log1p(-c));
    }
};

struct StudentImpl final : Impl {
    double alpha; // degrees of freedom
    explicit StudentImpl(double a) : alpha(a) {
        require(alpha > 0.0, "student: alpha must be > 0");
    }
    double pdf(double x) const override {
        return std::exp(0.5 * (1.0 + alpha) *
                            (std::log(alpha) - std::log(x * x + alpha)) -
                        0.5 * std::log(alpha) - sf::log_beta(0.5 * alpha, 0.5));
    }
    double cdf(double x) const override {
        if (x == 0.0) return 0.5;
        const double ib =
            sf::regularized_incomplete_beta(0.5 * alpha, 0.5, alpha / (alpha + x * x));
        return x > 0.0 ? 1.0 - 0.5 * ib : 0.5 * ib;
    }
};

struct BetaImpl final : Impl {
    double beta, alpha; // pdf ~ x^(alpha-1) (1-x)^(beta-1)
    BetaImpl(double b, double a) : beta(b), alpha(a) {
        require(alpha > 0.0 && beta > 0.0, "beta: alpha, beta must be > 0");
    }
    double pdf(double x) const override {
        if (x < 0.0 || x > 1.0) return 0.0;
        if ((x == 0.0 && alpha < 1.0) || (x == 1.0 && beta < 1.0)) {
            return std::numeric_limits<double>::infinity();
        }
        if (x == 0.0) return alpha == 1.0 ? std::exp(-sf::log_beta(beta, alpha)) : 0.0;
        if (x == 1.0) return beta == 1.0 ? std::exp(-sf::log_beta(beta, alpha)) : 0.0;
        return std::exp((alpha - 1.0) * std::log(x) + (beta - 1.0) * std::log1p(-x) -
                        sf::log_beta(beta, alpha));
    }
    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return sf::regularized_incomplete_beta(alpha, beta, x);
    }
};

struct WeibullImpl final : Impl {
    double beta, alpha; // scale beta, shape alpha
    WeibullImpl(double b, double a) : beta(b), alpha(a) {
        require(alpha > 0.0 && beta > 0.0, "weibull: alpha, beta must be > 0");
    }
    double pdf(double x) const override {
        if (x < 0.0) return 0.0;
        if (x == 0.0) return alpha < 1.0 ? std::numeric_limits<double>::infinity()
                                         : (alpha == 1.0 ? 1.0 / beta : 0.0);
        const double z = x / beta;
        return alpha / beta * std::pow(z, alpha - 1.0) * std::exp(-std::pow(z, alpha));
    }
    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        return -std::expm1(-std::pow(x / beta, alpha));
    }
    std::optional<double> quantile_closed(double c) const override {
        return beta * std::pow(-std::log1p(-c), 1.0 / alpha);
    }
};

struct UniformLineImpl final : Impl {
    double beta, alpha; // support [beta, beta+alpha]
    UniformLineImpl(double b, double a) : beta(b), alpha(a) {
        require(alpha > 0.0, "uniform: alpha (width) must be > 0");
    }
    double pdf(double x) const override {
        return (x < beta || x > beta + alpha) ? 0.0 : 1.0 / alpha;
    }
    double cdf(double x) const override {
        if (x <= beta) return 0.0;
        if (x >= beta + alpha) return 1.0;
        return (x - beta) / alpha;
    }
    std::optional<double> quantile_closed(double c) const override {
        return beta + alpha * c;
    }
};

struct UniformCircleImpl final : Impl {
    double pdf(double) const override { return 1.0 / geom.period; }
    double cdf(double x) const override { return x / geom.period; }
    std::optional<double> quantile_closed(double c) const override {
        return c * geom.period;
    }
};

struct BinomialImpl final : Impl {
    int n;
    double q;
    BinomialImpl(double n_, double q_) : n(static_cast<int>(std::llround(n_))), q(q_) {
        require(n >= 1 && std::abs(n_ - n) < 1e-9, "binomial: n must be a positive integer");
        require(q >= 0.0 && q <= 1.0, "binomial: q must be in [0,1]");
    }
    double pmf(int k) const {
        if (k < 0 || k > n) return 0.0;
        if (q == 0.0) return k == 0 ? 1.0 : 0.0;
        if (q == 1.0) return k == n ? 1.0 : 0.0;
        const double lg = sf::log_gamma(n + 1.0) - sf::log_gamma(k + 1.0) -
                          sf::log_gamma(n - k + 1.0) + k * std::log(q) +
                          (n - k) * std::log1p(-q);
        return std::exp(lg);
    }
    double pdf(double x) const override {
        const int k = static_cast<int>(std::llround(x));
        return std::abs(x - k) < 1e-9 ? pmf(k) : 0.0;
    }
    double cdf(double x) const override {
        if (x < 0.0) return 0.0;
        const int k = static_cast<int>(std::floor(x + 1e-12));
        if (k >= n) return 1.0;
        double s = 0.0;
        for (int i = 0; i <= k; ++i) s += pmf(i);
        return std::min(s, 1.0);
    }
    std::optional<double> quantile_closed(double c) const override {
        double s = 0.0;
        for (int k = 0; k <= n; ++k) {
            s += pmf(k);
            if (s >= c) return static_cast<double>(k);
        }
        return static_cast<double>(n);
    }
};

// ---------------------------------------------------------------------------
// grid-backed cdf (circle families and user models without a cdf callable)
// ---------------------------------------------------------------------------

// Cumulative table over [lo, hi] with 1024 cells. cdf(x) combines the cached
// node value with Gauss-Legendre quadrature across the residual sub-interval,
// and the whole table is normalized so cdf(hi) = 1 exactly.
struct GridCdf {
    static constexpr int cells = 1024;
    double lo = 0.0, hi = 1.0, h = 0.0;
    std::array<double, cells + 1> node{};
    double total = 1.0;

    template <typename F>
    void build(const F& raw_pdf, double lo_, double hi_) {
        lo = lo_;
        hi = hi_;
        h = (hi - lo) / cells;
        node[0] = 0.0;
        for (int i = 0; i < cells; ++i) {
            const double a = lo + i * h;
            node[i + 1] = node[i] + gauss_legendre(raw_pdf, a, a + h);
        }
        total = node[cells];
        if (!(total > 0.0) || !std::isfinite(total)) {
            throw std::domain_error("model pdf does not integrate to a positive finite value");
        }
    }

    template <typename F>
    double eval(const F& raw_pdf, double x) const {
        if (x <= lo) return 0.0;
        if (x >= hi) return 1.0;
        int i = static_cast<int>((x - lo) / h);
        i = std::clamp(i, 0, cells - 1);
        const double a = lo + i * h;
        return (node[i] + gauss_legendre(raw_pdf, a, x)) / total;
    }
};

struct GridModelImpl : Impl {
    GridCdf grid;
    double origin_ = 0.0;

    virtual double raw_pdf(double x) const = 0;

    void finalize() {
        if (geom.is_circle()) {
            grid.build([this](double u) { return raw_pdf(reduce(u)); }, 0.0, geom.period);
        } else {
            require(std::isfinite(dom.lo) && std::isfinite(dom.hi),
                    "grid-backed line model requires a finite domain");
            grid.build([this](double u) { return raw_pdf(u); }, dom.lo, dom.hi);
        }
    }

    // circle: angle measured from the origin, reduced to [0, period)
    double reduce(double delta) const {
        double d = std::fmod(delta + origin_, geom.period);
        if (d < 0.0) d += geom.period;
        return d;
    }

    double origin() const override { return origin_; }

    double pdf(double x) const override {
        if (geom.is_circle()) {
            double d = std::fmod(x, geom.period);
            if (d < 0.0) d += geom.period;
            return raw_pdf(d) / grid.total;
        }
        return raw_pdf(x) / grid.total;
    }

    double cdf(double x) const override {
        if (geom.is_circle()) {
            // measured from the declared origin
            double d = std::fmod(x - origin_, geom.period);
            if (d < 0.0) d += geom.period;
            return grid.eval([this](double u) { return raw_pdf(reduce(u)); }, d);
        }
        return grid.eval([this](double u) { return raw_pdf(u); }, x);
    }
};

struct ThetaImpl final : GridModelImpl {
    double beta, alpha;
    ThetaImpl(double b, double a) : beta(b), alpha(a) {
        require(alpha > 0.0, "theta: alpha must be > 0");
    }
    double raw_pdf(double th) const override {
        const double s = std::sin(th - beta);
        return std::sqrt(1.0 + alpha) / (2.0 * M_PI * (1.0 + alpha * s * s));
    }
};

struct VonMisesImpl final : GridModelImpl {
    double beta, alpha, log_norm;
    VonMisesImpl(double b, double a) : beta(b), alpha(a) {
        require(alpha > 0.0, "von_mises: alpha must be > 0");
        log_norm = std::log(2.0 * M_PI * sf::bessel_i0(alpha));
    }
    double raw_pdf(double th) const override {
        return std::exp(alpha * std::cos(th - beta) - log_norm);
    }
};

struct WrappedLaplaceImpl final : GridModelImpl {
    double beta, alpha, pref, d1, d2;
    WrappedLaplaceImpl(double b, double a) : beta(b), alpha(a) {
        require(alpha > 0.0 && beta > 0.0, "wrapped_laplace: alpha, beta must be > 0");
        pref = beta * alpha / (1.0 + alpha * alpha);
        d1 = -std::expm1(-2.0 * M_PI * beta * alpha);
        d2 = -std::expm1(-2.0 * M_PI * beta / alpha);
    }
    // defined on [0, 2pi) with a kink at 0; the rising exponential is
    // rewritten as exp((beta/alpha)(th - 2pi)) / (1 - exp(-2pi beta/alpha))
    // to stay finite for large beta/alpha
    double raw_pdf(double th) const override {
        th = std::fmod(th, 2.0 * M_PI);
        if (th < 0.0) th += 2.0 * M_PI;
        return pref * (std::exp(-beta * alpha * th) / d1 +
                       std::exp(beta / alpha * (th - 2.0 * M_PI)) / d2);
    }
};

struct UserDefinedImpl final : GridModelImpl {
    ModelDistribution::DensityFn pdf_fn;
    std::optional<ModelDistribution::DensityFn> cdf_fn;

    double raw_pdf(double x) const override { return pdf_fn(x); }

    double pdf(double x) const override {
        if (cdf_fn) return pdf_fn(x); // trusted as normalized
        return GridModelImpl::pdf(x);
    }
    double cdf(double x) const override {
        if (cdf_fn) {
            if (geom.is_circle()) {
                double d = std::fmod(x - origin_, geom.period);
                if (d < 0.0) d += geom.period;
                return (*cdf_fn)(d);
            }
            if (x <= dom.lo) return 0.0;
            if (x >= dom.hi) return 1.0;
            return (*cdf_fn)(x);
        }
        return GridModelImpl::cdf(x);
    }
};

} // namespace

// ---------------------------------------------------------------------------
// ModelDistribution
// ---------------------------------------------------------------------------

namespace {

struct FamilyMeta {
    Family fam;
    const char* name;
    Geometry::Kind kind;
    std::vector<ParamInfo> params;
    std::map<std::string, std::string> aliases;
};

const std::vector<FamilyMeta>& family_table() {
    static const std::vector<FamilyMeta> table = {
        {Family::theta, "theta", Geometry::Kind::circle,
         {{"beta", 0.0, false, true}, {"alpha", 4.0, true, false}},
         {}},
        {Family::von_mises, "von_mises", Geometry::Kind::circle,
         {{"beta", 0.0, false, true}, {"alpha", 0.25, true, false}},
         {{"mu", "beta"}, {"kappa", "alpha"}}},
        {Family::wrapped_laplace, "wrapped_laplace", Geometry::Kind::circle,
         {{"beta", 1.0, true, false}, {"alpha", 1.0, true, false}},
         {}},
        {Family::beta, "beta", Geometry::Kind::line,
         {{"beta", 3.0, true, false}, {"alpha", 1.0, true, false}},
         {}},
        {Family::cauchy, "cauchy", Geometry::Kind::line,
         {{"beta", 0.0, false, true}, {"alpha", 0.5, true, false}},
         {{"x0", "beta"}, {"gamma", "alpha"}}},
        {Family::exponential, "exponential", Geometry::Kind::line,
         {{"alpha", 1.0, true, false}},
         {{"rate", "alpha"}}},
        {Family::extreme_value, "extreme_value", Geometry::Kind::line,
         {{"beta", 0.0, false, true}, {"alpha", 1.0, true, false}},
         {{"mu", "beta"}}},
        {Family::f_ratio, "f_ratio", Geometry::Kind::line,
         {{"beta", 2.0, true, false}, {"alpha", 1.0, true, false}},
         {}},
        {Family::gamma, "gamma", Geometry::Kind::line,
         {{"beta", 3.0, true, false}, {"alpha", 1.0, true, false}},
         {{"shape", "beta"}, {"scale", "alpha"}}},
        {Family::gauss, "gauss", Geometry::Kind::line,
         {{"beta", 0.0, false, true}, {"alpha", 1.0, true, false}},
         {{"mu", "beta"}, {"sigma", "alpha"}}},
        {Family::inverse_gamma, "inverse_gamma", Geometry::Kind::line,
         {{"beta", 3.0, true, false}, {"alpha", 1.0, true, false}},
         {{"shape", "beta"}, {"scale", "alpha"}}},
        {Family::laplace, "laplace", Geometry::Kind::line,
         {{"beta", 0.0, false, true}, {"alpha", 1.0, true, false}},
         {{"mu", "beta"}}},
        {Family::levy, "levy", Geometry::Kind::line,
         {{"beta", 0.0, false, true}, {"alpha", 1.0, true, false}},
         {{"mu", "beta"}}},
        {Family::logistic, "logistic", Geometry::Kind::line,
         {{"beta", 0.0, false, true}, {"alpha", 1.0, true, false}},
         {{"mu", "beta"}}},
        {Family::pareto, "pareto", Geometry::Kind::line,
         {{"beta", 1.0, true, false}, {"alpha", 1.0, true, false}},
         {{"xmin", "beta"}, {"shape", "alpha"}}},
        {Family::rayleigh, "rayleigh", Geometry::Kind::line,
         {{"alpha", 1.0, true, false}},
         {{"sigma", "alpha"}}},
        {Family::student, "student", Geometry::Kind::line,
         {{"alpha", 3.0, true, false}},
         {{"nu", "alpha"}, {"dof", "alpha"}}},
        {Family::weibull, "weibull", Geometry::Kind::line,
         {{"beta", 1.0, true, false}, {"alpha", 2.0, true, false}},
         {{"scale", "beta"}, {"shape", "alpha"}}},
        {Family::uniform, "uniform", Geometry::Kind::line,
         {{"beta", 0.0, false, true}, {"alpha", 1.0, true, false}},
         {{"a", "beta"}, {"width", "alpha"}}},
        {Family::binomial, "binomial", Geometry::Kind::line,
         {{"n", 1.0, true, false}, {"q", 0.5, false, false}},
         {}},
    };
    return table;
}

const FamilyMeta& meta_of(Family f) {
    for (const auto& m : family_table()) {
        if (m.fam == f) return m;
    }
    throw std::domain_error("family has no parameter metadata");
}

} // namespace

const char* to_string(Family f) {
    if (f == Family::user_defined) return "user_defined";
    return meta_of(f).name;
}

Family family_from_string(const std::string& name) {
    std::string low = name;
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    std::replace(low.begin(), low.end(), '-', '_');
    for (const auto& m : family_table()) {
        if (low == m.name) return m.fam;
    }
    if (low == "vonmises") return Family::von_mises;
    if (low == "normal") return Family::gauss;
    if (low == "gumbel") return Family::extreme_value;
    if (low == "extremevalue") return Family::extreme_value;
    if (low == "wrappedlaplace") return Family::wrapped_laplace;
    if (low == "fratio" || low == "f") return Family::f_ratio;
    if (low == "invgamma" || low == "inversegamma") return Family::inverse_gamma;
    throw data_error("unknown distribution family: " + name);
}

std::vector<ParamInfo> ModelDistribution::param_info(Family family) {
    if (family == Family::user_defined) return {};
    return meta_of(family).params;
}

std::string ModelDistribution::canonical_param(Family family, const std::string& name) {
    if (family == Family::user_defined) return name;
    const auto& m = meta_of(family);
    auto it = m.aliases.find(name);
    return it == m.aliases.end() ? name : it->second;
}

ModelDistribution ModelDistribution::make(Family family, const ParamMap& raw) {
    if (family == Family::user_defined) {
        throw std::domain_error("use ModelDistribution::user_defined for user models");
    }
    const auto& meta = meta_of(family);

    ParamMap p;
    for (const auto& info : meta.params) p[info.name] = info.default_value;
    for (const auto& [k, v] : raw) {
        const std::string name = canonical_param(family, k);
        if (name == "period") continue;
        if (!p.count(name)) {
            throw data_error(std::string("unknown parameter '") + k + "' for family " +
                             meta.name);
        }
        p[name] = v;
    }
    for (const auto& info : meta.params) {
        if (info.positive && !(p[info.name] > 0.0)) {
            throw std::domain_error(std::string(meta.name) + ": parameter " + info.name +
                                    " must be > 0");
        }
    }

    const double beta = get_param(p, "beta", 0.0);
    const double alpha = get_param(p, "alpha", 1.0);

    std::shared_ptr<Impl> impl;
    Geometry geom = meta.kind == Geometry::Kind::circle
                        ? Geometry::circle(get_param(raw, "period", 2.0 * M_PI))
                        : Geometry::line();
    Interval dom;

    switch (family) {
        case Family::gauss: impl = std::make_shared<GaussImpl>(beta, alpha); break;
        case Family::cauchy: impl = std::make_shared<CauchyImpl>(beta, alpha); break;
        case Family::exponential:
            impl = std::make_shared<ExponentialImpl>(alpha);
            dom.lo = 0.0;
            break;
        case Family::extreme_value:
            impl = std::make_shared<ExtremeValueImpl>(beta, alpha);
            break;
        case Family::f_ratio:
            impl = std::make_shared<FRatioImpl>(beta, alpha);
            dom.lo = 0.0;
            break;
        case Family::gamma:
            impl = std::make_shared<GammaImpl>(beta, alpha);
            dom.lo = 0.0;
            break;
        case Family::inverse_gamma:
            impl = std::make_shared<InverseGammaImpl>(beta, alpha);
            dom.lo = 0.0;
            break;
        case Family::laplace: impl = std::make_shared<LaplaceImpl>(beta, alpha); break;
        case Family::levy:
            impl = std::make_shared<LevyImpl>(beta, alpha);
            dom.lo = beta;
            break;
        case Family::logistic: impl = std::make_shared<LogisticImpl>(beta, alpha); break;
        case Family::pareto:
            impl = std::make_shared<ParetoImpl>(beta, alpha);
            dom.lo = beta;
            break;
        case Family::rayleigh:
            impl = std::make_shared<RayleighImpl>(alpha);
            dom.lo = 0.0;
            break;
        case Family::student: impl = std::make_shared<StudentImpl>(alpha); break;
        case Family::beta:
            impl = std::make_shared<BetaImpl>(beta, alpha);
            dom.lo = 0.0;
            dom.hi = 1.0;
            break;
        case Family::weibull:
            impl = std::make_shared<WeibullImpl>(beta, alpha);
            dom.lo = 0.0;
            break;
        case Family::uniform:
            if (meta.kind == Geometry::Kind::circle || raw.count("period")) {
                auto u = std::make_shared<UniformCircleImpl>();
                geom = Geometry::circle(get_param(raw, "period", 2.0 * M_PI));
                impl = u;
                dom.lo = 0.0;
                dom.hi = geom.period;
            } else {
                impl = std::make_shared<UniformLineImpl>(beta, alpha);
                dom.lo = beta;
                dom.hi = beta + alpha;
            }
            break;
        case Family::binomial: {
            auto b = std::make_shared<BinomialImpl>(get_param(p, "n", 1.0),
                                                    get_param(p, "q", 0.5));
            dom.lo = 0.0;
            dom.hi = static_cast<double>(b->n);
            impl = b;
            break;
        }
        case Family::theta: {
            auto t = std::make_shared<ThetaImpl>(beta, alpha);
            t->origin_ = beta;
            impl = t;
            break;
        }
        case Family::von_mises: {
            auto t = std::make_shared<VonMisesImpl>(beta, alpha);
            t->origin_ = beta;
            impl = t;
            break;
        }
        case Family::wrapped_laplace: {
            auto t = std::make_shared<WrappedLaplaceImpl>(beta, alpha);
            t->origin_ = 0.0; // beta is not a location parameter here
            impl = t;
            break;
        }
        default: throw std::domain_error("unsupported family");
    }

    impl->fam = family;
    impl->prm = p;
    impl->geom = geom;
    if (geom.is_circle()) {
        dom.lo = 0.0;
        dom.hi = geom.period;
    }
    impl->dom = dom;
    if (auto* g = dynamic_cast<GridModelImpl*>(impl.get())) g->finalize();
    return ModelDistribution(std::move(impl));
}

ModelDistribution ModelDistribution::user_defined(DensityFn pdf, std::optional<DensityFn> cdf,
                                                  Interval domain, Geometry geometry) {
    auto impl = std::make_shared<UserDefinedImpl>();
    impl->pdf_fn = std::move(pdf);
    impl->cdf_fn = std::move(cdf);
    impl->fam = Family::user_defined;
    impl->geom = geometry;
    impl->dom = geometry.is_circle() ? Interval{0.0, geometry.period} : domain;
    if (!impl->cdf_fn) impl->finalize();
    return ModelDistribution(std::move(impl));
}

double ModelDistribution::pdf(double x) const { return impl_->pdf(x); }

double ModelDistribution::cdf(double x) const {
    if (!impl_->geom.is_circle()) {
        const auto& d = impl_->dom;
        if (x < d.lo || x > d.hi) {
            throw data_error("cdf: point outside the model support");
        }
    }
    return impl_->cdf(x);
}

double ModelDistribution::cdf_clamped(double x) const {
    if (!impl_->geom.is_circle()) {
        if (x <= impl_->dom.lo) return 0.0;
        if (x >= impl_->dom.hi) return 1.0;
    }
    return impl_->cdf(x);
}

double ModelDistribution::quantile(double c) const {
    if (!(c > 0.0 && c < 1.0)) {
        throw std::domain_error("quantile: requires 0 < c < 1");
    }
    if (auto q = impl_->quantile_closed(c)) return *q;

    // safeguarded bisection/Newton on the cdf
    const auto& d = impl_->dom;
    double lo = d.lo, hi = d.hi;
    const bool circle = impl_->geom.is_circle();
    if (circle) {
        lo = 0.0;
        hi = impl_->geom.period;
        // quantile returned relative to the declared origin
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        // expand a bracket around a finite seed
        double seed = 0.0;
        if (std::isfinite(d.lo)) seed = d.lo + 1.0;
        if (std::isfinite(d.hi)) seed = d.hi - 1.0;
        double step = 1.0;
        lo = seed;
        hi = seed;
        for (int i = 0; i < 200 && impl_->cdf(lo) > c; ++i) {
            hi = lo;
            lo -= step;
            step *= 2.0;
            if (std::isfinite(d.lo) && lo < d.lo) { lo = d.lo; break; }
        }
        step = 1.0;
        for (int i = 0; i < 200 && impl_->cdf(hi) < c; ++i) {
            lo = std::max(lo, hi);
            hi += step;
            step *= 2.0;
            if (std::isfinite(d.hi) && hi > d.hi) { hi = d.hi; break; }
        }
    }

    auto cdf_at = [&](double x) {
        return circle ? impl_->cdf(x + impl_->origin()) : impl_->cdf(x);
    };

    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = cdf_at(x) - c;
        if (std::abs(fx) < 1e-14) break;
        if (fx > 0.0) hi = x; else lo = x;
        const double px = impl_->pdf(circle ? x + impl_->origin() : x);
        double nx = px > 0.0 ? x - fx / px : 0.5 * (lo + hi);
        if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
        if (std::abs(nx - x) < 1e-15 * (1.0 + std::abs(x))) { x = nx; break; }
        x = nx;
    }
    return circle ? x + impl_->origin() : x;
}

Sample ModelDistribution::sample(std::size_t n, Rng& rng) const {
    if (n < 1) throw std::domain_error("sample: requires n >= 1");
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(quantile(uniform01(rng)));
    }
    return Sample(std::move(out), impl_->geom);
}

CumulativeVector ModelDistribution::cumulative_map(const Sample& s) const {
    const auto& g = impl_->geom;
    if (g.kind != s.geometry.kind) {
        throw data_error("cumulative_map: sample and model geometries differ");
    }
    if (g.is_circle() && std::abs(g.period - s.geometry.period) > 1e-12 * g.period) {
        throw data_error("cumulative_map: sample and model periods differ");
    }
    CumulativeVector cv;
    cv.geometry = g.kind;
    cv.c.reserve(s.size());
    for (double x : s.values) {
        if (!g.is_circle() && (x < impl_->dom.lo || x > impl_->dom.hi)) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", x);
            throw data_error(std::string("point outside the model support: ") + buf);
        }
        cv.c.push_back(impl_->cdf(x));
    }
    std::sort(cv.c.begin(), cv.c.end());
    return cv;
}

const Geometry& ModelDistribution::geometry() const { return impl_->geom; }
Interval ModelDistribution::domain() const { return impl_->dom; }
Family ModelDistribution::family() const { return impl_->fam; }
const ParamMap& ModelDistribution::params() const { return impl_->prm; }

ModelDistribution ModelDistribution::with_params(const ParamMap& overrides) const {
    if (impl_->fam == Family::user_defined) {
        throw std::domain_error("with_params: not available for user-defined models");
    }
    ParamMap p = impl_->prm;
    for (const auto& [k, v] : overrides) p[canonical_param(impl_->fam, k)] = v;
    if (impl_->geom.is_circle()) p["period"] = impl_->geom.period;
    return make(impl_->fam, p);
}

ModelDistribution ModelDistribution::parse(const std::string& spec) {
    std::string s = spec;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::string tok;
    std::string family_name;
    ParamMap params;
    while (in >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) {
            if (family_name.empty()) { family_name = tok; continue; }
            throw data_error("model spec: expected key=value, got '" + tok + "'");
        }
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "family") { family_name = val; continue; }
        try {
            params[key] = std::stod(val);
        } catch (const std::exception&) {
            throw data_error("model spec: bad numeric value for '" + key + "'");
        }
    }
    if (family_name.empty()) {
        throw data_error("model spec: missing family (e.g. family=gauss)");
    }
    return make(family_from_string(family_name), params);
}

Sample jitter_sample(const Sample& s, double resolution, Rng& rng) {
    if (!(resolution > 0.0)) throw std::domain_error("jitter: resolution must be > 0");
    Sample out = s;
    for (double& x : out.values) {
        x += (uniform01(rng) - 0.5) * resolution;
    }
    out.canonicalize();
    return out;
}

} // namespace fidelity
