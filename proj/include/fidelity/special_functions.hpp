#pragma once

#include <stdexcept>

// Self-contained special-function kernel: log-gamma, regularized upper
// incomplete gamma, digamma/trigamma, and the regularized incomplete beta.
// All functions are pure and thread-safe.

namespace fidelity::sf {

struct Accuracy {
    double relative_tolerance = 1e-12;
    int max_iterations = 500;
};

inline constexpr double euler_gamma = 0.57721566490153286061;

// ln Gamma(x) for x > 0, relative error <~ 1e-13 (Lanczos g=7).
double log_gamma(double x);

// Q(s,x) = Gamma(s,x)/Gamma(s), the upper regularized gamma function.
// Series for x < s+1, continued fraction otherwise.
double regularized_gamma_q(double s, double x, const Accuracy& acc = {});

// P(s,x) = 1 - Q(s,x).
double regularized_gamma_p(double s, double x, const Accuracy& acc = {});

// psi^(0), psi^(1) for x > 0, via upward recurrence to x >= 10 followed by
// the asymptotic series.
double digamma(double x);
double trigamma(double x);

// order must be 0 or 1.
double polygamma(int order, double x);

double log_beta(double a, double b);

// I_x(a,b), the regularized incomplete beta function (continued fraction).
double regularized_incomplete_beta(double a, double b, double x,
                                   const Accuracy& acc = {});

// Modified Bessel function of the first kind, order zero (power series;
// the terms are all positive so there is no cancellation).
double bessel_i0(double x);

} // namespace fidelity::sf
