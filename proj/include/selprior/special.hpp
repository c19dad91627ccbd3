#pragma once

namespace selprior {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794; // 1/sqrt(2*pi)
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178; // log(sqrt(2*pi))

double std_normal_pdf(double x);
double std_normal_log_pdf(double x);

// Phi(x).  The tail (x <= -8) is evaluated through the log-scale routine.
double std_normal_cdf(double x);

// log Phi(x), accurate in relative terms far into the left tail.  For
// x <= -8 this uses the Mills-ratio continued fraction in log space; a
// naive log(1 - Phi(-x)) loses all precision there.
double std_normal_log_cdf(double x);

// Inverse of Phi, p in (0,1).
double std_normal_quantile(double p);

// First and second derivatives of log Phi.  h2 is assembled from h1 with
// the exact relation h2 = -x*h1 - h1^2.
struct HazardPair {
    double h1;
    double h2;
};
HazardPair hazard_pair(double x);

// log h1(x).  In the deep left tail this is -log of the Mills ratio, which
// avoids the cancellation of forming log phi - log Phi from two huge terms.
double log_hazard_h1(double x);

// 1 + h2(x), which is the variance of a unit normal centred at x and
// truncated to (0, inf).  Evaluated directly for moderate x and by an
// asymptotic series deep in the left tail where the direct form cancels.
double one_plus_h2(double x);

// Antiderivative in x of x*phi(x)*Phi(a + b*x):
//   F(x; a, b) = (b/d) phi(a/d) Phi(d*x + a*b/d) - phi(x) Phi(a + b*x),
// with d = sqrt(1 + b^2).  Some printed statements of this identity carry
// "x*t" in place of "d*x" inside the first Phi; the derivative property
// d/dx F = x*phi(x)*Phi(a+bx) holds only for the form used here.
double owen_linear_antiderivative(double x, double a, double b);

// P(G <= x) for G ~ Gamma(shape, rate).
double regularized_gamma_cdf(double shape, double rate, double x);

// CDF of the inverse Gaussian distribution with the given mean and shape.
// The exp(2*shape/mean) factor is combined with log Phi to avoid overflow.
double inverse_gaussian_cdf(double mean, double shape, double x);

} // namespace selprior
