#pragma once

namespace akt::normal {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// Standard normal density.
double pdf(double x);
double log_pdf(double x);

// Standard normal CDF, computed as erfc(-x/sqrt 2)/2. libm's erfc is a
// piecewise rational minimax approximation accurate to about one ulp, which
// keeps the absolute error of cdf() below 1e-16.
double cdf(double x);

// log cdf(x), accurate deep into the lower tail (Mills-ratio continued
// fraction below x = -5).
double log_cdf(double x);

// pdf(x) / cdf(x), stable for very negative x.
double inverse_mills(double x);

// Inverse CDF. Acklam's rational approximation (relative error 1.2e-9)
// followed by one Halley step against cdf(), giving close to full double
// precision. Requires 0 < p < 1.
double quantile(double p);

// Mills ratio Q(t)/phi(t) for t >= 0.
double mills_ratio(double t);

// Integral of the CDF up to y: y*cdf(y) + pdf(y). The direct formula
// cancels catastrophically for y << 0, so below y = -5 it is evaluated as
// pdf(y) / (F0 * F1) with F0, F1 the first two tails of the Mills-ratio
// continued fraction.
double integrated_cdf(double y);
double log_integrated_cdf(double y);

}  // namespace akt::normal
