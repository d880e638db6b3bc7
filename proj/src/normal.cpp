#include "akt/normal.hpp"

#include <cmath>
#include <limits>

#include "akt/errors.hpp"

namespace akt::normal {

namespace {

constexpr double kSqrt1_2 = 0.70710678118654752440;
constexpr double kSqrt2Pi = 2.50662827463100050242;
constexpr double kTailCut = -5.0;
constexpr int kFractionTerms = 200;

// Tails F0, F1 of the Mills continued fraction
//   Q(t)/phi(t) = 1/(t + 1/(t + 2/(t + 3/(t + ...)))),
// F_j = t + (j+1)/F_{j+1}, evaluated backwards from a fixed depth.
void mills_fraction(double t, double& f0, double& f1) {
  double f = t;
  for (int j = kFractionTerms - 1; j >= 1; --j) f = t + (j + 1) / f;
  f1 = f;
  f0 = t + 1.0 / f1;
}

}  // namespace

double pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double log_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

double cdf(double x) { return 0.5 * std::erfc(-x * kSqrt1_2); }

double mills_ratio(double t) {
  if (t < 0) throw DomainError("mills_ratio: t must be nonnegative");
  if (t < 5.0) return 0.5 * std::erfc(t * kSqrt1_2) / pdf(t);
  double f0, f1;
  mills_fraction(t, f0, f1);
  return 1.0 / f0;
}

double log_cdf(double x) {
  if (x > 0) return std::log1p(-0.5 * std::erfc(x * kSqrt1_2));
  if (x > kTailCut) return std::log(cdf(x));
  return log_pdf(x) + std::log(mills_ratio(-x));
}

double inverse_mills(double x) {
  if (x > kTailCut) return pdf(x) / cdf(x);
  double f0, f1;
  mills_fraction(-x, f0, f1);
  return f0;
}

double integrated_cdf(double y) {
  if (y > kTailCut) return y * cdf(y) + pdf(y);
  double f0, f1;
  mills_fraction(-y, f0, f1);
  return pdf(y) / (f0 * f1);
}

double log_integrated_cdf(double y) {
  if (y > kTailCut) return std::log(y * cdf(y) + pdf(y));
  double f0, f1;
  mills_fraction(-y, f0, f1);
  return log_pdf(y) - std::log(f0) - std::log(f1);
}

double quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal quantile: p must lie in (0,1)");

  // Acklam's coefficients.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }

  // Halley refinement. In the upper half cdf(x) - p is rewritten on the
  // upper tail to avoid cancellation.
  const double e = p > 0.5 ? (1.0 - p) - 0.5 * std::erfc(x * kSqrt1_2) : cdf(x) - p;
  const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
  x -= u / (1 + 0.5 * x * u);
  return x;
}

}  // namespace akt::normal
