#include "ruinalloc/normal.hpp"

#include <cmath>
#include <limits>

namespace ruinalloc::normal {

namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;    // 1/sqrt(2)
constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2 pi)
constexpr double kInvSqrtPi = 0.5641895835477562869;   // 1/sqrt(pi)
constexpr double kSqrt2OverPi = 0.7978845608028653559; // sqrt(2/pi)

// Asymptotic expansion of erfcx for large positive x:
//   erfcx(x) = 1/(x sqrt(pi)) * sum_k (-1)^k (2k-1)!! / (2x^2)^k.
// At x >= 26 the truncated series is accurate to well below 1e-16.
double erfcx_asymptotic(double x) {
  const double z = 0.5 / (x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 8; ++k) {
    term *= -(2.0 * k - 1.0) * z;
    sum += term;
  }
  return sum * kInvSqrtPi / x;
}

}  // namespace

double pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

double erfcx(double x) {
  if (std::isnan(x)) return x;
  if (x >= 26.0) return erfcx_asymptotic(x);
  // Negative and moderate positive arguments: exp(x^2) is representable until
  // x ~ 26.6 and erfc does not underflow before x ~ 27. Compensate the
  // rounding of x*x with the fma residual so exp does not amplify it.
  const double xx = x * x;
  const double res = std::fma(x, x, -xx);
  return std::exp(xx) * (1.0 + res) * std::erfc(x);
}

double log_cdf(double z) {
  if (z > -1.0) {
    return std::log(cdf(z));
  }
  // Phi(z) = 0.5 erfcx(x) exp(-x^2) with x = -z/sqrt(2) > 0; the residual of
  // x*x keeps the exponent exact to double precision.
  const double x = -z * kInvSqrt2;
  const double xx = x * x;
  const double res = std::fma(x, x, -xx);
  return std::log(0.5 * erfcx(x)) - xx - res;
}

double hazard(double z) {
  if (z > 8.0) return pdf(z);  // Phi(z) = 1 to double precision
  return kSqrt2OverPi / erfcx(-z * kInvSqrt2);
}

}  // namespace ruinalloc::normal
