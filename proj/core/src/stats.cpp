#include "ruinalloc/stats.hpp"

#include <algorithm>
#include <cmath>

#include "ruinalloc/errors.hpp"

namespace ruinalloc::stats {

double ks_statistic_exponential(std::vector<double> samples, double rate) {
  if (samples.empty()) throw ValidationError("KS statistic needs samples");
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw ValidationError("exponential rate must be positive and finite");
  }
  for (double x : samples) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw ValidationError(
          "exponential samples must be nonnegative and finite");
    }
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = -std::expm1(-rate * samples[i]);
    const double lo = cdf - static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n - cdf;
    d = std::max({d, lo, hi});
  }
  return d;
}

double ks_critical_value(double level, std::size_t n) {
  if (!(level > 0.0) || !(level < 1.0)) {
    throw ValidationError("significance level must lie in (0, 1)");
  }
  if (n == 0) throw ValidationError("KS critical value needs a sample size");
  // Asymptotic Kolmogorov quantile: c(a) = sqrt(-ln(a/2)/2), e.g. 1.358 at 5%
  // and 1.628 at 1%.
  return std::sqrt(-0.5 * std::log(0.5 * level)) / std::sqrt(static_cast<double>(n));
}

double pearson_correlation(const std::vector<double>& x,
                           const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("correlation needs two samples of equal size >= 2");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ValidationError("correlation undefined for a constant sample");
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace ruinalloc::stats
