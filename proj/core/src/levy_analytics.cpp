#include "ruinalloc/levy_analytics.hpp"

#include <cmath>
#include <sstream>

#include "ruinalloc/errors.hpp"
#include "ruinalloc/normal.hpp"

namespace ruinalloc {

namespace {

double kappa_brownian(double r, double s2, double theta) {
  return theta * r + 0.5 * theta * theta * s2;
}

double kappa_cp(double r, double lambda, double theta_claim, double theta) {
  if (theta >= theta_claim) {
    std::ostringstream os;
    os << "Laplace exponent argument " << theta
       << " is at or beyond the claim-rate pole " << theta_claim;
    throw std::domain_error(os.str());
  }
  return -theta * r + lambda * theta / (theta_claim - theta);
}

}  // namespace

double levy_exponent_aggregate(const RiskModel& model, double theta) {
  require_valid(model);
  if (!std::isfinite(theta)) throw std::domain_error("theta must be finite");
  const AggregateParams agg = aggregate_params(model);
  if (std::holds_alternative<BrownianModel>(model)) {
    return kappa_brownian(agg.drift, agg.variance, theta);
  }
  return kappa_cp(agg.drift, agg.intensity, agg.claim_rate, theta);
}

double levy_exponent(const RiskModel& model, const Eigen::VectorXd& theta) {
  require_valid(model);
  if (theta.size() != dimension(model) || !theta.allFinite()) {
    throw ValidationError("theta must be a finite vector matching the model dimension");
  }
  if (const auto* bm = std::get_if<BrownianModel>(&model)) {
    return theta.dot(bm->drift) + 0.5 * theta.dot(bm->cov * theta);
  }
  const auto& cp = std::get<CompoundPoissonExpModel>(model);
  double sum = -theta.dot(cp.premium);
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (theta[i] >= cp.claim_rate) {
      throw std::domain_error("joint exponent argument at or beyond the claim-rate pole");
    }
    sum += cp.intensity[i] * theta[i] / (cp.claim_rate - theta[i]);
  }
  return sum;
}

double cramer_root(const RiskModel& model) {
  require_valid(model);
  const AggregateParams agg = aggregate_params(model);
  if (const auto* bm = std::get_if<BrownianModel>(&model)) {
    (void)bm;
    if (!(agg.drift < 0.0)) {
      throw NoCramerRoot("Brownian aggregate drift must be negative for a Cramer root");
    }
    return -2.0 * agg.drift / agg.variance;
  }
  // Net profit: premium income must exceed the mean claim cost lambda/theta.
  if (!(agg.drift > agg.intensity / agg.claim_rate)) {
    throw NoCramerRoot("net profit condition fails: no positive Cramer root");
  }
  return agg.claim_rate - agg.intensity / agg.drift;
}

double cramer_root_generic(const std::function<double(double)>& kappa,
                           double pole) {
  if (!(pole > 0.0)) throw ValidationError("pole must be positive (may be +inf)");
  const bool bounded = std::isfinite(pole);

  // Find lo with kappa(lo) < 0. kappa is convex with kappa(0) = 0, so failure
  // to find one means kappa'(0) >= 0 and no positive root exists.
  double lo = bounded ? 0.5 * pole : 1.0;
  while (kappa(lo) >= 0.0) {
    lo *= 0.5;
    if (lo < 1e-300) {
      throw NoCramerRoot("exponent is nonnegative arbitrarily close to zero");
    }
  }
  // Find hi with kappa(hi) > 0, approaching the pole (or doubling when open).
  double hi;
  if (bounded) {
    double step = 0.5 * (pole - lo);
    hi = lo + step;
    while (kappa(hi) <= 0.0) {
      step *= 0.5;
      hi = pole - step;
      if (step < 1e-300 * pole) {
        throw NoCramerRoot("exponent stays nonpositive up to the pole");
      }
    }
  } else {
    hi = std::max(1.0, 2.0 * lo);
    while (kappa(hi) <= 0.0) {
      hi *= 2.0;
      if (hi > 1e300) {
        throw NoCramerRoot("exponent stays nonpositive; no finite root found");
      }
    }
  }

  // Safeguarded Newton: finite-difference slope, bisection fallback whenever
  // the step leaves the bracket.
  double x = 0.5 * (lo + hi);
  double fx = kappa(x);
  double slope = 1.0;
  for (int it = 0; it < 200; ++it) {
    if (fx > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double h = std::max(1e-9 * x, 1e-12);
    const double xp = std::min(x + h, bounded ? 0.5 * (x + pole) : x + h);
    slope = (kappa(xp) - fx) / (xp - x);
    double next = (slope > 0.0) ? x - fx / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * x) {
      x = next;
      fx = kappa(x);
      break;
    }
    x = next;
    fx = kappa(x);
    if (std::abs(fx) <= 1e-13 * std::max(1.0, std::abs(slope))) break;
  }
  if (std::abs(fx) > 1e-12 * std::max(1.0, std::abs(slope))) {
    throw NoCramerRoot("root refinement failed to reach the residual tolerance");
  }
  return x;
}

TiltedParams tilt(const RiskModel& model) {
  TiltedParams out;
  out.theta_star = cramer_root(model);
  const AggregateParams agg = aggregate_params(model);

  if (const auto* bm = std::get_if<BrownianModel>(&model)) {
    BrownianModel q = *bm;
    q.drift = bm->drift + out.theta_star * agg.cov_row_sums;
    out.mean_rates = q.drift;
    out.mean_rate_total = agg.drift + out.theta_star * agg.variance;  // = -r
    out.q_model = std::move(q);
  } else {
    const auto& cp = std::get<CompoundPoissonExpModel>(model);
    const double lambda = agg.intensity;
    const double r = agg.drift;
    const double theta_q = cp.claim_rate - out.theta_star;  // = lambda / r
    CompoundPoissonExpModel q = cp;
    q.claim_rate = theta_q;
    q.intensity = cp.intensity * (cp.claim_rate * r / lambda);
    out.mean_rates = q.intensity / theta_q - q.premium;
    out.mean_rate_total =
        -r + cp.claim_rate * r * r / lambda;  // kappa'(theta*)
    out.q_model = std::move(q);
  }

  // Defensive post-conditions: the tilt must sit exactly on the root and the
  // component mean rates must add up to the aggregate rate.
  const double resid = levy_exponent_aggregate(model, out.theta_star);
  const double slope = out.mean_rate_total;
  if (std::abs(resid) > 1e-12 * std::max(1.0, std::abs(slope))) {
    throw Error("tilt: exponent residual at theta* exceeds tolerance");
  }
  if (!(out.mean_rate_total > 0.0) ||
      std::abs(out.mean_rates.sum() - out.mean_rate_total) >
          1e-12 * std::max(1.0, std::abs(out.mean_rate_total))) {
    throw Error("tilt: mean rates are inconsistent");
  }
  return out;
}

double cond_abs_mean_bivariate_normal(double mu1, double mu2, double s1,
                                      double s2, double rho, double x2) {
  if (!std::isfinite(mu1) || !std::isfinite(mu2) || !std::isfinite(x2) ||
      !std::isfinite(s1) || !std::isfinite(s2) || !std::isfinite(rho)) {
    throw ValidationError("cond_abs_mean: arguments must be finite");
  }
  if (!(s1 >= 0.0) || !(s2 > 0.0) || std::abs(rho) > 1.0) {
    throw ValidationError("cond_abs_mean: need s1 >= 0, s2 > 0, |rho| <= 1");
  }
  const double mean = mu1 + rho * (s1 / s2) * (x2 - mu2);
  const double sd = s1 * std::sqrt(std::max(0.0, 1.0 - rho * rho));
  if (sd == 0.0) return std::abs(mean);  // degenerate conditional law
  const double c = -mean / sd;
  return mean * (1.0 - 2.0 * normal::cdf(c)) + 2.0 * sd * normal::pdf(c);
}

}  // namespace ruinalloc
