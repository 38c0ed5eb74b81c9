#pragma once

// Laplace exponent machinery: aggregate and joint exponents, the adjustment
// coefficient (Cramer root), and the associated exponential change of measure.

#include <Eigen/Dense>
#include <functional>

#include "ruinalloc/model.hpp"

namespace ruinalloc {

// Aggregate Laplace exponent kappa(theta) = log E exp(theta * S(1)).
// Brownian: theta*r + theta^2 sigma^2 / 2.
// Compound Poisson: -theta*r + lambda*theta/(theta_claim - theta), with a pole
// at theta_claim; arguments at or beyond the pole raise std::domain_error.
double levy_exponent_aggregate(const RiskModel& model, double theta);

// Joint exponent kappa_S(theta) = log E exp(<theta, S(1)>).
double levy_exponent(const RiskModel& model, const Eigen::VectorXd& theta);

// Positive root theta* of kappa(theta) = 0 (closed form per family).
// Requires negative aggregate loss drift, else NoCramerRoot.
double cramer_root(const RiskModel& model);

// Generic safeguarded solver for kappa(theta*) = 0 on (0, pole): bisection
// bracketing plus Newton steps with a finite-difference derivative. kappa must
// be convex with kappa(0) = 0 and kappa'(0) < 0; pole may be +inf. The result
// satisfies |kappa(theta*)| <= 1e-12 * max(1, |kappa'(theta*)|).
double cramer_root_generic(const std::function<double(double)>& kappa, double pole);

// Parameters of the exponentially tilted (ruin-conditioned) measure.
struct TiltedParams {
  RiskModel q_model;           // same family, tilted parameters
  double theta_star = 0.0;     // Cramer root used for the tilt
  Eigen::VectorXd mean_rates;  // m_i = E under the tilt of S_i(1)
  double mean_rate_total = 0.0;  // m = kappa'(theta*) = sum_i m_i > 0
};

// Exponential tilt at the Cramer root. Under the tilted measure the aggregate
// drifts upward at rate mean_rate_total and ruin is certain.
// Brownian: drift_i -> drift_i + theta* (Sigma 1)_i, covariance unchanged.
// Compound Poisson: claim rate theta -> theta - theta* = lambda/r and
// intensity_i -> intensity_i * theta * r / lambda; premiums unchanged.
TiltedParams tilt(const RiskModel& model);

// E[ |X_1| | X_2 = x2 ] for (X_1, X_2) bivariate normal with means mu1, mu2,
// standard deviations s1 >= 0, s2 > 0 and correlation rho in [-1, 1].
double cond_abs_mean_bivariate_normal(double mu1, double mu2, double s1,
                                      double s2, double rho, double x2);

}  // namespace ruinalloc
