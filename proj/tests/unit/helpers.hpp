#pragma once

// Shared fixtures for the unit suites: the two worked-example models whose
// closed-form values are pinned as high-precision reference numbers, and a
// couple of small numeric helpers.

#include <Eigen/Dense>
#include <cmath>

#include "ruinalloc/model.hpp"

namespace testing {

// Two-line Brownian example: drift (-2,-1), unit variances, correlation 0.5.
// Aggregate: r = -3, sigma^2 = 3, covariance row shares w = (1/2, 1/2).
inline ruinalloc::BrownianModel brownian_example() {
  ruinalloc::BrownianModel m;
  m.drift = Eigen::Vector2d(-2.0, -1.0);
  m.cov = Eigen::MatrixXd{{1.0, 0.5}, {0.5, 1.0}};
  return m;
}

// Same diffusion with the drift sign flipped: aggregate drift +3.
inline ruinalloc::BrownianModel brownian_positive_drift() {
  ruinalloc::BrownianModel m = brownian_example();
  m.drift = -m.drift;
  return m;
}

// Zero aggregate drift, same covariance (aggregate variance 3).
inline ruinalloc::BrownianModel brownian_zero_drift() {
  ruinalloc::BrownianModel m = brownian_example();
  m.drift = Eigen::Vector2d(-1.0, 1.0);
  return m;
}

// Two-line compound Poisson example: premiums (1,1), intensities (0.85,0.95),
// unit-rate exponential claims. Aggregate: lambda = 1.8, r = 2, theta = 1;
// Cramer root 0.1; psi(u, inf) = 0.9 exp(-0.1 u).
inline ruinalloc::CompoundPoissonExpModel cp_example() {
  ruinalloc::CompoundPoissonExpModel m;
  m.premium = Eigen::Vector2d(1.0, 1.0);
  m.intensity = Eigen::Vector2d(0.85, 0.95);
  m.claim_rate = 1.0;
  return m;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace testing
