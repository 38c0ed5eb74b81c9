#pragma once

// Phase-type representation of the weighted compound Poisson model. Scaling
// component i's losses by x_i turns the shared exponential claim into a
// d-phase mixture: a claim from component i is Exp(claim_rate / x_i) with
// mixing weights intensity_i / lambda. The classical ruin formula for
// phase-type claims then gives the weighted model's ruin probability, which
// the gradient allocation differentiates numerically.

#include <Eigen/Dense>

#include "ruinalloc/model.hpp"

namespace ruinalloc {

// Mixture representation (initial distribution gamma, sub-generator M) of the
// weighted claim size distribution.
struct PhaseTypeClaim {
  Eigen::VectorXd gamma;  // gamma_i = intensity_i / lambda, sums to 1
  Eigen::MatrixXd M;      // diag(-claim_rate / x_i)
};

PhaseTypeClaim weighted_claim(const CompoundPoissonExpModel& model,
                              const Eigen::VectorXd& weights);

// Matrix exponential by scaling-and-squaring with a Pade approximant,
// backward-error bounded at unit roundoff scale. Square matrices up to
// dimension 64.
Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& A);

struct PhaseTypeRuin {
  double probability = 0.0;
  // Set when the weighted model violates the net profit condition; the
  // probability is then 1 regardless of u.
  bool almost_sure = false;
};

// Infinite-horizon ruin probability of the weighted model
//   Z(t) = sum_i weights_i S_i(t),
// whose premium is p(x) = sum_i weights_i premium_i:
//   psi_x(u) = gamma_plus exp((M - M e gamma_plus) u) e,
//   gamma_plus = -(lambda / p(x)) gamma M^{-1}.
// At weights = 1 this reduces to the Cramer-Lundberg exponential formula.
PhaseTypeRuin phase_type_ruin(const CompoundPoissonExpModel& model,
                              const Eigen::VectorXd& weights, double u);

// phase_type_ruin together with d psi_x / du (one extra matrix product), used
// to polish capital roots of psi_x(u) = alpha to machine precision.
struct PhaseTypeRuinEval {
  double probability = 0.0;
  double d_probability_du = 0.0;
  bool almost_sure = false;
};
PhaseTypeRuinEval phase_type_ruin_eval(const CompoundPoissonExpModel& model,
                                       const Eigen::VectorXd& weights, double u);

}  // namespace ruinalloc
