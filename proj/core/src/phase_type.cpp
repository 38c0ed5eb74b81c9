#include "ruinalloc/phase_type.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>

#include "ruinalloc/errors.hpp"

namespace ruinalloc {

namespace {

constexpr int kMaxDimension = 64;

void require_weights(const CompoundPoissonExpModel& model,
                     const Eigen::VectorXd& weights) {
  if (weights.size() != model.dimension()) {
    throw ValidationError("weights must match the model dimension");
  }
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw ValidationError("weights must be positive and finite");
    }
  }
}

}  // namespace

PhaseTypeClaim weighted_claim(const CompoundPoissonExpModel& model,
                              const Eigen::VectorXd& weights) {
  require_valid(RiskModel(model));
  require_weights(model, weights);
  PhaseTypeClaim claim;
  claim.gamma = model.intensity / model.total_intensity();
  claim.M = (-model.claim_rate * weights.cwiseInverse()).asDiagonal();
  return claim;
}

Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& A) {
  if (A.rows() != A.cols()) {
    throw ValidationError("matrix_exp requires a square matrix");
  }
  if (A.rows() > kMaxDimension) {
    throw ValidationError("matrix_exp supports dimensions up to 64");
  }
  if (!A.allFinite()) {
    throw ValidationError("matrix_exp requires finite entries");
  }
  return A.exp();
}

PhaseTypeRuinEval phase_type_ruin_eval(const CompoundPoissonExpModel& model,
                                       const Eigen::VectorXd& weights, double u) {
  if (!(u >= 0.0) || !std::isfinite(u)) {
    throw ValidationError("capital u must be finite and nonnegative");
  }
  const PhaseTypeClaim claim = weighted_claim(model, weights);
  const double lambda = model.total_intensity();
  const double premium = weights.dot(model.premium);
  // Net profit for the weighted model: lambda * mean weighted claim < premium.
  const double mean_claim = claim.gamma.dot(weights) / model.claim_rate;
  if (!(premium > lambda * mean_claim)) {
    return {1.0, 0.0, true};
  }

  const Eigen::Index d = claim.gamma.size();
  // gamma_plus = -(lambda/p) gamma M^{-1}; M is diagonal here.
  const Eigen::RowVectorXd gamma_plus =
      (lambda / premium) *
      (claim.gamma.array() * weights.array() / model.claim_rate).matrix().transpose();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(d);
  const Eigen::MatrixXd G =
      claim.M - (claim.M * ones) * gamma_plus;  // phase generator of the ladder chain
  const Eigen::MatrixXd E = matrix_exp(G * u);

  PhaseTypeRuinEval out;
  out.probability = std::clamp((gamma_plus * E * ones).value(), 0.0, 1.0);
  out.d_probability_du = (gamma_plus * G * E * ones).value();
  return out;
}

PhaseTypeRuin phase_type_ruin(const CompoundPoissonExpModel& model,
                              const Eigen::VectorXd& weights, double u) {
  const PhaseTypeRuinEval eval = phase_type_ruin_eval(model, weights, u);
  return {eval.probability, eval.almost_sure};
}

}  // namespace ruinalloc
