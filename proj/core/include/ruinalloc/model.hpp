#pragma once

#include <Eigen/Dense>
#include <string>
#include <variant>
#include <vector>

namespace ruinalloc {

// Multivariate Brownian loss model: component i carries the net loss process
//   S_i(t) = drift_i * t + diffusion_i(t),
// where the diffusion vector has covariance matrix cov per unit time. The
// aggregate S(t) = sum_i S_i(t) is Brownian with drift sum(drift) and
// variance sum of all cov entries. Ruin means S(t) >= u.
struct BrownianModel {
  Eigen::VectorXd drift;  // per-component loss drift r_i (any sign)
  Eigen::MatrixXd cov;    // symmetric PSD covariance Sigma, aggregate variance > 0

  int dimension() const { return static_cast<int>(drift.size()); }
};

// Multivariate compound Poisson loss model with a shared exponential claim
// size distribution: component i collects premium at rate premium_i and pays
// claims arriving with Poisson intensity intensity_i, each claim Exp(claim_rate):
//   S_i(t) = sum of component-i claims up to t - premium_i * t.
struct CompoundPoissonExpModel {
  Eigen::VectorXd premium;    // r_i > 0
  Eigen::VectorXd intensity;  // beta_i > 0
  double claim_rate = 0.0;    // theta > 0, shared across components

  int dimension() const { return static_cast<int>(premium.size()); }
  double total_intensity() const { return intensity.sum(); }
};

using RiskModel = std::variant<BrownianModel, CompoundPoissonExpModel>;

int dimension(const RiskModel& model);

// Evaluation horizon T in (0, inf].
class Horizon {
 public:
  static Horizon finite(double t);
  static Horizon infinite();

  bool is_finite() const;
  // Horizon length; +inf for the infinite horizon.
  double time() const { return t_; }

  std::string str() const;

 private:
  explicit Horizon(double t) : t_(t) {}
  double t_;
};

// Ruin problem input: initial capital u >= 0 (u = 0 starts at the barrier)
// and a horizon.
struct RuinQuery {
  double u = 0.0;
  Horizon horizon = Horizon::infinite();
};

struct ValidationReport {
  std::vector<std::string> violations;

  // E[S(1)], the mean aggregate loss drift: Brownian sum(drift); compound
  // Poisson total_intensity/claim_rate - sum(premium).
  double mean_loss_drift = 0.0;
  // True when mean_loss_drift < 0. For the compound Poisson family this is
  // the net profit condition; for Brownian it means ruin is not certain.
  bool drift_negative = false;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

// Structural checks: dimensions >= 2 and consistent, finite entries, positive
// premiums/intensities/claim rate, covariance symmetric and PSD within
// 1e-10 relative tolerance, positive aggregate variance.
ValidationReport validate(const RiskModel& model);

// Throw ValidationError if validate() reports violations.
void require_valid(const RiskModel& model);

// Throw ValidationError unless u >= 0 and finite.
void require_valid(const RuinQuery& query);

// Aggregate-level parameters. Brownian models fill drift, variance and
// cov_row_sums; compound Poisson models fill drift (aggregate premium),
// intensity and claim_rate.
struct AggregateParams {
  double drift = 0.0;            // Brownian: r = sum r_i; CP: aggregate premium
  double variance = 0.0;         // Brownian only: sigma^2 = sum_ij Sigma_ij
  double intensity = 0.0;        // CP only: lambda = sum beta_i
  double claim_rate = 0.0;       // CP only: theta
  Eigen::VectorXd cov_row_sums;  // Brownian only: (Sigma 1)_i = sum_j Sigma_ij
};

AggregateParams aggregate_params(const RiskModel& model);

}  // namespace ruinalloc
