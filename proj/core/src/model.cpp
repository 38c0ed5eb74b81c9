#include "ruinalloc/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "ruinalloc/errors.hpp"

namespace ruinalloc {

namespace {

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

void check_positive_vector(const Eigen::VectorXd& v, const char* name,
                           std::vector<std::string>& out) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) {
      std::ostringstream os;
      os << name << "[" << i << "] must be positive, got " << v[i];
      out.push_back(os.str());
      return;
    }
  }
}

}  // namespace

int dimension(const RiskModel& model) {
  return std::visit([](const auto& m) { return m.dimension(); }, model);
}

Horizon Horizon::finite(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw ValidationError("horizon must be a positive finite time");
  }
  return Horizon(t);
}

Horizon Horizon::infinite() {
  return Horizon(std::numeric_limits<double>::infinity());
}

bool Horizon::is_finite() const { return std::isfinite(t_); }

std::string Horizon::str() const {
  if (!is_finite()) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << t_;
  return os.str();
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i];
  }
  return os.str();
}

ValidationReport validate(const RiskModel& model) {
  ValidationReport report;
  auto& v = report.violations;

  if (const auto* bm = std::get_if<BrownianModel>(&model)) {
    const Eigen::Index d = bm->drift.size();
    if (d < 2) v.push_back("model must have at least 2 components");
    if (bm->cov.rows() != d || bm->cov.cols() != d) {
      v.push_back("covariance dimensions must match the drift vector");
    }
    if (!all_finite(bm->drift) || !bm->cov.allFinite()) {
      v.push_back("all entries must be finite");
    }
    if (v.empty()) {
      const double scale = bm->cov.cwiseAbs().maxCoeff();
      const double asym = (bm->cov - bm->cov.transpose()).cwiseAbs().maxCoeff();
      if (asym > 1e-12 * std::max(1.0, scale)) {
        v.push_back("covariance must be symmetric");
      } else {
        // PSD within 1e-10 relative tolerance on the entry scale.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(bm->cov,
                                                          Eigen::EigenvaluesOnly);
        const double min_eig = es.eigenvalues().minCoeff();
        if (min_eig < -1e-10 * std::max(1.0, scale)) {
          std::ostringstream os;
          os << "covariance must be positive semidefinite (min eigenvalue "
             << min_eig << ")";
          v.push_back(os.str());
        }
      }
      if (!(bm->cov.sum() > 0.0)) {
        v.push_back("aggregate variance must be positive");
      }
      report.mean_loss_drift = bm->drift.sum();
      report.drift_negative = report.mean_loss_drift < 0.0;
    }
  } else {
    const auto& cp = std::get<CompoundPoissonExpModel>(model);
    const Eigen::Index d = cp.premium.size();
    if (d < 2) v.push_back("model must have at least 2 components");
    if (cp.intensity.size() != d) {
      v.push_back("premium and intensity vectors must have equal length");
    }
    if (!all_finite(cp.premium) || !all_finite(cp.intensity) ||
        !std::isfinite(cp.claim_rate)) {
      v.push_back("all entries must be finite");
    }
    if (v.empty()) {
      check_positive_vector(cp.premium, "premium", v);
      check_positive_vector(cp.intensity, "intensity", v);
      if (!(cp.claim_rate > 0.0)) v.push_back("claim_rate must be positive");
    }
    if (v.empty()) {
      report.mean_loss_drift =
          cp.total_intensity() / cp.claim_rate - cp.premium.sum();
      report.drift_negative = report.mean_loss_drift < 0.0;
    }
  }
  return report;
}

void require_valid(const RiskModel& model) {
  const ValidationReport report = validate(model);
  if (!report.ok()) {
    throw ValidationError("invalid model: " + report.summary());
  }
}

void require_valid(const RuinQuery& query) {
  if (!(query.u >= 0.0) || !std::isfinite(query.u)) {
    throw ValidationError("initial capital u must be finite and nonnegative");
  }
}

AggregateParams aggregate_params(const RiskModel& model) {
  AggregateParams out;
  if (const auto* bm = std::get_if<BrownianModel>(&model)) {
    out.drift = bm->drift.sum();
    out.cov_row_sums = bm->cov.rowwise().sum();
    out.variance = out.cov_row_sums.sum();
  } else {
    const auto& cp = std::get<CompoundPoissonExpModel>(model);
    out.drift = cp.premium.sum();
    out.intensity = cp.total_intensity();
    out.claim_rate = cp.claim_rate;
  }
  return out;
}

}  // namespace ruinalloc
