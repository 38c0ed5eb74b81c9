#include "ruinalloc/allocation_engine.hpp"

#include <cmath>
#include <sstream>

#include "ruinalloc/errors.hpp"
#include "ruinalloc/levy_analytics.hpp"
#include "ruinalloc/normal.hpp"
#include "ruinalloc/phase_type.hpp"
#include "ruinalloc/ruin_engine.hpp"

namespace ruinalloc {

namespace {

// Proxy horizon for the experimental zero-drift infinite-horizon rule.
constexpr double kZeroDriftProxyHorizon = 1e6;

void require_capital(double u) {
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw ValidationError("allocation requires a positive finite capital u");
  }
}

struct BrownianFacts {
  double r;           // aggregate drift
  double s2;          // aggregate variance
  Eigen::VectorXd w;  // regression weights (Sigma 1)_i / sigma^2
};

BrownianFacts brownian_facts(const BrownianModel& bm) {
  const AggregateParams agg = aggregate_params(RiskModel(bm));
  return {agg.drift, agg.variance, agg.cov_row_sums / agg.variance};
}

struct CpFacts {
  double lambda;
  double r;
  double theta;
  double theta_q;          // claim rate under the tilt, lambda / r
  double m;                // tilted aggregate drift -r + theta r^2 / lambda
  Eigen::VectorXd gamma;   // intensity_i / lambda
};

// Requires net profit; throws NoCramerRoot otherwise.
CpFacts cp_facts(const CompoundPoissonExpModel& cp) {
  CpFacts f;
  f.lambda = cp.total_intensity();
  f.r = cp.premium.sum();
  f.theta = cp.claim_rate;
  if (!(f.r > f.lambda / f.theta)) {
    throw NoCramerRoot("net profit condition fails for the compound Poisson model");
  }
  f.theta_q = f.lambda / f.r;
  f.m = -f.r + f.theta * f.r * f.r / f.lambda;
  f.gamma = cp.intensity / f.lambda;
  return f;
}

AllocationReport make_report(AllocationMethod method, Backend backend, double u,
                             const Horizon& horizon, Eigen::VectorXd fractions) {
  AllocationReport rep;
  rep.method = method;
  rep.backend = backend;
  rep.u = u;
  rep.horizon = horizon;
  rep.amounts = u * fractions;
  rep.fractions = std::move(fractions);
  return rep;
}

// Shared shape of both Brownian rules: fractions_i = (t_cond (r_i - w_i r) + w_i u)/u
// where t_cond is the conditional time (ruin time or argmax location).
Eigen::VectorXd brownian_fractions(const BrownianModel& bm, const BrownianFacts& f,
                                   double t_cond, double u) {
  return ((t_cond / u) * (bm.drift - f.r * f.w) + f.w).eval();
}

std::string format_std_errors(const std::vector<SimEstimate>& est) {
  std::ostringstream os;
  os.precision(3);
  os << "monte carlo std errors:";
  for (std::size_t i = 0; i < est.size(); ++i) {
    os << (i ? ", " : " ") << est[i].std_error;
  }
  return os.str();
}

}  // namespace

const char* to_string(AllocationMethod method) {
  switch (method) {
    case AllocationMethod::time_of_ruin: return "time_of_ruin";
    case AllocationMethod::sup_location: return "sup_location";
    case AllocationMethod::gradient: return "gradient";
    case AllocationMethod::asymptotic: return "asymptotic";
  }
  return "unknown";
}

const char* to_string(Backend backend) {
  return backend == Backend::closed_form ? "closed_form" : "monte_carlo";
}

AllocationReport allocate_time_of_ruin(const RiskModel& model, double u,
                                       const Horizon& horizon,
                                       const SimConfig& cfg) {
  require_valid(model);
  require_capital(u);

  if (const auto* bm = std::get_if<BrownianModel>(&model)) {
    const BrownianFacts f = brownian_facts(*bm);
    double t_cond;
    std::string note;
    if (horizon.is_finite() || f.r != 0.0) {
      t_cond = expected_ruin_time_given_ruin(*bm, u, horizon);
    } else {
      // Zero aggregate drift, infinite horizon: E[tau] diverges; evaluate at a
      // large proxy horizon. Experimental: diverges unless drift is componentwise 0.
      t_cond = expected_ruin_time_given_ruin(*bm, u, Horizon::finite(kZeroDriftProxyHorizon));
      note = "experimental: zero-drift infinite horizon evaluated at proxy T=1e6";
    }
    auto rep = make_report(AllocationMethod::time_of_ruin, Backend::closed_form, u,
                           horizon, brownian_fractions(*bm, f, t_cond, u));
    rep.diagnostics.expected_ruin_time = t_cond;
    if (!note.empty()) rep.diagnostics.notes.push_back(std::move(note));
    return rep;
  }

  const auto& cp = std::get<CompoundPoissonExpModel>(model);
  if (!horizon.is_finite()) {
    const CpFacts f = cp_facts(cp);
    const double ratio = (u + 1.0 / f.theta_q) / (f.m * (u + 1.0 / f.theta));
    const Eigen::VectorXd fractions =
        f.gamma + ratio * (f.r * f.gamma - cp.premium);
    auto rep = make_report(AllocationMethod::time_of_ruin, Backend::closed_form, u,
                           horizon, fractions);
    rep.diagnostics.expected_ruin_time = (u + 1.0 / f.theta_q) / f.m;
    return rep;
  }

  // Finite horizon: exact claim-epoch simulation.
  const RuinAllocationSim sim =
      simulate_allocation_time_of_ruin(model, u, horizon.time(), cfg);
  Eigen::VectorXd fractions(sim.fractions.size());
  for (std::size_t i = 0; i < sim.fractions.size(); ++i) {
    fractions[static_cast<Eigen::Index>(i)] = sim.fractions[i].value;
  }
  auto rep = make_report(AllocationMethod::time_of_ruin, Backend::monte_carlo, u,
                         horizon, fractions);
  rep.diagnostics.expected_ruin_time = sim.ruin_time.value;
  rep.diagnostics.notes.push_back(format_std_errors(sim.fractions));
  return rep;
}

AllocationReport allocate_sup_location(const RiskModel& model, double u,
                                       const Horizon& horizon,
                                       const SimConfig& cfg) {
  require_valid(model);
  require_capital(u);

  if (const auto* bm = std::get_if<BrownianModel>(&model)) {
    const BrownianFacts f = brownian_facts(*bm);
    double t_cond;
    if (horizon.is_finite()) {
      const double T = horizon.time();
      const double zeta = (-u - f.r * T) / std::sqrt(f.s2 * T);
      // E[t* | S(t*) = u] = u / (-r + (s/sqrt(T)) pdf(zeta)/cdf(zeta)).
      const double denom = -f.r + std::sqrt(f.s2 / T) * normal::hazard(zeta);
      if (!(denom > 0.0)) {
        // Positive drift with the conditioning density numerically zero.
        throw InfeasibleCondition(
            "supremum-location conditioning density underflows at this (u, T)");
      }
      t_cond = std::min(u / denom, T);
    } else if (f.r < 0.0) {
      t_cond = -u / f.r;
    } else {
      throw UndefinedAllocation(
          "the running supremum over an infinite horizon is infinite for "
          "nonnegative drift: supremum-location allocation undefined");
    }
    auto rep = make_report(AllocationMethod::sup_location, Backend::closed_form, u,
                           horizon, brownian_fractions(*bm, f, t_cond, u));
    rep.diagnostics.expected_argmax_time = t_cond;
    return rep;
  }

  const auto& cp = std::get<CompoundPoissonExpModel>(model);
  if (!horizon.is_finite()) {
    const double lambda = cp.total_intensity();
    const double r = cp.premium.sum();
    if (!(r > lambda / cp.claim_rate)) {
      throw UndefinedAllocation(
          "the running supremum over an infinite horizon is infinite without "
          "net profit: supremum-location allocation undefined");
    }
    const CpFacts f = cp_facts(cp);
    const double ratio = (u + 1.0 / f.theta_q) / (f.m * u);
    const Eigen::VectorXd fractions =
        f.gamma + ratio * (f.r * f.gamma - cp.premium);
    auto rep = make_report(AllocationMethod::sup_location, Backend::closed_form, u,
                           horizon, fractions);
    rep.diagnostics.expected_argmax_time = (u + 1.0 / f.theta_q) / f.m;
    return rep;
  }

  const SupLocationSim sim =
      simulate_allocation_sup_location(model, u, horizon.time(), cfg);
  Eigen::VectorXd fractions(sim.component_at_argmax.size());
  for (std::size_t i = 0; i < sim.component_at_argmax.size(); ++i) {
    fractions[static_cast<Eigen::Index>(i)] = sim.component_at_argmax[i].value / u;
  }
  auto rep = make_report(AllocationMethod::sup_location, Backend::monte_carlo, u,
                         horizon, fractions);
  rep.diagnostics.expected_argmax_time = sim.argmax_time.value;
  rep.diagnostics.notes.push_back(format_std_errors(sim.component_at_argmax));
  return rep;
}

namespace {

// Capital level q(x) with psi_x(q) = alpha for the weighted compound Poisson
// model: bisection to 1e-10 * max(1, u), then Newton polish with the analytic
// derivative so central differences of q are noise-free.
double weighted_var(const CompoundPoissonExpModel& cp, const Eigen::VectorXd& weights,
                    double alpha, double hint) {
  const auto psi = [&](double u) { return phase_type_ruin(cp, weights, u); };
  if (psi(0.0).almost_sure) {
    throw NoCramerRoot("weighted model violates net profit: VaR infinite");
  }
  if (psi(0.0).probability <= alpha) return 0.0;
  double lo = 0.0;
  double hi = std::max(1.0, 2.0 * hint);
  while (psi(hi).probability > alpha) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-10 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (psi(mid).probability <= alpha) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  double x = hi;
  for (int it = 0; it < 3; ++it) {
    const PhaseTypeRuinEval eval = phase_type_ruin_eval(cp, weights, x);
    if (eval.d_probability_du == 0.0) break;
    const double step = (eval.probability - alpha) / eval.d_probability_du;
    const double next = x - step;
    if (!(next > lo && next < hi + (hi - lo))) break;
    if (std::abs(step) <= 1e-15 * std::max(1.0, x)) { x = next; break; }
    x = next;
  }
  return x;
}

}  // namespace

AllocationReport allocate_gradient(const RiskModel& model, double alpha,
                                   const Horizon& horizon) {
  require_valid(model);
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw ValidationError("alpha must lie in (0, 1)");
  }

  if (const auto* bm = std::get_if<BrownianModel>(&model)) {
    if (horizon.is_finite()) {
      // The finite-horizon gradient equals the supremum-location rule at the
      // dynamic VaR level.
      const double u = dynamic_var(model, alpha, horizon);
      AllocationReport rep = allocate_sup_location(model, u, horizon);
      rep.method = AllocationMethod::gradient;
      rep.diagnostics.var = u;
      return rep;
    }
    const BrownianFacts f = brownian_facts(*bm);
    if (f.r >= 0.0) {
      throw UndefinedAllocation(
          "infinite-horizon dynamic VaR is infinite for nonnegative drift: "
          "gradient allocation undefined");
    }
    const double var = f.s2 * std::log(alpha) / (2.0 * f.r);
    const Eigen::VectorXd fractions = 2.0 * f.w - bm->drift / f.r;
    auto rep = make_report(AllocationMethod::gradient, Backend::closed_form, var,
                           horizon, fractions);
    rep.diagnostics.var = var;
    return rep;
  }

  const auto& cp = std::get<CompoundPoissonExpModel>(model);
  if (horizon.is_finite()) {
    throw NotSupported(
        "finite-horizon gradient allocation for compound Poisson models is "
        "not available");
  }
  const double var = dynamic_var(model, alpha, horizon);
  if (var == 0.0) {
    throw UndefinedAllocation(
        "dynamic VaR is zero at this level: gradient fractions undefined");
  }

  // GVaR_i = dq/dx_i at unit weights: central differences with one Richardson
  // refinement, h = 1e-4.
  const int d = cp.dimension();
  const double h = 1e-4;
  Eigen::VectorXd gvar(d);
  for (int i = 0; i < d; ++i) {
    const auto q_at = [&](double xi) {
      Eigen::VectorXd w = Eigen::VectorXd::Ones(d);
      w[i] = xi;
      return weighted_var(cp, w, alpha, var);
    };
    const double d_h = (q_at(1.0 + h) - q_at(1.0 - h)) / (2.0 * h);
    const double d_h2 = (q_at(1.0 + 0.5 * h) - q_at(1.0 - 0.5 * h)) / h;
    gvar[i] = (4.0 * d_h2 - d_h) / 3.0;
  }

  auto rep = make_report(AllocationMethod::gradient, Backend::closed_form, var,
                         horizon, (gvar / var).eval());
  rep.amounts = gvar;
  rep.diagnostics.var = var;
  return rep;
}

AllocationReport allocate_asymptotic(const RiskModel& model,
                                     std::optional<double> u) {
  require_valid(model);
  if (u) require_capital(*u);
  const TiltedParams tp = tilt(model);
  const Eigen::VectorXd fractions = tp.mean_rates / tp.mean_rate_total;

  AllocationReport rep;
  rep.method = AllocationMethod::asymptotic;
  rep.backend = Backend::closed_form;
  rep.horizon = Horizon::infinite();
  rep.fractions = fractions;
  if (u) {
    rep.u = *u;
    rep.amounts = *u * fractions;
  }
  return rep;
}

}  // namespace ruinalloc
