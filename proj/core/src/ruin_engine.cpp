#include "ruinalloc/ruin_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ruinalloc/errors.hpp"
#include "ruinalloc/levy_analytics.hpp"
#include "ruinalloc/normal.hpp"

namespace ruinalloc {

namespace {

// Underflow threshold for exp(); below this the closed-form term is zero.
constexpr double kExpUnderflow = -745.0;

struct BrownianAggregate {
  double r;   // aggregate drift
  double s2;  // aggregate variance
  double s;   // sqrt(s2)
};

BrownianAggregate brownian_aggregate(const BrownianModel& model) {
  const AggregateParams agg = aggregate_params(RiskModel(model));
  return {agg.drift, agg.variance, std::sqrt(agg.variance)};
}

// Finite-horizon crossing probability of a Brownian aggregate:
//   psi(u, T) = Phi((-u + rT)/(s sqrt(T))) + e^{2ur/s2} Phi((-u - rT)/(s sqrt(T))).
// The reflection term is assembled in log space so large u cannot overflow.
double psi_brownian_finite(double u, double T, const BrownianAggregate& ba) {
  const double sq = ba.s * std::sqrt(T);
  const double a = (-u + ba.r * T) / sq;
  const double b = (-u - ba.r * T) / sq;
  const double log_tail = 2.0 * u * ba.r / ba.s2 + normal::log_cdf(b);
  const double reflected = log_tail < kExpUnderflow ? 0.0 : std::exp(log_tail);
  return std::clamp(normal::cdf(a) + reflected, 0.0, 1.0);
}

double psi_brownian(double u, const Horizon& horizon, const BrownianAggregate& ba) {
  if (u == 0.0) return 1.0;
  if (horizon.is_finite()) return psi_brownian_finite(u, horizon.time(), ba);
  if (ba.r >= 0.0) return 1.0;
  const double log_psi = 2.0 * u * ba.r / ba.s2;
  return log_psi < kExpUnderflow ? 0.0 : std::exp(log_psi);
}

// Infinite-horizon compound Poisson ruin probability (exponential claims):
//   psi(u) = (lambda / (theta r)) e^{-theta* u} under net profit, else 1.
// The barrier is reached at time zero when u = 0 (the exponential formula is
// the strict right limit psi(0+) = lambda / (theta r), not the value at 0).
double psi_cp_infinite(double u, const CompoundPoissonExpModel& model) {
  if (u == 0.0) return 1.0;
  const double lambda = model.total_intensity();
  const double r = model.premium.sum();
  const double theta = model.claim_rate;
  if (!(r > lambda / theta)) return 1.0;
  const double theta_star = theta - lambda / r;
  const double log_psi = std::log(lambda / (theta * r)) - theta_star * u;
  return log_psi < kExpUnderflow ? 0.0 : std::exp(log_psi);
}

}  // namespace

const char* to_string(RuinMethod method) {
  switch (method) {
    case RuinMethod::brownian_closed_form: return "brownian_closed_form";
    case RuinMethod::cp_exp_closed_form: return "cp_exp_closed_form";
    case RuinMethod::phase_type: return "phase_type";
    case RuinMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

RuinResult ruin_prob(const RiskModel& model, const RuinQuery& query,
                     const SimConfig& cfg) {
  require_valid(model);
  require_valid(query);

  RuinResult out;
  if (const auto* bm = std::get_if<BrownianModel>(&model)) {
    out.method = RuinMethod::brownian_closed_form;
    out.probability = psi_brownian(query.u, query.horizon, brownian_aggregate(*bm));
    return out;
  }
  const auto& cp = std::get<CompoundPoissonExpModel>(model);
  if (!query.horizon.is_finite()) {
    out.method = RuinMethod::cp_exp_closed_form;
    out.probability = psi_cp_infinite(query.u, cp);
    return out;
  }
  // Finite-horizon compound Poisson has no closed form here; claim-epoch
  // simulation is exact.
  const SimEstimate est = simulate_ruin_prob(model, query.u, query.horizon.time(), cfg);
  out.method = RuinMethod::monte_carlo;
  out.probability = est.value;
  out.std_error = est.std_error;
  out.paths = cfg.paths;
  return out;
}

double dynamic_var(const RiskModel& model, double alpha, const Horizon& horizon) {
  require_valid(model);
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw ValidationError("alpha must lie in (0, 1)");
  }

  if (const auto* bm = std::get_if<BrownianModel>(&model)) {
    const BrownianAggregate ba = brownian_aggregate(*bm);
    if (!horizon.is_finite()) {
      if (ba.r >= 0.0) {
        throw InfeasibleCondition(
            "infinite-horizon ruin is certain at every capital level "
            "(nonnegative drift): dynamic VaR is infinite");
      }
      return ba.s2 * std::log(alpha) / (2.0 * ba.r);
    }
    // psi(0,T) = 1 > alpha, psi decreasing to 0: bracket then bisect to
    // 1e-10 * max(1, u), returning the upper end (psi <= alpha there).
    const double T = horizon.time();
    double lo = 0.0;
    double hi = std::max(1.0, ba.s * std::sqrt(T));
    while (psi_brownian_finite(hi, T, ba) > alpha) {
      lo = hi;
      hi *= 2.0;
    }
    while (hi - lo > 1e-10 * std::max(1.0, hi)) {
      const double mid = 0.5 * (lo + hi);
      if (psi_brownian_finite(mid, T, ba) <= alpha) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  }

  const auto& cp = std::get<CompoundPoissonExpModel>(model);
  if (horizon.is_finite()) {
    throw NotSupported(
        "dynamic VaR for finite-horizon compound Poisson models is not "
        "available (no closed-form ruin function to invert)");
  }
  const double lambda = cp.total_intensity();
  const double r = cp.premium.sum();
  const double theta = cp.claim_rate;
  if (!(r > lambda / theta)) {
    throw InfeasibleCondition(
        "net profit condition fails: ruin is certain and dynamic VaR infinite");
  }
  const double psi0 = lambda / (theta * r);
  if (psi0 <= alpha) return 0.0;
  const double theta_star = theta - lambda / r;
  return -std::log(alpha / psi0) / theta_star;
}

double expected_ruin_time_given_ruin(const BrownianModel& model, double u,
                                     const Horizon& horizon) {
  require_valid(RiskModel(model));
  if (!(u >= 0.0) || !std::isfinite(u)) {
    throw ValidationError("capital u must be finite and nonnegative");
  }
  const BrownianAggregate ba = brownian_aggregate(model);
  if (u == 0.0) return 0.0;  // ruin is immediate at the barrier

  if (!horizon.is_finite()) {
    if (ba.r < 0.0) return -u / ba.r;
    if (ba.r > 0.0) return u / ba.r;  // Wald: certain ruin, E[tau] = u/r
    // Zero drift: ruin is certain but the expected hitting time diverges.
    return std::numeric_limits<double>::infinity();
  }

  const double T = horizon.time();
  const double sq = ba.s * std::sqrt(T);
  if (ba.r == 0.0) {
    // Exact drift->0 limit:
    //   E[tau; tau <= T] = 2u sqrt(T)/s phi(u/(s sqrt(T))) - (2u^2/s2) Phi(-u/(s sqrt(T)))
    // divided by psi(u, T) = 2 Phi(-u/(s sqrt(T))).
    const double z = u / sq;
    const double psi = 2.0 * normal::cdf(-z);
    if (psi == 0.0) {
      throw InfeasibleCondition("ruin probability underflows: conditional ruin time undefined");
    }
    const double mass = (2.0 * u * std::sqrt(T) / ba.s) * normal::pdf(z) -
                        (2.0 * u * u / ba.s2) * normal::cdf(-z);
    return std::clamp(mass / psi, 0.0, T);
  }

  const double a = (-u + ba.r * T) / sq;
  const double b = (-u - ba.r * T) / sq;
  const double t1 = normal::cdf(a);
  const double log_t2 = 2.0 * u * ba.r / ba.s2 + normal::log_cdf(b);
  const double t2 = log_t2 < kExpUnderflow ? 0.0 : std::exp(log_t2);
  const double denom = t1 + t2;
  if (denom == 0.0) {
    throw InfeasibleCondition("ruin probability underflows: conditional ruin time undefined");
  }
  return std::clamp((u / ba.r) * (t1 - t2) / denom, 0.0, T);
}

}  // namespace ruinalloc
