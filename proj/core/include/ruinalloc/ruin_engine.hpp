#pragma once

// Finite and infinite horizon ruin probabilities, the dynamic value-at-risk
// (smallest capital meeting a ruin probability target), and the expected ruin
// time given ruin, with closed forms wherever the families admit them.

#include "ruinalloc/model.hpp"
#include "ruinalloc/simulator.hpp"

namespace ruinalloc {

enum class RuinMethod {
  brownian_closed_form,
  cp_exp_closed_form,
  phase_type,
  monte_carlo,
};

const char* to_string(RuinMethod method);

struct RuinResult {
  double probability = 0.0;
  RuinMethod method = RuinMethod::brownian_closed_form;
  // Monte Carlo results only:
  double std_error = 0.0;
  std::uint64_t paths = 0;
};

// psi(u, T) = P(sup_{t <= T} S(t) >= u).
// Brownian (both horizons) and infinite-horizon compound Poisson evaluate in
// closed form; finite-horizon compound Poisson routes to the exact simulator
// using cfg. u = 0 yields 1 for every model with nondegenerate aggregate.
RuinResult ruin_prob(const RiskModel& model, const RuinQuery& query,
                     const SimConfig& cfg = {});

// Infimum of {u >= 0 : psi(u, horizon) <= alpha}, alpha in (0, 1). Closed-form
// inversion where available, otherwise bisection on the closed-form psi with
// tolerance 1e-10 * max(1, u). Returns 0 when the target is met by every
// positive capital (psi(0+) <= alpha; compound Poisson books have an atom at
// zero, so the infimum may not be attained). Raises InfeasibleCondition when
// no finite capital meets the target (certain ruin) and NotSupported for the
// finite-horizon compound Poisson family.
double dynamic_var(const RiskModel& model, double alpha, const Horizon& horizon);

// E[tau(u) | tau(u) <= T] for the Brownian aggregate (tau = ruin time).
// Zero-drift inputs use the exact drift->0 limit of the finite-horizon
// formula; an infinite horizon gives -u/r (r < 0), u/r (r > 0) and +inf at
// r = 0. Raises InfeasibleCondition when psi(u, T) underflows to zero.
double expected_ruin_time_given_ruin(const BrownianModel& model, double u,
                                     const Horizon& horizon);

}  // namespace ruinalloc
