#pragma once

// Capital allocation rules derived from the dynamic ruin-probability risk
// measure: expected component losses at the ruin time, at the location of the
// aggregate running supremum, the risk-measure gradient (Euler) rule, and the
// large-capital asymptotic rule. All rules are fully allocating: fractions
// sum to one and amounts sum to the capital u.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "ruinalloc/model.hpp"
#include "ruinalloc/simulator.hpp"

namespace ruinalloc {

enum class AllocationMethod { time_of_ruin, sup_location, gradient, asymptotic };
enum class Backend { closed_form, monte_carlo };

const char* to_string(AllocationMethod method);
const char* to_string(Backend backend);

struct AllocationDiagnostics {
  std::optional<double> expected_ruin_time;    // E[tau | tau <= T]
  std::optional<double> expected_argmax_time;  // E[t* | S(t*) = u]
  std::optional<double> var;                   // capital implied by alpha (gradient)
  std::vector<std::string> notes;
};

struct AllocationReport {
  AllocationMethod method = AllocationMethod::asymptotic;
  Backend backend = Backend::closed_form;
  double u = 0.0;  // capital being allocated (0 when only fractions are defined)
  Horizon horizon = Horizon::infinite();
  Eigen::VectorXd fractions;  // c_i, summing to 1
  Eigen::VectorXd amounts;    // c_i * u
  AllocationDiagnostics diagnostics;
};

// K_i(u) = E[S_i(tau) | tau <= T] scaled so amounts sum to u. Closed form for
// Brownian horizons and infinite-horizon compound Poisson; finite-horizon
// compound Poisson routes to the exact simulator (cfg). Requires u > 0.
AllocationReport allocate_time_of_ruin(const RiskModel& model, double u,
                                       const Horizon& horizon,
                                       const SimConfig& cfg = {});

// Kbar_i(u) = E[S_i(t*) | S(t*) = u, t* <= T] with t* the argmax of the
// aggregate path. Undefined over an infinite horizon with nonnegative drift
// (the supremum is infinite), which raises UndefinedAllocation.
AllocationReport allocate_sup_location(const RiskModel& model, double u,
                                       const Horizon& horizon,
                                       const SimConfig& cfg = {});

// Gradient (Euler) rule at level alpha: d/dx_i of the dynamic VaR of the
// weighted model at unit weights. Brownian infinite horizon in closed form;
// Brownian finite horizon equals the sup-location rule at u = VaR and
// delegates to it; compound Poisson infinite horizon differentiates the
// phase-type ruin formula numerically (central differences, h = 1e-4, one
// Richardson refinement). Finite-horizon compound Poisson is NotSupported.
AllocationReport allocate_gradient(const RiskModel& model, double alpha,
                                   const Horizon& horizon);

// Large-u limit fractions m_i / m from the exponential tilt; independent of u
// and horizon. Amounts are populated only when u is supplied.
AllocationReport allocate_asymptotic(const RiskModel& model,
                                     std::optional<double> u = std::nullopt);

}  // namespace ruinalloc
