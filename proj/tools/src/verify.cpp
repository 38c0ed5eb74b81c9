#include "verify.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "ruinalloc/allocation_engine.hpp"
#include "ruinalloc/levy_analytics.hpp"
#include "ruinalloc/model.hpp"
#include "ruinalloc/phase_type.hpp"
#include "ruinalloc/ruin_engine.hpp"
#include "ruinalloc/simulator.hpp"
#include "util.hpp"

namespace ruinalloc::cli {

namespace {

struct Checker {
  std::ostream& out;
  int failures = 0;

  void check(const std::string& name, double got, double want, double tol) {
    const double err = std::abs(got - want);
    const bool ok = err <= tol;
    if (!ok) ++failures;
    out << (ok ? "[PASS] " : "[FAIL] ") << name << ": got " << fmt(got)
        << ", want " << fmt(want) << " (|diff| " << fmt(err) << ", tol "
        << fmt(tol) << ")\n";
  }

  void check_true(const std::string& name, bool ok, const std::string& detail) {
    if (!ok) ++failures;
    out << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
  }
};

RiskModel brownian_example() {
  BrownianModel bm;
  bm.drift = Eigen::Vector2d(-2.0, -1.0);
  bm.cov.resize(2, 2);
  bm.cov << 1.0, 0.5, 0.5, 1.0;
  return bm;
}

RiskModel cp_example() {
  CompoundPoissonExpModel cp;
  cp.premium = Eigen::Vector2d(1.0, 1.0);
  cp.intensity = Eigen::Vector2d(0.85, 0.95);
  cp.claim_rate = 1.0;
  return cp;
}

}  // namespace

int verify_command(std::uint64_t paths, std::ostream& out) {
  Checker c{out};
  const RiskModel bm = brownian_example();
  const RiskModel cp = cp_example();
  const Horizon T1 = Horizon::finite(1.0);
  const Horizon inf = Horizon::infinite();

  // --- closed forms vs high-precision reference values -----------------
  c.check("brownian psi(2, T=1)", ruin_prob(bm, {2.0, T1}).probability,
          0.015099558422852674, 1e-15);
  c.check("brownian psi(2, inf)", ruin_prob(bm, {2.0, inf}).probability,
          0.018315638888734180, 1e-16);
  const double ustar = dynamic_var(bm, 0.1, T1);
  c.check("brownian var(alpha=0.1, T=1)", ustar, 1.1217227819029761, 1e-9);
  c.check("brownian expected ruin time at var",
          expected_ruin_time_given_ruin(std::get<BrownianModel>(bm), ustar, T1),
          0.30911769582617353, 1e-9);

  const auto rep_k = allocate_time_of_ruin(bm, ustar, T1);
  c.check("brownian time-of-ruin fraction c1", rep_k.fractions[0],
          0.36221297239690421, 1e-9);
  const auto rep_kbar = allocate_sup_location(bm, ustar, T1);
  c.check("brownian sup-location fraction cbar1", rep_kbar.fractions[0],
          0.35489634897096673, 1e-9);
  c.check("brownian argmax location at var",
          *rep_kbar.diagnostics.expected_argmax_time, 0.32553214219313167, 1e-9);

  const auto rep_asym = allocate_asymptotic(bm);
  c.check("brownian asymptotic fraction 1", rep_asym.fractions[0], 1.0 / 3.0,
          1e-12);
  c.check("brownian asymptotic fraction 2", rep_asym.fractions[1], 2.0 / 3.0,
          1e-12);

  c.check("cp psi(5, inf)", ruin_prob(cp, {5.0, inf}).probability,
          0.9 * std::exp(-0.5), 1e-15);
  c.check("cp psi(10, inf)", ruin_prob(cp, {10.0, inf}).probability,
          0.9 * std::exp(-1.0), 1e-15);
  const double cp_var = dynamic_var(cp, 0.01, inf);
  c.check("cp var(alpha=0.01, inf)", cp_var, 44.998096703302651, 1e-9);
  c.check("cp var self-consistency",
          ruin_prob(cp, {cp_var, inf}).probability, 0.01, 1e-12);

  const TiltedParams tp = tilt(cp);
  c.check("cp tilt root", tp.theta_star, 0.1, 1e-14);
  c.check("cp tilted mean rate 1", tp.mean_rates[0], 4.0 / 81.0, 1e-15);
  c.check("cp tilted mean rate total", tp.mean_rate_total, 2.0 / 9.0, 1e-14);

  // Phase-type formula must reduce to the exponential closed form at unit
  // weights. Positive capital only: at u = 0 the classical probability is the
  // atom value 1 while the matrix form evaluates the right limit.
  {
    const auto& m = std::get<CompoundPoissonExpModel>(cp);
    double worst = 0.0;
    for (double u : {0.25, 1.0, 5.0, 10.0, 20.0}) {
      const double pt = phase_type_ruin(m, Eigen::Vector2d::Ones(), u).probability;
      const double cf = ruin_prob(cp, {u, inf}).probability;
      worst = std::max(worst, std::abs(pt - cf));
    }
    c.check("phase-type reduction at unit weights (worst over u)", worst, 0.0,
            1e-10);
  }

  // Gradient allocation equals the sup-location closed form at u = VaR.
  for (double alpha : {0.01, 0.05, 0.1}) {
    const double var = dynamic_var(cp, alpha, inf);
    const auto grad = allocate_gradient(cp, alpha, inf);
    const auto kbar = allocate_sup_location(cp, var, inf);
    const double rel =
        std::abs(grad.fractions[0] - kbar.fractions[0]) / std::abs(kbar.fractions[0]);
    c.check("cp gradient vs sup-location, alpha=" + fmt(alpha), rel, 0.0, 1e-4);
  }

  // --- Monte Carlo cross-checks ----------------------------------------
  SimConfig cfg;
  cfg.paths = paths;
  cfg.seed = 1;

  {
    const auto est = simulate_ruin_prob(bm, 2.0, 1.0, cfg);
    c.check("mc brownian psi(2, T=1)", est.value, 0.015099558422852674,
            4.0 * est.std_error + 1e-4);
  }
  {
    const auto est = simulate_ruin_prob(cp, 5.0, 500.0, cfg);
    c.check("mc cp psi(5, T=500) vs psi(5, inf)", est.value,
            0.9 * std::exp(-0.5), 4.0 * est.std_error);
  }
  {
    const auto sim = simulate_allocation_time_of_ruin(bm, ustar, 1.0, cfg);
    c.check("mc brownian time-of-ruin fraction c1", sim.fractions[0].value,
            0.36221297239690421, 4.0 * sim.fractions[0].std_error + 2e-3);
  }
  {
    const auto means = simulate_tilted_mean(bm, cfg);
    c.check("mc brownian tilted mean 1", means[0].value, 1.0,
            4.0 * means[0].std_error);
    c.check("mc brownian tilted mean 2", means[1].value, 2.0,
            4.0 * means[1].std_error);
  }
  {
    const auto means = simulate_tilted_mean(cp, cfg);
    c.check("mc cp tilted mean 1", means[0].value, 4.0 / 81.0,
            4.0 * means[0].std_error);
    c.check("mc cp tilted mean 2", means[1].value, 14.0 / 81.0,
            4.0 * means[1].std_error);
  }
  {
    SimConfig small = cfg;
    small.paths = std::min<std::uint64_t>(paths, 20000);
    small.steps_per_unit_time = 200;
    small.workers = 1;
    const auto a = simulate_ruin_prob(bm, 2.0, 1.0, small);
    small.workers = 3;
    const auto b = simulate_ruin_prob(bm, 2.0, 1.0, small);
    c.check_true("determinism across worker counts",
                 a.value == b.value && a.n_effective == b.n_effective,
                 "worker counts 1 and 3 agree bitwise");
  }

  out << (c.failures == 0 ? "all checks passed" : "FAILED checks: ")
      << (c.failures == 0 ? std::string()
                          : std::to_string(c.failures))
      << "\n";
  return c.failures == 0 ? 0 : 2;
}

}  // namespace ruinalloc::cli
