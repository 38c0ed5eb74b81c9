#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "helpers.hpp"
#include "ruinalloc/allocation_engine.hpp"
#include "ruinalloc/errors.hpp"
#include "ruinalloc/ruin_engine.hpp"

using namespace ruinalloc;

namespace {

// Closed-form rules are fully allocating to near machine precision; the
// numerically differentiated gradient rule carries finite-difference error,
// so its callers pass the engine-wide 1e-9 budget instead.
void check_fully_allocating(const AllocationReport& rep, double u,
                            double tol = 1e-12) {
  CHECK(rep.fractions.sum() == doctest::Approx(1.0).epsilon(tol));
  if (u > 0.0) {
    REQUIRE(rep.amounts.size() == rep.fractions.size());
    CHECK(rep.amounts.sum() == doctest::Approx(u).epsilon(tol));
  }
}

}  // namespace

TEST_SUITE("allocation_engine") {

TEST_CASE("asymptotic fractions, Brownian example") {
  const AllocationReport rep =
      allocate_asymptotic(RiskModel(testing::brownian_example()));
  CHECK(rep.method == AllocationMethod::asymptotic);
  CHECK(rep.backend == Backend::closed_form);
  REQUIRE(rep.fractions.size() == 2);
  CHECK(std::abs(rep.fractions[0] - 1.0 / 3.0) <= 1e-12);
  CHECK(std::abs(rep.fractions[1] - 2.0 / 3.0) <= 1e-12);
  CHECK(rep.amounts.size() == 0);  // no capital supplied

  const AllocationReport with_u =
      allocate_asymptotic(RiskModel(testing::brownian_example()), 12.0);
  CHECK(with_u.amounts[0] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(with_u.amounts[1] == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("asymptotic fractions, compound Poisson example") {
  const AllocationReport rep =
      allocate_asymptotic(RiskModel(testing::cp_example()));
  CHECK(std::abs(rep.fractions[0] - 2.0 / 9.0) <= 1e-12);
  CHECK(std::abs(rep.fractions[1] - 7.0 / 9.0) <= 1e-12);
}

TEST_CASE("Brownian infinite horizon: fractions are capital-free") {
  // Spectral negativity pins S(tau) = u, and conditioning makes both rules
  // collapse to 2 w_i - r_i / r = (1/3, 2/3) for every u.
  const RiskModel m(testing::brownian_example());
  for (double u : {0.5, 1.0, 5.0, 20.0}) {
    const AllocationReport k =
        allocate_time_of_ruin(m, u, Horizon::infinite());
    const AllocationReport kbar =
        allocate_sup_location(m, u, Horizon::infinite());
    CHECK(std::abs(k.fractions[0] - 1.0 / 3.0) <= 1e-12);
    CHECK(std::abs(kbar.fractions[0] - 1.0 / 3.0) <= 1e-12);
    CHECK(std::abs(k.fractions[1] - kbar.fractions[1]) <= 1e-12);
    check_fully_allocating(k, u);
    check_fully_allocating(kbar, u);
  }
}

TEST_CASE("Brownian finite horizon against pinned reference values") {
  const RiskModel m(testing::brownian_example());
  const Horizon T = Horizon::finite(1.0);
  const double u = dynamic_var(m, 0.1, T);  // 1.1217227819029761

  const AllocationReport k = allocate_time_of_ruin(m, u, T);
  CHECK(k.backend == Backend::closed_form);
  CHECK(k.fractions[0] == doctest::Approx(0.36221297239690421).epsilon(1e-9));
  REQUIRE(k.diagnostics.expected_ruin_time.has_value());
  CHECK(*k.diagnostics.expected_ruin_time ==
        doctest::Approx(0.30911769582617353).epsilon(1e-9));

  const AllocationReport kbar = allocate_sup_location(m, u, T);
  CHECK(kbar.fractions[0] ==
        doctest::Approx(0.35489634897096673).epsilon(1e-9));
  REQUIRE(kbar.diagnostics.expected_argmax_time.has_value());
  CHECK(*kbar.diagnostics.expected_argmax_time ==
        doctest::Approx(0.32553214219313167).epsilon(1e-9));

  check_fully_allocating(k, u);
  check_fully_allocating(kbar, u);
}

TEST_CASE("Brownian finite horizon equals the conditional-time identity") {
  // c_i = [E (r_i - w_i r) + w_i u] / u with E the conditional time of the
  // respective rule; rebuild both rules from their diagnostics.
  const RiskModel m(testing::brownian_example());
  const Eigen::Vector2d drift = testing::brownian_example().drift;
  const double r = -3.0;
  const Eigen::Vector2d w(0.5, 0.5);

  for (double u : {0.5, 1.0, 5.0, 20.0}) {
    for (double T : {0.5, 1.0, 5.0}) {
      const AllocationReport k = allocate_time_of_ruin(m, u, Horizon::finite(T));
      const double tk = *k.diagnostics.expected_ruin_time;
      const AllocationReport s = allocate_sup_location(m, u, Horizon::finite(T));
      const double ts = *s.diagnostics.expected_argmax_time;
      for (int i = 0; i < 2; ++i) {
        const double want_k = (tk * (drift[i] - w[i] * r) + w[i] * u) / u;
        const double want_s = (ts * (drift[i] - w[i] * r) + w[i] * u) / u;
        CHECK(k.fractions[i] == doctest::Approx(want_k).epsilon(1e-12));
        CHECK(s.fractions[i] == doctest::Approx(want_s).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("positive drift: time-of-ruin flips, supremum diverges") {
  const RiskModel m(testing::brownian_positive_drift());
  const AllocationReport k = allocate_time_of_ruin(m, 3.0, Horizon::infinite());
  CHECK(std::abs(k.fractions[0] - 2.0 / 3.0) <= 1e-12);
  CHECK(std::abs(k.fractions[1] - 1.0 / 3.0) <= 1e-12);

  CHECK_THROWS_AS(allocate_sup_location(m, 3.0, Horizon::infinite()),
                  UndefinedAllocation);
  CHECK_THROWS_AS(allocate_gradient(m, 0.1, Horizon::infinite()),
                  UndefinedAllocation);
}

TEST_CASE("short horizons collapse both rules to the covariance shares") {
  const RiskModel m(testing::brownian_example());
  const Horizon T = Horizon::finite(1e-3);
  const double u = 1.0;
  const AllocationReport k = allocate_time_of_ruin(m, u, T);
  const AllocationReport s = allocate_sup_location(m, u, T);
  CHECK(std::abs(k.fractions[0] - 0.5) <= 1e-3);
  CHECK(std::abs(s.fractions[0] - 0.5) <= 1e-3);
}

TEST_CASE("zero aggregate drift, finite horizon: exact limit formula") {
  const RiskModel m(testing::brownian_zero_drift());  // drift (-1, 1), r = 0
  const double u = 2.0;
  const AllocationReport k = allocate_time_of_ruin(m, u, Horizon::finite(1.0));
  // E[tau | tau <= 1] at r=0, u=2, s2=3 (pinned reference), and with r = 0
  // the identity reduces to c_i = w_i + E drift_i / u.
  const double E = 0.57236920886445079;
  CHECK(*k.diagnostics.expected_ruin_time == doctest::Approx(E).epsilon(1e-12));
  CHECK(k.fractions[0] == doctest::Approx(0.5 - E / 2.0).epsilon(1e-9));
  CHECK(k.fractions[1] == doctest::Approx(0.5 + E / 2.0).epsilon(1e-9));
}

TEST_CASE("zero drift everywhere: covariance shares at any horizon") {
  BrownianModel bm = testing::brownian_example();
  bm.drift = Eigen::Vector2d(0.0, 0.0);
  bm.cov = Eigen::MatrixXd{{2.0, 0.5}, {0.5, 1.0}};  // shares (2.5, 1.5)/4
  for (const Horizon& h : {Horizon::finite(0.5), Horizon::finite(50.0)}) {
    const AllocationReport k = allocate_time_of_ruin(RiskModel(bm), 1.5, h);
    CHECK(k.fractions[0] == doctest::Approx(2.5 / 4.0).epsilon(1e-12));
  }
  // The infinite horizon is evaluated at a proxy horizon and must say so.
  const AllocationReport inf_k =
      allocate_time_of_ruin(RiskModel(bm), 1.5, Horizon::infinite());
  CHECK(inf_k.fractions[0] == doctest::Approx(2.5 / 4.0).epsilon(1e-9));
  REQUIRE_FALSE(inf_k.diagnostics.notes.empty());
  bool flagged = false;
  for (const auto& note : inf_k.diagnostics.notes) {
    flagged = flagged || note.find("experimental") != std::string::npos;
  }
  CHECK(flagged);
}

TEST_CASE("compound Poisson infinite horizon: closed form and diagnostics") {
  const RiskModel m(testing::cp_example());
  const AllocationReport k = allocate_time_of_ruin(m, 5.0, Horizon::infinite());
  CHECK(k.backend == Backend::closed_form);
  REQUIRE(k.diagnostics.expected_ruin_time.has_value());
  // E[tau | ruin] = (u + 1/theta_Q)/m = (5 + 1/0.9)/(2/9) = 27.5.
  CHECK(*k.diagnostics.expected_ruin_time ==
        doctest::Approx(27.5).epsilon(1e-12));
  check_fully_allocating(k, 5.0);

  const AllocationReport kbar =
      allocate_sup_location(m, 5.0, Horizon::infinite());
  check_fully_allocating(kbar, 5.0);
}

TEST_CASE("compound Poisson fractions converge to the asymptotic shares") {
  const RiskModel m(testing::cp_example());
  const double asym = 2.0 / 9.0;
  double prev = 1.0;
  for (double u : {1.0, 10.0, 100.0}) {
    const AllocationReport k = allocate_time_of_ruin(m, u, Horizon::infinite());
    const double dev = std::abs(k.fractions[0] - asym);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev <= 1e-3);  // |c_1(100) - 2/9| = 2.75e-4

  // The deviation decays exactly like 1/(u + 1/theta): the scaled deviation
  // is constant across u.
  const auto scaled_dev = [&](double u) {
    const AllocationReport k = allocate_time_of_ruin(m, u, Horizon::infinite());
    return (k.fractions[0] - asym) * (u + 1.0);
  };
  CHECK(scaled_dev(1.0) == doctest::Approx(scaled_dev(10.0)).epsilon(1e-10));
  CHECK(scaled_dev(10.0) == doctest::Approx(scaled_dev(100.0)).epsilon(1e-10));
}

TEST_CASE("compound Poisson net-profit violation raises UndefinedAllocation") {
  CompoundPoissonExpModel cp = testing::cp_example();
  cp.premium = Eigen::Vector2d(0.8, 0.8);
  CHECK_THROWS_AS(
      allocate_sup_location(RiskModel(cp), 5.0, Horizon::infinite()),
      UndefinedAllocation);
}

TEST_CASE("gradient rule, Brownian infinite horizon") {
  const RiskModel m(testing::brownian_example());
  const AllocationReport g = allocate_gradient(m, 0.1, Horizon::infinite());
  CHECK(g.method == AllocationMethod::gradient);
  REQUIRE(g.diagnostics.var.has_value());
  // u(alpha) = s2 ln(alpha) / (2r) = ln(10)/2.
  CHECK(*g.diagnostics.var ==
        doctest::Approx(std::log(10.0) / 2.0).epsilon(1e-13));
  CHECK(std::abs(g.fractions[0] - 1.0 / 3.0) <= 1e-12);
  check_fully_allocating(g, *g.diagnostics.var);
}

TEST_CASE("gradient rule, Brownian finite horizon, equals sup-location at VaR") {
  const RiskModel m(testing::brownian_example());
  const Horizon T = Horizon::finite(1.0);
  const AllocationReport g = allocate_gradient(m, 0.1, T);
  CHECK(g.method == AllocationMethod::gradient);
  REQUIRE(g.diagnostics.var.has_value());

  const AllocationReport kbar = allocate_sup_location(m, *g.diagnostics.var, T);
  CHECK(g.fractions[0] == doctest::Approx(kbar.fractions[0]).epsilon(1e-14));
  CHECK(g.fractions[1] == doctest::Approx(kbar.fractions[1]).epsilon(1e-14));
}

TEST_CASE("gradient rule, compound Poisson, matches sup-location at VaR") {
  const RiskModel m(testing::cp_example());
  for (double alpha : {0.01, 0.05, 0.1}) {
    const AllocationReport g = allocate_gradient(m, alpha, Horizon::infinite());
    const double u = *g.diagnostics.var;
    const AllocationReport kbar = allocate_sup_location(m, u, Horizon::infinite());
    for (int i = 0; i < 2; ++i) {
      CHECK(testing::rel_err(g.fractions[i], kbar.fractions[i]) <= 1e-4);
    }
    check_fully_allocating(g, u, 1e-9);
  }

  // Pinned reference at alpha = 0.01 (40-digit arithmetic).
  const AllocationReport g = allocate_gradient(m, 0.01, Horizon::infinite());
  CHECK(*g.diagnostics.var == doctest::Approx(44.998096703302651).epsilon(1e-10));
  CHECK(g.fractions[0] == doctest::Approx(0.21604912162178304).epsilon(1e-7));
  CHECK(g.amounts[0] == doctest::Approx(9.7217992674005890).epsilon(1e-7));
}

TEST_CASE("gradient rule rejects what it cannot compute") {
  CHECK_THROWS_AS(allocate_gradient(RiskModel(testing::cp_example()), 0.1,
                                    Horizon::finite(1.0)),
                  NotSupported);
  CHECK_THROWS_AS(allocate_gradient(RiskModel(testing::brownian_example()), 0.0,
                                    Horizon::infinite()),
                  ValidationError);
  CHECK_THROWS_AS(allocate_gradient(RiskModel(testing::brownian_example()), 1.0,
                                    Horizon::infinite()),
                  ValidationError);
}

TEST_CASE("no sub-book is allocated more than its standalone capital") {
  // Euler allocations of a subadditive risk measure never undercut: for each
  // two-line sub-book, gradient amounts sum to at most the sub-book's VaR.
  const std::vector<std::pair<int, int>> pairs = {{0, 1}, {0, 2}, {1, 2}};

  for (unsigned seed : {11u, 22u, 33u}) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Eigen::MatrixXd a(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = unif(rng);

    BrownianModel full;
    full.drift = Eigen::Vector3d(-1.0, -1.5, -0.8);
    full.cov = a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(3, 3);

    for (double alpha : {0.01, 0.1}) {
      const AllocationReport g =
          allocate_gradient(RiskModel(full), alpha, Horizon::infinite());
      for (const auto& [i, j] : pairs) {
        BrownianModel sub;
        sub.drift = Eigen::Vector2d(full.drift[i], full.drift[j]);
        sub.cov = Eigen::MatrixXd{{full.cov(i, i), full.cov(i, j)},
                                  {full.cov(j, i), full.cov(j, j)}};
        const double standalone =
            dynamic_var(RiskModel(sub), alpha, Horizon::infinite());
        CHECK(g.amounts[i] + g.amounts[j] <= standalone + 1e-9);
      }
    }
  }

  CompoundPoissonExpModel cp3;
  cp3.premium = Eigen::Vector3d(1.0, 1.0, 1.0);
  cp3.intensity = Eigen::Vector3d(0.8, 0.9, 0.7);
  cp3.claim_rate = 1.0;
  for (double alpha : {0.01, 0.1}) {
    const AllocationReport g =
        allocate_gradient(RiskModel(cp3), alpha, Horizon::infinite());
    for (const auto& [i, j] : pairs) {
      CompoundPoissonExpModel sub;
      sub.premium = Eigen::Vector2d(1.0, 1.0);
      sub.intensity = Eigen::Vector2d(cp3.intensity[i], cp3.intensity[j]);
      sub.claim_rate = 1.0;
      const double standalone =
          dynamic_var(RiskModel(sub), alpha, Horizon::infinite());
      CHECK(g.amounts[i] + g.amounts[j] <= standalone + 1e-9);
    }
  }
}

TEST_CASE("fractions are invariant under joint model/capital scaling") {
  for (double gamma : {0.5, 2.0}) {
    BrownianModel bm = testing::brownian_example();
    bm.drift *= gamma;
    bm.cov *= gamma * gamma;
    for (const Horizon& h : {Horizon::finite(1.0), Horizon::infinite()}) {
      const auto base =
          allocate_time_of_ruin(RiskModel(testing::brownian_example()), 2.0, h);
      const auto scaled = allocate_time_of_ruin(RiskModel(bm), 2.0 * gamma, h);
      CHECK(testing::rel_err(scaled.fractions[0], base.fractions[0]) <= 1e-9);
    }

    CompoundPoissonExpModel cp = testing::cp_example();
    cp.premium *= gamma;
    cp.claim_rate /= gamma;
    const auto base = allocate_time_of_ruin(RiskModel(testing::cp_example()),
                                            5.0, Horizon::infinite());
    const auto scaled =
        allocate_time_of_ruin(RiskModel(cp), 5.0 * gamma, Horizon::infinite());
    CHECK(testing::rel_err(scaled.fractions[0], base.fractions[0]) <= 1e-9);
  }
}

TEST_CASE("ruin conditioning can underflow at extreme inputs") {
  // Large capital over a tiny horizon: psi(u, T) underflows to zero, so the
  // expectation given ruin is undefined and the rule must refuse rather than
  // return nonsense.
  const RiskModel m(testing::brownian_positive_drift());
  CHECK_THROWS_AS(allocate_time_of_ruin(m, 500.0, Horizon::finite(0.01)),
                  InfeasibleCondition);
  // The supremum-location conditioning density stays positive there; the
  // rule keeps working and its conditional time respects the horizon.
  const AllocationReport s = allocate_sup_location(m, 500.0, Horizon::finite(0.01));
  CHECK(*s.diagnostics.expected_argmax_time <= 0.01);
  CHECK(s.fractions.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("capital must be strictly positive") {
  const RiskModel m(testing::brownian_example());
  CHECK_THROWS_AS(allocate_time_of_ruin(m, 0.0, Horizon::infinite()),
                  ValidationError);
  CHECK_THROWS_AS(allocate_time_of_ruin(m, -1.0, Horizon::infinite()),
                  ValidationError);
  CHECK_THROWS_AS(allocate_sup_location(m, 0.0, Horizon::finite(1.0)),
                  ValidationError);
}

TEST_CASE("report metadata round-trips the query") {
  const RiskModel m(testing::cp_example());
  const AllocationReport k = allocate_time_of_ruin(m, 7.5, Horizon::infinite());
  CHECK(k.u == 7.5);
  CHECK_FALSE(k.horizon.is_finite());
  CHECK(k.method == AllocationMethod::time_of_ruin);

  CHECK(std::string(to_string(AllocationMethod::sup_location)) ==
        "sup_location");
  CHECK(std::string(to_string(Backend::monte_carlo)) == "monte_carlo");
}

}  // TEST_SUITE
