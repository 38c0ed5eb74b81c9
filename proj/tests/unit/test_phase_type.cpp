#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "helpers.hpp"
#include "ruinalloc/errors.hpp"
#include "ruinalloc/phase_type.hpp"
#include "ruinalloc/ruin_engine.hpp"

using namespace ruinalloc;

namespace {

// Valid model whose second line is claim-light: weighting line 1 up pushes
// the weighted book past the net-profit boundary.
CompoundPoissonExpModel lopsided_cp() {
  CompoundPoissonExpModel m;
  m.premium = Eigen::Vector2d(1.0, 1.0);
  m.intensity = Eigen::Vector2d(1.5, 0.4);  // lambda/theta = 1.9 < 2
  m.claim_rate = 1.0;
  return m;
}

}  // namespace

TEST_SUITE("phase_type") {

TEST_CASE("matrix exponential: exact small cases") {
  // exp(0) = I.
  CHECK((matrix_exp(Eigen::MatrixXd::Zero(3, 3)) -
         Eigen::MatrixXd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  // Diagonal.
  Eigen::MatrixXd d = Eigen::Vector2d(-1.0, -2.0).asDiagonal();
  const Eigen::MatrixXd ed = matrix_exp(d);
  CHECK(ed(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(ed(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(std::abs(ed(0, 1)) <= 1e-16);

  // Nilpotent: exp([[0,1],[0,0]]) = [[1,1],[0,1]] exactly.
  Eigen::MatrixXd n(2, 2);
  n << 0.0, 1.0, 0.0, 0.0;
  const Eigen::MatrixXd en = matrix_exp(n);
  CHECK(en(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(en(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(en(1, 0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(en(1, 1) == doctest::Approx(1.0).epsilon(1e-15));

  // Rotation generator: exp(t J) is the rotation by t.
  Eigen::MatrixXd j(2, 2);
  j << 0.0, -1.0, 1.0, 0.0;
  const Eigen::MatrixXd r = matrix_exp(j);
  CHECK(r(0, 0) == doctest::Approx(std::cos(1.0)).epsilon(1e-14));
  CHECK(r(0, 1) == doctest::Approx(-std::sin(1.0)).epsilon(1e-14));
  CHECK(r(1, 0) == doctest::Approx(std::sin(1.0)).epsilon(1e-14));
}

TEST_CASE("matrix exponential: symmetric case against eigendecomposition") {
  Eigen::MatrixXd a(3, 3);
  a << -2.0, 0.5, 0.1, 0.5, -1.5, 0.3, 0.1, 0.3, -3.0;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  const Eigen::MatrixXd want = es.eigenvectors() *
                               es.eigenvalues().array().exp().matrix().asDiagonal() *
                               es.eigenvectors().transpose();
  CHECK((matrix_exp(a) - want).cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("matrix exponential: group property exp(A)exp(A) = exp(2A)") {
  Eigen::MatrixXd a(2, 2);
  a << -0.7, 0.2, 0.4, -1.1;
  const Eigen::MatrixXd e1 = matrix_exp(a);
  const Eigen::MatrixXd e2 = matrix_exp(2.0 * a);
  CHECK((e1 * e1 - e2).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("matrix exponential input validation") {
  CHECK_THROWS_AS(matrix_exp(Eigen::MatrixXd::Zero(2, 3)), ValidationError);
  CHECK_THROWS_AS(matrix_exp(Eigen::MatrixXd::Zero(65, 65)), ValidationError);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(matrix_exp(bad), ValidationError);
}

TEST_CASE("weighted claim mixture") {
  const Eigen::Vector2d x(2.0, 0.5);
  const PhaseTypeClaim claim = weighted_claim(testing::cp_example(), x);
  CHECK(claim.gamma.sum() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(claim.gamma[0] == doctest::Approx(0.85 / 1.8).epsilon(1e-14));
  // Scaling a line by x stretches its claims: rate theta / x_i.
  CHECK(claim.M(0, 0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(claim.M(1, 1) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(claim.M(0, 1) == 0.0);
}

TEST_CASE("unit weights reduce to the exponential-claims formula") {
  const CompoundPoissonExpModel m = testing::cp_example();
  const Eigen::Vector2d ones(1.0, 1.0);
  for (double u : {0.25, 1.0, 5.0, 10.0, 20.0}) {
    const PhaseTypeRuin pt = phase_type_ruin(m, ones, u);
    CHECK_FALSE(pt.almost_sure);
    const double want =
        ruin_prob(RiskModel(m), {u, Horizon::infinite()}).probability;
    CHECK(std::abs(pt.probability - want) <= 1e-10);
  }
  // The matrix formula evaluates the right limit at zero capital, the
  // ladder-height mass lambda / (theta r) = 0.9 (the value at the atom u = 0
  // itself is 1, which the unweighted engine reports).
  CHECK(phase_type_ruin(m, ones, 0.0).probability ==
        doctest::Approx(0.9).epsilon(1e-14));
}

TEST_CASE("probability is a probability, decreasing in u") {
  const CompoundPoissonExpModel m = testing::cp_example();
  const Eigen::Vector2d x(1.3, 0.8);
  double prev = 1.0;
  for (double u = 0.0; u <= 50.0; u += 2.5) {
    const double p = phase_type_ruin(m, x, u).probability;
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    CHECK(p <= prev + 1e-12);
    prev = p;
  }
}

TEST_CASE("zero-capital mass matches the weighted load factor") {
  // At u -> 0+ the formula collapses to lambda(x) * mean_claim(x) / p(x) =
  // sum_i beta_i x_i / (theta sum_i x_i r_i), an independent closed form.
  const CompoundPoissonExpModel m = testing::cp_example();
  for (double x1 : {0.5, 0.8, 1.0, 1.3, 2.0}) {
    for (double x2 : {0.6, 1.0, 1.7}) {
      const double want =
          (0.85 * x1 + 0.95 * x2) / (m.claim_rate * (x1 + x2));
      const double got =
          phase_type_ruin(m, Eigen::Vector2d(x1, x2), 0.0).probability;
      CHECK(got == doctest::Approx(want).epsilon(1e-13));
    }
  }
}

TEST_CASE("probability increases with any line's claim intensity") {
  // More claims at unchanged premium income makes every barrier easier to
  // breach. (Scaling a line's weight is NOT monotone: it raises claims and
  // premium income together.)
  for (double u : {2.0, 10.0}) {
    const Eigen::Vector2d x(1.3, 0.8);
    double prev = 0.0;
    for (double boost : {0.6, 0.8, 1.0, 1.2, 1.4}) {
      CompoundPoissonExpModel m = testing::cp_example();
      m.intensity[0] *= boost;
      const double p = phase_type_ruin(m, x, u).probability;
      CHECK(p > prev);
      prev = p;
    }
  }
}

TEST_CASE("almost-sure flag flips exactly at the weighted net-profit line") {
  // Ruin is certain iff weighted claim inflow >= weighted premium income:
  // sum_i beta_i x_i / theta >= sum_i x_i r_i. Sweep a weight ray across the
  // boundary and check the flag against the inequality on each side.
  // Boundary at x1 = 1.2; sample points keep a clear margin on either side
  // so floating-point summation order cannot flip the comparison.
  const CompoundPoissonExpModel m = lopsided_cp();  // intensities (1.5, 0.4)
  for (double x1 : {0.5, 1.0, 1.19, 1.21, 1.5, 2.5, 4.0}) {
    const Eigen::Vector2d x(x1, 1.0);
    const double inflow = (m.intensity[0] * x1 + m.intensity[1]) / m.claim_rate;
    const double income = m.premium[0] * x1 + m.premium[1];
    const PhaseTypeRuin pt = phase_type_ruin(m, x, 5.0);
    CHECK(pt.almost_sure == (inflow >= income));
    if (pt.almost_sure) CHECK(pt.probability == 1.0);
  }
}

TEST_CASE("net-profit violation flags certain ruin instead of failing") {
  const CompoundPoissonExpModel m = lopsided_cp();
  // Baseline book is fine...
  CHECK_FALSE(phase_type_ruin(m, Eigen::Vector2d(1.0, 1.0), 5.0).almost_sure);
  // ...but overweighting the claim-heavy line breaks it: weighted claim
  // inflow 1.5 * 3 + 0.4 * 0.01 > weighted premium 3.01.
  const PhaseTypeRuin pt = phase_type_ruin(m, Eigen::Vector2d(3.0, 0.01), 5.0);
  CHECK(pt.almost_sure);
  CHECK(pt.probability == 1.0);
}

TEST_CASE("derivative evaluation matches the probability and is negative") {
  const CompoundPoissonExpModel m = testing::cp_example();
  const Eigen::Vector2d x(1.1, 0.9);
  for (double u : {0.5, 2.0, 10.0}) {
    const PhaseTypeRuinEval eval = phase_type_ruin_eval(m, x, u);
    CHECK(eval.probability ==
          doctest::Approx(phase_type_ruin(m, x, u).probability).epsilon(1e-14));
    CHECK(eval.d_probability_du < 0.0);

    // Central difference cross-check.
    const double h = 1e-5;
    const double fd = (phase_type_ruin(m, x, u + h).probability -
                       phase_type_ruin(m, x, u - h).probability) /
                      (2.0 * h);
    CHECK(eval.d_probability_du == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("weights are validated") {
  const CompoundPoissonExpModel m = testing::cp_example();
  CHECK_THROWS_AS(phase_type_ruin(m, Eigen::Vector3d(1, 1, 1), 1.0),
                  ValidationError);
  CHECK_THROWS_AS(phase_type_ruin(m, Eigen::Vector2d(1.0, 0.0), 1.0),
                  ValidationError);
  CHECK_THROWS_AS(phase_type_ruin(m, Eigen::Vector2d(1.0, -2.0), 1.0),
                  ValidationError);
  CHECK_THROWS_AS(phase_type_ruin(m, Eigen::Vector2d(1.0, 1.0), -1.0),
                  ValidationError);
}

}  // TEST_SUITE
