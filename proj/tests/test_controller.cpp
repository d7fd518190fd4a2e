#include "generators.hpp"
#include "oracles.hpp"

#include "sensel/controller.hpp"
#include "sensel/errors.hpp"

#include <doctest.h>

using namespace sensel;

TEST_CASE("terminal cost-to-go is D") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const Scenario s = gen::scenario(rng, 8);
    const GainSchedule g = riccati_backward(s.plant, s.costs, s.horizon);
    CHECK(g.cost_to_go(s.horizon) == s.costs.D);
  }
}

TEST_CASE("no actuation means no gain") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    Scenario s = gen::scenario(rng, 8);
    s.plant.B.setZero();
    const GainSchedule g = riccati_backward(s.plant, s.costs, s.horizon);
    for (int k = 1; k <= s.horizon; ++k) {
      CHECK(g.gain(k).isZero(0.0));
      const Matrix& Mk = g.cost_to_go(k);
      const Matrix expected = s.costs.D + s.plant.A.transpose() * Mk * s.plant.A;
      CHECK((g.cost_to_go(k - 1) - expected).cwiseAbs().maxCoeff() <=
            1e-12 * (1.0 + expected.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("scalar Riccati step by hand") {
  const PlantModel plant{Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0),
                         Matrix::Zero(1, 1)};
  const CostWeights costs{Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0)};
  const GainSchedule g = riccati_backward(plant, costs, 1);
  CHECK(g.cost_to_go(1)(0, 0) == doctest::Approx(1.0));
  CHECK(g.gain(1)(0, 0) == doctest::Approx(0.5));
  CHECK(g.cost_to_go(0)(0, 0) == doctest::Approx(1.5));
}

TEST_CASE("control_input") {
  const GainSchedule scalar({Matrix::Constant(1, 1, 0.5)},
                            {Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0)});
  CHECK(control_input(scalar, 1, Vector::Constant(1, 4.0))(0) == doctest::Approx(-2.0));
  CHECK(control_input(scalar, 1, Vector::Zero(1)).isZero(0.0));
  CHECK_THROWS_AS(control_input(scalar, 0, Vector::Zero(1)), IndexError);
  CHECK_THROWS_AS(control_input(scalar, 2, Vector::Zero(1)), IndexError);
  CHECK_THROWS_AS(control_input(scalar, 1, Vector::Zero(2)), DimensionError);
}

TEST_CASE("three-bus gains agree with the reference recursion") {
  const Scenario s = three_bus_scenario();
  const GainSchedule g = riccati_backward(s.plant, s.costs, s.horizon);
  const auto ref = oracle::riccati_gains(s);
  for (int k = 1; k <= s.horizon; ++k) {
    CHECK((g.gain(k) - oracle::to_eigen(ref[static_cast<std::size_t>(k - 1)]))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }

  // u_1 for x_hat = [30, 10, 20], frozen from an independent numpy run.
  const Vector u = control_input(g, 1, Eigen::Vector3d(30.0, 10.0, 20.0));
  CHECK(u(0) == doctest::Approx(-13.078827657173028).epsilon(1e-12));
  CHECK(u(1) == doctest::Approx(-4.234478255288809).epsilon(1e-12));
  CHECK(u(2) == doctest::Approx(-10.322670842657564).epsilon(1e-12));

  // L_K only sees the terminal weight.
  CHECK(g.gain(40)(0, 0) == doctest::Approx(0.1096974223945482).epsilon(1e-12));
  CHECK(g.gain(40)(2, 2) == doctest::Approx(0.3498287787478159).epsilon(1e-12));
}

TEST_CASE("cost-to-go stays PSD and dominates D") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 100; ++trial) {
    const Scenario s = gen::scenario(rng, 10);
    const GainSchedule g = riccati_backward(s.plant, s.costs, s.horizon);
    for (int k = 0; k <= s.horizon; ++k) {
      const Matrix& M = g.cost_to_go(k);
      CHECK(asymmetry(M) <= kSymmetryTol);
      CHECK(min_eigenvalue(M) >= -kPsdTol);
      CHECK(M.trace() >= s.costs.D.trace() - 1e-9);
    }
  }
}

TEST_CASE("three-bus gains reach steady state and stabilize the plant") {
  const Scenario s = three_bus_scenario();
  const GainSchedule g = riccati_backward(s.plant, s.costs, s.horizon);
  // Successive gain changes shrink geometrically (ratio ~0.63) going back
  // from K and drop below 1e-8 only at k = 2 (numpy: 7.2994e-09).
  for (int k = 3; k <= s.horizon; ++k) {
    CHECK((g.gain(k - 1) - g.gain(k - 2)).norm() < (g.gain(k) - g.gain(k - 1)).norm());
  }
  CHECK((g.gain(2) - g.gain(1)).norm() < 1e-8);
  const Matrix closed = s.plant.A - s.plant.B * g.gain(1);
  const double rho = closed.eigenvalues().cwiseAbs().maxCoeff();
  // numpy: 0.7967514208051022
  CHECK(rho == doctest::Approx(0.7967514208051022).epsilon(1e-10));
  CHECK(rho < 1.0);
  CHECK(s.plant.A.eigenvalues().cwiseAbs().maxCoeff() == doctest::Approx(1.05));
}

TEST_CASE("expensive control drives the gain to zero") {
  // Over K = 40 the unstable three-bus plant inflates M_0 to ~1e3, which puts
  // |L| near 1e-6; a shorter horizon and stable random plants keep M moderate.
  Scenario s = three_bus_scenario();
  s.costs.E = 1e9 * Matrix::Identity(3, 3);
  const GainSchedule g = riccati_backward(s.plant, s.costs, 10);
  for (int k = 1; k <= 10; ++k) CHECK(g.gain(k).norm() < 1e-6);

  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    Scenario r = gen::scenario(rng);
    r.plant.A *= 0.9 / std::max(1.0, r.plant.A.eigenvalues().cwiseAbs().maxCoeff());
    r.costs.E = 1e9 * Matrix::Identity(r.plant.control_dim(), r.plant.control_dim());
    const GainSchedule gr = riccati_backward(r.plant, r.costs, 40);
    for (int k = 1; k <= 40; ++k) CHECK(gr.gain(k).norm() < 1e-6);
  }
}

TEST_CASE("riccati_backward rejects bad inputs") {
  const Scenario s = three_bus_scenario();
  CHECK_THROWS_AS(riccati_backward(s.plant, s.costs, 0), DimensionError);
  CostWeights bad = s.costs;
  bad.E = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(riccati_backward(s.plant, bad, 5), DimensionError);
  bad = s.costs;
  bad.E = -10.0 * Matrix::Identity(3, 3);
  CHECK_THROWS_AS(riccati_backward(s.plant, bad, 5), NumericalError);
}
