// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0

#include "bfheat/resolvent.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace bfheat;

namespace {

double recovery_error(const TrigPoly& y_true, double eps,
                      const SolveOptions& opts = {}) {
  const TrigPoly phi = apply_l(y_true, eps);
  const QuadratureGrid grid(eps, opts.quad);
  const SolveResult sol = solve_l(phi, eps, grid, opts);
  // compare against the zero-mean representative of y_true on the grid
  Eigen::VectorXd truth(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    truth(i) = y_true.eval(grid.nodes()(i)).real();
  truth.array() -= grid.mean(truth);
  return (sol.y - truth).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("gauss_legendre matches the tabulated 5-point rule") {
  Eigen::VectorXd x, w;
  gauss_legendre(5, x, w);
  CHECK(x(2) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(x(0)) == doctest::Approx(0.9061798459386640).epsilon(1e-13));
  CHECK(std::abs(x(1)) == doctest::Approx(0.5384693101056831).epsilon(1e-13));
  CHECK(w(2) == doctest::Approx(0.5688888888888889).epsilon(1e-13));
  CHECK(w(1) == doctest::Approx(0.4786286704993665).epsilon(1e-13));
  CHECK(w(0) == doctest::Approx(0.2369268850561891).epsilon(1e-13));
  CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("gauss_legendre integrates smooth functions to machine accuracy") {
  Eigen::VectorXd x, w;
  gauss_legendre(32, x, w);
  double acc = 0.0;
  for (int i = 0; i < 32; ++i) acc += w(i) * std::cos(x(i));
  CHECK(acc == doctest::Approx(2.0 * std::sin(1.0)).epsilon(1e-15));
}

TEST_CASE("grid construction invariants") {
  const QuadratureGrid grid(0.5);
  const Eigen::Index n = grid.size();
  REQUIRE(n > 0);
  // strictly increasing, inside (-pi, pi), never at 0
  for (Eigen::Index i = 0; i + 1 < n; ++i) CHECK(grid.nodes()(i) < grid.nodes()(i + 1));
  CHECK(grid.nodes()(0) > -kPi);
  CHECK(grid.nodes()(n - 1) < kPi);
  for (Eigen::Index i = 0; i < n; ++i) CHECK(grid.nodes()(i) != 0.0);
  // symmetric about 0
  for (Eigen::Index i = 0; i < n; ++i)
    CHECK(grid.nodes()(i) == -grid.nodes()(n - 1 - i));
  // finite log weights
  CHECK(grid.log_weight().allFinite());
  // default layout: 2048 nodes at 32 per panel
  CHECK(n == 2048);
  // weights integrate constants exactly over the period
  CHECK(grid.integrate(Eigen::VectorXd::Ones(n)) ==
        doctest::Approx(kTwoPi).epsilon(1e-14));
  // panel boundaries of the half grid pass through pi/2 and end at pi
  CHECK(grid.half_panels().front().a == 0.0);
  CHECK(grid.half_panels().back().b == doctest::Approx(kPi).epsilon(1e-15));
  CHECK_THROWS_AS(QuadratureGrid(-(0.5)), InvalidEpsilon);
}

TEST_CASE("solve_l trivial and rejected inputs") {
  SUBCASE("phi = 0 gives y = 0") {
    const SolveResult sol = solve_l(TrigPoly(4), 0.5);
    CHECK(sol.y.cwiseAbs().maxCoeff() == 0.0);
    CHECK(sol.yprime.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("phi = 1 is outside the range") {
    CHECK_THROWS_AS(solve_l(TrigPoly::constant(1.0), 0.5), Unsolvable);
  }
  SUBCASE("small mean component is still rejected") {
    TrigPoly phi = TrigPoly::sine(1);
    phi.set_coeff(0, 1e-3);
    CHECK_THROWS_AS(solve_l(phi, 0.5), Unsolvable);
  }
}

TEST_CASE("cos x image round-trips at eps = 0.5") {
  CHECK(recovery_error(TrigPoly::cosine(1), 0.5) <= 1e-6);
}

TEST_CASE("round-trip recovery across inputs and epsilons") {
  std::mt19937_64 rng(31);
  for (const double eps : {0.5, 1.0}) {
    CHECK(recovery_error(TrigPoly::cosine(1), eps) <= 1e-5);
    CHECK(recovery_error(TrigPoly::sine(2), eps) <= 1e-5);
    for (int rep = 0; rep < 3; ++rep) {
      const TrigPoly y = random_trig_poly(rng, 10, true, true);
      CHECK(recovery_error(y, eps) <= 1e-5);
    }
  }
}

TEST_CASE("a-posteriori diagnostics are reported and small") {
  const double eps = 1.0;
  const TrigPoly phi = apply_l(TrigPoly::cosine(1), eps);
  const SolveResult sol = solve_l(phi, eps);
  CHECK(sol.periodicity_defect <= 1e-8);
  CHECK(sol.ode_residual <= 1e-8);
  CHECK(sol.mean_phi == 0.0);
  CHECK(sol.x.size() == sol.y.size());
  CHECK(sol.x.size() == sol.yprime.size());
}

TEST_CASE("yprime matches the analytic derivative on the grid") {
  const double eps = 0.5;
  const TrigPoly y_true = TrigPoly::cosine(1);
  const TrigPoly phi = apply_l(y_true, eps);
  const QuadratureGrid grid(eps);
  const SolveResult sol = solve_l(phi, eps, grid);
  const TrigPoly dy = derivative(y_true);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    worst = std::max(worst,
                     std::abs(sol.yprime(i) - dy.eval(grid.nodes()(i)).real()));
  CHECK(worst <= 1e-6);
}

TEST_CASE("a hopelessly coarse grid is flagged") {
  SolveOptions opts;
  opts.quad.nodes_per_panel = 2;
  opts.quad.levels = 1;
  std::mt19937_64 rng(33);
  const TrigPoly phi = apply_l(random_trig_poly(rng, 8, true, true), 0.5);
  CHECK_THROWS_AS(solve_l(phi, 0.5, opts), QuadratureFailure);
}
