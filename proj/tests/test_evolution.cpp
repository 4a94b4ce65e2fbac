// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0

#include "bfheat/evolution.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "bfheat/eigensolver.hpp"

using namespace bfheat;
using Complex = std::complex<double>;

namespace {

double poly_distance(const TrigPoly& a, const TrigPoly& b) {
  return coeff_distance(a, b);
}

}  // namespace

TEST_CASE("galerkin matrix sector structure") {
  const double eps = 0.8;
  const Eigen::Index n = 6;
  const GalerkinMatrix g = galerkin_matrix(n, eps);

  SUBCASE("zero-mode column and row vanish") {
    CHECK(g.entries.col(g.index(0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.entries.row(g.index(0)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("columns +-1 do not feed mode 0") {
    CHECK(std::abs(g.entries(g.index(0), g.index(1))) == 0.0);
    CHECK(std::abs(g.entries(g.index(0), g.index(-1))) == 0.0);
  }
  SUBCASE("positive block equals i A^T to relative machine accuracy") {
    const Eigen::MatrixXcd expect =
        Complex(0.0, 1.0) *
        build_a<double>(n, eps).to_dense().transpose().cast<Complex>();
    const double scale = expect.cwiseAbs().maxCoeff();
    CHECK((g.positive_block() - expect).cwiseAbs().maxCoeff() <= 1e-15 * scale);
  }
  SUBCASE("reflected negative block equals -i A^T to relative machine accuracy") {
    const Eigen::MatrixXcd expect =
        Complex(0.0, -1.0) *
        build_a<double>(n, eps).to_dense().transpose().cast<Complex>();
    const double scale = expect.cwiseAbs().maxCoeff();
    CHECK((g.negative_block_reflected() - expect).cwiseAbs().maxCoeff() <=
          1e-15 * scale);
  }
}

TEST_CASE("sector decoupling is exact") {
  const GalerkinMatrix g = galerkin_matrix(5, 1.1);
  Eigen::MatrixXcd rest = g.entries;
  rest.block(0, 0, 5, 5).setZero();                 // negative block
  rest.block(6, 6, 5, 5).setZero();                 // positive block
  rest(5, 5) = 0.0;                                 // zero mode
  CHECK(rest.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("N=2 positive block matches the displayed form") {
  const double eps = 0.4;
  const GalerkinMatrix g = galerkin_matrix(2, eps);
  Eigen::Matrix2cd expect;
  expect << Complex(0, 1), Complex(0, -eps), Complex(0, eps), Complex(0, 2);
  CHECK((g.positive_block() - expect).cwiseAbs().maxCoeff() <= 1e-16);
}

TEST_CASE("full Galerkin spectrum is {0} union +-i spec(A)") {
  const double eps = 0.7;
  const Eigen::Index n = 24;
  const GalerkinMatrix g = galerkin_matrix(n, eps);

  // my QR on the (tridiagonal) full matrix
  Tridiagonal<Complex> t;
  t.order = 2 * n + 1;
  t.diag.resize(t.order);
  t.super.resize(t.order - 1);
  t.sub.resize(t.order - 1);
  for (Eigen::Index i = 0; i < t.order; ++i) t.diag(i) = g.entries(i, i);
  for (Eigen::Index i = 0; i + 1 < t.order; ++i) {
    t.super(i) = g.entries(i, i + 1);
    t.sub(i) = g.entries(i + 1, i);
  }
  const Eigen::VectorXcd full = eigenvalues(t).eigenvalues;

  const Eigen::VectorXcd spec_a = eigenvalues(build_a<double>(n, eps)).eigenvalues;
  Eigen::VectorXcd expect(2 * n + 1);
  expect(0) = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    expect(1 + 2 * i) = Complex(0.0, 1.0) * spec_a(i);
    expect(2 + 2 * i) = Complex(0.0, -1.0) * spec_a(i);
  }
  // greedy multiset match
  std::vector<bool> used(static_cast<size_t>(expect.size()), false);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < full.size(); ++i) {
    double best = 1e300;
    Eigen::Index pick = -1;
    for (Eigen::Index j = 0; j < expect.size(); ++j) {
      if (used[static_cast<size_t>(j)]) continue;
      const double d = std::abs(full(i) - expect(j));
      if (d < best) {
        best = d;
        pick = j;
      }
    }
    used[static_cast<size_t>(pick)] = true;
    worst = std::max(worst, best);
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("constants are exact fixed points of the flow") {
  const TrigPoly one = TrigPoly::constant(1.0);
  for (const ExpMethod m : {ExpMethod::eigen_decomposition, ExpMethod::scaling_squaring}) {
    const TrigPoly yt = propagate(one, 2.7, 12, 0.9, m);
    CHECK(std::abs(yt.coeff(0) - Complex(1.0)) == 0.0);
    bool others_zero = true;
    for (int k = 1; k <= yt.degree(); ++k)
      others_zero = others_zero && yt.coeff(k) == Complex(0.0) &&
                    yt.coeff(-k) == Complex(0.0);
    CHECK(others_zero);
  }
}

TEST_CASE("tiny epsilon flow is pure transport") {
  const TrigPoly y0 = TrigPoly::cosine(1);
  const double t = 1.0;
  const TrigPoly yt = propagate(y0, t, 32, 1e-12, ExpMethod::scaling_squaring);
  // cos(x - t) has coefficients e^{-it}/2 and e^{it}/2
  TrigPoly expect(1);
  expect.set_coeff(1, 0.5 * std::polar(1.0, -t));
  expect.set_coeff(-1, 0.5 * std::polar(1.0, t));
  CHECK(poly_distance(yt, expect) <= 1e-8);
}

// The truncated generator's polluted eigenvalues make ||exp(-t L_N)|| grow
// like e^{c(eps) N^2 t}, so flow comparisons are run at times where the
// propagator stays O(100) and absolute tolerances are meaningful.
TEST_CASE("both exponential methods agree") {
  std::mt19937_64 rng(41);
  const TrigPoly y0 = random_trig_poly(rng, 10, true, false);
  const TrigPoly a = propagate(y0, 0.05, 16, 0.5, ExpMethod::eigen_decomposition);
  const TrigPoly b = propagate(y0, 0.05, 16, 0.5, ExpMethod::scaling_squaring);
  CHECK(poly_distance(a, b) <= 1e-8);
}

TEST_CASE("flow preserves reality and the mean") {
  std::mt19937_64 rng(42);
  const TrigPoly y0 = random_trig_poly(rng, 12, true, false);
  const TrigPoly yt = propagate(y0, 0.02, 16, 0.8);
  CHECK(yt.is_real(1e-12));
  CHECK(std::abs(yt.coeff(0) - y0.coeff(0)) == 0.0);
}

TEST_CASE("semigroup property at the truncation") {
  std::mt19937_64 rng(43);
  const TrigPoly y0 = random_trig_poly(rng, 8, true, false);
  const double s = 0.02, t = 0.03;
  const TrigPoly two_step =
      propagate(propagate(y0, s, 16, 0.5), t, 16, 0.5);
  const TrigPoly one_step = propagate(y0, s + t, 16, 0.5);
  CHECK(poly_distance(two_step, one_step) <= 1e-8);
}

TEST_CASE("first-order Taylor consistency with observed order >= 1.9") {
  std::mt19937_64 rng(44);
  const TrigPoly y0 = random_trig_poly(rng, 6, true, false);
  const double eps = 0.5;
  const Eigen::Index n = 12;
  std::vector<double> errs;
  for (const double h : {1e-2, 1e-3, 1e-4}) {
    const TrigPoly moved = propagate(y0, h, n, eps, ExpMethod::scaling_squaring);
    const TrigPoly euler = y0 - (Complex(h) * apply_l(y0, eps));
    errs.push_back(l2_norm(moved - euler));
  }
  const double order1 = std::log10(errs[0] / errs[1]);
  const double order2 = std::log10(errs[1] / errs[2]);
  CHECK(order1 >= 1.9);
  CHECK(order2 >= 1.9);
}

TEST_CASE("transient growth diagnostics") {
  SUBCASE("identity at t = 0") {
    CHECK(transient_growth(0.0, 16, 0.5) == 1.0);
  }
  SUBCASE("unitary advection at tiny epsilon") {
    CHECK(transient_growth(1.0, 16, 1e-12) == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("reported growth across truncations") {
    for (const Eigen::Index n : {16, 32, 64}) {
      const double g = transient_growth(0.01, n, 0.5);
      CHECK(g >= 1.0 - 1e-12);
      CHECK(std::isfinite(g));
      MESSAGE("transient growth at t=0.01, N=", n, ": ", g);
    }
    // far past the representable range the growth reports as infinite
    CHECK(transient_growth(1.0, 64, 0.5) ==
          std::numeric_limits<double>::infinity());
  }
}

TEST_CASE("eigendecomposition falls back when conditioning is hopeless") {
  PropagatorInfo info;
  propagate(TrigPoly::cosine(1), 1.0, 12, 0.5, ExpMethod::eigen_decomposition,
            &info, /*cond_threshold=*/1.0);
  CHECK(info.fallback_used);
  PropagatorInfo info_ok;
  propagate(TrigPoly::cosine(1), 1.0, 12, 0.5, ExpMethod::eigen_decomposition,
            &info_ok, /*cond_threshold=*/1e12);
  CHECK_FALSE(info_ok.fallback_used);
  CHECK(info_ok.eigenvector_condition > 1.0);
}

TEST_CASE("evolve produces a consistent trace") {
  const TrigPoly y0 = TrigPoly::cosine(1);
  const EvolutionTrace trace = evolve(y0, {0.0, 0.05, 0.1}, 12, 0.6);
  REQUIRE(trace.times.size() == 3);
  CHECK(trace.times.front() == 0.0);
  CHECK(poly_distance(trace.states.front(), y0) <= 1e-14);
  CHECK(trace.norms.front() == doctest::Approx(l2_norm(y0)).epsilon(1e-12));
  CHECK(trace.growth.front() == 1.0);
  CHECK_THROWS_AS(evolve(y0, {0.5, 1.0}, 12, 0.6), InvalidOrder);
  CHECK_THROWS_AS(evolve(y0, {0.0, 0.1, 0.1}, 12, 0.6), InvalidOrder);
}

TEST_CASE("matrix exponential basics") {
  SUBCASE("exp(0) = I") {
    const Eigen::MatrixXcd e = matrix_exponential(Eigen::MatrixXcd::Zero(4, 4));
    CHECK((e - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("diagonal input") {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d(0, 0) = Complex(0.3, -1.0);
    d(1, 1) = Complex(-0.2, 2.0);
    const Eigen::MatrixXcd e = matrix_exponential(d);
    CHECK(std::abs(e(0, 0) - std::exp(d(0, 0))) <= 1e-14);
    CHECK(std::abs(e(1, 1) - std::exp(d(1, 1))) <= 1e-14);
    CHECK(std::abs(e(0, 1)) <= 1e-16);
  }
  SUBCASE("2x2 nilpotent block") {
    Eigen::MatrixXcd nil = Eigen::MatrixXcd::Zero(2, 2);
    nil(0, 1) = 3.0;
    const Eigen::MatrixXcd e = matrix_exponential(nil);
    CHECK(std::abs(e(0, 1) - Complex(3.0)) <= 1e-14);
    CHECK(std::abs(e(0, 0) - Complex(1.0)) <= 1e-14);
  }
}
