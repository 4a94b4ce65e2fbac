// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0

#include "bfheat/trig_poly.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

#include "bfheat/eigensolver.hpp"

using namespace bfheat;
using Complex = std::complex<double>;

namespace {

// Independent symbolic application of L: literal translation of
// eps*(sin x y')' + y', mode by mode, with its own arithmetic.
TrigPoly oracle_apply_l(const TrigPoly& y, double eps) {
  TrigPoly out(y.degree() + 1);
  for (int n = -y.degree(); n <= y.degree(); ++n) {
    const Complex c = y.coeff(n);
    out.add_to_coeff(n, Complex(0.0, double(n)) * c);
    out.add_to_coeff(n + 1, Complex(0.0, eps * 0.5 * double(n) * double(n + 1)) * c);
    out.add_to_coeff(n - 1, Complex(0.0, -eps * 0.5 * double(n) * double(n - 1)) * c);
  }
  return out;
}

// Uniform-grid trapezoid quadrature of |f|^2 over (-pi, pi); exact for trig
// polynomials well below the grid bandwidth.
double oracle_l2_norm(const TrigPoly& f, int nodes = 10000) {
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double x = -kPi + kTwoPi * i / nodes;
    acc += std::norm(f.eval(x));
  }
  return std::sqrt(acc * kTwoPi / nodes);
}

}  // namespace

TEST_CASE("apply_l kernel and hand-computed images") {
  const double eps = 0.6;
  SUBCASE("constants annihilated") {
    CHECK(max_abs_coeff(apply_l(TrigPoly::constant(1.0), eps)) == 0.0);
  }
  SUBCASE("L cos x = -eps sin 2x - sin x") {
    const TrigPoly expect =
        (Complex(-eps) * TrigPoly::sine(2)) + (Complex(-1.0) * TrigPoly::sine(1));
    CHECK(coeff_distance(apply_l(TrigPoly::cosine(1), eps), expect) <= 1e-16);
  }
  SUBCASE("L e^{ix} = i eps e^{2ix} + i e^{ix}") {
    const TrigPoly got = apply_l(TrigPoly::harmonic(1), eps);
    CHECK(std::abs(got.coeff(2) - Complex(0.0, eps)) <= 1e-16);
    CHECK(std::abs(got.coeff(1) - Complex(0.0, 1.0)) <= 1e-16);
    CHECK(std::abs(got.coeff(0)) == 0.0);
  }
}

TEST_CASE("apply_l matches the symbolic oracle on random polynomials") {
  std::mt19937_64 rng(11);
  for (const double eps : {0.5, 1.0, 1.5}) {
    for (int rep = 0; rep < 100; ++rep) {
      const TrigPoly y = random_trig_poly(rng, 1 + int(rng() % 25), false, false);
      const TrigPoly got = apply_l(y, eps);
      const double scale = std::max(1.0, max_abs_coeff(got));
      CHECK(coeff_distance(got, oracle_apply_l(y, eps)) <= 1e-13 * scale);
    }
  }
}

TEST_CASE("apply_l_star images and adjoint identity") {
  const double eps = 0.6;
  CHECK(max_abs_coeff(apply_l_star(TrigPoly::constant(1.0), eps)) == 0.0);
  const TrigPoly expect =
      (Complex(-eps) * TrigPoly::sine(2)) + TrigPoly::sine(1);
  CHECK(coeff_distance(apply_l_star(TrigPoly::cosine(1), eps), expect) <= 1e-16);

  // <Ly, z> = <y, L*z> by brute-force inner products
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 100; ++rep) {
    const TrigPoly y = random_trig_poly(rng, 20, true, false);
    const TrigPoly z = random_trig_poly(rng, 20, true, false);
    const Complex lhs = inner_product(apply_l(y, eps), z);
    const Complex rhs = inner_product(y, apply_l_star(z, eps));
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
  }
}

TEST_CASE("apply_j reflection") {
  CHECK(coeff_distance(apply_j(TrigPoly::constant(1.0)), TrigPoly::constant(1.0)) == 0.0);
  CHECK(coeff_distance(apply_j(TrigPoly::sine(1)), TrigPoly::sine(1)) == 0.0);
  // J e^{ix} = -e^{-ix}
  const TrigPoly je = apply_j(TrigPoly::harmonic(1));
  CHECK(std::abs(je.coeff(-1) - Complex(-1.0)) == 0.0);
  CHECK(std::abs(je.coeff(1)) == 0.0);

  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 50; ++rep) {
    const TrigPoly y = random_trig_poly(rng, 1 + int(rng() % 30), false, false);
    CHECK(coeff_distance(apply_j(apply_j(y)), y) == 0.0);  // exact involution
    // J preserves pointwise values under reflection
    const double x = -kPi + kTwoPi * (rng() % 1000) / 1000.0;
    CHECK(std::abs(apply_j(y).eval(x) - y.eval(kPi - x)) <= 1e-12);
  }
}

TEST_CASE("L = J L* J") {
  CHECK(check_jlj(TrigPoly::constant(1.0), 0.9) == 0.0);
  CHECK(check_jlj(TrigPoly::cosine(1), 0.9) <= 1e-15);
  std::mt19937_64 rng(14);
  for (const double eps : {0.5, 1.0, 1.5}) {
    for (int rep = 0; rep < 500; ++rep) {
      const TrigPoly y = random_trig_poly(rng, 1 + int(rng() % 30), true, false);
      CHECK(check_jlj(y, eps) <= 1e-13);
    }
  }
}

TEST_CASE("factorization at the operator level: L y = M(y')") {
  std::mt19937_64 rng(15);
  for (const double eps : {0.5, 1.0, 1.5}) {
    for (int rep = 0; rep < 200; ++rep) {
      const TrigPoly y = random_trig_poly(rng, 1 + int(rng() % 30), false, false);
      const double r = coeff_distance(apply_l(y, eps), apply_m(derivative(y), eps));
      CHECK(r <= 1e-14);
    }
  }
}

TEST_CASE("apply_m matches the M-matrix on embedded coefficient vectors") {
  const double eps = 1.2;
  const Eigen::Index n_max = 8;
  const auto m = build_m_matrix<double>(n_max, eps);
  std::mt19937_64 rng(16);
  const TrigPoly y = random_trig_poly(rng, int(n_max) - 1, false, false);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * n_max + 1);
  for (int n = -y.degree(); n <= y.degree(); ++n) v(n + n_max) = y.coeff(n);
  Eigen::VectorXcd mv(2 * n_max + 1);
  {
    // complex apply through the real banded matrix
    const Eigen::MatrixXd md = m.to_dense();
    mv = md.cast<Complex>() * v;
  }
  const TrigPoly my = apply_m(y, eps);
  for (Eigen::Index i = 0; i < 2 * n_max + 1; ++i)
    CHECK(std::abs(mv(i) - my.coeff(int(i - n_max))) <= 1e-14);
}

TEST_CASE("norm_g and norm_m basics") {
  SUBCASE("constants: g-norm sqrt(2pi), m-norm 0") {
    CHECK(norm_g(TrigPoly::constant(1.0), 0.7) ==
          doctest::Approx(std::sqrt(kTwoPi)).epsilon(1e-14));
    CHECK(norm_m(TrigPoly::constant(1.0)) == 0.0);
  }
  SUBCASE("e^{ix} against the quadrature oracle") {
    const TrigPoly y = TrigPoly::harmonic(1);
    const TrigPoly dy = derivative(y);
    const TrigPoly sdy = sin_times(dy);
    CHECK(l2_norm(dy) == doctest::Approx(oracle_l2_norm(dy)).epsilon(1e-10));
    CHECK(l2_norm(sdy) == doctest::Approx(oracle_l2_norm(sdy)).epsilon(1e-10));
    CHECK(l2_norm(derivative(sdy)) ==
          doctest::Approx(oracle_l2_norm(derivative(sdy))).epsilon(1e-10));
    const double expect = std::sqrt(l2_norm(dy) * l2_norm(dy) +
                                    l2_norm(sdy) * l2_norm(sdy) +
                                    l2_norm(derivative(sdy)) * l2_norm(derivative(sdy)));
    CHECK(norm_m(y) == doctest::Approx(expect).epsilon(1e-14));
  }
  SUBCASE("norm_g randomized cross-check") {
    std::mt19937_64 rng(17);
    const TrigPoly y = random_trig_poly(rng, 12, true, true);
    const double direct = std::hypot(l2_norm(y), l2_norm(apply_l(y, 1.1)));
    CHECK(norm_g(y, 1.1) == doctest::Approx(direct).epsilon(1e-14));
  }
}

TEST_CASE("two-sided norm equivalence on zero-mean polynomials") {
  std::mt19937_64 rng(18);
  for (const double eps : {0.5, 1.0, 1.5}) {
    const double p2 = std::max(3.0, 2.0 * eps);
    const double p1_hat = estimate_p1(64, eps);
    const double p3_hat = std::min(p1_hat / 6.0, 0.5);
    CHECK(p1_hat > 0.0);
    for (int rep = 0; rep < 300; ++rep) {
      const TrigPoly y = random_trig_poly(rng, 1 + int(rng() % 20), true, true);
      const double g = norm_g(y, eps);
      const double m = norm_m(y);
      CHECK(g <= p2 * m * (1.0 + 1e-12));
      CHECK(g >= p3_hat * m * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("theta constraints vanish") {
  auto both_small = [](const TrigPoly& y, double tol) {
    const auto [pos, neg] = theta_constraint_residuals(y);
    return pos <= tol && neg <= tol;
  };
  CHECK(both_small(TrigPoly::constant(1.0), 1e-16));
  CHECK(both_small(TrigPoly::cosine(1), 1e-16));
  std::mt19937_64 rng(19);
  for (int rep = 0; rep < 200; ++rep)
    CHECK(both_small(random_trig_poly(rng, 1 + int(rng() % 25), false, false), 1e-13));
}

TEST_CASE("M preserves the mean") {
  CHECK(m_mean_invariance_residual(TrigPoly::constant(1.0), 1.3) == 0.0);
  CHECK(m_mean_invariance_residual(TrigPoly::harmonic(1), 1.3) == 0.0);
  std::mt19937_64 rng(20);
  for (int rep = 0; rep < 200; ++rep) {
    const TrigPoly y = random_trig_poly(rng, 1 + int(rng() % 25), false, false);
    CHECK(m_mean_invariance_residual(y, 0.9) <= 1e-14);
  }
}

TEST_CASE("random_trig_poly honors its flags and eval agrees with coefficients") {
  std::mt19937_64 rng(21);
  const TrigPoly re = random_trig_poly(rng, 10, true, false);
  CHECK(re.is_real());
  const TrigPoly zm = random_trig_poly(rng, 10, true, true);
  CHECK(zm.coeff(0) == Complex(0.0));
  CHECK(std::abs(zm.mean_integral()) == 0.0);
  // pointwise reality
  for (int i = 0; i < 10; ++i) {
    const double x = -kPi + kTwoPi * i / 10.0;
    CHECK(std::abs(re.eval(x).imag()) <= 1e-13);
  }
}
