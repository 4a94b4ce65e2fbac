// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0

#include "bfheat/trig_poly.hpp"

#include <algorithm>
#include <cmath>

namespace bfheat {

using Complex = std::complex<double>;

Complex TrigPoly::eval(double x) const {
  // Sum positive and negative ladders with incremental phase factors.
  const Complex up = std::polar(1.0, x);
  const Complex dn = std::conj(up);
  Complex acc = coeff(0);
  Complex pu = 1.0, pd = 1.0;
  for (int n = 1; n <= degree_; ++n) {
    pu *= up;
    pd *= dn;
    acc += coeff(n) * pu + coeff(-n) * pd;
  }
  return acc;
}

bool TrigPoly::is_real(double tol) const {
  for (int n = 0; n <= degree_; ++n)
    if (std::abs(coeff(-n) - std::conj(coeff(n))) > tol) return false;
  return true;
}

TrigPoly TrigPoly::trimmed(double tol) const {
  int d = degree_;
  while (d > 0 && std::abs(coeff(d)) <= tol && std::abs(coeff(-d)) <= tol) --d;
  TrigPoly out(d);
  for (int n = -d; n <= d; ++n) out.set_coeff(n, coeff(n));
  return out;
}

TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) {
  const int d = std::max(a.degree(), b.degree());
  TrigPoly out(d);
  for (int n = -d; n <= d; ++n) out.set_coeff(n, a.coeff(n) + b.coeff(n));
  return out;
}

TrigPoly operator-(const TrigPoly& a, const TrigPoly& b) {
  const int d = std::max(a.degree(), b.degree());
  TrigPoly out(d);
  for (int n = -d; n <= d; ++n) out.set_coeff(n, a.coeff(n) - b.coeff(n));
  return out;
}

TrigPoly operator*(Complex s, const TrigPoly& p) {
  TrigPoly out(p.degree());
  for (int n = -p.degree(); n <= p.degree(); ++n) out.set_coeff(n, s * p.coeff(n));
  return out;
}

TrigPoly derivative(const TrigPoly& y) {
  const int d = y.degree();
  TrigPoly out(d);
  for (int n = -d; n <= d; ++n)
    out.set_coeff(n, Complex(0.0, static_cast<double>(n)) * y.coeff(n));
  return out;
}

TrigPoly sin_times(const TrigPoly& y) {
  const int d = y.degree();
  TrigPoly out(d + 1);
  // sin x * e^{inx} = (e^{i(n+1)x} - e^{i(n-1)x}) / (2i)
  const Complex half_over_i(0.0, -0.5);
  for (int n = -d; n <= d; ++n) {
    const Complex c = half_over_i * y.coeff(n);
    out.add_to_coeff(n + 1, c);
    out.add_to_coeff(n - 1, -c);
  }
  return out;
}

TrigPoly apply_j(const TrigPoly& y) {
  const int d = y.degree();
  TrigPoly out(d);
  for (int m = -d; m <= d; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    out.set_coeff(m, sign * y.coeff(-m));
  }
  return out;
}

namespace {

// Shared recurrence body for L and L*, written per OUTPUT mode:
//   out_k = diag_sign * d_k + ( w_k * d_{k-1} - w_k * d_{k+1} ),
// with d_j = i*j*c_j the derivative coefficient and w_k = eps*k/2. This is
// M applied to y' term by term, so apply_l(y) == apply_m(derivative(y))
// bit-for-bit (the truncation-level form of L = MS); and the expression maps
// onto itself under the reflection J up to exact sign flips, which makes
// J L* J y == L y bit-for-bit as well.
TrigPoly sin_deriv_recurrence(const TrigPoly& y, double eps, double diag_sign) {
  const int d = y.degree();
  TrigPoly out(d + 1);
  auto dcoef = [&](int j) {
    return Complex(0.0, static_cast<double>(j)) * y.coeff(j);
  };
  for (int k = -d - 1; k <= d + 1; ++k) {
    const double w = detail::coupling(eps, k);
    const Complex neighbors = w * dcoef(k - 1) - w * dcoef(k + 1);
    out.set_coeff(k, diag_sign * dcoef(k) + neighbors);
  }
  return out;
}

}  // namespace

TrigPoly apply_l(const TrigPoly& y, double eps, EpsilonPolicy policy) {
  detail::require_epsilon(eps, policy);
  return sin_deriv_recurrence(y, eps, 1.0);
}

TrigPoly apply_l_star(const TrigPoly& y, double eps, EpsilonPolicy policy) {
  detail::require_epsilon(eps, policy);
  return sin_deriv_recurrence(y, eps, -1.0);
}

TrigPoly apply_m(const TrigPoly& y, double eps, EpsilonPolicy policy) {
  detail::require_epsilon(eps, policy);
  const int d = y.degree();
  TrigPoly out(d + 1);
  // (My)_k = c_k + w_k (c_{k-1} - c_{k+1}), the row form of the M matrix;
  // term order matches sin_deriv_recurrence so L = MS holds bit-for-bit.
  for (int k = -d - 1; k <= d + 1; ++k) {
    const double w = detail::coupling(eps, k);
    const Complex neighbors = w * y.coeff(k - 1) - w * y.coeff(k + 1);
    out.set_coeff(k, y.coeff(k) + neighbors);
  }
  return out;
}

double l2_norm(const TrigPoly& y) {
  return std::sqrt(kTwoPi) * y.coeffs().norm();
}

Complex inner_product(const TrigPoly& f, const TrigPoly& g) {
  const int d = std::max(f.degree(), g.degree());
  Complex acc = 0.0;
  for (int n = -d; n <= d; ++n) acc += f.coeff(n) * std::conj(g.coeff(n));
  return kTwoPi * acc;
}

double max_abs_coeff(const TrigPoly& y) {
  return y.coeffs().cwiseAbs().maxCoeff();
}

double coeff_distance(const TrigPoly& a, const TrigPoly& b) {
  const int d = std::max(a.degree(), b.degree());
  double r = 0.0;
  for (int n = -d; n <= d; ++n)
    r = std::max(r, std::abs(a.coeff(n) - b.coeff(n)));
  return r;
}

double check_jlj(const TrigPoly& y, double eps) {
  const TrigPoly lhs = apply_j(apply_l_star(apply_j(y), eps));
  const TrigPoly rhs = apply_l(y, eps);
  return coeff_distance(lhs, rhs);
}

double norm_g(const TrigPoly& y, double eps) {
  const double a = l2_norm(y);
  const double b = l2_norm(apply_l(y, eps));
  return std::sqrt(a * a + b * b);
}

double norm_m(const TrigPoly& y) {
  const TrigPoly dy = derivative(y);
  const TrigPoly sdy = sin_times(dy);
  const double a = l2_norm(dy);
  const double b = l2_norm(sdy);
  const double c = l2_norm(derivative(sdy));
  return std::sqrt(a * a + b * b + c * c);
}

namespace {

// integral of e^{inx} over (0, pi) and (-pi, 0), exact.
Complex half_integral(int n, bool positive_half) {
  if (n == 0) return kPi;
  const double sign_pow = (n % 2 == 0) ? 1.0 : -1.0;
  const Complex in(0.0, static_cast<double>(n));
  return positive_half ? (sign_pow - 1.0) / in : (1.0 - sign_pow) / in;
}

}  // namespace

std::pair<double, double> theta_constraint_residuals(const TrigPoly& y) {
  const TrigPoly theta = derivative(sin_times(y));
  Complex pos = 0.0, neg = 0.0;
  for (int n = -theta.degree(); n <= theta.degree(); ++n) {
    pos += theta.coeff(n) * half_integral(n, true);
    neg += theta.coeff(n) * half_integral(n, false);
  }
  return {std::abs(pos), std::abs(neg)};
}

double m_mean_invariance_residual(const TrigPoly& y, double eps) {
  return std::abs(apply_m(y, eps).mean_integral() - y.mean_integral());
}

TrigPoly random_trig_poly(std::mt19937_64& rng, int degree, bool real_valued,
                          bool zero_mean) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  TrigPoly p(degree);
  auto disk = [&]() {
    const double r = std::sqrt(unit(rng));
    const double phi = kTwoPi * unit(rng);
    return std::polar(r, phi);
  };
  for (int n = 1; n <= degree; ++n) {
    p.set_coeff(n, disk());
    p.set_coeff(-n, real_valued ? std::conj(p.coeff(n)) : disk());
  }
  if (!zero_mean) p.set_coeff(0, real_valued ? Complex(sym(rng)) : disk());
  return p;
}

}  // namespace bfheat
