// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef BFHEAT_TRIG_POLY_HPP
#define BFHEAT_TRIG_POLY_HPP

#include <Eigen/Core>

#include <complex>
#include <random>
#include <utility>

#include "bfheat/errors.hpp"
#include "bfheat/tridiagonal.hpp"

namespace bfheat {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Finite Fourier sum sum_{|n| <= N} c_n e^{inx} on (-pi, pi). Coefficients
// are stored two-sided, mode n at index n + degree. The class is the exact
// arithmetic core of every physical-space check: differentiation,
// multiplication by sin x and the reflection x -> pi - x all stay inside
// the class (degree grows by at most one).
class TrigPoly {
 public:
  using Complex = std::complex<double>;

  TrigPoly() : coeffs_(Eigen::VectorXcd::Zero(1)) {}
  explicit TrigPoly(int degree)
      : degree_(degree), coeffs_(Eigen::VectorXcd::Zero(2 * degree + 1)) {
    if (degree < 0) throw InvalidOrder("TrigPoly: negative degree");
  }
  TrigPoly(int degree, Eigen::VectorXcd coeffs)
      : degree_(degree), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != 2 * static_cast<Eigen::Index>(degree) + 1)
      throw DimensionMismatch("TrigPoly: coefficient count");
  }

  static TrigPoly constant(Complex value) {
    TrigPoly p(0);
    p.coeffs_(0) = value;
    return p;
  }
  /// e^{inx} scaled by amp.
  static TrigPoly harmonic(int n, Complex amp = 1.0) {
    TrigPoly p(std::abs(n));
    p.set_coeff(n, amp);
    return p;
  }
  static TrigPoly cosine(int n) {
    TrigPoly p(std::abs(n));
    p.set_coeff(n, 0.5);
    p.set_coeff(-n, 0.5);
    return p;
  }
  static TrigPoly sine(int n) {
    TrigPoly p(std::abs(n));
    p.set_coeff(n, Complex(0.0, -0.5));
    p.set_coeff(-n, Complex(0.0, 0.5));
    return p;
  }

  int degree() const { return degree_; }

  Complex coeff(int n) const {
    if (n < -degree_ || n > degree_) return 0.0;
    return coeffs_(n + degree_);
  }
  void set_coeff(int n, Complex value) {
    if (n < -degree_ || n > degree_)
      throw DimensionMismatch("TrigPoly::set_coeff: mode out of range");
    coeffs_(n + degree_) = value;
  }
  void add_to_coeff(int n, Complex value) {
    if (n < -degree_ || n > degree_)
      throw DimensionMismatch("TrigPoly::add_to_coeff: mode out of range");
    coeffs_(n + degree_) += value;
  }

  const Eigen::VectorXcd& coeffs() const { return coeffs_; }

  /// Integral over (-pi, pi); only the zero mode contributes.
  Complex mean_integral() const { return kTwoPi * coeff(0); }

  Complex eval(double x) const;

  bool is_real(double tol = 1e-12) const;

  /// Drops zero outer modes (within tol) so degrees stay comparable.
  TrigPoly trimmed(double tol = 0.0) const;

 private:
  int degree_ = 0;
  Eigen::VectorXcd coeffs_;
};

TrigPoly operator+(const TrigPoly& a, const TrigPoly& b);
TrigPoly operator-(const TrigPoly& a, const TrigPoly& b);
TrigPoly operator*(std::complex<double> s, const TrigPoly& p);

/// y'
TrigPoly derivative(const TrigPoly& y);

/// sin(x) * y
TrigPoly sin_times(const TrigPoly& y);

/// (Jy)(x) = y(pi - x); an involution, coefficientwise (-1)^m c_{-m}.
TrigPoly apply_j(const TrigPoly& y);

/// (Ly)(x) = eps*(sin(x) y')' + y'
TrigPoly apply_l(const TrigPoly& y, double eps,
                 EpsilonPolicy policy = EpsilonPolicy::enforce_range);

/// (L*y)(x) = eps*(sin(x) y')' - y'
TrigPoly apply_l_star(const TrigPoly& y, double eps,
                      EpsilonPolicy policy = EpsilonPolicy::enforce_range);

/// (My)(x) = eps*(sin(x) y)' + y
TrigPoly apply_m(const TrigPoly& y, double eps,
                 EpsilonPolicy policy = EpsilonPolicy::enforce_range);

/// L^2 norm with the unnormalized inner product on (-pi, pi):
/// ||e^{inx}||^2 = 2*pi.
double l2_norm(const TrigPoly& y);

/// <f, g> = integral of f * conj(g) over (-pi, pi).
std::complex<double> inner_product(const TrigPoly& f, const TrigPoly& g);

double max_abs_coeff(const TrigPoly& y);
double coeff_distance(const TrigPoly& a, const TrigPoly& b);

/// Max-abs coefficient residual of (J L* J)(y) - L(y); vanishes identically.
double check_jlj(const TrigPoly& y, double eps);

/// Graph norm {||y||^2 + ||Ly||^2}^{1/2}.
double norm_g(const TrigPoly& y, double eps);

/// {||y'||^2 + ||sin(x) y'||^2 + ||(sin(x) y')'||^2}^{1/2}.
double norm_m(const TrigPoly& y);

/// Magnitudes of the two half-period integrals of theta = (sin(x) y)',
/// over (0, pi) and (-pi, 0); both vanish since sin(x) y vanishes at the
/// interval ends and at zero.
std::pair<double, double> theta_constraint_residuals(const TrigPoly& y);

/// |integral of My - integral of y| over the period.
double m_mean_invariance_residual(const TrigPoly& y, double eps);

/// Coefficients uniform on the complex unit disk for 1 <= |n| <= degree;
/// conjugate-symmetrized when real_valued, zero mode zeroed when zero_mean
/// (otherwise a real uniform draw from [-1, 1]).
TrigPoly random_trig_poly(std::mt19937_64& rng, int degree, bool real_valued,
                          bool zero_mean);

}  // namespace bfheat

#endif  // BFHEAT_TRIG_POLY_HPP
