// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef BFHEAT_TRIDIAGONAL_HPP
#define BFHEAT_TRIDIAGONAL_HPP

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <string>

#include "bfheat/errors.hpp"

namespace bfheat {

enum class BandLabel { A, B, C, J, M, Galerkin, Other };

inline const char* to_string(BandLabel label) {
  switch (label) {
    case BandLabel::A: return "A";
    case BandLabel::B: return "B";
    case BandLabel::C: return "C";
    case BandLabel::J: return "J";
    case BandLabel::M: return "M";
    case BandLabel::Galerkin: return "Galerkin";
    default: return "Other";
  }
}

/// Whether builders reject epsilon outside the open interval (0, 2).
/// allow_any exists for boundary experiments (e.g. the epsilon = 0 limit).
enum class EpsilonPolicy { enforce_range, allow_any };

namespace detail {

template <class Scalar>
inline void require_epsilon(const Scalar& eps, EpsilonPolicy policy) {
  if (policy == EpsilonPolicy::allow_any) return;
  if (!(Scalar(0) < eps && eps < Scalar(2)))
    throw InvalidEpsilon("epsilon must lie in the open interval (0, 2)");
}

// Shared band coupling. All sin-derivative couplings are formed as
// (eps/2) * integer so that the same value is produced bit-for-bit wherever
// the same physical entry appears (matrix bands, coefficient recurrences,
// Galerkin blocks). eps/2 itself is exact in binary floating point.
template <class Scalar>
inline Scalar coupling(const Scalar& eps, long long k) {
  return (eps / Scalar(2)) * Scalar(k);
}

}  // namespace detail

// Banded storage for order-N tridiagonal truncations: diag holds the N
// diagonal entries, super the N-1 entries (k, k+1), sub the N-1 entries
// (k+1, k). Mathematical indices are 1-based; storage is 0-based.
template <class Scalar>
struct Tridiagonal {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Eigen::Index order = 0;
  Vector diag;
  Vector super;
  Vector sub;
  BandLabel label = BandLabel::Other;
  Scalar epsilon = Scalar(0);

  bool consistent() const {
    return order >= 1 && diag.size() == order && super.size() == order - 1 &&
           sub.size() == order - 1;
  }

  Dense to_dense() const {
    Dense m = Dense::Zero(order, order);
    for (Eigen::Index k = 0; k < order; ++k) m(k, k) = diag(k);
    for (Eigen::Index k = 0; k + 1 < order; ++k) {
      m(k, k + 1) = super(k);
      m(k + 1, k) = sub(k);
    }
    return m;
  }

  Vector apply(const Vector& x) const {
    if (x.size() != order) throw DimensionMismatch("Tridiagonal::apply: size");
    Vector y(order);
    for (Eigen::Index k = 0; k < order; ++k) {
      Scalar acc = diag(k) * x(k);
      if (k > 0) acc += sub(k - 1) * x(k - 1);
      if (k + 1 < order) acc += super(k) * x(k + 1);
      y(k) = acc;
    }
    return y;
  }

  Tridiagonal transposed() const {
    Tridiagonal t = *this;
    t.super = sub;
    t.sub = super;
    return t;
  }
};

using TridiagonalD = Tridiagonal<double>;

namespace detail {

template <class Scalar>
inline void require_order(Eigen::Index n) {
  if (n < 1) throw InvalidOrder("order must be >= 1");
}

}  // namespace detail

// A_{n,n} = n, A_{n,n+1} = eps*n(n+1)/2, A_{n+1,n} = -eps*n(n+1)/2.
template <class Scalar>
Tridiagonal<Scalar> build_a(Eigen::Index n, const Scalar& eps,
                            EpsilonPolicy policy = EpsilonPolicy::enforce_range) {
  detail::require_order<Scalar>(n);
  detail::require_epsilon(eps, policy);
  Tridiagonal<Scalar> t;
  t.order = n;
  t.label = BandLabel::A;
  t.epsilon = eps;
  t.diag.resize(n);
  t.super.resize(n - 1);
  t.sub.resize(n - 1);
  for (Eigen::Index k = 1; k <= n; ++k) t.diag(k - 1) = Scalar(k);
  for (Eigen::Index k = 1; k < n; ++k) {
    const Scalar v = detail::coupling(eps, k + 1) * Scalar(k);  // eps*k(k+1)/2
    t.super(k - 1) = v;
    t.sub(k - 1) = -v;
  }
  return t;
}

// Unit diagonal, B_{n,n+1} = eps*n/2, B_{n+1,n} = -eps*(n+1)/2.
template <class Scalar>
Tridiagonal<Scalar> build_b(Eigen::Index n, const Scalar& eps,
                            EpsilonPolicy policy = EpsilonPolicy::enforce_range) {
  detail::require_order<Scalar>(n);
  detail::require_epsilon(eps, policy);
  Tridiagonal<Scalar> t;
  t.order = n;
  t.label = BandLabel::B;
  t.epsilon = eps;
  t.diag = Tridiagonal<Scalar>::Vector::Constant(n, Scalar(1));
  t.super.resize(n - 1);
  t.sub.resize(n - 1);
  for (Eigen::Index k = 1; k < n; ++k) {
    t.super(k - 1) = detail::coupling(eps, k);
    t.sub(k - 1) = -detail::coupling(eps, k + 1);
  }
  return t;
}

// C = diag(1, 2, ..., N).
template <class Scalar>
Tridiagonal<Scalar> build_c(Eigen::Index n) {
  detail::require_order<Scalar>(n);
  Tridiagonal<Scalar> t;
  t.order = n;
  t.label = BandLabel::C;
  t.diag.resize(n);
  for (Eigen::Index k = 1; k <= n; ++k) t.diag(k - 1) = Scalar(k);
  t.super = Tridiagonal<Scalar>::Vector::Zero(n - 1);
  t.sub = Tridiagonal<Scalar>::Vector::Zero(n - 1);
  return t;
}

// J = diag(-1, +1, -1, ...), the indefinite metric on positive modes.
template <class Scalar>
Tridiagonal<Scalar> build_j(Eigen::Index n) {
  detail::require_order<Scalar>(n);
  Tridiagonal<Scalar> t;
  t.order = n;
  t.label = BandLabel::J;
  t.diag.resize(n);
  for (Eigen::Index k = 0; k < n; ++k)
    t.diag(k) = (k % 2 == 0) ? Scalar(-1) : Scalar(1);
  t.super = Tridiagonal<Scalar>::Vector::Zero(n - 1);
  t.sub = Tridiagonal<Scalar>::Vector::Zero(n - 1);
  return t;
}

// Matrix of (My)(x) = eps*(sin(x) y)' + y on the exponential basis over
// modes -n_max..n_max (order 2*n_max+1, row/column index = mode + n_max).
// Row mode r receives eps*r/2 from mode r-1 and -eps*r/2 from mode r+1.
template <class Scalar>
Tridiagonal<Scalar> build_m_matrix(Eigen::Index n_max, const Scalar& eps,
                                   EpsilonPolicy policy = EpsilonPolicy::enforce_range) {
  if (n_max < 0) throw InvalidOrder("mode cutoff must be >= 0");
  detail::require_epsilon(eps, policy);
  const Eigen::Index n = 2 * n_max + 1;
  Tridiagonal<Scalar> t;
  t.order = n;
  t.label = BandLabel::M;
  t.epsilon = eps;
  t.diag = Tridiagonal<Scalar>::Vector::Constant(n, Scalar(1));
  t.super.resize(n - 1);
  t.sub.resize(n - 1);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    t.super(i) = -detail::coupling(eps, i - n_max);      // into row mode i-n_max
    t.sub(i) = detail::coupling(eps, i + 1 - n_max);     // into row mode i+1-n_max
  }
  return t;
}

// Max-abs entrywise residual of A - B*C. C diagonal keeps the banded product
// banded, so truncations introduce no boundary error and the residual is an
// exact zero in exact arithmetic.
template <class Scalar>
Scalar check_factorization(const Tridiagonal<Scalar>& a, const Tridiagonal<Scalar>& b,
                           const Tridiagonal<Scalar>& c) {
  using std::abs;
  if (!(a.consistent() && b.consistent() && c.consistent()))
    throw DimensionMismatch("check_factorization: inconsistent bands");
  if (a.order != b.order || a.order != c.order)
    throw DimensionMismatch("check_factorization: order mismatch");
  Scalar r = abs(b.diag(0) * c.diag(0) - a.diag(0));
  for (Eigen::Index k = 1; k < a.order; ++k) {
    const Scalar d = abs(b.diag(k) * c.diag(k) - a.diag(k));
    if (r < d) r = d;
    const Scalar s = abs(b.super(k - 1) * c.diag(k) - a.super(k - 1));
    if (r < s) r = s;
    const Scalar t = abs(b.sub(k - 1) * c.diag(k - 1) - a.sub(k - 1));
    if (r < t) r = t;
  }
  return r;
}

template <class Scalar>
Scalar check_factorization(Eigen::Index n, const Scalar& eps,
                           EpsilonPolicy policy = EpsilonPolicy::enforce_range) {
  return check_factorization(build_a(n, eps, policy), build_b(n, eps, policy),
                             build_c<Scalar>(n));
}

// Max-abs entrywise residual of J A^T J - A with J = diag(-1,1,-1,...).
// Conjugating the transpose by J flips the sign of both off-diagonal bands,
// so the residual reduces to |sub + super| per band position.
template <class Scalar>
Scalar check_j_selfadjoint(const Tridiagonal<Scalar>& a) {
  using std::abs;
  if (!a.consistent()) throw DimensionMismatch("check_j_selfadjoint: bands");
  Scalar r = Scalar(0);
  for (Eigen::Index k = 0; k + 1 < a.order; ++k) {
    const Scalar d = abs(a.sub(k) + a.super(k));
    if (r < d) r = d;
  }
  return r;
}

template <class Scalar>
Scalar check_j_selfadjoint(Eigen::Index n, const Scalar& eps,
                           EpsilonPolicy policy = EpsilonPolicy::enforce_range) {
  return check_j_selfadjoint(build_a(n, eps, policy));
}

// Domain norm of the sequence space behind the Fourier matrix:
//   || {f_n} ||^2 = sum_{n=1..N} n^2 ( |f_n|^2 + |(n+1) f_{n+1} - (n-1) f_{n-1}|^2 )
// with f_0 = 0 by convention and entries beyond the stored range treated as
// zero. f(k) stores f_{k+1}.
inline double sequence_norm(const Eigen::VectorXcd& f) {
  const Eigen::Index n_max = f.size();
  auto at = [&](Eigen::Index n) -> std::complex<double> {
    return (n >= 1 && n <= n_max) ? f(n - 1) : std::complex<double>(0.0);
  };
  double sum = 0.0;
  for (Eigen::Index n = 1; n <= n_max; ++n) {
    const std::complex<double> diff =
        static_cast<double>(n + 1) * at(n + 1) - static_cast<double>(n - 1) * at(n - 1);
    sum += static_cast<double>(n) * static_cast<double>(n) *
           (std::norm(at(n)) + std::norm(diff));
  }
  return std::sqrt(sum);
}

}  // namespace bfheat

#endif  // BFHEAT_TRIDIAGONAL_HPP
