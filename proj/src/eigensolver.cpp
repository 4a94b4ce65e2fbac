// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0

#include "bfheat/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bfheat/errors.hpp"

namespace bfheat {

namespace {

template <class Real>
using CplxMat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using CplxVec = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <class Real>
Real abs1(const std::complex<Real>& z) {
  return std::abs(z.real()) + std::abs(z.imag());
}

// Unitary plane rotation [[c, s], [-conj(s), c]] with real c mapping
// (x, z) -> (r, 0).
template <class Real>
struct Givens {
  Real c;
  std::complex<Real> s;
};

template <class Real>
Givens<Real> make_givens(const std::complex<Real>& x, const std::complex<Real>& z) {
  using C = std::complex<Real>;
  const Real az = std::abs(z);
  if (az == Real(0)) return {Real(1), C(0)};
  const Real ax = std::abs(x);
  if (ax == Real(0)) return {Real(0), std::conj(z) / az};
  const Real nrm = std::hypot(ax, az);
  const C phase = x / ax;
  return {ax / nrm, phase * std::conj(z) / nrm};
}

// Eigenvalues of [[a, b], [c, d]], larger-offset root by the stable branch,
// companion root through the product.
template <class Real>
void eig2x2(const std::complex<Real>& a, const std::complex<Real>& b,
            const std::complex<Real>& c, const std::complex<Real>& d,
            std::complex<Real>& l1, std::complex<Real>& l2) {
  using C = std::complex<Real>;
  const C p = (a - d) / Real(2);
  const C s = std::sqrt(p * p + b * c);
  const C big = (abs1(p + s) >= abs1(p - s)) ? p + s : p - s;
  if (abs1(big) == Real(0)) {
    l1 = d;
    l2 = d;
    return;
  }
  l1 = d + big;
  l2 = d - b * c / big;  // since (p+s)(p-s) = p^2 - s^2 = -b c
}

// Shifted QR with deflation on a dense complex upper-Hessenberg matrix.
// Single Wilkinson shift (trailing 2x2 eigenvalue nearest the corner);
// occasional exceptional shifts break limit cycles. Only the active window
// is transformed, so entries above a deflated split are left stale; they
// never affect the remaining eigenvalues.
template <class Real>
CplxVec<Real> qr_eigenvalues(CplxMat<Real>& h, Real defl_tol, long max_sweeps,
                             long& sweeps) {
  using C = std::complex<Real>;
  const Eigen::Index n = h.rows();
  CplxVec<Real> eig(n);
  sweeps = 0;

  Real frame = Real(0);  // fallback deflation scale
  for (Eigen::Index i = 0; i < n; ++i) frame += abs1(h(i, i));
  if (frame == Real(0)) frame = Real(1);

  Eigen::Index hi = n - 1;
  int stall = 0;
  while (hi >= 0) {
    // Scan for the active unreduced block [lo, hi].
    Eigen::Index lo = hi;
    while (lo > 0) {
      Real scale = abs1(h(lo - 1, lo - 1)) + abs1(h(lo, lo));
      if (scale == Real(0)) scale = frame;
      if (abs1(h(lo, lo - 1)) <= defl_tol * scale) {
        h(lo, lo - 1) = C(0);
        break;
      }
      --lo;
    }

    if (lo == hi) {
      eig(hi) = h(hi, hi);
      --hi;
      stall = 0;
      continue;
    }
    if (lo == hi - 1) {
      eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi),
             eig(hi - 1), eig(hi));
      hi -= 2;
      stall = 0;
      continue;
    }

    if (sweeps >= max_sweeps)
      throw NoConvergence("qr: sweep budget exhausted",
                          static_cast<int>(n - 1 - hi), static_cast<int>(hi + 1));

    C sigma;
    if (stall > 0 && stall % 12 == 0) {
      // Exceptional real shift from the nearby subdiagonal magnitudes.
      sigma = h(hi, hi) + C(Real(0.75) * std::abs(h(hi, hi - 1)) +
                            Real(0.25) * std::abs(h(hi - 1, hi - 2)));
    } else {
      C l1, l2;
      eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi), l1, l2);
      sigma = (abs1(l1 - h(hi, hi)) < abs1(l2 - h(hi, hi))) ? l1 : l2;
    }

    // One implicit single-shift sweep over the window: chase the bulge from
    // the top-left corner down the subdiagonal.
    C x = h(lo, lo) - sigma;
    C z = h(lo + 1, lo);
    for (Eigen::Index k = lo; k < hi; ++k) {
      const Givens<Real> g = make_givens(x, z);
      const C s = g.s;
      const Real c = g.c;

      const Eigen::Index c0 = std::max(lo, k - 1);
      for (Eigen::Index j = c0; j <= hi; ++j) {
        const C t0 = h(k, j), t1 = h(k + 1, j);
        h(k, j) = c * t0 + s * t1;
        h(k + 1, j) = -std::conj(s) * t0 + c * t1;
      }
      const Eigen::Index r1 = std::min(hi, k + 2);
      for (Eigen::Index i = lo; i <= r1; ++i) {
        const C t0 = h(i, k), t1 = h(i, k + 1);
        h(i, k) = c * t0 + std::conj(s) * t1;
        h(i, k + 1) = -s * t0 + c * t1;
      }

      if (k + 1 < hi) {
        x = h(k + 1, k);
        z = h(k + 2, k);
      }
    }
    ++sweeps;
    ++stall;
  }
  return eig;
}

template <class Real, class Scalar>
CplxMat<Real> hessenberg_from_tridiagonal(const Tridiagonal<Scalar>& t) {
  CplxMat<Real> h = CplxMat<Real>::Zero(t.order, t.order);
  for (Eigen::Index k = 0; k < t.order; ++k)
    h(k, k) = std::complex<Real>(t.diag(k));
  for (Eigen::Index k = 0; k + 1 < t.order; ++k) {
    h(k, k + 1) = std::complex<Real>(t.super(k));
    h(k + 1, k) = std::complex<Real>(t.sub(k));
  }
  return h;
}

template <class Real>
CplxMat<Real> widen(const Eigen::MatrixXcd& m) {
  CplxMat<Real> h(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      h(i, j) = std::complex<Real>(Real(m(i, j).real()), Real(m(i, j).imag()));
  return h;
}

Eigen::VectorXcd narrow(const CplxVec<long double>& v) {
  Eigen::VectorXcd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out(i) = std::complex<double>(static_cast<double>(v(i).real()),
                                  static_cast<double>(v(i).imag()));
  return out;
}

void sort_by_modulus(Eigen::VectorXcd& v) {
  std::sort(v.begin(), v.end(), [](std::complex<double> a, std::complex<double> b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma < mb;
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

template <class Real>
Eigen::VectorXcd run_qr(CplxMat<Real> h, const SpectrumOptions& opts, long& sweeps) {
  const Real tol = opts.deflation_tol > 0
                       ? Real(opts.deflation_tol)
                       : std::numeric_limits<Real>::epsilon();
  const long budget =
      opts.max_sweeps > 0 ? opts.max_sweeps : 30 * static_cast<long>(h.rows()) + 200;
  CplxVec<Real> eig = qr_eigenvalues<Real>(h, tol, budget, sweeps);
  if constexpr (std::is_same_v<Real, long double>) {
    return narrow(eig);
  } else {
    return eig;
  }
}

// Inverse-iteration residual check: one eigenvector per eigenvalue from a
// couple of shifted tridiagonal solves.
template <class Scalar>
double eigenvector_residuals(const Tridiagonal<Scalar>& t,
                             const Eigen::VectorXcd& lambda) {
  using C = std::complex<double>;
  const Eigen::Index n = t.order;
  Tridiagonal<C> shifted;
  shifted.order = n;
  shifted.label = t.label;
  shifted.diag.resize(n);
  shifted.super.resize(n - 1);
  shifted.sub.resize(n - 1);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    shifted.super(k) = C(t.super(k));
    shifted.sub(k) = C(t.sub(k));
  }
  Tridiagonal<C> base = shifted;
  for (Eigen::Index k = 0; k < n; ++k) base.diag(k) = C(t.diag(k));

  double scale = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) scale = std::max(scale, std::abs(base.diag(k)));
  for (Eigen::Index k = 0; k + 1 < n; ++k)
    scale = std::max({scale, std::abs(base.super(k)), std::abs(base.sub(k))});

  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    // Tiny shift perturbation keeps the factorization regular when lambda
    // is numerically exact.
    const C mu = lambda(j) + C(scale * 1e-14, 0.0);
    for (Eigen::Index k = 0; k < n; ++k) shifted.diag(k) = base.diag(k) - mu;
    TridiagonalLu<C> lu(shifted);
    if (lu.singular()) continue;
    Eigen::VectorXcd v(n);
    for (Eigen::Index k = 0; k < n; ++k) v(k) = C(u(rng), u(rng));
    v.normalize();
    for (int it = 0; it < 3; ++it) {
      v = lu.solve(v);
      v.normalize();
    }
    const Eigen::VectorXcd av = base.apply(v);
    worst = std::max(worst, (av - lambda(j) * v).norm());
  }
  return worst;
}

template <class Scalar>
SpectrumResult eigenvalues_impl(const Tridiagonal<Scalar>& t,
                                const SpectrumOptions& opts, double eps_meta) {
  if (!t.consistent()) throw DimensionMismatch("eigenvalues: inconsistent bands");
  SpectrumResult res;
  res.order = t.order;
  res.epsilon = eps_meta;
  Eigen::VectorXcd eig;
  if (opts.use_long_double) {
    eig = run_qr<long double>(hessenberg_from_tridiagonal<long double>(t), opts,
                              res.sweeps);
  } else {
    eig = run_qr<double>(hessenberg_from_tridiagonal<double>(t), opts, res.sweeps);
  }
  sort_by_modulus(eig);
  res.eigenvalues = eig;
  if (opts.compute_eigenvectors)
    res.max_residual = eigenvector_residuals(t, res.eigenvalues);
  return res;
}

}  // namespace

SpectrumResult eigenvalues(const Tridiagonal<double>& t, const SpectrumOptions& opts) {
  return eigenvalues_impl(t, opts, t.epsilon);
}

SpectrumResult eigenvalues(const Tridiagonal<std::complex<double>>& t,
                           const SpectrumOptions& opts) {
  return eigenvalues_impl(t, opts, t.epsilon.real());
}

Eigen::VectorXcd hessenberg_eigenvalues(Eigen::MatrixXcd h, const SpectrumOptions& opts) {
  long sweeps = 0;
  Eigen::VectorXcd eig;
  if (opts.use_long_double) {
    eig = run_qr<long double>(widen<long double>(h), opts, sweeps);
  } else {
    CplxMat<double> hd = h;
    eig = run_qr<double>(std::move(hd), opts, sweeps);
  }
  sort_by_modulus(eig);
  return eig;
}

// ---------------------------------------------------------------------------
// Tridiagonal LU (partial pivoting, one superdiagonal of fill).

template <class Scalar>
TridiagonalLu<Scalar>::TridiagonalLu(const Tridiagonal<Scalar>& t) : n_(t.order) {
  if (!t.consistent()) throw DimensionMismatch("TridiagonalLu: inconsistent bands");
  d_ = t.diag;
  du_.resize(std::max<Eigen::Index>(n_ - 1, 0));
  dl_.resize(std::max<Eigen::Index>(n_ - 1, 0));
  if (n_ > 1) {
    du_ = t.super;
    dl_ = t.sub;
  }
  du2_ = Vector::Zero(std::max<Eigen::Index>(n_ - 2, 0));
  swapped_.assign(static_cast<size_t>(std::max<Eigen::Index>(n_ - 1, 0)), false);

  for (Eigen::Index i = 0; i + 1 < n_; ++i) {
    if (std::abs(d_(i)) >= std::abs(dl_(i))) {
      if (std::abs(d_(i)) != 0.0) {
        const Scalar fact = dl_(i) / d_(i);
        dl_(i) = fact;
        d_(i + 1) -= fact * du_(i);
      }
    } else {
      const Scalar fact = d_(i) / dl_(i);
      d_(i) = dl_(i);
      dl_(i) = fact;
      const Scalar tmp = du_(i);
      du_(i) = d_(i + 1);
      d_(i + 1) = tmp - fact * d_(i + 1);
      if (i + 2 < n_) {
        du2_(i) = du_(i + 1);
        du_(i + 1) = -fact * du_(i + 1);
      }
      swapped_[static_cast<size_t>(i)] = true;
    }
  }

  min_pivot_ = std::numeric_limits<double>::infinity();
  max_pivot_ = 0.0;
  for (Eigen::Index i = 0; i < n_; ++i) {
    min_pivot_ = std::min(min_pivot_, static_cast<double>(std::abs(d_(i))));
    max_pivot_ = std::max(max_pivot_, static_cast<double>(std::abs(d_(i))));
  }
}

template <class Scalar>
typename TridiagonalLu<Scalar>::Vector TridiagonalLu<Scalar>::solve(Vector b) const {
  if (b.size() != n_) throw DimensionMismatch("TridiagonalLu::solve: size");
  if (singular()) throw SingularMatrix("TridiagonalLu::solve: zero pivot");
  for (Eigen::Index i = 0; i + 1 < n_; ++i) {
    if (!swapped_[static_cast<size_t>(i)]) {
      b(i + 1) -= dl_(i) * b(i);
    } else {
      const Scalar tmp = b(i);
      b(i) = b(i + 1);
      b(i + 1) = tmp - dl_(i) * b(i);
    }
  }
  b(n_ - 1) /= d_(n_ - 1);
  if (n_ > 1) b(n_ - 2) = (b(n_ - 2) - du_(n_ - 2) * b(n_ - 1)) / d_(n_ - 2);
  for (Eigen::Index i = n_ - 3; i >= 0; --i)
    b(i) = (b(i) - du_(i) * b(i + 1) - du2_(i) * b(i + 2)) / d_(i);
  return b;
}

template class TridiagonalLu<double>;
template class TridiagonalLu<std::complex<double>>;

// ---------------------------------------------------------------------------

double smallest_singular_value(const Tridiagonal<double>& t, double rel_tol,
                               int max_iter) {
  if (!t.consistent()) throw DimensionMismatch("smallest_singular_value: bands");
  const TridiagonalLu<double> lu(t);
  const TridiagonalLu<double> lut(t.transposed());
  if (lu.singular())
    throw SingularMatrix("smallest_singular_value: singular truncation");

  std::mt19937_64 rng(0x51edULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(t.order);
  for (Eigen::Index i = 0; i < t.order; ++i) v(i) = u(rng);
  v.normalize();

  // Power iteration on (T^T T)^{-1}: nu converges to 1/sigma_min^2.
  double nu_prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd w = lu.solve(lut.solve(v));
    const double nu = w.norm();
    if (nu == 0.0) throw SingularMatrix("smallest_singular_value: breakdown");
    v = w / nu;
    if (std::abs(nu - nu_prev) <= rel_tol * nu) {
      nu_prev = nu;
      break;
    }
    nu_prev = nu;
  }
  const double sigma = 1.0 / std::sqrt(nu_prev);
  const double zero_gate = lu.max_pivot() * static_cast<double>(t.order) * 10.0 *
                           std::numeric_limits<double>::epsilon();
  if (sigma < zero_gate)
    throw SingularMatrix("smallest_singular_value: below machine-zero threshold");
  return sigma;
}

double hs_norm_inverse(const Tridiagonal<double>& t) {
  if (!t.consistent()) throw DimensionMismatch("hs_norm_inverse: bands");
  const bool diagonal =
      t.order == 1 || (t.super.cwiseAbs().maxCoeff() == 0.0 &&
                       t.sub.cwiseAbs().maxCoeff() == 0.0);
  if (diagonal) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < t.order; ++i) {
      const double d = t.diag(i);
      if (d == 0.0) throw SingularMatrix("hs_norm_inverse: zero diagonal");
      sum += 1.0 / (d * d);
    }
    return std::sqrt(sum);
  }
  const TridiagonalLu<double> lu(t);
  if (lu.singular()) throw SingularMatrix("hs_norm_inverse: singular truncation");
  double sum = 0.0;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(t.order);
  for (Eigen::Index j = 0; j < t.order; ++j) {
    e(j) = 1.0;
    sum += lu.solve(e).squaredNorm();
    e(j) = 0.0;
  }
  return std::sqrt(sum);
}

double estimate_p1(Eigen::Index n_max, double eps, EpsilonPolicy policy) {
  return smallest_singular_value(build_m_matrix(n_max, eps, policy));
}

ConvergenceTable convergence_study(double eps, const std::vector<Eigen::Index>& n_list,
                                   Eigen::Index k, double tol,
                                   const SpectrumOptions& opts) {
  if (n_list.empty()) throw InvalidOrder("convergence_study: empty N list");
  for (size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw InvalidOrder("convergence_study: N list must be strictly increasing");
  if (k > n_list.front())
    throw InvalidOrder("convergence_study: k exceeds smallest N");

  ConvergenceTable table;
  table.tol = tol;
  for (const Eigen::Index n : n_list) {
    const SpectrumResult res = eigenvalues(build_a(n, eps), opts);
    table.orders.push_back(n);
    table.values.push_back(res.eigenvalues.head(k));
    if (table.values.size() == 1) {
      table.diffs.emplace_back(Eigen::VectorXd::Zero(k));
      table.converged.emplace_back(static_cast<size_t>(k), false);
    } else {
      const Eigen::VectorXcd& prev = table.values[table.values.size() - 2];
      Eigen::VectorXd diff(k);
      std::vector<bool> conv(static_cast<size_t>(k));
      for (Eigen::Index i = 0; i < k; ++i) {
        diff(i) = std::abs(table.values.back()(i) - prev(i));
        conv[static_cast<size_t>(i)] = diff(i) <= tol;
      }
      table.diffs.push_back(diff);
      table.converged.push_back(conv);
    }
  }
  return table;
}

}  // namespace bfheat
