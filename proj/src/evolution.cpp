// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0

#include "bfheat/evolution.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

#include "bfheat/errors.hpp"

namespace bfheat {

GalerkinMatrix galerkin_matrix(Eigen::Index n_max, double eps, EpsilonPolicy policy) {
  if (n_max < 1) throw InvalidOrder("galerkin_matrix: mode cutoff must be >= 1");
  detail::require_epsilon(eps, policy);
  GalerkinMatrix g;
  g.n_max = n_max;
  const Eigen::Index dim = 2 * n_max + 1;
  g.entries = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index n = -n_max; n <= n_max; ++n) {
    const TrigPoly column = apply_l(TrigPoly::harmonic(static_cast<int>(n)), eps,
                                    EpsilonPolicy::allow_any);
    for (Eigen::Index m = -n_max; m <= n_max; ++m)
      g.entries(g.index(m), g.index(n)) = column.coeff(static_cast<int>(m));
  }
  return g;
}

Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw DimensionMismatch("matrix_exponential: square input");
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  if (norm == 0.0) return id;

  // Scale so ||A/2^s|| < 0.5, degree-6 diagonal Pade, then square back.
  int expo = 0;
  std::frexp(norm, &expo);
  const int s = std::max(0, expo + 1);
  const Eigen::MatrixXcd a_scaled = a / std::ldexp(1.0, s);

  constexpr int q = 6;
  Eigen::MatrixXcd x = a_scaled;
  double c = 0.5;
  Eigen::MatrixXcd num = id + c * a_scaled;
  Eigen::MatrixXcd den = id - c * a_scaled;
  bool plus = true;
  for (int k = 2; k <= q; ++k) {
    c *= static_cast<double>(q - k + 1) / static_cast<double>(k * (2 * q - k + 1));
    x = a_scaled * x;
    num += c * x;
    den += (plus ? c : -c) * x;
    plus = !plus;
  }
  Eigen::MatrixXcd e = den.partialPivLu().solve(num);
  for (int k = 0; k < s; ++k) e = e * e;
  return e;
}

namespace {

// exp(-t L_N) restricted to the nonzero modes (the zero mode is an exact
// fixed point and is handled outside).
Eigen::MatrixXcd restricted_exponential(double t, Eigen::Index n_max, double eps,
                                        ExpMethod method, PropagatorInfo* info,
                                        double cond_threshold,
                                        EpsilonPolicy policy) {
  const GalerkinMatrix g = galerkin_matrix(n_max, eps, policy);
  const Eigen::Index dim = 2 * n_max;
  Eigen::MatrixXcd m(dim, dim);
  // Drop the zero-mode row/column (index n_max).
  Eigen::VectorXi keep(dim);
  for (Eigen::Index i = 0, j = 0; i < 2 * n_max + 1; ++i)
    if (i != n_max) keep(j++) = static_cast<int>(i);
  m = g.entries(keep, keep);

  PropagatorInfo local;
  Eigen::MatrixXcd result;
  if (method == ExpMethod::eigen_decomposition) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m);
    bool ok = es.info() == Eigen::Success;
    if (ok) {
      const Eigen::MatrixXcd& v = es.eigenvectors();
      const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(v);
      const Eigen::MatrixXcd v_inv = lu.inverse();
      local.eigenvector_condition = v.cwiseAbs().rowwise().sum().maxCoeff() *
                                    v_inv.cwiseAbs().rowwise().sum().maxCoeff();
      ok = std::isfinite(local.eigenvector_condition) &&
           local.eigenvector_condition <= cond_threshold;
      if (ok) {
        const Eigen::VectorXcd phase =
            ((-t) * es.eigenvalues().array()).exp().matrix();
        result = v * phase.asDiagonal() * v_inv;
      }
    }
    if (!ok) {
      local.fallback_used = true;
      result = matrix_exponential((-t) * m);
    }
  } else {
    result = matrix_exponential((-t) * m);
  }
  if (info) *info = local;
  return result;
}

}  // namespace

Eigen::MatrixXcd propagator(double t, Eigen::Index n_max, double eps, ExpMethod method,
                            PropagatorInfo* info, double cond_threshold) {
  if (t < 0.0) throw InvalidOrder("propagator: time must be nonnegative");
  const Eigen::MatrixXcd e = restricted_exponential(t, n_max, eps, method, info,
                                                    cond_threshold,
                                                    EpsilonPolicy::enforce_range);
  const Eigen::Index dim = 2 * n_max + 1;
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
  p(n_max, n_max) = 1.0;
  Eigen::VectorXi keep(2 * n_max);
  for (Eigen::Index i = 0, j = 0; i < dim; ++i)
    if (i != n_max) keep(j++) = static_cast<int>(i);
  p(keep, keep) = e;
  return p;
}

TrigPoly propagate(const TrigPoly& y0, double t, Eigen::Index n_max, double eps,
                   ExpMethod method, PropagatorInfo* info, double cond_threshold) {
  if (y0.degree() > n_max)
    throw DimensionMismatch("propagate: initial state exceeds the mode window");
  const Eigen::MatrixXcd p = propagator(t, n_max, eps, method, info, cond_threshold);
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * n_max + 1);
  for (int n = -y0.degree(); n <= y0.degree(); ++n) c(n + n_max) = y0.coeff(n);
  return TrigPoly(static_cast<int>(n_max), p * c);
}

double transient_growth(double t, Eigen::Index n_max, double eps, ExpMethod method) {
  if (t < 0.0) throw InvalidOrder("transient_growth: time must be nonnegative");
  PropagatorInfo info;
  const Eigen::MatrixXcd e = restricted_exponential(
      t, n_max, eps, method, &info, 1e8, EpsilonPolicy::enforce_range);
  // The truncated generator acquires complex eigenvalues whose imaginary
  // part grows with the cutoff, so the propagator norm can pass the range
  // of double at fixed t; report that as infinite growth rather than NaN.
  if (!e.allFinite()) return std::numeric_limits<double>::infinity();
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(e).singularValues()(0);
}

EvolutionTrace evolve(const TrigPoly& y0, const std::vector<double>& times,
                      Eigen::Index n_max, double eps, ExpMethod method) {
  if (times.empty() || times.front() != 0.0)
    throw InvalidOrder("evolve: times must start at 0");
  for (size_t i = 1; i < times.size(); ++i)
    if (times[i] <= times[i - 1])
      throw InvalidOrder("evolve: times must be strictly increasing");

  EvolutionTrace trace;
  for (const double t : times) {
    trace.times.push_back(t);
    trace.states.push_back(propagate(y0, t, n_max, eps, method));
    trace.norms.push_back(l2_norm(trace.states.back()));
    trace.growth.push_back(transient_growth(t, n_max, eps,
                                            ExpMethod::scaling_squaring));
  }
  return trace;
}

}  // namespace bfheat
