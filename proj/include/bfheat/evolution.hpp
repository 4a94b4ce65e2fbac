// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef BFHEAT_EVOLUTION_HPP
#define BFHEAT_EVOLUTION_HPP

#include <Eigen/Core>

#include <vector>

#include "bfheat/trig_poly.hpp"

namespace bfheat {

// Galerkin truncation of L on span{e^{inx} : |n| <= N}. Columns are the
// apply_l coefficient recurrence, truncated to the mode window, so the
// sector structure is inherited exactly: the zero mode decouples and the
// positive/negative blocks are +-i times the transposed Fourier matrix.
struct GalerkinMatrix {
  Eigen::Index n_max = 0;
  Eigen::MatrixXcd entries;  // row/col index = mode + n_max

  Eigen::Index index(Eigen::Index mode) const { return mode + n_max; }

  /// Block on modes 1..N.
  Eigen::MatrixXcd positive_block() const {
    return entries.block(n_max + 1, n_max + 1, n_max, n_max);
  }
  /// Block on modes -1..-N, reflected so entry (j, k) sits at modes (-j, -k).
  Eigen::MatrixXcd negative_block_reflected() const {
    return entries.block(0, 0, n_max, n_max).reverse();
  }
};

GalerkinMatrix galerkin_matrix(Eigen::Index n_max, double eps,
                               EpsilonPolicy policy = EpsilonPolicy::enforce_range);

enum class ExpMethod { eigen_decomposition, scaling_squaring };

struct PropagatorInfo {
  bool fallback_used = false;
  double eigenvector_condition = 0.0;
};

/// exp(A) by degree-6 diagonal Pade with scaling and squaring.
Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& a);

/// exp(-t L_N) on the full mode window. The zero mode is passed through
/// identically (it is an exact fixed point of the flow); the complement is
/// exponentiated by the requested method. eigen_decomposition falls back to
/// scaling_squaring when the eigenvector matrix condition number exceeds
/// cond_threshold; info reports the decision.
Eigen::MatrixXcd propagator(double t, Eigen::Index n_max, double eps,
                            ExpMethod method = ExpMethod::eigen_decomposition,
                            PropagatorInfo* info = nullptr,
                            double cond_threshold = 1e8);

/// exp(-t L_N) y0.
TrigPoly propagate(const TrigPoly& y0, double t, Eigen::Index n_max, double eps,
                   ExpMethod method = ExpMethod::eigen_decomposition,
                   PropagatorInfo* info = nullptr, double cond_threshold = 1e8);

/// Largest singular value of the propagator restricted to the zero-mean
/// subspace; 1 at t = 0, can exceed 1 for t > 0 despite the imaginary
/// spectrum (non-normal transient growth). Truncation-dependent by nature.
double transient_growth(double t, Eigen::Index n_max, double eps,
                        ExpMethod method = ExpMethod::scaling_squaring);

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<TrigPoly> states;
  std::vector<double> norms;   // L^2 norm per time
  std::vector<double> growth;  // zero-mean propagator norm per time
};

/// Flow samples at the given times (must start at 0, strictly increasing).
EvolutionTrace evolve(const TrigPoly& y0, const std::vector<double>& times,
                      Eigen::Index n_max, double eps,
                      ExpMethod method = ExpMethod::eigen_decomposition);

}  // namespace bfheat

#endif  // BFHEAT_EVOLUTION_HPP
