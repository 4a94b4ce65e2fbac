// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef BFHEAT_EIGENSOLVER_HPP
#define BFHEAT_EIGENSOLVER_HPP

#include <Eigen/Core>

#include <complex>
#include <vector>

#include "bfheat/tridiagonal.hpp"

namespace bfheat {

struct SpectrumOptions {
  // Subdiagonal h(k+1,k) deflates when below deflation_tol * local diagonal
  // scale; negative selects the working-precision machine epsilon.
  double deflation_tol = -1.0;
  // Total sweep budget; negative selects 30 * order + 200.
  long max_sweeps = -1;
  bool compute_eigenvectors = false;
  // Iterate in 80-bit precision. The matrices here are non-normal with
  // entries growing like eps*N^2/2, so double-precision backward error can
  // push spurious imaginary parts above 1e-8 at N ~ 512.
  bool use_long_double = true;
};

struct SpectrumResult {
  Eigen::VectorXcd eigenvalues;  // sorted by modulus
  Eigen::Index order = 0;
  double epsilon = 0.0;
  long sweeps = 0;
  double max_residual = 0.0;     // only filled when eigenvectors requested
};

/// All eigenvalues of a real tridiagonal truncation by shifted QR on the
/// (already Hessenberg) form, single Wilkinson-style shifts, deflation on
/// negligible subdiagonals. Throws NoConvergence past the sweep budget.
SpectrumResult eigenvalues(const Tridiagonal<double>& t,
                           const SpectrumOptions& opts = {});

/// Same iteration for complex tridiagonal input (Galerkin matrices).
SpectrumResult eigenvalues(const Tridiagonal<std::complex<double>>& t,
                           const SpectrumOptions& opts = {});

/// Dense complex upper-Hessenberg input; used by the module itself and by
/// cross-checks that want the raw iteration.
Eigen::VectorXcd hessenberg_eigenvalues(Eigen::MatrixXcd h,
                                        const SpectrumOptions& opts = {});

// LU factorization of a tridiagonal matrix with partial pivoting (one extra
// superdiagonal of fill). Scalar is double or complex<double>.
template <class Scalar>
class TridiagonalLu {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit TridiagonalLu(const Tridiagonal<Scalar>& t);

  /// Smallest |U_kk|; zero means exactly singular at this truncation.
  double min_pivot() const { return min_pivot_; }
  double max_pivot() const { return max_pivot_; }
  bool singular() const { return min_pivot_ == 0.0; }

  Vector solve(Vector rhs) const;

 private:
  Eigen::Index n_;
  Vector dl_, d_, du_, du2_;
  std::vector<bool> swapped_;
  double min_pivot_ = 0.0;
  double max_pivot_ = 0.0;
};

extern template class TridiagonalLu<double>;
extern template class TridiagonalLu<std::complex<double>>;

/// sigma_min(T) via inverse power iteration on T^T T (two tridiagonal solves
/// per step). Throws SingularMatrix when T is numerically singular.
double smallest_singular_value(const Tridiagonal<double>& t,
                               double rel_tol = 1e-12, int max_iter = 5000);

/// Frobenius norm of T^{-1}, by N tridiagonal solves against unit vectors
/// (closed form when T is diagonal). Throws SingularMatrix.
double hs_norm_inverse(const Tridiagonal<double>& t);

/// Empirical lower bound for ||My|| >= p1 ||y||: smallest singular value of
/// the M-matrix truncation over modes -n_max..n_max.
double estimate_p1(Eigen::Index n_max, double eps,
                   EpsilonPolicy policy = EpsilonPolicy::enforce_range);

struct ConvergenceTable {
  std::vector<Eigen::Index> orders;
  std::vector<Eigen::VectorXcd> values;   // first-k by modulus, one row per N
  std::vector<Eigen::VectorXd> diffs;     // |row_i - row_{i-1}|, diffs[0] = 0
  std::vector<std::vector<bool>> converged;  // diff <= tol, rows >= 1
  double tol = 0.0;
};

ConvergenceTable convergence_study(double eps, const std::vector<Eigen::Index>& n_list,
                                   Eigen::Index k, double tol = 1e-6,
                                   const SpectrumOptions& opts = {});

}  // namespace bfheat

#endif  // BFHEAT_EIGENSOLVER_HPP
