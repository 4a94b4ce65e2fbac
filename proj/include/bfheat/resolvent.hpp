// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef BFHEAT_RESOLVENT_HPP
#define BFHEAT_RESOLVENT_HPP

#include <Eigen/Core>

#include "bfheat/quadrature.hpp"
#include "bfheat/trig_poly.hpp"

namespace bfheat {

struct SolveOptions {
  QuadratureOptions quad;
  // phi is accepted as in-range when |integral(phi)| <= mean_gate * ||phi||.
  double mean_gate = 1e-10;
  // A-posteriori gates, relative to the sampled scale of phi.
  double residual_tol = 1e-6;
  double periodicity_tol = 1e-6;
};

struct SolveResult {
  Eigen::VectorXd x;        // grid nodes, ascending over (-pi, pi)
  Eigen::VectorXd y;        // zero-mean solution samples
  Eigen::VectorXd yprime;
  double periodicity_defect = 0.0;  // |y(pi) - y(-pi)| = |integral of y'|
  double ode_residual = 0.0;        // max integrated-form residual at panel ends
  double mean_phi = 0.0;
  double epsilon = 0.0;
};

// Solves L y = phi for real-valued trig-polynomial phi through the explicit
// kernel of the factor M: with u = y',
//   u(x) = (1/eps) (tan(|x|/2))^{-1/eps} sin^{-1}(x)
//          * integral_0^x (tan(|t|/2))^{1/eps} phi(t) dt,
// all weight ratios evaluated in log space so magnitudes stay <= 1, then
// y = integral of u with the constant fixed by zero mean. Throws Unsolvable
// when phi has a mean component, QuadratureFailure when the a-posteriori
// residuals exceed their gates.
SolveResult solve_l(const TrigPoly& phi, double eps, const QuadratureGrid& grid,
                    const SolveOptions& opts = {});

SolveResult solve_l(const TrigPoly& phi, double eps, const SolveOptions& opts = {});

}  // namespace bfheat

#endif  // BFHEAT_RESOLVENT_HPP
