// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef BFHEAT_QUADRATURE_HPP
#define BFHEAT_QUADRATURE_HPP

#include <Eigen/Core>

#include <vector>

#include "bfheat/errors.hpp"

namespace bfheat {

/// Nodes and weights of the m-point Gauss-Legendre rule on [-1, 1],
/// by Newton iteration on the Legendre recurrence.
void gauss_legendre(int m, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// log(tan(|x|/2)) for x in (-pi, pi) \ {0}.
double log_tan_half_abs(double x);

struct QuadratureOptions {
  int nodes_per_panel = 32;
  double grading_ratio = 0.5;  // geometric panel shrink toward 0 and +-pi
  int levels = 15;             // graded levels per singular endpoint
};

// Composite panel grid on (-pi, pi), graded geometrically toward the three
// degeneracy points x = 0 and x = +-pi of the weight tan(|x|/2)^{1/eps} and
// of sin(x). The grid is built on the half interval (0, pi) and mirrored, so
// nodes are symmetric about 0. Nodes are Gauss-Legendre points interior to
// panels, hence never hit the singular points and
// log_weight = (1/eps) log tan(|x|/2) stays finite everywhere.
class QuadratureGrid {
 public:
  struct Panel {
    double a;
    double b;
    Eigen::Index first_node;  // into the half-grid arrays
  };

  QuadratureGrid(double eps, const QuadratureOptions& opts = {});

  double epsilon() const { return eps_; }
  const QuadratureOptions& options() const { return opts_; }

  // Half grid on (0, pi), panels ordered outward from 0.
  const std::vector<Panel>& half_panels() const { return half_panels_; }
  const Eigen::VectorXd& half_nodes() const { return half_nodes_; }
  const Eigen::VectorXd& half_weights() const { return half_weights_; }
  const Eigen::VectorXd& half_log_weight() const { return half_log_weight_; }
  Eigen::Index half_size() const { return half_nodes_.size(); }

  // Full grid on (-pi, pi), ascending.
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& log_weight() const { return log_weight_; }
  Eigen::Index size() const { return nodes_.size(); }

  /// Full-grid index of half-grid node i on the given side (+1 or -1).
  Eigen::Index full_index(int side, Eigen::Index i) const {
    return side > 0 ? half_size() + i : half_size() - 1 - i;
  }

  int nodes_per_panel() const { return opts_.nodes_per_panel; }
  const Eigen::VectorXd& ref_nodes() const { return ref_nodes_; }
  const Eigen::VectorXd& ref_weights() const { return ref_weights_; }

  /// Integral over (-pi, pi) of full-grid samples.
  double integrate(const Eigen::VectorXd& values) const;
  /// Mean value (integral / 2pi).
  double mean(const Eigen::VectorXd& values) const;

 private:
  double eps_;
  QuadratureOptions opts_;
  std::vector<Panel> half_panels_;
  Eigen::VectorXd ref_nodes_, ref_weights_;
  Eigen::VectorXd half_nodes_, half_weights_, half_log_weight_;
  Eigen::VectorXd nodes_, weights_, log_weight_;
};

}  // namespace bfheat

#endif  // BFHEAT_QUADRATURE_HPP
