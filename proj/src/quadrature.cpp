// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0

#include "bfheat/quadrature.hpp"

#include <cmath>

#include "bfheat/trig_poly.hpp"  // kPi

namespace bfheat {

void gauss_legendre(int m, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (m < 1) throw InvalidOrder("gauss_legendre: need at least one node");
  nodes.resize(m);
  weights.resize(m);
  const int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-like initial guess, then Newton on P_m.
    double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        // one polishing step
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= m; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = m * (x * p1 - p0) / (x * x - 1.0);
        x -= p1 / dp;
        break;
      }
    }
    nodes(i) = -x;  // ascending order, exploiting symmetry
    nodes(m - 1 - i) = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights(i) = w;
    weights(m - 1 - i) = w;
  }
  if (m % 2 == 1) nodes(m / 2) = 0.0;
}

double log_tan_half_abs(double x) {
  return std::log(std::tan(0.5 * std::abs(x)));
}

QuadratureGrid::QuadratureGrid(double eps, const QuadratureOptions& opts)
    : eps_(eps), opts_(opts) {
  if (!(eps > 0.0)) throw InvalidEpsilon("QuadratureGrid: epsilon must be positive");
  if (opts.nodes_per_panel < 2 || opts.levels < 1 || !(opts.grading_ratio > 0.0) ||
      !(opts.grading_ratio < 1.0))
    throw InvalidOrder("QuadratureGrid: bad panel options");

  gauss_legendre(opts.nodes_per_panel, ref_nodes_, ref_weights_);

  // Panel boundaries on (0, pi): geometric toward 0 on (0, pi/2], mirrored
  // geometric toward pi on [pi/2, pi).
  const int levels = opts.levels;
  const double h = 0.5 * kPi;
  std::vector<double> bounds;
  bounds.push_back(0.0);
  for (int j = levels; j >= 1; --j) bounds.push_back(h * std::pow(opts.grading_ratio, j));
  bounds.push_back(h);
  for (int j = 1; j <= levels; ++j)
    bounds.push_back(kPi - h * std::pow(opts.grading_ratio, j));
  bounds.push_back(kPi);

  const int m = opts.nodes_per_panel;
  const Eigen::Index panels = static_cast<Eigen::Index>(bounds.size()) - 1;
  half_nodes_.resize(panels * m);
  half_weights_.resize(panels * m);
  half_log_weight_.resize(panels * m);
  half_panels_.reserve(static_cast<size_t>(panels));
  for (Eigen::Index p = 0; p < panels; ++p) {
    const double a = bounds[static_cast<size_t>(p)];
    const double b = bounds[static_cast<size_t>(p) + 1];
    const double mid = 0.5 * (a + b);
    const double rad = 0.5 * (b - a);
    half_panels_.push_back({a, b, p * m});
    for (int i = 0; i < m; ++i) {
      const Eigen::Index k = p * m + i;
      half_nodes_(k) = mid + rad * ref_nodes_(i);
      half_weights_(k) = rad * ref_weights_(i);
      half_log_weight_(k) = log_tan_half_abs(half_nodes_(k)) / eps_;
    }
  }

  const Eigen::Index n = half_nodes_.size();
  nodes_.resize(2 * n);
  weights_.resize(2 * n);
  log_weight_.resize(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    nodes_(n - 1 - i) = -half_nodes_(i);
    weights_(n - 1 - i) = half_weights_(i);
    log_weight_(n - 1 - i) = half_log_weight_(i);
    nodes_(n + i) = half_nodes_(i);
    weights_(n + i) = half_weights_(i);
    log_weight_(n + i) = half_log_weight_(i);
  }
}

double QuadratureGrid::integrate(const Eigen::VectorXd& values) const {
  if (values.size() != nodes_.size())
    throw DimensionMismatch("QuadratureGrid::integrate: size");
  return weights_.dot(values);
}

double QuadratureGrid::mean(const Eigen::VectorXd& values) const {
  return integrate(values) / kTwoPi;
}

}  // namespace bfheat
