// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0

#include "bfheat/resolvent.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace bfheat {

namespace {

// Partial-integral operator on a reference panel: given samples of g at the
// m Gauss-Legendre nodes, returns integral_{-1}^{xi_i} of the degree-(m-1)
// interpolant at every node. Built from the Legendre expansion
//   integral P_0 = P_1 + 1,  integral P_l = (P_{l+1} - P_{l-1})/(2l+1).
class PartialIntegrator {
 public:
  PartialIntegrator(const Eigen::VectorXd& nodes, const Eigen::VectorXd& weights) {
    const int m = static_cast<int>(nodes.size());
    Eigen::MatrixXd p(m, m + 1);  // P_l(xi_i), l = 0..m
    for (int i = 0; i < m; ++i) {
      p(i, 0) = 1.0;
      p(i, 1) = nodes(i);
      for (int l = 2; l <= m; ++l)
        p(i, l) = ((2.0 * l - 1.0) * nodes(i) * p(i, l - 1) -
                   (l - 1.0) * p(i, l - 2)) /
                  static_cast<double>(l);
    }
    Eigen::MatrixXd proj(m, m);  // alpha_l = proj(l, :) * g
    for (int l = 0; l < m; ++l)
      for (int i = 0; i < m; ++i)
        proj(l, i) = 0.5 * (2.0 * l + 1.0) * weights(i) * p(i, l);
    Eigen::MatrixXd quad(m, m);  // partial integrals of P_l at xi_i
    for (int i = 0; i < m; ++i) {
      quad(i, 0) = p(i, 1) + 1.0;
      for (int l = 1; l < m; ++l)
        quad(i, l) = (p(i, l + 1) - p(i, l - 1)) / (2.0 * l + 1.0);
    }
    op_ = quad * proj;
  }

  /// partials_i = integral over [a, x_i] for a panel of half width rad.
  Eigen::VectorXd apply(const Eigen::VectorXd& g, double rad) const {
    return rad * (op_ * g);
  }

 private:
  Eigen::MatrixXd op_;
};

// The weighted inner integrals are evaluated in the variable
// s = log tan(t/2), where the kernel of M becomes a pure exponential:
//   integral_a^x (tan(t/2)/tan(x/2))^{1/eps} f(t) dt
//     = integral_{s_a}^{s_x} e^{(s - s_x)/eps} f(t(s)) sin(t(s)) ds,
// t(s) = 2 atan(e^s). Every weight value lies in (0, 1], the integrand is
// entire in s, and the tail below ~45 eps e-folds is beneath double
// precision, so the rule is truncated there and split so each piece spans
// at most ~15 e-folds.
constexpr double kEfoldCut = 45.0;
constexpr double kEfoldPerRule = 15.0;

class WeightedIntegrator {
 public:
  WeightedIntegrator(const Eigen::VectorXd& ref_nodes,
                     const Eigen::VectorXd& ref_weights, double eps,
                     std::function<double(double)> f)
      : ref_nodes_(ref_nodes), ref_weights_(ref_weights), eps_(eps),
        f_(std::move(f)) {}

  // integral over s in [max(s_lo, s_hi - 45 eps), s_hi] of
  // e^{(s - s_hi)/eps} f(t(s)) sin(t(s)); s_lo may be -infinity.
  double integrate(double s_lo, double s_hi) const {
    const double lo = std::max(s_lo, s_hi - kEfoldCut * eps_);
    if (!(lo < s_hi)) return 0.0;
    const int pieces =
        std::max(1, static_cast<int>(std::ceil((s_hi - lo) / (kEfoldPerRule * eps_))));
    const double step = (s_hi - lo) / pieces;
    double acc = 0.0;
    for (int p = 0; p < pieces; ++p) {
      const double a = lo + p * step;
      const double mid = a + 0.5 * step;
      const double rad = 0.5 * step;
      for (Eigen::Index i = 0; i < ref_nodes_.size(); ++i) {
        const double s = mid + rad * ref_nodes_(i);
        const double t = 2.0 * std::atan(std::exp(s));
        acc += rad * ref_weights_(i) *
               std::exp((s - s_hi) / eps_) * f_(t) * std::sin(t);
      }
    }
    return acc;
  }

 private:
  const Eigen::VectorXd& ref_nodes_;
  const Eigen::VectorXd& ref_weights_;
  double eps_;
  std::function<double(double)> f_;
};

struct SideData {
  Eigen::VectorXd u;           // physical y' at the side's half nodes
  Eigen::VectorXd y_partial;   // integral of u from 0 to each half node
  std::vector<double> s;       // scaled weighted prefix at panel boundaries
  std::vector<double> w;       // prefix integral of u at panel boundaries
  std::vector<double> phi_pre; // prefix integral of phi at panel boundaries
};

// One symmetric side of the solve: tau = |x| ascending over (0, pi) with
// f(tau) = phi(side * tau). Prefix ratios across panel boundaries are
// exp(log-weight diffs) with nonpositive exponents, so every stored
// quantity stays at the local scale.
SideData run_side(const TrigPoly& phi, int side, double eps,
                  const QuadratureGrid& grid, const PartialIntegrator& part) {
  const auto& panels = grid.half_panels();
  const int m = grid.nodes_per_panel();
  const Eigen::Index n = grid.half_size();

  SideData out;
  out.u.resize(n);
  out.y_partial.resize(n);
  out.s.assign(panels.size() + 1, 0.0);
  out.w.assign(panels.size() + 1, 0.0);
  out.phi_pre.assign(panels.size() + 1, 0.0);

  const auto f = [&](double tau) { return phi.eval(side * tau).real(); };
  const WeightedIntegrator weighted(grid.ref_nodes(), grid.ref_weights(), eps, f);
  const double neg_inf = -std::numeric_limits<double>::infinity();

  for (size_t k = 0; k < panels.size(); ++k) {
    const auto& panel = panels[k];
    const Eigen::Index base = panel.first_node;
    const double rad = 0.5 * (panel.b - panel.a);
    const bool has_prefix = panel.a > 0.0;
    const double s_a = has_prefix ? std::log(std::tan(0.5 * panel.a)) : neg_inf;
    const double s_b = std::log(std::tan(0.5 * panel.b));

    // u at the panel nodes: prefix re-scaled to the node plus the weighted
    // integral over [a, x], both normalized at the node.
    for (int i = 0; i < m; ++i) {
      const double tau = grid.half_nodes()(base + i);
      const double s_x = eps * grid.half_log_weight()(base + i);
      double inner = weighted.integrate(s_a, s_x);
      if (has_prefix) inner += out.s[k] * std::exp((s_a - s_x) / eps);
      out.u(base + i) = inner / (eps * std::sin(tau));
    }

    // Boundary recursions for the scaled weighted prefix and the plain
    // prefix of phi.
    out.s[k + 1] = weighted.integrate(s_a, s_b) +
                   (has_prefix ? out.s[k] * std::exp((s_a - s_b) / eps) : 0.0);
    double panel_plain = 0.0;
    for (int i = 0; i < m; ++i)
      panel_plain += grid.half_weights()(base + i) * f(grid.half_nodes()(base + i));
    out.phi_pre[k + 1] = out.phi_pre[k] + panel_plain;

    // y within the panel: integrate the interpolant of the u samples.
    const Eigen::VectorXd u_part = part.apply(out.u.segment(base, m), rad);
    for (int i = 0; i < m; ++i) out.y_partial(base + i) = out.w[k] + u_part(i);
    double panel_u = 0.0;
    for (int i = 0; i < m; ++i)
      panel_u += grid.half_weights()(base + i) * out.u(base + i);
    out.w[k + 1] = out.w[k] + panel_u;
  }
  return out;
}

}  // namespace

SolveResult solve_l(const TrigPoly& phi, double eps, const QuadratureGrid& grid,
                    const SolveOptions& opts) {
  detail::require_epsilon(eps, EpsilonPolicy::enforce_range);
  const double phi_norm = l2_norm(phi);
  const double mean_phi = phi.mean_integral().real();
  if (std::abs(phi.mean_integral()) > opts.mean_gate * std::max(phi_norm, 1e-300))
    throw Unsolvable("solve_l: phi has a mean component; the range of L is "
                     "orthogonal to constants");

  const PartialIntegrator part(grid.ref_nodes(), grid.ref_weights());
  const SideData pos = run_side(phi, +1, eps, grid, part);
  const SideData neg = run_side(phi, -1, eps, grid, part);

  const Eigen::Index n = grid.half_size();
  SolveResult res;
  res.epsilon = eps;
  res.mean_phi = mean_phi;
  res.x = grid.nodes();
  res.y.resize(2 * n);
  res.yprime.resize(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    res.yprime(grid.full_index(+1, i)) = pos.u(i);
    res.yprime(grid.full_index(-1, i)) = neg.u(i);
    res.y(grid.full_index(+1, i)) = pos.y_partial(i);
    res.y(grid.full_index(-1, i)) = -neg.y_partial(i);
  }
  res.y.array() -= grid.mean(res.y);

  res.periodicity_defect = std::abs(pos.w.back() + neg.w.back());
  double residual = 0.0;
  for (size_t k = 1; k < pos.s.size(); ++k) {
    residual = std::max(residual, std::abs(pos.s[k] + pos.w[k] - pos.phi_pre[k]));
    residual = std::max(residual, std::abs(neg.s[k] + neg.w[k] - neg.phi_pre[k]));
  }
  res.ode_residual = residual;

  double phi_scale = 0.0;
  for (Eigen::Index i = 0; i < res.x.size(); ++i)
    phi_scale = std::max(phi_scale, std::abs(phi.eval(res.x(i)).real()));
  if (phi_scale > 0.0) {
    if (res.ode_residual > opts.residual_tol * phi_scale)
      throw QuadratureFailure("solve_l: integrated residual above tolerance");
    if (res.periodicity_defect > opts.periodicity_tol * phi_scale)
      throw QuadratureFailure("solve_l: periodicity defect above tolerance");
  }
  return res;
}

SolveResult solve_l(const TrigPoly& phi, double eps, const SolveOptions& opts) {
  const QuadratureGrid grid(eps, opts.quad);
  return solve_l(phi, eps, grid, opts);
}

}  // namespace bfheat
