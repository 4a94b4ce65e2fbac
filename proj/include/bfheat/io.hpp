// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef BFHEAT_IO_HPP
#define BFHEAT_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bfheat/eigensolver.hpp"
#include "bfheat/evolution.hpp"
#include "bfheat/quadrature.hpp"
#include "bfheat/resolvent.hpp"
#include "bfheat/tridiagonal.hpp"
#include "bfheat/trig_poly.hpp"

namespace bfheat {

// Single source of run parameters; every emitted file embeds the resolved
// copy (CSV header comment / JSON "config" field) for reproducibility.
struct RunConfig {
  double epsilon = 1.0;
  Eigen::Index n = 4;
  std::vector<Eigen::Index> n_list;
  Eigen::Index k = 20;
  int samples = 500;
  std::uint64_t seed = 12345;
  double tol = -1.0;  // generic tolerance override; negative = per-check default
  QuadratureOptions quad;
  std::string phi_spec = "builtin:cosx-image";
  std::string y0_spec = "builtin:cosx";
  double t_final = 1.0;
  int steps = 8;
  std::string output_dir = "out";
  std::string format = "csv";
  bool allow_eps_out_of_range = false;
  bool inject_fault = false;

  EpsilonPolicy policy() const {
    return allow_eps_out_of_range ? EpsilonPolicy::allow_any
                                  : EpsilonPolicy::enforce_range;
  }
};

nlohmann::json config_json(const RunConfig& cfg);
/// One-line "# config ..." comment for CSV headers.
std::string config_comment(const RunConfig& cfg);

std::string format_double(double v);

// Band matrices: header (order,label,epsilon), rows (index,sub,diag,super);
// the sub field is empty on the first row and super on the last.
void write_band_csv(std::ostream& os, const Tridiagonal<double>& t,
                    const RunConfig& cfg);
void write_band_json(std::ostream& os, const Tridiagonal<double>& t,
                     const RunConfig& cfg);
Tridiagonal<double> read_band_csv(std::istream& is);

// Trig polynomials: rows (n, re, im).
void write_trig_poly_csv(std::ostream& os, const TrigPoly& p, const RunConfig& cfg);
TrigPoly read_trig_poly_csv(std::istream& is);

// Spectra: rows (index, re, im, converged).
void write_spectrum_csv(std::ostream& os, const SpectrumResult& res,
                        const std::vector<bool>& converged, const RunConfig& cfg);
void write_spectrum_json(std::ostream& os, const SpectrumResult& res,
                         const std::vector<bool>& converged, const RunConfig& cfg);
void write_convergence_csv(std::ostream& os, const ConvergenceTable& table,
                           const RunConfig& cfg);

// Sampled resolvent solutions: rows (x, y, yprime) plus a JSON run report.
void write_solution_csv(std::ostream& os, const SolveResult& sol, const RunConfig& cfg);
void write_solution_json(std::ostream& os, const SolveResult& sol, const RunConfig& cfg);

// Evolution traces: rows (t, |c_-N|..|c_N|, total norm, growth).
void write_trace_csv(std::ostream& os, const EvolutionTrace& trace,
                     Eigen::Index n_max, const RunConfig& cfg);

struct CheckResult {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
  double runtime_s = 0.0;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

nlohmann::json report_json(const VerificationReport& report, const RunConfig& cfg);

/// Writes content to output_dir/name, creating the directory if needed.
void write_text_file(const std::string& output_dir, const std::string& name,
                     const std::string& content);

}  // namespace bfheat

#endif  // BFHEAT_IO_HPP
