// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0
//
// Batch front end: build the Fourier-space matrices, verify the algebraic
// identities, run spectral sweeps, invert the operator, audit the domain
// norms and drive the truncated flow. Exit codes: 0 success, 1 usage error,
// 2 verification/residual failure, 3 I/O failure.

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "bfheat/eigensolver.hpp"
#include "bfheat/evolution.hpp"
#include "bfheat/io.hpp"
#include "bfheat/resolvent.hpp"
#include "bfheat/tridiagonal.hpp"
#include "bfheat/trig_poly.hpp"

namespace {

using namespace bfheat;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;
constexpr int kExitIo = 3;

double now_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::vector<Eigen::Index> parse_n_list(const std::string& text) {
  std::vector<Eigen::Index> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoll(item));
  }
  return out;
}

void add_common_options(CLI::App* sub, RunConfig& cfg, std::string& n_list_str) {
  sub->add_option("--eps", cfg.epsilon, "diffusion parameter, in (0, 2)");
  sub->add_option("--n", cfg.n, "truncation order / mode cutoff");
  sub->add_option("--n-list", n_list_str, "comma-separated truncation list");
  sub->add_option("--k", cfg.k, "eigenvalues tracked per truncation");
  sub->add_option("--samples", cfg.samples, "random sample count");
  sub->add_option("--seed", cfg.seed, "random seed (runs are deterministic)");
  sub->add_option("--tol", cfg.tol, "override of the subcommand's primary tolerance");
  sub->add_option("--out", cfg.output_dir, "output directory");
  sub->add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--allow-eps-out-of-range", cfg.allow_eps_out_of_range,
                "skip the (0, 2) gate (exploratory runs)");
  sub->add_option("--nodes-per-panel", cfg.quad.nodes_per_panel,
                  "quadrature nodes per panel");
  sub->add_option("--grading-ratio", cfg.quad.grading_ratio,
                  "geometric panel grading ratio");
  sub->add_option("--levels", cfg.quad.levels, "graded levels per endpoint");
}

void emit(const RunConfig& cfg, const std::string& stem,
          const std::function<void(std::ostream&)>& csv_writer,
          const std::function<void(std::ostream&)>& json_writer) {
  std::ostringstream os;
  if (cfg.format == "json") {
    json_writer(os);
    write_text_file(cfg.output_dir, stem + ".json", os.str());
  } else {
    csv_writer(os);
    write_text_file(cfg.output_dir, stem + ".csv", os.str());
  }
}

int cmd_build(const RunConfig& cfg) {
  const auto policy = cfg.policy();
  const auto a = build_a(cfg.n, cfg.epsilon, policy);
  const auto b = build_b(cfg.n, cfg.epsilon, policy);
  const auto c = build_c<double>(cfg.n);
  const auto j = build_j<double>(cfg.n);
  const auto m = build_m_matrix(cfg.n, cfg.epsilon, policy);
  const auto write_matrix = [&](const std::string& stem, const Tridiagonal<double>& t) {
    emit(cfg, stem, [&](std::ostream& os) { write_band_csv(os, t, cfg); },
         [&](std::ostream& os) { write_band_json(os, t, cfg); });
  };
  write_matrix("a", a);
  write_matrix("b", b);
  write_matrix("c", c);
  write_matrix("j", j);
  write_matrix("m", m);
  std::cout << "build: wrote A,B,C,J,M for n=" << cfg.n << " eps=" << cfg.epsilon
            << " to " << cfg.output_dir << "\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  VerificationReport report;
  std::mt19937_64 rng(cfg.seed);
  const double eps = cfg.epsilon;
  const auto policy = cfg.policy();
  auto run_check = [&](const std::string& name, double tolerance, auto&& fn) {
    const double t0 = now_seconds();
    const double residual = fn();
    report.checks.push_back(
        {name, residual <= tolerance, residual, tolerance, now_seconds() - t0});
  };

  run_check("factorization_A_eq_BC", cfg.tol > 0 ? cfg.tol : 1e-13, [&] {
    auto a = build_a(cfg.n, eps, policy);
    auto b = build_b(cfg.n, eps, policy);
    if (cfg.inject_fault && cfg.n > 1) b.super(0) = -b.super(0);
    const double scale =
        cfg.n > 1 ? std::max(1.0, a.super.cwiseAbs().maxCoeff()) : 1.0;
    return check_factorization(a, b, build_c<double>(cfg.n)) / scale;
  });
  run_check("j_selfadjoint_fourier", 1e-15, [&] {
    return check_j_selfadjoint(build_a(cfg.n, eps, policy));
  });
  run_check("j_selfadjoint_physical", 1e-13, [&] {
    double worst = 0.0;
    for (int s = 0; s < cfg.samples; ++s) {
      const TrigPoly y = random_trig_poly(rng, 1 + int(rng() % 30), true, false);
      worst = std::max(worst, check_jlj(y, eps));
    }
    return worst;
  });
  run_check("factorization_L_eq_MS", 1e-14, [&] {
    double worst = 0.0;
    for (int s = 0; s < cfg.samples; ++s) {
      const TrigPoly y = random_trig_poly(rng, 1 + int(rng() % 30), false, false);
      worst = std::max(worst,
                       coeff_distance(apply_l(y, eps), apply_m(derivative(y), eps)));
    }
    return worst;
  });
  run_check("m_mean_invariance", 1e-13, [&] {
    double worst = 0.0;
    for (int s = 0; s < cfg.samples; ++s)
      worst = std::max(worst, m_mean_invariance_residual(
                                  random_trig_poly(rng, 20, false, false), eps));
    return worst;
  });
  run_check("theta_constraints", 1e-13, [&] {
    double worst = 0.0;
    for (int s = 0; s < cfg.samples; ++s) {
      const auto [p, q] =
          theta_constraint_residuals(random_trig_poly(rng, 20, false, false));
      worst = std::max({worst, p, q});
    }
    return worst;
  });
  run_check("sector_decoupling_and_blocks", 1e-15, [&] {
    const Eigen::Index n = std::min<Eigen::Index>(cfg.n, 256);
    const GalerkinMatrix g = galerkin_matrix(n, eps, policy);
    Eigen::MatrixXcd rest = g.entries;
    rest.block(0, 0, n, n).setZero();
    rest.block(n + 1, n + 1, n, n).setZero();
    rest(n, n) = 0.0;
    const Eigen::MatrixXcd at =
        build_a(n, eps, policy).to_dense().transpose().cast<std::complex<double>>();
    const double scale = std::max(1.0, at.cwiseAbs().maxCoeff());
    const double block_pos =
        (g.positive_block() - std::complex<double>(0, 1) * at).cwiseAbs().maxCoeff();
    const double block_neg = (g.negative_block_reflected() -
                              std::complex<double>(0, -1) * at)
                                 .cwiseAbs()
                                 .maxCoeff();
    return std::max({rest.cwiseAbs().maxCoeff() / scale, block_pos / scale,
                     block_neg / scale});
  });

  std::ostringstream os;
  os << report_json(report, cfg).dump(2) << '\n';
  write_text_file(cfg.output_dir, "verify.json", os.str());
  for (const auto& c : report.checks)
    std::cout << (c.pass ? "[pass] " : "[FAIL] ") << c.name
              << "  residual=" << c.residual << "  tol=" << c.tolerance << "  ("
              << c.runtime_s << " s)\n";
  std::cout << "verify: " << (report.all_pass() ? "all checks passed" : "FAILED")
            << "\n";
  return report.all_pass() ? kExitOk : kExitVerification;
}

int cmd_spectrum(const RunConfig& cfg) {
  std::vector<Eigen::Index> n_list = cfg.n_list;
  if (n_list.empty()) n_list = {cfg.n, 2 * cfg.n};
  const double tol = cfg.tol > 0 ? cfg.tol : 1e-6;
  const Eigen::Index k = std::min<Eigen::Index>(cfg.k, n_list.front());
  const ConvergenceTable table = convergence_study(cfg.epsilon, n_list, k, tol);
  emit(cfg, "spectrum",
       [&](std::ostream& os) { write_convergence_csv(os, table, cfg); },
       [&](std::ostream& os) {
         nlohmann::json j;
         j["config"] = config_json(cfg);
         nlohmann::json rows = nlohmann::json::array();
         for (size_t r = 0; r < table.orders.size(); ++r)
           for (Eigen::Index i = 0; i < table.values[r].size(); ++i)
             rows.push_back({{"order", table.orders[r]},
                             {"index", i},
                             {"re", table.values[r](i).real()},
                             {"im", table.values[r](i).imag()},
                             {"diff", table.diffs[r](i)},
                             {"converged", r > 0 && table.converged[r][size_t(i)]}});
         j["results"] = rows;
         os << j.dump(2) << '\n';
       });
  double max_im = 0.0;
  Eigen::Index converged_count = 0;
  const size_t last = table.orders.size() - 1;
  for (Eigen::Index i = 0; i < table.values[last].size(); ++i) {
    if (last == 0 || table.converged[last][size_t(i)]) {
      max_im = std::max(max_im, std::abs(table.values[last](i).imag()));
      ++converged_count;
    }
  }
  std::cout << "spectrum: tracked " << k << " eigenvalues over "
            << table.orders.size() << " truncations; " << converged_count
            << " converged at tol " << tol << "; max |Im| among converged = "
            << max_im << "\n";
  return kExitOk;
}

TrigPoly make_phi(const RunConfig& cfg) {
  if (cfg.phi_spec == "builtin:cosx-image")
    return apply_l(TrigPoly::cosine(1), cfg.epsilon, cfg.policy());
  if (cfg.phi_spec == "builtin:sin2x-image")
    return apply_l(TrigPoly::sine(2), cfg.epsilon, cfg.policy());
  if (cfg.phi_spec == "builtin:one") return TrigPoly::constant(1.0);
  std::ifstream is(cfg.phi_spec);
  if (!is) throw IoError("cannot read phi file: " + cfg.phi_spec);
  return read_trig_poly_csv(is);
}

int cmd_resolve(const RunConfig& cfg) {
  const TrigPoly phi = make_phi(cfg);
  SolveOptions opts;
  opts.quad = cfg.quad;
  if (cfg.tol > 0) opts.residual_tol = cfg.tol;
  const QuadratureGrid grid(cfg.epsilon, opts.quad);
  const SolveResult sol = solve_l(phi, cfg.epsilon, grid, opts);
  emit(cfg, "solution",
       [&](std::ostream& os) { write_solution_csv(os, sol, cfg); },
       [&](std::ostream& os) { write_solution_json(os, sol, cfg); });
  {
    std::ostringstream os;
    write_solution_json(os, sol, cfg);
    write_text_file(cfg.output_dir, "resolve_report.json", os.str());
  }
  std::cout << "resolve: " << sol.x.size() << " nodes, ode_residual="
            << sol.ode_residual << ", periodicity_defect=" << sol.periodicity_defect
            << "\n";
  return kExitOk;
}

int cmd_norms(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  const double eps = cfg.epsilon;
  const double p2 = std::max(3.0, 2.0 * eps);
  const double p1_hat = estimate_p1(cfg.n, eps, cfg.policy());
  const double p3_hat = std::min(p1_hat / 6.0, 0.5);
  int upper_violations = 0, lower_violations = 0;
  double worst_upper = 0.0, worst_lower = 1e300;
  std::ostringstream csv;
  csv << config_comment(cfg);
  csv << "sample,norm_g,norm_m,ratio\n";
  for (int s = 0; s < cfg.samples; ++s) {
    const TrigPoly y = random_trig_poly(rng, 1 + int(rng() % 30), true, true);
    const double g = norm_g(y, eps);
    const double m = norm_m(y);
    const double ratio = m > 0 ? g / m : 0.0;
    if (g > p2 * m * (1 + 1e-12)) ++upper_violations;
    if (m > 0 && g < p3_hat * m * (1 - 1e-12)) ++lower_violations;
    worst_upper = std::max(worst_upper, ratio);
    worst_lower = std::min(worst_lower, ratio);
    csv << s << ',' << format_double(g) << ',' << format_double(m) << ','
        << format_double(ratio) << '\n';
  }
  write_text_file(cfg.output_dir, "norms.csv", csv.str());
  nlohmann::json j;
  j["config"] = config_json(cfg);
  j["results"] = {{"p1_hat", p1_hat},       {"p2", p2},
                  {"p3_hat", p3_hat},       {"worst_ratio_high", worst_upper},
                  {"worst_ratio_low", worst_lower},
                  {"upper_violations", upper_violations},
                  {"lower_violations", lower_violations}};
  write_text_file(cfg.output_dir, "norms.json", j.dump(2) + "\n");
  std::cout << "norms: worst g/m ratio " << worst_upper << " (bound " << p2
            << "), weakest " << worst_lower << " (floor " << p3_hat
            << "), violations " << upper_violations + lower_violations << "\n";
  return (upper_violations + lower_violations) == 0 ? kExitOk : kExitVerification;
}

TrigPoly make_y0(const RunConfig& cfg, std::mt19937_64& rng) {
  if (cfg.y0_spec == "builtin:cosx") return TrigPoly::cosine(1);
  if (cfg.y0_spec == "builtin:sinx") return TrigPoly::sine(1);
  if (cfg.y0_spec == "builtin:random")
    return random_trig_poly(rng, std::min<int>(10, int(cfg.n)), true, false);
  std::ifstream is(cfg.y0_spec);
  if (!is) throw IoError("cannot read y0 file: " + cfg.y0_spec);
  return read_trig_poly_csv(is);
}

int cmd_evolve(const RunConfig& cfg) {
  if (cfg.steps < 1) throw InvalidOrder("evolve: steps must be >= 1");
  std::mt19937_64 rng(cfg.seed);
  const TrigPoly y0 = make_y0(cfg, rng);
  std::vector<double> times;
  for (int s = 0; s <= cfg.steps; ++s)
    times.push_back(cfg.t_final * double(s) / double(cfg.steps));
  const EvolutionTrace trace = evolve(y0, times, cfg.n, cfg.epsilon);
  std::ostringstream os;
  write_trace_csv(os, trace, cfg.n, cfg);
  write_text_file(cfg.output_dir, "trace.csv", os.str());
  std::cout << "evolve: " << trace.times.size() << " states to t=" << cfg.t_final
            << ", final norm " << trace.norms.back() << ", final growth "
            << trace.growth.back() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toolkit for the indefinite convection-diffusion operator "
               "eps*(sin x y')' + y' and its backward-forward heat flow"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string n_list_str;

  CLI::App* build = app.add_subcommand("build", "write the band matrices A,B,C,J,M");
  CLI::App* verify =
      app.add_subcommand("verify", "run the algebraic identity checks");
  verify->add_flag("--inject-fault", cfg.inject_fault,
                   "negative control: flip one band sign before checking");
  CLI::App* spectrum =
      app.add_subcommand("spectrum", "eigenvalue convergence across truncations");
  CLI::App* resolve = app.add_subcommand("resolve", "solve L y = phi");
  resolve->add_option("--phi", cfg.phi_spec,
                      "builtin:cosx-image | builtin:sin2x-image | builtin:one | csv path");
  CLI::App* norms = app.add_subcommand("norms", "graph-norm equivalence audit");
  CLI::App* evolve_cmd = app.add_subcommand("evolve", "truncated heat flow");
  evolve_cmd->add_option("--y0", cfg.y0_spec,
                         "builtin:cosx | builtin:sinx | builtin:random | csv path");
  evolve_cmd->add_option("--t-final", cfg.t_final, "final time");
  evolve_cmd->add_option("--steps", cfg.steps, "number of output steps");

  for (CLI::App* sub : {build, verify, spectrum, resolve, norms, evolve_cmd})
    add_common_options(sub, cfg, n_list_str);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!n_list_str.empty()) cfg.n_list = parse_n_list(n_list_str);
    if (build->parsed()) return cmd_build(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (spectrum->parsed()) return cmd_spectrum(cfg);
    if (resolve->parsed()) return cmd_resolve(cfg);
    if (norms->parsed()) return cmd_norms(cfg);
    if (evolve_cmd->parsed()) return cmd_evolve(cfg);
  } catch (const InvalidEpsilon& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidOrder& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionMismatch& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Unsolvable& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kExitVerification;
  } catch (const QuadratureFailure& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kExitVerification;
  } catch (const NoConvergence& e) {
    std::cerr << "verification failure: " << e.what() << " (deflated "
              << e.deflated << ", remaining " << e.remaining << ")\n";
    return kExitVerification;
  } catch (const IoError& e) {
    std::cerr << "i/o failure: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
