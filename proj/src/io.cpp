// Copyright (c) 2026 bfheat contributors
// SPDX-License-Identifier: Apache-2.0

#include "bfheat/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>



namespace bfheat {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json config_json(const RunConfig& cfg) {
  json j;
  j["epsilon"] = cfg.epsilon;
  j["n"] = cfg.n;
  j["n_list"] = cfg.n_list;
  j["k"] = cfg.k;
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  j["tol"] = cfg.tol;
  j["quad"] = {{"nodes_per_panel", cfg.quad.nodes_per_panel},
               {"grading_ratio", cfg.quad.grading_ratio},
               {"levels", cfg.quad.levels}};
  j["phi"] = cfg.phi_spec;
  j["y0"] = cfg.y0_spec;
  j["t_final"] = cfg.t_final;
  j["steps"] = cfg.steps;
  j["output_dir"] = cfg.output_dir;
  j["format"] = cfg.format;
  j["allow_eps_out_of_range"] = cfg.allow_eps_out_of_range;
  j["inject_fault"] = cfg.inject_fault;
  return j;
}

std::string config_comment(const RunConfig& cfg) {
  return "# config " + config_json(cfg).dump() + "\n";
}

void write_band_csv(std::ostream& os, const Tridiagonal<double>& t,
                    const RunConfig& cfg) {
  os << config_comment(cfg);
  os << "order,label,epsilon\n";
  os << t.order << ',' << to_string(t.label) << ',' << format_double(t.epsilon)
     << '\n';
  os << "index,sub,diag,super\n";
  for (Eigen::Index k = 0; k < t.order; ++k) {
    os << (k + 1) << ',';
    if (k > 0) os << format_double(t.sub(k - 1));
    os << ',' << format_double(t.diag(k)) << ',';
    if (k + 1 < t.order) os << format_double(t.super(k));
    os << '\n';
  }
}

void write_band_json(std::ostream& os, const Tridiagonal<double>& t,
                     const RunConfig& cfg) {
  json j;
  j["config"] = config_json(cfg);
  j["order"] = t.order;
  j["label"] = to_string(t.label);
  j["epsilon"] = t.epsilon;
  j["diag"] = std::vector<double>(t.diag.data(), t.diag.data() + t.diag.size());
  j["sub"] = std::vector<double>(t.sub.data(), t.sub.data() + t.sub.size());
  j["super"] =
      std::vector<double>(t.super.data(), t.super.data() + t.super.size());
  os << j.dump(2) << '\n';
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string next_data_line(std::istream& is) {
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '#') return line;
  }
  throw IoError("csv: unexpected end of file");
}

BandLabel label_from_string(const std::string& s) {
  if (s == "A") return BandLabel::A;
  if (s == "B") return BandLabel::B;
  if (s == "C") return BandLabel::C;
  if (s == "J") return BandLabel::J;
  if (s == "M") return BandLabel::M;
  if (s == "Galerkin") return BandLabel::Galerkin;
  return BandLabel::Other;
}

}  // namespace

Tridiagonal<double> read_band_csv(std::istream& is) {
  if (next_data_line(is) != "order,label,epsilon")
    throw IoError("band csv: missing order,label,epsilon header");
  const auto meta = split_csv_line(next_data_line(is));
  if (meta.size() != 3) throw IoError("band csv: malformed meta row");
  Tridiagonal<double> t;
  t.order = std::stoll(meta[0]);
  if (t.order < 1) throw IoError("band csv: bad order");
  t.label = label_from_string(meta[1]);
  t.epsilon = std::stod(meta[2]);
  if (next_data_line(is) != "index,sub,diag,super")
    throw IoError("band csv: missing band header");
  t.diag.resize(t.order);
  t.sub = Eigen::VectorXd::Zero(std::max<Eigen::Index>(t.order - 1, 0));
  t.super = Eigen::VectorXd::Zero(std::max<Eigen::Index>(t.order - 1, 0));
  for (Eigen::Index k = 0; k < t.order; ++k) {
    const auto row = split_csv_line(next_data_line(is));
    if (row.size() != 4) throw IoError("band csv: malformed band row");
    if (std::stoll(row[0]) != k + 1) throw IoError("band csv: index out of order");
    if (k > 0) t.sub(k - 1) = std::stod(row[1]);
    t.diag(k) = std::stod(row[2]);
    if (k + 1 < t.order) t.super(k) = std::stod(row[3]);
  }
  return t;
}

void write_trig_poly_csv(std::ostream& os, const TrigPoly& p, const RunConfig& cfg) {
  os << config_comment(cfg);
  os << "n,re,im\n";
  for (int n = -p.degree(); n <= p.degree(); ++n)
    os << n << ',' << format_double(p.coeff(n).real()) << ','
       << format_double(p.coeff(n).imag()) << '\n';
}

TrigPoly read_trig_poly_csv(std::istream& is) {
  if (next_data_line(is) != "n,re,im") throw IoError("trig csv: missing header");
  std::vector<int> modes;
  std::vector<std::complex<double>> vals;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto row = split_csv_line(line);
    if (row.size() != 3) throw IoError("trig csv: malformed row");
    modes.push_back(std::stoi(row[0]));
    vals.emplace_back(std::stod(row[1]), std::stod(row[2]));
  }
  int deg = 0;
  for (const int n : modes) deg = std::max(deg, std::abs(n));
  TrigPoly p(deg);
  for (size_t i = 0; i < modes.size(); ++i) p.set_coeff(modes[i], vals[i]);
  return p;
}

void write_spectrum_csv(std::ostream& os, const SpectrumResult& res,
                        const std::vector<bool>& converged, const RunConfig& cfg) {
  os << config_comment(cfg);
  os << "index,re,im,converged\n";
  for (Eigen::Index i = 0; i < res.eigenvalues.size(); ++i) {
    const bool flag = i < static_cast<Eigen::Index>(converged.size()) &&
                      converged[static_cast<size_t>(i)];
    os << i << ',' << format_double(res.eigenvalues(i).real()) << ','
       << format_double(res.eigenvalues(i).imag()) << ',' << (flag ? 1 : 0) << '\n';
  }
}

void write_spectrum_json(std::ostream& os, const SpectrumResult& res,
                         const std::vector<bool>& converged, const RunConfig& cfg) {
  json j;
  j["config"] = config_json(cfg);
  j["order"] = res.order;
  j["epsilon"] = res.epsilon;
  j["sweeps"] = res.sweeps;
  j["max_residual"] = res.max_residual;
  json rows = json::array();
  for (Eigen::Index i = 0; i < res.eigenvalues.size(); ++i) {
    const bool flag = i < static_cast<Eigen::Index>(converged.size()) &&
                      converged[static_cast<size_t>(i)];
    rows.push_back({{"index", i},
                    {"re", res.eigenvalues(i).real()},
                    {"im", res.eigenvalues(i).imag()},
                    {"converged", flag}});
  }
  j["results"] = rows;
  os << j.dump(2) << '\n';
}

void write_convergence_csv(std::ostream& os, const ConvergenceTable& table,
                           const RunConfig& cfg) {
  os << config_comment(cfg);
  os << "order,index,re,im,diff_to_prev,converged\n";
  for (size_t r = 0; r < table.orders.size(); ++r) {
    for (Eigen::Index i = 0; i < table.values[r].size(); ++i) {
      const bool flag = r > 0 && table.converged[r][static_cast<size_t>(i)];
      os << table.orders[r] << ',' << i << ','
         << format_double(table.values[r](i).real()) << ','
         << format_double(table.values[r](i).imag()) << ','
         << format_double(table.diffs[r](i)) << ',' << (flag ? 1 : 0) << '\n';
    }
  }
}

void write_solution_csv(std::ostream& os, const SolveResult& sol, const RunConfig& cfg) {
  os << config_comment(cfg);
  os << "x,y,yprime\n";
  for (Eigen::Index i = 0; i < sol.x.size(); ++i)
    os << format_double(sol.x(i)) << ',' << format_double(sol.y(i)) << ','
       << format_double(sol.yprime(i)) << '\n';
}

void write_solution_json(std::ostream& os, const SolveResult& sol, const RunConfig& cfg) {
  json j;
  j["config"] = config_json(cfg);
  j["results"] = {{"epsilon", sol.epsilon},
                  {"nodes", sol.x.size()},
                  {"mean_phi", sol.mean_phi},
                  {"periodicity_defect", sol.periodicity_defect},
                  {"ode_residual", sol.ode_residual}};
  os << j.dump(2) << '\n';
}

void write_trace_csv(std::ostream& os, const EvolutionTrace& trace,
                     Eigen::Index n_max, const RunConfig& cfg) {
  os << config_comment(cfg);
  os << "t";
  for (Eigen::Index n = -n_max; n <= n_max; ++n) os << ",mode_" << n;
  os << ",total_norm,growth\n";
  for (size_t r = 0; r < trace.times.size(); ++r) {
    os << format_double(trace.times[r]);
    for (Eigen::Index n = -n_max; n <= n_max; ++n)
      os << ',' << format_double(std::abs(trace.states[r].coeff(static_cast<int>(n))));
    os << ',' << format_double(trace.norms[r]) << ','
       << format_double(trace.growth[r]) << '\n';
  }
}

json report_json(const VerificationReport& report, const RunConfig& cfg) {
  json checks = json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name},
                      {"status", c.pass ? "pass" : "fail"},
                      {"residual", c.residual},
                      {"tolerance", c.tolerance},
                      {"runtime_s", c.runtime_s}});
  json j;
  j["config"] = config_json(cfg);
  j["checks"] = checks;
  j["results"] = {{"overall", report.all_pass() ? "pass" : "fail"}};
  return j;
}

void write_text_file(const std::string& output_dir, const std::string& name,
                     const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + output_dir);
  const fs::path path = fs::path(output_dir) / name;
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path.string());
  os << content;
  if (!os.good()) throw IoError("write failed: " + path.string());
}

}  // namespace bfheat
