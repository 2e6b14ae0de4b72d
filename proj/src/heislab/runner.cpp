// Copyright 2026 The heislab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "heislab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "heislab/calculus.hpp"
#include "heislab/diffusion.hpp"
#include "heislab/distance.hpp"
#include "heislab/group.hpp"
#include "heislab/lsi.hpp"
#include "heislab/registry.hpp"

namespace heislab {
namespace {

using json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string file_safe(const std::string& s) {
  std::string out;
  for (char ch : s) {
    const bool keep = std::isalnum(static_cast<unsigned char>(ch)) ||
                      ch == '_' || ch == '.' || ch == '-';
    out += keep ? ch : '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

// Suffix distinguishing per-time artifacts when the grid has several times.
std::string time_suffix(const ExperimentConfig& cfg, double t) {
  return cfg.t.size() > 1 ? "_t" + file_safe(num(t)) : "";
}

json estimate_json(const McEstimate& e) {
  return json{{"mean", e.mean}, {"std_error", e.std_error}, {"m", e.m}};
}

PathConfig path_config(const ExperimentConfig& cfg, double t) {
  return PathConfig{t, cfg.steps, cfg.seed};
}

std::vector<double> column_values(const EndpointSet& set, bool vertical) {
  std::vector<double> out(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    out[i] = vertical ? set.c()[i] * set.c()[i] : set.w().col(i).squaredNorm();
  }
  return out;
}

std::string endpoints_csv(const EndpointSet& set) {
  std::ostringstream os;
  os << "sample";
  for (int j = 1; j <= set.dimension(); ++j) os << ",w_" << j;
  os << ",c,theta\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    const GroupElement g = set.at(i);
    const ReducedElement r = set.reduced_at(i);
    os << i << "," << to_csv_row(g) << "," << num(r.theta) << "\n";
  }
  return os.str();
}

std::string histogram_dat(const std::vector<double>& x, int bins) {
  double sd = 0.0;
  for (double v : x) sd += v * v;
  sd = std::sqrt(sd / static_cast<double>(x.size()));
  const double lo = -4.0 * sd, hi = 4.0 * sd;
  std::vector<std::size_t> count(static_cast<std::size_t>(bins), 0);
  const double width = (hi - lo) / bins;
  for (double v : x) {
    if (!(width > 0.0)) break;
    const long b = static_cast<long>(std::floor((v - lo) / width));
    if (b >= 0 && b < bins) ++count[static_cast<std::size_t>(b)];
  }
  std::ostringstream os;
  os << "# center density\n";
  for (int b = 0; b < bins; ++b) {
    const double density = static_cast<double>(count[b]) /
                           (static_cast<double>(x.size()) * width);
    os << num(lo + (b + 0.5) * width) << " " << num(density) << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------- simulate

Report run_simulate(const ExperimentConfig& cfg, const RunOptions& opt) {
  Report rep;
  const SymplecticForm form = cfg.build_form();
  const Projection proj = cfg.build_projection();
  const int dim = form.dimension();
  std::ostringstream csv;
  csv << "t,quantity,mean,std_error,exact,allowance,pass\n";
  json rows = json::array();

  for (double t : cfg.t) {
    const EndpointSet set =
        simulate_endpoints(form, path_config(cfg, t), cfg.m, opt.workers);
    if (opt.dump_endpoints && t == cfg.t.front()) {
      rep.files.emplace_back("endpoints.csv", endpoints_csv(set));
    }
    rep.files.emplace_back("vertical_hist" + time_suffix(cfg, t) + ".dat",
                           histogram_dat(set.c(), 60));

    struct Moment {
      const char* name;
      bool vertical;
      double exact;
      double allowance;
    };
    const double c_sq = form.frobenius_sq() * t * t / 8.0;
    const Moment moments[] = {
        {"E|w|^2", false, dim * t, 0.0},
        {"E[c^2]", true, c_sq, c_sq / cfg.steps},
    };
    for (const auto& mo : moments) {
      const McEstimate e = summarize(column_values(set, mo.vertical));
      const bool pass =
          std::abs(e.mean - mo.exact) <= 3.0 * e.std_error + mo.allowance;
      rep.all_pass = rep.all_pass && pass;
      rows.push_back(json{{"kind", "moment"},
                          {"t", t},
                          {"quantity", mo.name},
                          {"estimate", estimate_json(e)},
                          {"exact", mo.exact},
                          {"allowance", mo.allowance},
                          {"pass", pass}});
      csv << num(t) << "," << mo.name << "," << num(e.mean) << ","
          << num(e.std_error) << "," << num(mo.exact) << ","
          << num(mo.allowance) << "," << (pass ? "true" : "false") << "\n";
    }
    for (const auto& fs : cfg.functions) {
      const CylinderFunction f =
          make_registry_function(fs, proj, Vertical::Line);
      const McEstimate e = summarize(evaluate(f, set, Space::G, opt.workers));
      rows.push_back(json{{"kind", "expectation"},
                          {"t", t},
                          {"quantity", "E[" + fs.to_string() + "]"},
                          {"estimate", estimate_json(e)}});
      csv << num(t) << ",E[" << fs.to_string() << "]," << num(e.mean) << ","
          << num(e.std_error) << ",,,\n";
    }
  }
  rep.body["rows"] = std::move(rows);
  rep.summary_csv = csv.str();
  return rep;
}

// -------------------------------------------------------------- heat-check

FunctionSpec initial_condition_function(const ExperimentConfig& cfg) {
  for (const auto& fs : cfg.functions) {
    if (fs.name == "gauss_bump") return fs;
  }
  return parse_function_spec("gauss_bump");
}

Report run_heat_check(const ExperimentConfig& cfg, const RunOptions& opt) {
  Report rep;
  const SymplecticForm form = cfg.build_form();
  const Projection proj = cfg.build_projection();
  std::ostringstream csv;
  csv << "t,f,time_derivative,half_generator,residual,std_error,pass\n";
  json rows = json::array();

  for (const auto& fs : cfg.functions) {
    const CylinderFunction f = make_registry_function(fs, proj, Vertical::Line);
    std::ostringstream dat;
    dat << "# t residual\n";
    for (double t : cfg.t) {
      if (!(cfg.delta_t < t)) {
        throw std::invalid_argument("delta_t must be smaller than every t");
      }
      const HeatResidual h =
          heat_equation_residual(form, path_config(cfg, t), f, cfg.m,
                                 cfg.delta_t, Space::G, opt.workers);
      const bool pass = h.residual <= 3.0 * h.std_error;
      rep.all_pass = rep.all_pass && pass;
      rows.push_back(json{{"kind", "heat"},
                          {"t", t},
                          {"f", fs.to_string()},
                          {"time_derivative", h.time_derivative},
                          {"half_generator", h.half_generator},
                          {"residual", h.residual},
                          {"std_error", h.std_error},
                          {"m", h.m},
                          {"pass", pass}});
      csv << num(t) << "," << fs.to_string() << "," << num(h.time_derivative)
          << "," << num(h.half_generator) << "," << num(h.residual) << ","
          << num(h.std_error) << "," << (pass ? "true" : "false") << "\n";
      dat << num(t) << " " << num(h.residual) << "\n";
    }
    rep.files.emplace_back("heat_" + file_safe(fs.to_string()) + ".dat",
                           dat.str());
  }

  // Initial condition: E f(g_t) = f(e) + (t/2) L_H f(e) + O(t^2).
  const FunctionSpec ic_spec = initial_condition_function(cfg);
  const CylinderFunction ic = make_registry_function(ic_spec, proj,
                                                     Vertical::Line);
  const GroupElement e = GroupElement::identity(form.dimension());
  const double oracle =
      ic(e) + 0.5 * cfg.t_small * sub_laplacian(form, ic, e);
  const McEstimate est = mc_expect(form, path_config(cfg, cfg.t_small), ic,
                                   cfg.m, Space::G, opt.workers);
  const bool pass = std::abs(est.mean - oracle) <= 3.0 * est.std_error;
  rep.all_pass = rep.all_pass && pass;
  rows.push_back(json{{"kind", "initial_condition"},
                      {"t", cfg.t_small},
                      {"f", ic_spec.to_string()},
                      {"estimate", estimate_json(est)},
                      {"f_e", ic(e)},
                      {"oracle", oracle},
                      {"pass", pass}});
  csv << num(cfg.t_small) << "," << ic_spec.to_string()
      << ",initial_condition,," << num(std::abs(est.mean - oracle)) << ","
      << num(est.std_error) << "," << (pass ? "true" : "false") << "\n";

  rep.body["rows"] = std::move(rows);
  rep.summary_csv = csv.str();
  return rep;
}

// ---------------------------------------------------------------- lsi-scan

Report run_lsi_scan(const ExperimentConfig& cfg, const RunOptions& opt) {
  Report rep;
  ScanSpec spec;
  spec.families.clear();
  for (const auto& name : cfg.scan_forms) spec.families.push_back(parse_family(name));
  spec.dims = cfg.dims;
  spec.times = cfg.t;
  spec.functions = cfg.functions;
  spec.projection = cfg.projection;
  spec.steps = cfg.steps;
  spec.m = cfg.m;
  spec.base_seed = cfg.seed;
  spec.c_ref = cfg.c_ref;
  const ScanResult result = lsi_scan(spec, opt.workers);

  std::ostringstream csv;
  csv << "n,t,form,f,entropy,entropy_se,energy,energy_se,ratio,ratio_se,"
         "bound,pass\n";
  json rows = json::array();
  for (const auto& cell : result.cells) {
    const std::string f_label =
        cell.space == Space::G ? cell.f_name : cell.f_name + "@reduced";
    const LsiReport& r = cell.report;
    const bool pass = cell.ok && r.pass() && r.entropy_nonnegative();
    rep.all_pass = rep.all_pass && pass;
    json row{{"kind", "cell"},
             {"form", family_name(cell.family)},
             {"f_name", cell.f_name},
             {"space", space_name(cell.space)},
             {"n", cell.n},
             {"t", cell.t},
             {"ok", cell.ok}};
    if (cell.ok) {
      row["entropy"] = estimate_json(r.entropy);
      row["energy"] = estimate_json(r.energy);
      row["ratio_defined"] = r.ratio_defined;
      row["ratio"] = r.ratio_defined ? json(r.ratio) : json(nullptr);
      row["ratio_error"] = r.ratio_defined ? json(r.ratio_error) : json(nullptr);
      row["m"] = r.m;
      row["base_seed"] = r.base_seed;
      row["bound"] = r.bound();
      row["entropy_nonnegative"] = r.entropy_nonnegative();
    } else {
      row["error"] = cell.error;
    }
    row["pass"] = pass;
    rows.push_back(std::move(row));

    csv << cell.n << "," << num(cell.t) << "," << family_name(cell.family)
        << "," << f_label << ",";
    if (cell.ok) {
      csv << num(r.entropy.mean) << "," << num(r.entropy.std_error) << ","
          << num(r.energy.mean) << "," << num(r.energy.std_error) << ",";
      if (r.ratio_defined) {
        csv << num(r.ratio) << "," << num(r.ratio_error);
      } else {
        csv << ",";
      }
      csv << "," << num(r.bound());
    } else {
      csv << ",,,,,,";
    }
    csv << "," << (pass ? "true" : "false") << "\n";
  }

  json per_dim = json::array();
  std::map<std::string, std::ostringstream> dats;
  for (const auto& [key, value] : result.summary.per_dimension_max) {
    per_dim.push_back(json{{"f", key.first},
                           {"n", key.second},
                           {"max_ratio", value.first},
                           {"ratio_error", value.second}});
    auto& dat = dats[key.first];
    if (dat.tellp() == 0) dat << "# n max_ratio\n";
    dat << key.second << " " << num(value.first) << "\n";
  }
  for (auto& [f, dat] : dats) {
    rep.files.emplace_back("max_ratio_vs_n_" + file_safe(f) + ".dat",
                           dat.str());
  }
  json per_form = json::array();
  for (const auto& [key, value] : result.summary.per_form_max) {
    per_form.push_back(
        json{{"form", key.first}, {"f", key.second}, {"max_ratio", value}});
  }
  for (const auto& s : dimension_spread(result.summary)) {
    rep.all_pass = rep.all_pass && s.pass;
    rows.push_back(json{{"kind", "spread"},
                        {"f_name", s.f_name},
                        {"min_ratio", s.min_ratio},
                        {"max_ratio", s.max_ratio},
                        {"allowance", s.allowance},
                        {"pass", s.pass}});
  }
  rep.body["rows"] = std::move(rows);
  rep.body["per_dimension_max"] = std::move(per_dim);
  rep.body["per_form_max"] = std::move(per_form);
  rep.summary_csv = csv.str();
  return rep;
}

// ---------------------------------------------------------- quotient-check

Report run_quotient_check(const ExperimentConfig& cfg, const RunOptions& opt) {
  Report rep;
  const SymplecticForm form = cfg.build_form();
  const Projection proj = cfg.build_projection();
  std::vector<FunctionSpec> periodic;
  json skipped = json::array();
  for (const auto& fs : cfg.functions) {
    if (fs.periodic()) {
      periodic.push_back(fs);
    } else {
      skipped.push_back(fs.to_string());
    }
  }
  if (periodic.empty()) {
    throw std::invalid_argument(
        "quotient-check needs at least one periodic function in 'f'");
  }

  std::ostringstream csv;
  csv << "t,f,quantity,value_G,value_reduced,equal\n";
  json rows = json::array();
  for (double t : cfg.t) {
    const EndpointSet set =
        simulate_endpoints(form, path_config(cfg, t), cfg.m, opt.workers);
    for (const auto& fs : periodic) {
      const CylinderFunction on_reduced =
          make_registry_function(fs, proj, Vertical::Circle);
      const CylinderFunction lifted = compose_with_quotient(on_reduced);
      const SampleValues vr =
          sample_values(form, on_reduced, set, Space::Reduced, opt.workers);
      const SampleValues vg =
          sample_values(form, lifted, set, Space::G, opt.workers);
      auto squares = [](const std::vector<double>& f) {
        std::vector<double> out(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] * f[i];
        return out;
      };
      const std::pair<const char*, std::pair<McEstimate, McEstimate>> qs[] = {
          {"entropy", {entropy_from_values(vg.f), entropy_from_values(vr.f)}},
          {"energy", {summarize(vg.grad_sq), summarize(vr.grad_sq)}},
          {"l2_norm_sq", {summarize(squares(vg.f)), summarize(squares(vr.f))}},
      };
      json row{{"kind", "quotient"}, {"t", t}, {"f", fs.to_string()}};
      bool pass = true;
      for (const auto& [name, pair] : qs) {
        const auto& [g, r] = pair;
        const bool equal = std::memcmp(&g.mean, &r.mean, sizeof(double)) == 0 &&
                           std::memcmp(&g.std_error, &r.std_error,
                                       sizeof(double)) == 0;
        pass = pass && equal;
        row[name] = json{{"G", estimate_json(g)},
                         {"reduced", estimate_json(r)},
                         {"G_hex", hex(g.mean)},
                         {"reduced_hex", hex(r.mean)},
                         {"equal", equal}};
        csv << num(t) << "," << fs.to_string() << "," << name << ","
            << hex(g.mean) << "," << hex(r.mean) << ","
            << (equal ? "true" : "false") << "\n";
      }
      row["pass"] = pass;
      rep.all_pass = rep.all_pass && pass;
      rows.push_back(std::move(row));
    }
  }
  rep.body["rows"] = std::move(rows);
  rep.body["skipped_nonperiodic"] = std::move(skipped);
  rep.summary_csv = csv.str();
  return rep;
}

// ---------------------------------------------------------------- distance

GroupElement element_from(const std::vector<double>& v, int dim) {
  GroupElement g = GroupElement::identity(dim);
  if (v.empty()) return g;
  for (int j = 0; j < dim; ++j) g.w[j] = v[static_cast<std::size_t>(j)];
  g.c = v[static_cast<std::size_t>(dim)];
  return g;
}

Report run_distance(const ExperimentConfig& cfg, const RunOptions&) {
  Report rep;
  const SymplecticForm form = cfg.build_form();
  const int dim = form.dimension();
  const GroupElement x = element_from(cfg.source, dim);
  const GroupElement y = element_from(cfg.resolved_target(), dim);
  const GroupElement rel = multiply(form, inverse(form, x), y);

  DistanceOptions dopt;
  const DistanceResult d = cc_distance(form, x, y, cfg.K, dopt);
  const ReducedDistanceResult dr =
      quotient_distance(form, x, y, cfg.K, cfg.k_window, dopt);

  const double tol = dopt.feasibility_tol * (1.0 + std::abs(rel.c));
  const double lower = rel.w.norm();
  const bool feasible = d.converged && d.residual <= tol;
  const bool above_lower = d.estimate >= lower - 1e-9;
  const bool quotient_ok = dr.estimate <= d.estimate + 1e-6;
  const bool pass = feasible && above_lower && quotient_ok;
  rep.all_pass = pass;

  // Path nodes mapped back through the source: x . (sigma_k, c_k).
  std::ostringstream path_csv, path_dat;
  path_csv << "k";
  for (int j = 1; j <= dim; ++j) path_csv << ",w_" << j;
  path_csv << ",c\n";
  path_dat << "# w_1 w_2\n";
  double c = 0.0;
  const Matrix& nodes = d.path.nodes;
  for (Eigen::Index k = 0; k < nodes.cols(); ++k) {
    if (k > 0) c += 0.5 * form(nodes.col(k - 1), nodes.col(k));
    const GroupElement node =
        multiply(form, x, GroupElement{nodes.col(k), c});
    path_csv << k << "," << to_csv_row(node) << "\n";
    path_dat << num(node.w[0]) << " " << num(node.w[1]) << "\n";
  }
  rep.files.emplace_back("path.csv", path_csv.str());
  rep.files.emplace_back("path.dat", path_dat.str());

  json row{{"kind", "distance"},
           {"estimate", d.estimate},
           {"residual", d.residual},
           {"converged", d.converged},
           {"winning_k", dr.winning_k},
           {"K", d.K},
           {"path_csv_ref", "path.csv"},
           {"reduced_estimate", dr.estimate},
           {"reduced_residual", dr.residual},
           {"reduced_converged", dr.converged},
           {"horizontal_lower_bound", lower},
           {"feasibility_tol", tol},
           {"pass", pass}};
  rep.body["rows"] = json::array({row});
  std::ostringstream csv;
  csv << "estimate,residual,winning_k,K,reduced_estimate,pass\n"
      << num(d.estimate) << "," << num(d.residual) << "," << dr.winning_k
      << "," << d.K << "," << num(dr.estimate) << ","
      << (pass ? "true" : "false") << "\n";
  rep.summary_csv = csv.str();
  return rep;
}

// ----------------------------------------------------------------- levy-cf

Report run_levy_cf(const ExperimentConfig& cfg, const RunOptions& opt) {
  Report rep;
  const SymplecticForm form = cfg.build_form();
  std::ostringstream csv;
  csv << "t,lambda,real,real_se,imag,imag_se,exact,allowance,pass\n";
  json rows = json::array();
  for (double t : cfg.t) {
    const auto points = levy_area_char_function(
        form, path_config(cfg, t), cfg.m, cfg.lambdas, opt.workers);
    const double c_sq = form.frobenius_sq() * t * t / 8.0;
    std::ostringstream est_dat, exact_dat;
    est_dat << "# lambda E[cos(lambda c)]\n";
    exact_dat << "# lambda exact\n";
    for (const auto& p : points) {
      const double exact = levy_area_char_function_exact(form, t, p.lambda);
      const double allowance = p.lambda * p.lambda * c_sq / cfg.steps;
      const bool pass =
          std::abs(p.real.mean - exact) <= 3.0 * p.real.std_error + allowance &&
          std::abs(p.imag.mean) <= 3.0 * p.imag.std_error;
      rep.all_pass = rep.all_pass && pass;
      rows.push_back(json{{"kind", "char_function"},
                          {"t", t},
                          {"lambda", p.lambda},
                          {"real", estimate_json(p.real)},
                          {"imag", estimate_json(p.imag)},
                          {"exact", exact},
                          {"allowance", allowance},
                          {"pass", pass}});
      csv << num(t) << "," << num(p.lambda) << "," << num(p.real.mean) << ","
          << num(p.real.std_error) << "," << num(p.imag.mean) << ","
          << num(p.imag.std_error) << "," << num(exact) << ","
          << num(allowance) << "," << (pass ? "true" : "false") << "\n";
      est_dat << num(p.lambda) << " " << num(p.real.mean) << "\n";
      exact_dat << num(p.lambda) << " " << num(exact) << "\n";
    }
    rep.files.emplace_back("levy_cf" + time_suffix(cfg, t) + ".dat",
                           est_dat.str());
    rep.files.emplace_back("levy_cf_exact" + time_suffix(cfg, t) + ".dat",
                           exact_dat.str());
  }
  rep.body["rows"] = std::move(rows);
  rep.summary_csv = csv.str();
  return rep;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

const char* version_string() { return "0.1.0"; }

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> kSubs = {
      "simulate", "heat-check", "lsi-scan", "quotient-check", "distance",
      "levy-cf"};
  return kSubs;
}

std::string usage() {
  std::ostringstream os;
  os << "usage: heislab <subcommand> [--config <path>] [--set key=value]... "
        "[--workers <int>] [--out <dir>] [--dump-endpoints]\n"
     << "subcommands:\n"
     << "  simulate        endpoint moments of the hypoelliptic Brownian "
        "motion\n"
     << "  heat-check      heat-equation residual and initial condition\n"
     << "  lsi-scan        entropy / energy ratios over dimensions and forms\n"
     << "  quotient-check  bitwise comparison of f on the reduced group and "
        "f o phi on G\n"
     << "  distance        Carnot-Caratheodory distance on G and the reduced "
        "group\n"
     << "  levy-cf         characteristic function of the vertical endpoint\n"
     << "config keys:";
  for (const auto& k : config_keys()) os << " " << k;
  os << "\n";
  return os.str();
}

Report build_report(const std::string& subcommand, const ExperimentConfig& cfg,
                    const RunOptions& opt) {
  Report rep;
  if (subcommand == "simulate") {
    rep = run_simulate(cfg, opt);
  } else if (subcommand == "heat-check") {
    rep = run_heat_check(cfg, opt);
  } else if (subcommand == "lsi-scan") {
    rep = run_lsi_scan(cfg, opt);
  } else if (subcommand == "quotient-check") {
    rep = run_quotient_check(cfg, opt);
  } else if (subcommand == "distance") {
    rep = run_distance(cfg, opt);
  } else if (subcommand == "levy-cf") {
    rep = run_levy_cf(cfg, opt);
  } else {
    throw std::invalid_argument("unknown subcommand '" + subcommand + "'");
  }
  rep.subcommand = subcommand;
  json body{{"schema_version", kSchemaVersion},
            {"subcommand", subcommand},
            {"config", cfg.to_json()},
            {"config_text", cfg.to_text()}};
  for (auto& [k, v] : rep.body.items()) body[k] = std::move(v);
  body["all_pass"] = rep.all_pass;
  rep.body = std::move(body);
  return rep;
}

void write_report(const Report& report, const ExperimentConfig& cfg,
                  const RunOptions& opt, const std::string& dir,
                  double wall_seconds) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) {
    throw IoError("cannot create directory '" + root.string() +
                  "': " + ec.message());
  }
  write_file(root / "report.json", report.body.dump(2) + "\n");
  write_file(root / "summary.csv", report.summary_csv);
  json files = json::array({"report.json", "summary.csv"});
  for (const auto& [name, text] : report.files) {
    write_file(root / name, text);
    files.push_back(name);
  }
  json manifest{{"schema_version", kSchemaVersion},
                {"tool", "heislab"},
                {"version", version_string()},
                {"subcommand", report.subcommand},
                {"seed", cfg.seed},
                {"workers", opt.workers},
                {"timestamp", utc_timestamp()},
                {"wall_time_s", wall_seconds},
                {"all_pass", report.all_pass},
                {"config", cfg.to_json()},
                {"defaults", ExperimentConfig{}.to_json()},
                {"files", files}};
  write_file(root / "manifest.json", manifest.dump(2) + "\n");
}

int run(const std::string& subcommand, const ExperimentConfig& cfg,
        const RunOptions& opt, std::string* err) {
  auto fail = [&](int code, const std::string& msg) {
    if (err) *err = msg;
    return code;
  };
  if (std::find(subcommands().begin(), subcommands().end(), subcommand) ==
      subcommands().end()) {
    return fail(kExitConfigError,
                "unknown subcommand '" + subcommand + "'\n" + usage());
  }
  const auto start = std::chrono::steady_clock::now();
  Report report;
  try {
    report = build_report(subcommand, cfg, opt);
  } catch (const std::invalid_argument& e) {
    return fail(kExitConfigError, std::string("configuration error: ") + e.what());
  } catch (const std::exception& e) {
    return fail(kExitCheckFailed, std::string("run failed: ") + e.what());
  }
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  try {
    write_report(report, cfg, opt, cfg.out, wall);
  } catch (const IoError& e) {
    return fail(kExitIoError, std::string("io error: ") + e.what());
  }
  if (!report.all_pass) {
    return fail(kExitCheckFailed, "one or more rows failed their check; see " +
                                      cfg.out + "/summary.csv");
  }
  return kExitOk;
}

}  // namespace heislab
