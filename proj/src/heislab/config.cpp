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

#include "heislab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "heislab/lsi.hpp"

namespace heislab {
namespace {

std::string trim(std::string_view s) {
  auto b = s.begin(), e = s.end();
  while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
  return std::string(b, e);
}

// Comma split that ignores commas inside parentheses.
std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size() ||
      !std::isfinite(v)) {
    throw std::invalid_argument("malformed number '" + s + "'");
  }
  return v;
}

template <typename Int>
Int to_int(const std::string& s) {
  Int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    throw std::invalid_argument("malformed integer '" + s + "'");
  }
  return v;
}

std::vector<double> to_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(to_double(item));
  return out;
}

std::vector<int> to_ints(const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split_list(s)) out.push_back(to_int<int>(item));
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += f(v[i]);
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> kSetters = {
      {"form", [](auto& c, const auto& v) { c.form = v; }},
      {"weights", [](auto& c, const auto& v) { c.weights = to_doubles(v); }},
      {"n", [](auto& c, const auto& v) { c.n = to_int<int>(v); }},
      {"projection",
       [](auto& c, const auto& v) { c.projection = to_ints(v); }},
      {"t", [](auto& c, const auto& v) { c.t = to_doubles(v); }},
      {"N", [](auto& c, const auto& v) { c.steps = to_int<int>(v); }},
      {"m", [](auto& c, const auto& v) { c.m = to_int<std::size_t>(v); }},
      {"seed",
       [](auto& c, const auto& v) { c.seed = to_int<std::uint64_t>(v); }},
      {"f",
       [](auto& c, const auto& v) {
         c.functions.clear();
         for (const auto& item : split_list(v)) {
           c.functions.push_back(parse_function_spec(item));
         }
       }},
      {"c_ref", [](auto& c, const auto& v) { c.c_ref = to_double(v); }},
      {"out", [](auto& c, const auto& v) { c.out = v; }},
      {"delta_t", [](auto& c, const auto& v) { c.delta_t = to_double(v); }},
      {"t_small", [](auto& c, const auto& v) { c.t_small = to_double(v); }},
      {"K", [](auto& c, const auto& v) { c.K = to_int<int>(v); }},
      {"k_window", [](auto& c, const auto& v) { c.k_window = to_int<int>(v); }},
      {"lambdas", [](auto& c, const auto& v) { c.lambdas = to_doubles(v); }},
      {"dims", [](auto& c, const auto& v) { c.dims = to_ints(v); }},
      {"scan_forms",
       [](auto& c, const auto& v) { c.scan_forms = split_list(v); }},
      {"target", [](auto& c, const auto& v) { c.target = to_doubles(v); }},
      {"source", [](auto& c, const auto& v) { c.source = to_doubles(v); }},
  };
  return kSetters;
}

void validate(ExperimentConfig& c, const std::set<std::string>& seen,
              std::vector<std::string>& errors) {
  auto err = [&](std::string msg) { errors.push_back(std::move(msg)); };
  const std::size_t before = errors.size();

  if (c.form == "isotropic") {
    if (!c.weights.empty()) {
      err("key 'weights' does not apply to form = isotropic");
    }
  } else if (c.form == "nonisotropic" || c.form == "trace_class") {
    if (c.weights.empty()) {
      err("form = " + c.form + " requires key 'weights'");
    } else {
      const int inferred = static_cast<int>(c.weights.size());
      if (seen.count("n") && c.n != inferred) {
        err("n = " + std::to_string(c.n) + " disagrees with " +
            std::to_string(inferred) + " weights");
      }
      c.n = inferred;
    }
  } else {
    err("unknown form '" + c.form +
        "' (expected isotropic, nonisotropic or trace_class)");
  }
  if (c.n < 1) err("n must be >= 1");

  std::optional<SymplecticForm> form;
  if (errors.size() == before) {
    try {
      form.emplace(c.build_form());
    } catch (const std::exception& e) {
      err(std::string("form: ") + e.what());
    }
  }
  if (form) {
    try {
      const Projection p = c.build_projection();
      if (!check_hormander(*form, p)) {
        err("projection fails the Hormander condition: the form vanishes on "
            "the selected coordinates");
      }
    } catch (const std::exception& e) {
      err(std::string("projection: ") + e.what());
    }
    const std::size_t len = static_cast<std::size_t>(form->dimension()) + 1;
    if (!c.target.empty() && c.target.size() != len) {
      err("target must have " + std::to_string(len) + " entries (w_1..w_" +
          std::to_string(len - 1) + ", c)");
    }
    if (!c.source.empty() && c.source.size() != len) {
      err("source must have " + std::to_string(len) + " entries");
    }
  }

  if (c.t.empty()) err("t must list at least one time");
  for (double t : c.t) {
    if (!(t > 0.0)) err("every t must be > 0");
  }
  if (c.steps < 1) err("N must be >= 1");
  if (c.m < 2) err("m must be >= 2");
  if (c.functions.empty()) err("f must list at least one function");
  if (!(c.c_ref > 0.0)) err("c_ref must be > 0");
  if (c.out.empty()) err("out must be a nonempty path");
  if (!(c.delta_t > 0.0)) err("delta_t must be > 0");
  if (!c.t.empty() && c.delta_t >= *std::min_element(c.t.begin(), c.t.end())) {
    err("delta_t must be smaller than every t");
  }
  if (!(c.t_small > 0.0)) err("t_small must be > 0");
  if (c.K < 8) err("K must be >= 8");
  if (c.k_window < 1) err("k_window must be >= 1");
  if (c.dims.empty()) err("dims must list at least one dimension");
  for (int d : c.dims) {
    if (d < 1) err("every entry of dims must be >= 1");
  }
  if (c.scan_forms.empty()) err("scan_forms must list at least one family");
  for (const auto& name : c.scan_forms) {
    try {
      parse_family(name);
    } catch (const std::exception& e) {
      err(std::string("scan_forms: ") + e.what());
    }
  }
}

}  // namespace

SymplecticForm ExperimentConfig::build_form() const {
  if (form == "isotropic") return make_isotropic_form(n);
  if (form == "nonisotropic") return make_nonisotropic_form(weights);
  if (form == "trace_class") {
    return make_trace_class_form(weights, static_cast<int>(weights.size()))
        .second;
  }
  throw std::invalid_argument("unknown form '" + form + "'");
}

WienerModel ExperimentConfig::build_model() const {
  if (form == "trace_class") {
    return make_trace_class_form(weights, static_cast<int>(weights.size()))
        .first;
  }
  return WienerModel{n, std::nullopt};
}

Projection ExperimentConfig::build_projection() const {
  std::vector<int> idx;
  for (int i : projection) idx.push_back(i - 1);
  return Projection(std::move(idx), 2 * n);
}

std::vector<double> ExperimentConfig::resolved_target() const {
  if (!target.empty()) return target;
  std::vector<double> out(static_cast<std::size_t>(2 * n + 1), 0.0);
  out[0] = 3.0;
  out[1] = 4.0;
  return out;
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream os;
  auto num = [](double v) { return fmt(v); };
  auto integer = [](int v) { return std::to_string(v); };
  os << "form = " << form << "\n";
  if (!weights.empty()) os << "weights = " << join(weights, num) << "\n";
  os << "n = " << n << "\n";
  os << "projection = " << join(projection, integer) << "\n";
  os << "t = " << join(t, num) << "\n";
  os << "N = " << steps << "\n";
  os << "m = " << m << "\n";
  os << "seed = " << seed << "\n";
  os << "f = "
     << join(functions, [](const FunctionSpec& f) { return f.to_string(); })
     << "\n";
  os << "c_ref = " << fmt(c_ref) << "\n";
  os << "out = " << out << "\n";
  os << "delta_t = " << fmt(delta_t) << "\n";
  os << "t_small = " << fmt(t_small) << "\n";
  os << "K = " << K << "\n";
  os << "k_window = " << k_window << "\n";
  os << "lambdas = " << join(lambdas, num) << "\n";
  os << "dims = " << join(dims, integer) << "\n";
  os << "scan_forms = "
     << join(scan_forms, [](const std::string& s) { return s; }) << "\n";
  if (!target.empty()) os << "target = " << join(target, num) << "\n";
  if (!source.empty()) os << "source = " << join(source, num) << "\n";
  return os.str();
}

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["form"] = form;
  j["weights"] = weights;
  j["n"] = n;
  j["projection"] = projection;
  j["t"] = t;
  j["N"] = steps;
  j["m"] = m;
  j["seed"] = seed;
  std::vector<std::string> fs;
  for (const auto& f : functions) fs.push_back(f.to_string());
  j["f"] = fs;
  j["c_ref"] = c_ref;
  j["out"] = out;
  j["delta_t"] = delta_t;
  j["t_small"] = t_small;
  j["K"] = K;
  j["k_window"] = k_window;
  j["lambdas"] = lambdas;
  j["dims"] = dims;
  j["scan_forms"] = scan_forms;
  j["target"] = resolved_target();
  j["source"] = source;
  return j;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> kKeys = [] {
    std::vector<std::string> out;
    for (const auto& [k, _] : setters()) out.push_back(k);
    return out;
  }();
  return kKeys;
}

ConfigResult parse_config(std::string_view text) {
  ConfigResult result;
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      result.errors.push_back(where + "expected 'key = value'");
      continue;
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      result.errors.push_back(where + "unknown key '" + key + "'");
      continue;
    }
    try {
      it->second(cfg, value);
      seen.insert(key);
    } catch (const std::exception& e) {
      result.errors.push_back(where + key + ": " + e.what());
    }
  }
  validate(cfg, seen, result.errors);
  if (result.errors.empty()) result.config = std::move(cfg);
  return result;
}

}  // namespace heislab
