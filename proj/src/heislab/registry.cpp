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

#include "heislab/registry.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace heislab {
namespace {

struct Entry {
  const char* name;
  std::size_t n_params;
  std::vector<double> defaults;
  bool periodic;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> kEntries = {
      {"poly_radial", 0, {}, true},
      {"vertical_sq", 0, {}, false},
      {"exp_linear", 1, {0.5}, true},
      {"cos_theta", 0, {}, true},
      {"gauss_bump", 1, {1.0}, true},
  };
  return kEntries;
}

const Entry& lookup(std::string_view name) {
  for (const auto& e : entries()) {
    if (name == e.name) return e;
  }
  throw std::invalid_argument("unknown function '" + std::string(name) + "'");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_number(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("malformed number '" + std::string(s) + "'");
  }
  return v;
}

Jet empty_jet(Eigen::Index r) {
  Jet j;
  j.grad_w = Vector::Zero(r);
  j.hess_ww = Matrix::Zero(r, r);
  j.hess_wc = Vector::Zero(r);
  return j;
}

}  // namespace

std::string FunctionSpec::to_string() const {
  if (params.empty()) return name;
  std::string out = name + "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", params[i]);
    if (i) out += ",";
    out += buf;
  }
  return out + ")";
}

bool FunctionSpec::periodic() const { return lookup(name).periodic; }

FunctionSpec parse_function_spec(std::string_view text) {
  text = trim(text);
  const auto open = text.find('(');
  FunctionSpec spec;
  spec.name = std::string(trim(text.substr(0, open)));
  const Entry& entry = lookup(spec.name);
  if (open == std::string_view::npos) {
    spec.params = entry.defaults;
    return spec;
  }
  if (text.back() != ')') {
    throw std::invalid_argument("unterminated parameter list in '" +
                                std::string(text) + "'");
  }
  std::string_view inner = text.substr(open + 1, text.size() - open - 2);
  while (!trim(inner).empty()) {
    const auto comma = inner.find(',');
    spec.params.push_back(parse_number(inner.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    inner.remove_prefix(comma + 1);
  }
  if (spec.params.size() != entry.n_params) {
    throw std::invalid_argument("function '" + spec.name + "' takes " +
                                std::to_string(entry.n_params) +
                                " parameter(s)");
  }
  return spec;
}

const std::vector<std::string>& registry_names() {
  static const std::vector<std::string> kNames = [] {
    std::vector<std::string> out;
    for (const auto& e : entries()) out.emplace_back(e.name);
    return out;
  }();
  return kNames;
}

std::vector<FunctionSpec> default_registry() {
  std::vector<FunctionSpec> out;
  for (const auto& e : entries()) out.push_back({e.name, e.defaults});
  return out;
}

CylinderFunction make_registry_function(const FunctionSpec& spec,
                                        const Projection& projection,
                                        Vertical vertical) {
  const Entry& entry = lookup(spec.name);
  if (spec.params.size() != entry.n_params) {
    throw std::invalid_argument("function '" + spec.name +
                                "' has the wrong number of parameters");
  }
  if (vertical == Vertical::Circle && !entry.periodic) {
    throw std::invalid_argument("function '" + spec.name +
                                "' is not periodic in the vertical argument");
  }
  const std::string name = spec.to_string();

  if (spec.name == "poly_radial") {
    return CylinderFunction::analytic(
        name, projection, vertical, [](const Vector& pw, double) {
          Jet j = empty_jet(pw.size());
          j.value = pw.squaredNorm();
          j.grad_w = 2.0 * pw;
          j.hess_ww = 2.0 * Matrix::Identity(pw.size(), pw.size());
          return j;
        });
  }
  if (spec.name == "vertical_sq") {
    return CylinderFunction::analytic(
        name, projection, vertical, [](const Vector& pw, double c) {
          Jet j = empty_jet(pw.size());
          j.value = c * c;
          j.d_c = 2.0 * c;
          j.d_cc = 2.0;
          return j;
        });
  }
  if (spec.name == "exp_linear") {
    const double lambda = spec.params[0];
    return CylinderFunction::analytic(
        name, projection, vertical, [lambda](const Vector& pw, double) {
          Jet j = empty_jet(pw.size());
          const double e = std::exp(lambda * pw[0]);
          j.value = e;
          j.grad_w[0] = lambda * e;
          j.hess_ww(0, 0) = lambda * lambda * e;
          return j;
        });
  }
  if (spec.name == "cos_theta") {
    return CylinderFunction::analytic(
        name, projection, vertical, [](const Vector& pw, double c) {
          Jet j = empty_jet(pw.size());
          j.value = std::cos(c);
          j.d_c = -std::sin(c);
          j.d_cc = -std::cos(c);
          return j;
        });
  }
  // gauss_bump
  const double sigma = spec.params[0];
  if (!(sigma > 0.0)) throw std::invalid_argument("gauss_bump needs sigma > 0");
  const double inv_var = 1.0 / (sigma * sigma);
  return CylinderFunction::analytic(
      name, projection, vertical, [inv_var](const Vector& pw, double) {
        Jet j = empty_jet(pw.size());
        const double e = std::exp(-0.5 * inv_var * pw.squaredNorm());
        j.value = e;
        j.grad_w = -inv_var * e * pw;
        j.hess_ww = inv_var * e *
                    (inv_var * pw * pw.transpose() -
                     Matrix::Identity(pw.size(), pw.size()));
        return j;
      });
}

}  // namespace heislab
