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

#include "heislab/lsi.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "heislab/errors.hpp"

namespace heislab {
namespace {

// f^2 below this is treated as exactly zero in f^2 log f^2.
constexpr double kLogFloor = 1e-300;

double xlogx(double x) { return x < kLogFloor ? 0.0 : x * std::log(x); }

Projection projection_from_one_based(const std::vector<int>& one_based,
                                     int dimension) {
  std::vector<int> idx;
  idx.reserve(one_based.size());
  for (int i : one_based) idx.push_back(i - 1);
  return Projection(std::move(idx), dimension);
}

}  // namespace

bool LsiReport::pass() const {
  if (!ratio_defined) return true;
  return ratio <= bound() + 3.0 * ratio_error;
}

bool LsiReport::entropy_nonnegative() const {
  return entropy.mean >= -3.0 * entropy.std_error;
}

SampleValues sample_values(const SymplecticForm& form,
                           const CylinderFunction& f,
                           const EndpointSet& endpoints, Space space,
                           unsigned workers) {
  SampleValues out;
  out.f.resize(endpoints.size());
  out.grad_sq.resize(endpoints.size());
  parallel_for(endpoints.size(), workers, [&](std::size_t i) {
    double v, e;
    if (space == Space::G) {
      const GroupElement g = endpoints.at(i);
      v = f(g);
      e = gradient_norm_sq(form, f, g);
    } else {
      const ReducedElement r = endpoints.reduced_at(i);
      v = f(r);
      e = gradient_norm_sq(form, f, r);
    }
    if (!std::isfinite(v) || !std::isfinite(e)) {
      throw IntegrabilityError("function '" + f.name() +
                               "' or its gradient is not finite at sample " +
                               std::to_string(i));
    }
    out.f[i] = v;
    out.grad_sq[i] = e;
  });
  return out;
}

namespace {

struct EntropyParts {
  McEstimate estimate;
  std::vector<double> influence;  // per-sample first-order term
};

EntropyParts entropy_parts(std::span<const double> f) {
  const std::size_t m = f.size();
  if (m < 2) throw std::invalid_argument("entropy needs m >= 2");
  std::vector<double> a(m), b(m);
  bool any_nonzero = false;
  for (std::size_t i = 0; i < m; ++i) {
    b[i] = f[i] * f[i];
    a[i] = xlogx(b[i]);
    any_nonzero = any_nonzero || f[i] != 0.0;
  }
  if (!any_nonzero) {
    throw std::invalid_argument("entropy of the zero function is undefined");
  }
  const double mean_a = summarize(a).mean;
  const double mean_b = summarize(b).mean;
  const double slope = std::log(mean_b) + 1.0;
  EntropyParts out;
  out.influence.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.influence[i] = a[i] - slope * b[i];
  out.estimate.mean = mean_a - xlogx(mean_b);
  out.estimate.std_error = summarize(out.influence).std_error;
  out.estimate.m = m;
  return out;
}

}  // namespace

McEstimate entropy_from_values(std::span<const double> f) {
  return entropy_parts(f).estimate;
}

LsiReport lsi_from_values(const SampleValues& values, double c_ref) {
  if (values.f.size() != values.grad_sq.size()) {
    throw DimensionError("value and gradient samples differ in length");
  }
  LsiReport report;
  report.c_ref = c_ref;
  EntropyParts ent = entropy_parts(values.f);
  report.entropy = ent.estimate;
  report.energy = summarize(values.grad_sq);
  report.m = values.f.size();
  const double energy = report.energy.mean;
  report.ratio_defined =
      energy > 0.0 && energy > 5.0 * report.energy.std_error;
  if (report.ratio_defined) {
    report.ratio = report.entropy.mean / energy;
    std::vector<double> r(report.m);
    for (std::size_t i = 0; i < report.m; ++i) {
      r[i] = (ent.influence[i] - report.ratio * values.grad_sq[i]) / energy;
    }
    report.ratio_error = summarize(r).std_error;
  }
  return report;
}

McEstimate dirichlet_energy(const SymplecticForm& form, const PathConfig& cfg,
                            const CylinderFunction& f, std::size_t m,
                            Space space, unsigned workers) {
  const EndpointSet endpoints = simulate_endpoints(form, cfg, m, workers);
  return summarize(sample_values(form, f, endpoints, space, workers).grad_sq);
}

McEstimate entropy(const SymplecticForm& form, const PathConfig& cfg,
                   const CylinderFunction& f, std::size_t m, Space space,
                   unsigned workers) {
  const EndpointSet endpoints = simulate_endpoints(form, cfg, m, workers);
  return entropy_from_values(
      sample_values(form, f, endpoints, space, workers).f);
}

LsiReport lsi_ratio(const SymplecticForm& form, const PathConfig& cfg,
                    const CylinderFunction& f, std::size_t m, Space space,
                    double c_ref, unsigned workers) {
  const EndpointSet endpoints = simulate_endpoints(form, cfg, m, workers);
  LsiReport report =
      lsi_from_values(sample_values(form, f, endpoints, space, workers), c_ref);
  report.f_name = f.name();
  report.space = space;
  report.n = form.half_dimension();
  report.t = cfg.t;
  report.base_seed = cfg.base_seed;
  return report;
}

const char* family_name(FormFamily f) {
  switch (f) {
    case FormFamily::Isotropic:
      return "isotropic";
    case FormFamily::Nonisotropic:
      return "nonisotropic";
    case FormFamily::TraceClass:
      return "trace_class";
  }
  return "?";
}

FormFamily parse_family(const std::string& name) {
  if (name == "isotropic") return FormFamily::Isotropic;
  if (name == "nonisotropic") return FormFamily::Nonisotropic;
  if (name == "trace_class") return FormFamily::TraceClass;
  throw std::invalid_argument("unknown form family '" + name + "'");
}

SymplecticForm make_family_form(FormFamily family, int n) {
  if (n < 1) throw std::invalid_argument("form family needs n >= 1");
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    switch (family) {
      case FormFamily::Isotropic:
        w[j] = 1.0;
        break;
      case FormFamily::Nonisotropic:
        w[j] = j + 2.0;
        break;
      case FormFamily::TraceClass:
        w[j] = 1.0 / ((j + 1.0) * (j + 1.0));
        break;
    }
  }
  if (family == FormFamily::TraceClass) return make_trace_class_form(w, n).second;
  return make_nonisotropic_form(w);
}

ScanResult lsi_scan(const ScanSpec& spec, unsigned workers) {
  ScanResult result;
  // cells[family][n][t] blocks, filled per (n, t) so that all families share
  // one pass over the Brownian increments.
  const std::size_t nf = spec.families.size();
  const std::size_t nd = spec.dims.size();
  const std::size_t nt = spec.times.size();
  std::vector<std::vector<ScanCell>> blocks(nf * nd * nt);
  auto block = [&](std::size_t f, std::size_t d, std::size_t t) -> auto& {
    return blocks[(f * nd + d) * nt + t];
  };

  for (std::size_t di = 0; di < nd; ++di) {
    const int n = spec.dims[di];
    for (std::size_t ti = 0; ti < nt; ++ti) {
      const double t = spec.times[ti];
      std::vector<std::optional<SymplecticForm>> forms(nf);
      std::vector<std::size_t> live;
      for (std::size_t fi = 0; fi < nf; ++fi) {
        auto& cells = block(fi, di, ti);
        for (const auto& fs : spec.functions) {
          cells.push_back({spec.families[fi], n, t, fs.to_string(), Space::G,
                           false, {}, {}});
          if (spec.include_reduced && fs.periodic()) {
            cells.push_back({spec.families[fi], n, t, fs.to_string(),
                             Space::Reduced, false, {}, {}});
          }
        }
        try {
          SymplecticForm form = make_family_form(spec.families[fi], n);
          const Projection proj =
              projection_from_one_based(spec.projection, form.dimension());
          if (!check_hormander(form, proj)) {
            throw std::invalid_argument(
                "projection fails the Hormander condition");
          }
          forms[fi].emplace(std::move(form));
          live.push_back(fi);
        } catch (const std::exception& e) {
          for (auto& cell : cells) cell.error = e.what();
        }
      }
      if (live.empty()) continue;

      std::vector<const SymplecticForm*> ptrs;
      for (std::size_t fi : live) ptrs.push_back(&*forms[fi]);
      std::vector<EndpointSet> sets;
      try {
        sets = simulate_endpoints_shared(
            ptrs, PathConfig{t, spec.steps, spec.base_seed}, spec.m, workers);
      } catch (const std::exception& e) {
        for (std::size_t fi : live) {
          for (auto& cell : block(fi, di, ti)) cell.error = e.what();
        }
        continue;
      }

      for (std::size_t li = 0; li < live.size(); ++li) {
        const std::size_t fi = live[li];
        const SymplecticForm& form = *forms[fi];
        const Projection proj =
            projection_from_one_based(spec.projection, form.dimension());
        for (auto& cell : block(fi, di, ti)) {
          try {
            const FunctionSpec fs = parse_function_spec(cell.f_name);
            const CylinderFunction f = make_registry_function(
                fs, proj,
                cell.space == Space::G ? Vertical::Line : Vertical::Circle);
            LsiReport rep = lsi_from_values(
                sample_values(form, f, sets[li], cell.space, workers),
                spec.c_ref);
            rep.f_name = cell.f_name;
            rep.form_name = family_name(cell.family);
            rep.space = cell.space;
            rep.n = n;
            rep.t = t;
            rep.base_seed = spec.base_seed;
            cell.report = std::move(rep);
            cell.ok = true;
          } catch (const std::exception& e) {
            cell.error = e.what();
          }
        }
      }
    }
  }
  for (auto& cells : blocks) {
    for (auto& cell : cells) result.cells.push_back(std::move(cell));
  }

  for (const auto& cell : result.cells) {
    if (!cell.ok || !cell.report.ratio_defined) continue;
    const auto key = std::make_pair(cell.f_name, cell.n);
    auto it = result.summary.per_dimension_max.find(key);
    if (it == result.summary.per_dimension_max.end() ||
        cell.report.ratio > it->second.first) {
      result.summary.per_dimension_max[key] = {cell.report.ratio,
                                               cell.report.ratio_error};
    }
    const auto fkey =
        std::make_pair(std::string(family_name(cell.family)), cell.f_name);
    auto jt = result.summary.per_form_max.find(fkey);
    if (jt == result.summary.per_form_max.end() ||
        cell.report.ratio > jt->second) {
      result.summary.per_form_max[fkey] = cell.report.ratio;
    }
  }
  return result;
}

std::vector<SpreadCheck> dimension_spread(const ScanSummary& summary,
                                          double relative) {
  std::map<std::string, std::vector<std::pair<double, double>>> by_f;
  for (const auto& [key, val] : summary.per_dimension_max) {
    by_f[key.first].push_back(val);
  }
  std::vector<SpreadCheck> out;
  for (const auto& [name, vals] : by_f) {
    const auto lo = std::min_element(vals.begin(), vals.end());
    const auto hi = std::max_element(vals.begin(), vals.end());
    SpreadCheck s;
    s.f_name = name;
    s.min_ratio = lo->first;
    s.max_ratio = hi->first;
    s.allowance = relative * lo->first +
                  3.0 * std::hypot(lo->second, hi->second);
    s.pass = s.max_ratio - s.min_ratio <= s.allowance;
    out.push_back(s);
  }
  return out;
}

}  // namespace heislab
