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

// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "heislab/calculus.hpp"
#include "heislab/diffusion.hpp"
#include "heislab/distance.hpp"
#include "heislab/group.hpp"
#include "heislab/lsi.hpp"
#include "heislab/registry.hpp"
#include "heislab/runner.hpp"
#include "support.hpp"

using namespace heislab;

namespace {

unsigned g_workers = 1;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

int run_criterion(int id, const char* title, double limit_s,
                  const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.notes.push_back(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  if (limit_s > 0 && secs > limit_s) {
    o.pass = false;
    o.notes.push_back(fmt("runtime %.1f s exceeds %.0f s", secs, limit_s));
  }
  std::printf("criterion %d: %s  %s [%s; %.1f s]\n", id,
              o.pass ? "PASS" : "FAIL", title, o.detail.c_str(), secs);
  const std::size_t shown = std::min<std::size_t>(o.notes.size(), 12);
  for (std::size_t i = 0; i < shown; ++i) {
    std::printf("    %s\n", o.notes[i].c_str());
  }
  if (o.notes.size() > shown) {
    std::printf("    ... %zu more\n", o.notes.size() - shown);
  }
  std::fflush(stdout);
  return o.pass ? 0 : 1;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, 8) == 0; }

// ------------------------------------------------------------------- 1

Outcome group_suite() {
  Outcome o;
  const std::vector<double> weights{1.0, 2.5, 0.3};
  const SymplecticForm f = make_nonisotropic_form(weights);
  const Projection p({0, 1, 4, 5}, 6);
  std::mt19937_64 rng(2024);
  const int cases = 10000;
  const double tol = 1e-12;
  int bad[6] = {0, 0, 0, 0, 0, 0};
  for (int k = 0; k < cases; ++k) {
    const GroupElement a = testing::random_element(rng, 6, 2.0);
    const GroupElement b = testing::random_element(rng, 6, 2.0);
    const GroupElement c = testing::random_element(rng, 6, 2.0);
    const double scale =
        1.0 + std::max({a.w.squaredNorm(), b.w.squaredNorm(),
                        c.w.squaredNorm(), std::abs(a.c), std::abs(b.c),
                        std::abs(c.c)});
    auto close = [&](const GroupElement& x, const GroupElement& y) {
      return (x.w - y.w).norm() <= tol * scale &&
             std::abs(x.c - y.c) <= tol * scale;
    };
    auto close_r = [&](const ReducedElement& x, const ReducedElement& y) {
      return (x.w - y.w).norm() <= tol * scale &&
             angle_distance(x.theta, y.theta) <= tol * scale;
    };
    // associativity on G and on the reduced group
    if (!close(multiply(f, multiply(f, a, b), c),
               multiply(f, a, multiply(f, b, c))) ||
        !close_r(multiply_reduced(f, multiply_reduced(f, quotient(a), quotient(b)),
                                  quotient(c)),
                 multiply_reduced(f, quotient(a),
                                  multiply_reduced(f, quotient(b), quotient(c))))) {
      ++bad[0];
    }
    const GroupElement e = GroupElement::identity(6);
    if (!close(multiply(f, a, e), a) || !close(multiply(f, e, a), a)) ++bad[1];
    if (!close(multiply(f, a, inverse(f, a)), e) ||
        !close(multiply(f, inverse(f, a), a), e) ||
        !close(multiply(f, inverse(f, a), multiply(f, a, b)), b)) {
      ++bad[2];
    }
    if (!close_r(quotient(multiply(f, a, b)),
                 multiply_reduced(f, quotient(a), quotient(b)))) {
      ++bad[3];
    }
    const ReducedElement d1 = quotient(project_element(p, a));
    const ReducedElement d2 = project_element(p, quotient(a));
    if (!(d1.w == d2.w && d1.theta == d2.theta)) ++bad[4];
    const LieVector x{a.w, a.c}, y{b.w, b.c}, z{c.w, c.c};
    const LieVector xy = bracket(f, x, y);
    const LieVector xyz = bracket(f, xy, z);
    if (!xy.A.isZero(0.0) || !xyz.A.isZero(0.0) || xyz.a != 0.0) ++bad[5];
  }
  const char* names[] = {"associativity", "identity", "inverse",
                         "quotient homomorphism", "projection diagram",
                         "step-2 nilpotency"};
  for (int i = 0; i < 6; ++i) {
    o.require(bad[i] == 0, std::string(names[i]) + ": " +
                               std::to_string(bad[i]) + " failing cases");
  }
  o.detail = "6 identities x 10^4 cases, tol 1e-12 relative";
  return o;
}

// ------------------------------------------------------------------- 2

CylinderFunction quadratic_poly(std::mt19937_64& rng, int dim) {
  const Vector a = testing::random_vector(rng, dim);
  const Vector d = testing::random_vector(rng, dim);
  Matrix B(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) B(i, j) = testing::random_vector(rng, 1)[0];
  }
  B = (B + B.transpose()).eval();
  const double e = testing::random_vector(rng, 1)[0];
  const double h = testing::random_vector(rng, 1)[0];
  return CylinderFunction::analytic(
      "poly", Projection::full(dim), Vertical::Line,
      [a, d, B, e, h](const Vector& w, double c) {
        Jet j;
        j.value = a.dot(w) + 0.5 * w.dot(B * w) + c * d.dot(w) + e * c +
                  h * c * c + std::sin(w[0]);
        j.grad_w = a + B * w + c * d;
        j.grad_w[0] += std::cos(w[0]);
        j.d_c = d.dot(w) + e + 2 * h * c;
        j.hess_ww = B;
        j.hess_ww(0, 0) -= std::sin(w[0]);
        j.hess_wc = d;
        j.d_cc = 2 * h;
        return j;
      });
}

Outcome calculus_suite() {
  Outcome o;
  std::mt19937_64 rng(77);
  const std::vector<double> weights{1.0, 2.0, 0.5};
  const SymplecticForm form = make_nonisotropic_form(weights);
  const int dim = 6;
  const double tol = 1e-8;
  int basis_bad = 0, product_bad = 0, quotient_bad = 0;
  double worst_basis = 0, worst_product = 0, worst_quotient = 0;

  std::vector<CylinderFunction> fns;
  for (const auto& spec : default_registry()) {
    fns.push_back(make_registry_function(spec, Projection::full(dim),
                                         Vertical::Line));
  }
  for (int k = 0; k < 4; ++k) fns.push_back(quadratic_poly(rng, dim));

  for (int r = 0; r < 50; ++r) {
    const Matrix R = testing::random_orthogonal(rng, dim);
    const GroupElement g = testing::random_element(rng, dim);
    for (const auto& f : fns) {
      const double n0 = gradient_norm_sq(form, f, g);
      const double n1 = horizontal_gradient(form, f, g, R).squaredNorm();
      const double l0 = sub_laplacian(form, f, g);
      const double l1 = sub_laplacian(form, f, g, R);
      const double e = std::max(std::abs(n0 - n1) / (1 + std::abs(n0)),
                                std::abs(l0 - l1) / (1 + std::abs(l0)));
      worst_basis = std::max(worst_basis, e);
      if (e > tol) ++basis_bad;
    }
    for (std::size_t i = 0; i + 1 < fns.size(); ++i) {
      const CylinderFunction& f = fns[i];
      const CylinderFunction& h = fns[i + 1];
      const double lhs = sub_laplacian(form, product(f, h), g);
      const double rhs =
          f(g) * sub_laplacian(form, h, g) + h(g) * sub_laplacian(form, f, g) +
          2.0 * horizontal_gradient(form, f, g).dot(horizontal_gradient(form, h, g));
      const double e = std::abs(lhs - rhs) / (1 + std::abs(lhs));
      worst_product = std::max(worst_product, e);
      if (e > tol) ++product_bad;
    }
  }
  const Projection lead = Projection::leading_block(dim);
  for (const auto& spec : default_registry()) {
    if (!spec.periodic()) continue;
    const CylinderFunction fr = make_registry_function(spec, lead, Vertical::Circle);
    const CylinderFunction fg = compose_with_quotient(fr);
    for (int k = 0; k < 1000; ++k) {
      const GroupElement g = testing::random_element(rng, dim, 3.0);
      const ReducedElement r = quotient(g);
      const double e = std::max(
          {testing::rel_diff(gradient_norm_sq(form, fg, g),
                             gradient_norm_sq(form, fr, r)),
           testing::rel_diff(sub_laplacian(form, fg, g),
                             sub_laplacian(form, fr, r)),
           testing::rel_diff(fg(g), fr(r))});
      worst_quotient = std::max(worst_quotient, e);
      if (e > 1e-12) ++quotient_bad;
    }
  }
  o.require(basis_bad == 0, "basis invariance failures: " + std::to_string(basis_bad));
  o.require(product_bad == 0, "product rule failures: " + std::to_string(product_bad));
  o.require(quotient_bad == 0, "quotient relation failures: " + std::to_string(quotient_bad));
  o.detail = fmt("worst basis %.1e, product %.1e, quotient %.1e", worst_basis,
                 worst_product, worst_quotient);
  return o;
}

// ------------------------------------------------------------------- 3

Outcome diffusion_oracles() {
  Outcome o;
  const SymplecticForm f = make_isotropic_form(1);
  const PathConfig cfg{1.0, 1000, 42};
  const std::size_t m = 200000;
  const EndpointSet set = simulate_endpoints(f, cfg, m, g_workers);
  std::vector<double> wsq(m), csq(m);
  for (std::size_t i = 0; i < m; ++i) {
    wsq[i] = set.w().col(i).squaredNorm();
    csq[i] = set.c()[i] * set.c()[i];
  }
  const McEstimate ew = summarize(wsq);
  const McEstimate ec = summarize(csq);
  // Left-point area sums have E c^2 = (t^2 / 4)(1 - 1/N): allowance 0.25 / N.
  const double bias = 0.25 / cfg.steps;
  o.require(std::abs(ew.mean - 2.0) <= 3 * ew.std_error,
            fmt("E|w|^2 = %.5f +- %.5f", ew.mean, ew.std_error));
  o.require(std::abs(ec.mean - 0.25) <= 3 * ec.std_error + bias,
            fmt("E c^2 = %.5f +- %.5f", ec.mean, ec.std_error));
  o.detail = fmt("E|w|^2 %.4f+-%.4f, E c^2 %.5f+-%.5f", ew.mean, ew.std_error,
                 ec.mean, ec.std_error);
  const Projection p = Projection::leading_block(2);
  for (const char* spec : {"poly_radial", "vertical_sq", "gauss_bump"}) {
    const HeatResidual h = heat_equation_residual(
        f, cfg,
        make_registry_function(parse_function_spec(spec), p, Vertical::Line),
        m, 0.05, Space::G, g_workers);
    o.detail += fmt(", heat %.1f", h.residual / h.std_error) + "se(" + spec + ")";
    o.require(h.residual <= 3 * h.std_error,
              std::string("heat residual ") + spec +
                  fmt(" = %.2e vs 3 se %.2e", h.residual, 3 * h.std_error));
  }
  return o;
}

// ------------------------------------------------------------------- 4

Outcome lsi_oracle() {
  Outcome o;
  const double lambda = 0.5;
  for (int n : {1, 4}) {
    const SymplecticForm f = make_isotropic_form(n);
    const CylinderFunction fn = make_registry_function(
        parse_function_spec("exp_linear(0.5)"), Projection::leading_block(2 * n),
        Vertical::Line);
    for (double t : {0.5, 1.0, 2.0}) {
      const LsiReport r = lsi_ratio(f, PathConfig{t, 1000, 42}, fn, 200000,
                                    Space::G, 4.0, g_workers);
      const double z = 2 * lambda * lambda * t;
      const double ent = z * std::exp(z);
      const double en = lambda * lambda * std::exp(z);
      const std::string tag = fmt("n=%g t=%g", n, t);
      o.require(r.ratio_defined && std::abs(r.ratio - 2 * t) <= 3 * r.ratio_error,
                tag + fmt(": ratio %.4f +- %.4f vs %.1f", r.ratio,
                          r.ratio_error, 2 * t));
      o.require(std::abs(r.entropy.mean - ent) <= 3 * r.entropy.std_error,
                tag + fmt(": entropy %.5f +- %.5f vs %.5f", r.entropy.mean,
                          r.entropy.std_error, ent));
      o.require(std::abs(r.energy.mean - en) <= 3 * r.energy.std_error,
                tag + fmt(": energy %.5f +- %.5f vs %.5f", r.energy.mean,
                          r.energy.std_error, en));
      o.detail += (o.detail.empty() ? "" : ", ") +
                  fmt("%.3f/%.0f", r.ratio, 2 * t);
    }
  }
  o.detail = "ratio/2t: " + o.detail;
  return o;
}

// ------------------------------------------------------------------- 5

Outcome dimension_independence() {
  Outcome o;
  ScanSpec spec;  // n = 1..8, isotropic + weights (2, 3, ...), full registry
  const ScanResult result = lsi_scan(spec, g_workers);
  int over = 0, failed = 0;
  double worst = 0;
  for (const auto& cell : result.cells) {
    if (!cell.ok) {
      ++failed;
      o.require(false, "cell failed: " + cell.f_name + " " + cell.error);
      continue;
    }
    const LsiReport& r = cell.report;
    if (r.ratio_defined) worst = std::max(worst, r.ratio);
    if (!r.pass()) {
      ++over;
      o.require(false, fmt("bound exceeded n=%g ", cell.n) + cell.f_name +
                           fmt(": %.3f +- %.3f", r.ratio, r.ratio_error));
    }
  }
  int spread_bad = 0;
  for (const auto& s : dimension_spread(result.summary)) {
    o.notes.push_back(std::string(s.pass ? "ok   " : "FAIL ") + s.f_name +
                      fmt(": max ratio over n in [%.4f, %.4f], spread %.4f, "
                          "allowance %.4f",
                          s.min_ratio, s.max_ratio, s.max_ratio - s.min_ratio,
                          s.allowance));
    if (!s.pass) {
      ++spread_bad;
      o.pass = false;
    }
  }
  o.detail = fmt("%g cells, max ratio %.3f <= 4t; %g over bound, %g spread "
                 "failures",
                 static_cast<double>(result.cells.size()), worst, over,
                 spread_bad);
  (void)failed;
  return o;
}

// ------------------------------------------------------------------- 6

Outcome quotient_invariance() {
  Outcome o;
  int compared = 0, differ = 0;
  for (int n : {1, 3}) {
    const SymplecticForm f = make_isotropic_form(n);
    const Projection p = Projection::leading_block(2 * n);
    for (double t : {0.5, 2.0}) {
      const EndpointSet set =
          simulate_endpoints(f, PathConfig{t, 1000, 99}, 50000, g_workers);
      for (const auto& spec : default_registry()) {
        if (!spec.periodic()) continue;
        const CylinderFunction fr = make_registry_function(spec, p, Vertical::Circle);
        const CylinderFunction fg = compose_with_quotient(fr);
        const SampleValues a = sample_values(f, fr, set, Space::Reduced, g_workers);
        const SampleValues b = sample_values(f, fg, set, Space::G, g_workers);
        std::vector<double> a2(a.f.size()), b2(b.f.size());
        for (std::size_t i = 0; i < a.f.size(); ++i) {
          a2[i] = a.f[i] * a.f[i];
          b2[i] = b.f[i] * b.f[i];
        }
        const McEstimate pairs[][2] = {
            {entropy_from_values(a.f), entropy_from_values(b.f)},
            {summarize(a.grad_sq), summarize(b.grad_sq)},
            {summarize(a2), summarize(b2)}};
        for (const auto& pr : pairs) {
          ++compared;
          if (!same_bits(pr[0].mean, pr[1].mean) ||
              !same_bits(pr[0].std_error, pr[1].std_error)) {
            ++differ;
            o.require(false, spec.to_string() + fmt(" n=%g t=%g differs", n, t));
          }
        }
      }
    }
  }
  o.detail = fmt("%g entropy/energy/L2 comparisons, %g differ", compared, differ);
  return o;
}

// ------------------------------------------------------------------- 7

Outcome distance_suite() {
  Outcome o;
  const SymplecticForm f = make_isotropic_form(1);
  const int K = 64;
  const DistanceResult line =
      cc_distance(f, GroupElement{Eigen::Vector2d(3, 4), 0.0}, K);
  o.require(std::abs(line.estimate - 5.0) <= 1e-3,
            fmt("d(e, ((3,4),0)) = %.6f", line.estimate));

  std::mt19937_64 rng(31337);
  int quotient_bad = 0;
  double worst_gap = -1e300;
  for (int k = 0; k < 100; ++k) {
    const GroupElement g = testing::random_element(rng, 2);
    const GroupElement h = testing::random_element(rng, 2);
    const double d = cc_distance(f, g, h, K).estimate;
    const ReducedDistanceResult r = quotient_distance(f, g, h, K, 3);
    worst_gap = std::max(worst_gap, r.estimate - d);
    if (r.estimate > d + 1e-6) {
      ++quotient_bad;
      o.require(false, fmt("pair %g: reduced %.6f > %.6f", k, r.estimate, d));
    }
  }
  double worst_inv = 0, worst_sym = 0;
  for (int k = 0; k < 20; ++k) {
    const GroupElement x = testing::random_element(rng, 2);
    const GroupElement y = testing::random_element(rng, 2);
    const GroupElement g = testing::random_element(rng, 2);
    const double dxy = cc_distance(f, x, y, K).estimate;
    const double dg =
        cc_distance(f, multiply(f, g, x), multiply(f, g, y), K).estimate;
    const GroupElement rel = multiply(f, inverse(f, x), y);
    const double de = cc_distance(f, rel, K).estimate;
    const double dinv = cc_distance(f, inverse(f, rel), K).estimate;
    worst_inv = std::max(worst_inv, std::abs(dxy - dg));
    worst_sym = std::max(worst_sym, std::abs(de - dinv));
  }
  o.require(worst_inv <= 2e-3, fmt("left invariance gap %.2e", worst_inv));
  o.require(worst_sym <= 2e-3, fmt("symmetry gap %.2e", worst_sym));
  o.detail = fmt("d=%.6f; max(d~-d) %.1e over 100 pairs; invariance %.1e, "
                 "symmetry %.1e",
                 line.estimate, worst_gap, worst_inv, worst_sym);
  return o;
}

// ------------------------------------------------------------------- 8

Outcome reproducibility() {
  Outcome o;
  const ConfigResult parsed = parse_config(
      "m = 20000\nN = 200\ndims = 1,2,3\nt = 0.5, 1\nK = 32\n");
  if (!parsed.ok()) throw std::runtime_error("reproducibility config invalid");
  const ExperimentConfig& cfg = *parsed.config;
  for (const auto& sub : subcommands()) {
    const Report serial = build_report(sub, cfg, RunOptions{1, true});
    const Report again = build_report(sub, cfg, RunOptions{1, true});
    const Report par = build_report(sub, cfg, RunOptions{8, true});
    const std::string s = serial.body.dump(2);
    o.require(s == again.body.dump(2) && serial.summary_csv == again.summary_csv &&
                  serial.files == again.files,
              sub + ": rerun differs");
    o.require(s == par.body.dump(2) && serial.summary_csv == par.summary_csv &&
                  serial.files == par.files,
              sub + ": 8 workers differ from serial");
  }
  o.detail = "6 subcommands: rerun and 8-worker bodies byte-identical";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  g_workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  auto selected = [&](int id) {
    return only.empty() ||
           std::find(only.begin(), only.end(), id) != only.end();
  };
  int failed = 0;
  if (selected(1)) failed += run_criterion(1, "group structure suite", 5, group_suite);
  if (selected(2)) failed += run_criterion(2, "calculus suite", 10, calculus_suite);
  if (selected(3)) failed += run_criterion(3, "diffusion oracles", 180, diffusion_oracles);
  if (selected(4)) failed += run_criterion(4, "LSI closed-form oracle", 180, lsi_oracle);
  if (selected(5)) failed += run_criterion(5, "dimension/form independence", 900, dimension_independence);
  if (selected(6)) failed += run_criterion(6, "quotient invariance (bitwise)", 0, quotient_invariance);
  if (selected(7)) failed += run_criterion(7, "distance suite", 300, distance_suite);
  if (selected(8)) failed += run_criterion(8, "reproducibility", 0, reproducibility);
  std::printf("acceptance: %d criterion(s) failed\n", failed);
  return failed;
}
