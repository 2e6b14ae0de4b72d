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

#include "heislab/diffusion.hpp"

#include <cmath>
#include <exception>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include "heislab/errors.hpp"

namespace heislab {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 64) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

void check_finite(double v, const CylinderFunction& f, std::size_t i) {
  if (!std::isfinite(v)) {
    throw IntegrabilityError("function '" + f.name() +
                             "' is not finite at sample " + std::to_string(i));
  }
}

}  // namespace

const char* space_name(Space s) { return s == Space::G ? "G" : "reduced"; }

void PathConfig::validate() const {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("terminal time t must be positive");
  }
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
}

std::uint64_t stream_seed(std::uint64_t base_seed,
                          std::uint64_t sample_index) {
  return mix64(mix64(base_seed ^ kGolden) + mix64(sample_index + kGolden));
}

void simulate_shared_path(std::span<const SymplecticForm* const> forms,
                          const PathConfig& cfg, std::uint64_t sample_index,
                          Vector& w, std::span<double> c) {
  const int dim = forms.front()->dimension();
  boost::random::mt19937_64 engine(stream_seed(cfg.base_seed, sample_index));
  boost::random::normal_distribution<double> normal;
  const double sd = std::sqrt(cfg.t / cfg.steps);

  std::vector<double> b(static_cast<std::size_t>(dim), 0.0);
  std::vector<double> db(static_cast<std::size_t>(dim));
  std::vector<double> area(forms.size(), 0.0);
  for (int k = 0; k < cfg.steps; ++k) {
    for (auto& x : db) x = sd * normal(engine);
    // Left-point sum; the midpoint correction omega(dB, dB)/2 is zero.
    for (std::size_t f = 0; f < forms.size(); ++f) {
      double a = area[f];
      for (const auto& e : forms[f]->nonzeros()) {
        a += e.value * (b[e.row] * db[e.col] - b[e.col] * db[e.row]);
      }
      area[f] = a;
    }
    for (int i = 0; i < dim; ++i) b[i] += db[i];
  }
  w = Eigen::Map<const Vector>(b.data(), dim);
  for (std::size_t f = 0; f < forms.size(); ++f) c[f] = 0.5 * area[f];
}

EndpointSample simulate_endpoint(const SymplecticForm& form,
                                 const PathConfig& cfg,
                                 std::uint64_t sample_index) {
  cfg.validate();
  const SymplecticForm* forms[] = {&form};
  double c = 0.0;
  EndpointSample out;
  simulate_shared_path(forms, cfg, sample_index, out.g.w,
                       std::span<double>(&c, 1));
  out.g.c = c;
  out.reduced = quotient(out.g);
  return out;
}

EndpointSet::EndpointSet(int dimension, std::size_t m)
    : dimension_(dimension),
      w_(Matrix::Zero(dimension, static_cast<Eigen::Index>(m))),
      c_(m, 0.0) {}

GroupElement EndpointSet::at(std::size_t i) const {
  return {w_.col(static_cast<Eigen::Index>(i)), c_[i]};
}

ReducedElement EndpointSet::reduced_at(std::size_t i) const {
  return quotient(at(i));
}

void EndpointSet::set(std::size_t i, const GroupElement& g) {
  w_.col(static_cast<Eigen::Index>(i)) = g.w;
  c_[i] = g.c;
}

void parallel_for(std::size_t m, unsigned workers,
                  const std::function<void(std::size_t)>& body) {
  if (workers <= 1 || m < 2) {
    for (std::size_t i = 0; i < m; ++i) body(i);
    return;
  }
  const std::size_t nthreads = std::min<std::size_t>(workers, m);
  std::vector<std::exception_ptr> errors(nthreads);
  std::vector<std::thread> threads;
  threads.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t lo = m * t / nthreads;
    const std::size_t hi = m * (t + 1) / nthreads;
    threads.emplace_back([&, t, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

EndpointSet simulate_endpoints(const SymplecticForm& form,
                               const PathConfig& cfg, std::size_t m,
                               unsigned workers) {
  const SymplecticForm* forms[] = {&form};
  return std::move(simulate_endpoints_shared(forms, cfg, m, workers).front());
}

std::vector<EndpointSet> simulate_endpoints_shared(
    std::span<const SymplecticForm* const> forms, const PathConfig& cfg,
    std::size_t m, unsigned workers) {
  cfg.validate();
  if (forms.empty()) throw std::invalid_argument("no forms to simulate");
  const int dim = forms.front()->dimension();
  for (const auto* f : forms) {
    if (f->dimension() != dim) {
      throw DimensionError("shared-path forms must have equal dimension");
    }
  }
  std::vector<EndpointSet> sets(forms.size(), EndpointSet(dim, m));
  parallel_for(m, workers, [&](std::size_t i) {
    Vector w;
    std::vector<double> c(forms.size());
    simulate_shared_path(forms, cfg, i, w, c);
    for (std::size_t f = 0; f < forms.size(); ++f) sets[f].set(i, {w, c[f]});
  });
  return sets;
}

McEstimate summarize(std::span<const double> values) {
  const std::size_t m = values.size();
  if (m < 2) throw std::invalid_argument("an estimate needs m >= 2 samples");
  const double mean = pairwise_sum(values.data(), m) / static_cast<double>(m);
  std::vector<double> dev(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double d = values[i] - mean;
    dev[i] = d * d;
  }
  const double var = pairwise_sum(dev.data(), m) / static_cast<double>(m - 1);
  return {mean, std::sqrt(var / static_cast<double>(m)), m};
}

std::vector<double> evaluate(const CylinderFunction& f,
                             const EndpointSet& endpoints, Space space,
                             unsigned workers) {
  std::vector<double> out(endpoints.size());
  parallel_for(endpoints.size(), workers, [&](std::size_t i) {
    const double v = space == Space::G ? f(endpoints.at(i))
                                       : f(endpoints.reduced_at(i));
    check_finite(v, f, i);
    out[i] = v;
  });
  return out;
}

McEstimate mc_expect(const SymplecticForm& form, const PathConfig& cfg,
                     const CylinderFunction& f, std::size_t m, Space space,
                     unsigned workers) {
  if (m < 2) throw std::invalid_argument("mc_expect needs m >= 2");
  const EndpointSet endpoints = simulate_endpoints(form, cfg, m, workers);
  const auto values = evaluate(f, endpoints, space, workers);
  return summarize(values);
}

HeatResidual heat_equation_residual(const SymplecticForm& form,
                                    const PathConfig& cfg,
                                    const CylinderFunction& f, std::size_t m,
                                    double delta_t, Space space,
                                    unsigned workers) {
  cfg.validate();
  if (!(delta_t > 0.0) || !(delta_t < cfg.t)) {
    throw std::invalid_argument("delta_t must lie in (0, t)");
  }
  if (m < 2) throw std::invalid_argument("heat check needs m >= 2");
  PathConfig lo = cfg, hi = cfg;
  lo.t = cfg.t - delta_t;
  hi.t = cfg.t + delta_t;
  const EndpointSet e_lo = simulate_endpoints(form, lo, m, workers);
  const EndpointSet e_mid = simulate_endpoints(form, cfg, m, workers);
  const EndpointSet e_hi = simulate_endpoints(form, hi, m, workers);

  std::vector<double> deriv(m), gen(m), diff(m);
  parallel_for(m, workers, [&](std::size_t i) {
    double fl, fh, lap;
    if (space == Space::G) {
      fl = f(e_lo.at(i));
      fh = f(e_hi.at(i));
      lap = sub_laplacian(form, f, e_mid.at(i));
    } else {
      fl = f(e_lo.reduced_at(i));
      fh = f(e_hi.reduced_at(i));
      lap = sub_laplacian(form, f, e_mid.reduced_at(i));
    }
    check_finite(fl, f, i);
    check_finite(fh, f, i);
    check_finite(lap, f, i);
    deriv[i] = (fh - fl) / (2.0 * delta_t);
    gen[i] = 0.5 * lap;
    diff[i] = deriv[i] - gen[i];
  });
  const McEstimate d = summarize(diff);
  HeatResidual out;
  out.residual = std::fabs(d.mean);
  out.std_error = d.std_error;
  out.time_derivative = summarize(deriv).mean;
  out.half_generator = summarize(gen).mean;
  out.m = m;
  return out;
}

std::vector<CharFunctionPoint> levy_area_char_function(
    const SymplecticForm& form, const PathConfig& cfg, std::size_t m,
    std::span<const double> lambdas, unsigned workers) {
  const EndpointSet endpoints = simulate_endpoints(form, cfg, m, workers);
  std::vector<CharFunctionPoint> out;
  std::vector<double> re(m), im(m);
  for (double lambda : lambdas) {
    for (std::size_t i = 0; i < m; ++i) {
      re[i] = std::cos(lambda * endpoints.c()[i]);
      im[i] = std::sin(lambda * endpoints.c()[i]);
    }
    out.push_back({lambda, summarize(re), summarize(im)});
  }
  return out;
}

double levy_area_char_function_exact(const SymplecticForm& form, double t,
                                     double lambda) {
  // Singular values of a real normal skew matrix come in equal pairs.
  Eigen::JacobiSVD<Matrix> svd(form.matrix());
  const auto& s = svd.singularValues();
  double value = 1.0;
  for (Eigen::Index j = 0; j < s.size(); j += 2) {
    value /= std::cosh(0.5 * lambda * s[j] * t);
  }
  return value;
}

}  // namespace heislab
