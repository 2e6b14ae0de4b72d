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

#include "heislab/heislab.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "heislab/config.hpp"
#include "heislab/diffusion.hpp"
#include "heislab/distance.hpp"
#include "heislab/errors.hpp"
#include "heislab/group.hpp"
#include "heislab/lsi.hpp"
#include "heislab/registry.hpp"
#include "heislab/runner.hpp"

struct hl_form {
  heislab::SymplecticForm form;
};

struct hl_config {
  heislab::ExperimentConfig config;
};

namespace {

using heislab::GroupElement;
using heislab::ReducedElement;
using heislab::Vector;

thread_local std::string g_last_error;

hl_status fail(hl_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
hl_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const heislab::DimensionError& e) {
    return fail(HL_ERR_DIMENSION, e.what());
  } catch (const heislab::IntegrabilityError& e) {
    return fail(HL_ERR_INTEGRABILITY, e.what());
  } catch (const heislab::IoError& e) {
    return fail(HL_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(HL_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(HL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(HL_ERR_INTERNAL, "unknown error");
  }
}

#define HL_REQUIRE(ptr)                                             \
  do {                                                              \
    if ((ptr) == nullptr) {                                         \
      return fail(HL_ERR_NULL_ARGUMENT, #ptr " must not be null"); \
    }                                                               \
  } while (0)

int dim_of(const hl_form* f) { return f->form.dimension(); }

GroupElement read_group(const hl_form* f, const double* v) {
  const int d = dim_of(f);
  return GroupElement{Eigen::Map<const Vector>(v, d), v[d]};
}

ReducedElement read_reduced(const hl_form* f, const double* v) {
  const int d = dim_of(f);
  return ReducedElement{Eigen::Map<const Vector>(v, d), heislab::wrap_angle(v[d])};
}

void write(const Vector& w, double last, double* out) {
  for (Eigen::Index j = 0; j < w.size(); ++j) out[j] = w[j];
  out[w.size()] = last;
}

heislab::PathConfig path_config(const hl_path_config* cfg) {
  heislab::PathConfig pc{cfg->t, cfg->steps, cfg->base_seed};
  pc.validate();
  return pc;
}

heislab::Space to_space(hl_space s) {
  return s == HL_SPACE_REDUCED ? heislab::Space::Reduced : heislab::Space::G;
}

heislab::CylinderFunction registry_function(const hl_form* f,
                                            const char* spec,
                                            heislab::Space space) {
  return heislab::make_registry_function(
      heislab::parse_function_spec(spec),
      heislab::Projection::leading_block(dim_of(f)),
      space == heislab::Space::G ? heislab::Vertical::Line
                                 : heislab::Vertical::Circle);
}

hl_estimate to_c(const heislab::McEstimate& e) {
  return hl_estimate{e.mean, e.std_error, e.m};
}

hl_status make_form(hl_form** out, heislab::SymplecticForm form) {
  *out = new hl_form{std::move(form)};
  return HL_OK;
}

}  // namespace

extern "C" {

const char* hl_version(void) { return heislab::version_string(); }

const char* hl_status_string(hl_status status) {
  switch (status) {
    case HL_OK:
      return "ok";
    case HL_ERR_NULL_ARGUMENT:
      return "null argument";
    case HL_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case HL_ERR_DIMENSION:
      return "dimension mismatch";
    case HL_ERR_INTEGRABILITY:
      return "non-finite function value";
    case HL_ERR_IO:
      return "i/o error";
    case HL_ERR_BUFFER_TOO_SMALL:
      return "buffer too small";
    case HL_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* hl_last_error(void) { return g_last_error.c_str(); }

hl_status hl_form_isotropic(int n, hl_form** out) {
  HL_REQUIRE(out);
  return guarded([&] { return make_form(out, heislab::make_isotropic_form(n)); });
}

hl_status hl_form_nonisotropic(const double* weights, size_t count,
                               hl_form** out) {
  HL_REQUIRE(out);
  HL_REQUIRE(weights);
  return guarded([&] {
    return make_form(out, heislab::make_nonisotropic_form({weights, count}));
  });
}

hl_status hl_form_trace_class(const double* q, size_t count, hl_form** out) {
  HL_REQUIRE(out);
  HL_REQUIRE(q);
  return guarded([&] {
    return make_form(out, heislab::make_trace_class_form(
                              {q, count}, static_cast<int>(count))
                              .second);
  });
}

hl_status hl_form_from_matrix(const double* omega, size_t dim, hl_form** out) {
  HL_REQUIRE(out);
  HL_REQUIRE(omega);
  return guarded([&] {
    const auto d = static_cast<Eigen::Index>(dim);
    heislab::Matrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) m(i, j) = omega[i * d + j];
    }
    return make_form(out, heislab::SymplecticForm(std::move(m)));
  });
}

void hl_form_free(hl_form* form) { delete form; }

int hl_form_dimension(const hl_form* form) {
  return form ? dim_of(form) : 0;
}

hl_status hl_form_apply(const hl_form* form, const double* x, const double* y,
                        double* out) {
  HL_REQUIRE(form);
  HL_REQUIRE(x);
  HL_REQUIRE(y);
  HL_REQUIRE(out);
  return guarded([&] {
    const int d = dim_of(form);
    *out = form->form(Eigen::Map<const Vector>(x, d),
                      Eigen::Map<const Vector>(y, d));
    return HL_OK;
  });
}

hl_status hl_multiply(const hl_form* form, const double* g1, const double* g2,
                      double* out) {
  HL_REQUIRE(form);
  HL_REQUIRE(g1);
  HL_REQUIRE(g2);
  HL_REQUIRE(out);
  return guarded([&] {
    const GroupElement g = heislab::multiply(form->form, read_group(form, g1),
                                             read_group(form, g2));
    write(g.w, g.c, out);
    return HL_OK;
  });
}

hl_status hl_inverse(const hl_form* form, const double* g, double* out) {
  HL_REQUIRE(form);
  HL_REQUIRE(g);
  HL_REQUIRE(out);
  return guarded([&] {
    const GroupElement r = heislab::inverse(form->form, read_group(form, g));
    write(r.w, r.c, out);
    return HL_OK;
  });
}

hl_status hl_multiply_reduced(const hl_form* form, const double* r1,
                              const double* r2, double* out) {
  HL_REQUIRE(form);
  HL_REQUIRE(r1);
  HL_REQUIRE(r2);
  HL_REQUIRE(out);
  return guarded([&] {
    const ReducedElement r = heislab::multiply_reduced(
        form->form, read_reduced(form, r1), read_reduced(form, r2));
    write(r.w, r.theta, out);
    return HL_OK;
  });
}

hl_status hl_inverse_reduced(const hl_form* form, const double* r,
                             double* out) {
  HL_REQUIRE(form);
  HL_REQUIRE(r);
  HL_REQUIRE(out);
  return guarded([&] {
    const ReducedElement x =
        heislab::inverse_reduced(form->form, read_reduced(form, r));
    write(x.w, x.theta, out);
    return HL_OK;
  });
}

hl_status hl_quotient(const hl_form* form, const double* g, double* out) {
  HL_REQUIRE(form);
  HL_REQUIRE(g);
  HL_REQUIRE(out);
  return guarded([&] {
    const ReducedElement r = heislab::quotient(read_group(form, g));
    write(r.w, r.theta, out);
    return HL_OK;
  });
}

hl_status hl_bracket(const hl_form* form, const double* x, const double* y,
                     double* out) {
  HL_REQUIRE(form);
  HL_REQUIRE(x);
  HL_REQUIRE(y);
  HL_REQUIRE(out);
  return guarded([&] {
    const int d = dim_of(form);
    const heislab::LieVector a{Eigen::Map<const Vector>(x, d), x[d]};
    const heislab::LieVector b{Eigen::Map<const Vector>(y, d), y[d]};
    const heislab::LieVector z = heislab::bracket(form->form, a, b);
    write(z.A, z.a, out);
    return HL_OK;
  });
}

hl_status hl_simulate_endpoint(const hl_form* form, const hl_path_config* cfg,
                               uint64_t sample_index, double* g_out,
                               double* theta_out) {
  HL_REQUIRE(form);
  HL_REQUIRE(cfg);
  HL_REQUIRE(g_out);
  return guarded([&] {
    const heislab::EndpointSample s =
        heislab::simulate_endpoint(form->form, path_config(cfg), sample_index);
    write(s.g.w, s.g.c, g_out);
    if (theta_out) *theta_out = s.reduced.theta;
    return HL_OK;
  });
}

hl_status hl_mc_expect(const hl_form* form, const hl_path_config* cfg,
                       const char* f_spec, size_t m, hl_space space,
                       unsigned workers, hl_estimate* out) {
  HL_REQUIRE(form);
  HL_REQUIRE(cfg);
  HL_REQUIRE(f_spec);
  HL_REQUIRE(out);
  return guarded([&] {
    const heislab::Space s = to_space(space);
    *out = to_c(heislab::mc_expect(form->form, path_config(cfg),
                                   registry_function(form, f_spec, s), m, s,
                                   workers));
    return HL_OK;
  });
}

hl_status hl_lsi_ratio(const hl_form* form, const hl_path_config* cfg,
                       const char* f_spec, size_t m, hl_space space,
                       double c_ref, unsigned workers, hl_lsi_report* out) {
  HL_REQUIRE(form);
  HL_REQUIRE(cfg);
  HL_REQUIRE(f_spec);
  HL_REQUIRE(out);
  return guarded([&] {
    const heislab::Space s = to_space(space);
    const heislab::LsiReport r = heislab::lsi_ratio(
        form->form, path_config(cfg), registry_function(form, f_spec, s), m, s,
        c_ref, workers);
    *out = hl_lsi_report{to_c(r.entropy), to_c(r.energy), r.ratio,
                         r.ratio_error,   r.ratio_defined, r.bound(),
                         r.pass()};
    return HL_OK;
  });
}

hl_status hl_heat_residual(const hl_form* form, const hl_path_config* cfg,
                           const char* f_spec, size_t m, double delta_t,
                           unsigned workers, double* residual,
                           double* std_error) {
  HL_REQUIRE(form);
  HL_REQUIRE(cfg);
  HL_REQUIRE(f_spec);
  HL_REQUIRE(residual);
  return guarded([&] {
    const heislab::HeatResidual h = heislab::heat_equation_residual(
        form->form, path_config(cfg),
        registry_function(form, f_spec, heislab::Space::G), m, delta_t,
        heislab::Space::G, workers);
    *residual = h.residual;
    if (std_error) *std_error = h.std_error;
    return HL_OK;
  });
}

hl_status hl_cc_distance(const hl_form* form, const double* target, int K,
                         hl_distance_result* out) {
  HL_REQUIRE(form);
  HL_REQUIRE(target);
  HL_REQUIRE(out);
  return guarded([&] {
    const heislab::DistanceResult d =
        heislab::cc_distance(form->form, read_group(form, target), K);
    *out = hl_distance_result{d.estimate, d.residual, d.converged, 0};
    return HL_OK;
  });
}

hl_status hl_cc_distance_reduced(const hl_form* form, const double* target,
                                 int K, int k_window,
                                 hl_distance_result* out) {
  HL_REQUIRE(form);
  HL_REQUIRE(target);
  HL_REQUIRE(out);
  return guarded([&] {
    const heislab::ReducedDistanceResult d = heislab::cc_distance_reduced(
        form->form, read_reduced(form, target), K, k_window);
    *out = hl_distance_result{d.estimate, d.residual, d.converged,
                              d.winning_k};
    return HL_OK;
  });
}

hl_status hl_config_parse(const char* text, hl_config** out) {
  HL_REQUIRE(text);
  HL_REQUIRE(out);
  return guarded([&] {
    heislab::ConfigResult r = heislab::parse_config(text);
    if (!r.ok()) {
      std::string msg;
      for (const auto& e : r.errors) msg += e + "\n";
      return fail(HL_ERR_INVALID_ARGUMENT, msg);
    }
    *out = new hl_config{std::move(*r.config)};
    return HL_OK;
  });
}

void hl_config_free(hl_config* config) { delete config; }

hl_status hl_config_text(const hl_config* config, char* buf, size_t cap,
                         size_t* needed) {
  HL_REQUIRE(config);
  return guarded([&] {
    const std::string text = config->config.to_text();
    if (needed) *needed = text.size() + 1;
    if (buf == nullptr || cap < text.size() + 1) {
      return fail(HL_ERR_BUFFER_TOO_SMALL, "buffer too small for config text");
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return HL_OK;
  });
}

int hl_run(const char* subcommand, const hl_config* config, unsigned workers,
           int dump_endpoints) {
  if (subcommand == nullptr || config == nullptr) {
    fail(HL_ERR_NULL_ARGUMENT, "subcommand and config must not be null");
    return heislab::kExitConfigError;
  }
  try {
    g_last_error.clear();
    std::string msg;
    const int code = heislab::run(
        subcommand, config->config,
        heislab::RunOptions{workers == 0 ? 1u : workers, dump_endpoints != 0},
        &msg);
    g_last_error = msg;
    return code;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return heislab::kExitCheckFailed;
  }
}

const char* hl_usage(void) {
  static const std::string text = heislab::usage();
  return text.c_str();
}

}  // extern "C"
