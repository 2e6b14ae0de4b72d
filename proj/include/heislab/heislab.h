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

#ifndef HEISLAB_HEISLAB_H_
#define HEISLAB_HEISLAB_H_

/* C interface to the heislab library.
 *
 * Group elements are arrays of length dim + 1 laid out as (w_1..w_dim, c);
 * reduced elements use the same layout with c replaced by theta in
 * [0, 2 pi). dim is hl_form_dimension(form) = 2n.
 *
 * Every function returning hl_status leaves a message for the calling
 * thread in hl_last_error() when it fails. Objects are opaque and owned by
 * the caller once created; release them with the matching _free call. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(HEISLAB_BUILDING_LIBRARY)
#    define HEISLAB_API __declspec(dllexport)
#  else
#    define HEISLAB_API __declspec(dllimport)
#  endif
#else
#  define HEISLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hl_status {
  HL_OK = 0,
  HL_ERR_NULL_ARGUMENT = 1,
  HL_ERR_INVALID_ARGUMENT = 2,
  HL_ERR_DIMENSION = 3,
  HL_ERR_INTEGRABILITY = 4,
  HL_ERR_IO = 5,
  HL_ERR_BUFFER_TOO_SMALL = 6,
  HL_ERR_INTERNAL = 7
} hl_status;

typedef enum hl_space { HL_SPACE_G = 0, HL_SPACE_REDUCED = 1 } hl_space;

typedef struct hl_form hl_form;
typedef struct hl_config hl_config;

typedef struct hl_path_config {
  double t;
  int steps;
  uint64_t base_seed;
} hl_path_config;

typedef struct hl_estimate {
  double mean;
  double std_error;
  size_t m;
} hl_estimate;

typedef struct hl_lsi_report {
  hl_estimate entropy;
  hl_estimate energy;
  double ratio;
  double ratio_error;
  int ratio_defined;
  double bound;
  int pass;
} hl_lsi_report;

typedef struct hl_distance_result {
  double estimate;
  double residual;
  int converged;
  int winning_k; /* 0 for distances on G */
} hl_distance_result;

HEISLAB_API const char* hl_version(void);
HEISLAB_API const char* hl_status_string(hl_status status);
/* Message of the last failure on this thread; "" if none. */
HEISLAB_API const char* hl_last_error(void);

/* ---- forms ---- */
HEISLAB_API hl_status hl_form_isotropic(int n, hl_form** out);
HEISLAB_API hl_status hl_form_nonisotropic(const double* weights, size_t count,
                                           hl_form** out);
/* Form of the trace-class model truncated to the given q_j > 0. */
HEISLAB_API hl_status hl_form_trace_class(const double* q, size_t count,
                                          hl_form** out);
/* Row-major dim x dim skew, nondegenerate matrix. */
HEISLAB_API hl_status hl_form_from_matrix(const double* omega, size_t dim,
                                          hl_form** out);
HEISLAB_API void hl_form_free(hl_form* form);
HEISLAB_API int hl_form_dimension(const hl_form* form);
HEISLAB_API hl_status hl_form_apply(const hl_form* form, const double* x,
                                    const double* y, double* out);

/* ---- group ---- */
HEISLAB_API hl_status hl_multiply(const hl_form* form, const double* g1,
                                  const double* g2, double* out);
HEISLAB_API hl_status hl_inverse(const hl_form* form, const double* g,
                                 double* out);
HEISLAB_API hl_status hl_multiply_reduced(const hl_form* form,
                                          const double* r1, const double* r2,
                                          double* out);
HEISLAB_API hl_status hl_inverse_reduced(const hl_form* form, const double* r,
                                         double* out);
HEISLAB_API hl_status hl_quotient(const hl_form* form, const double* g,
                                  double* out);
/* Lie bracket of (A, a) and (B, b); same layout as group elements. */
HEISLAB_API hl_status hl_bracket(const hl_form* form, const double* x,
                                 const double* y, double* out);

/* ---- diffusion and LSI ----
 * f_spec names a registry function, e.g. "exp_linear(0.5)"; it reads the
 * leading block (w_1, w_2) of the horizontal coordinates. */
HEISLAB_API hl_status hl_simulate_endpoint(const hl_form* form,
                                           const hl_path_config* cfg,
                                           uint64_t sample_index,
                                           double* g_out, double* theta_out);
HEISLAB_API hl_status hl_mc_expect(const hl_form* form,
                                   const hl_path_config* cfg,
                                   const char* f_spec, size_t m,
                                   hl_space space, unsigned workers,
                                   hl_estimate* out);
HEISLAB_API hl_status hl_lsi_ratio(const hl_form* form,
                                   const hl_path_config* cfg,
                                   const char* f_spec, size_t m,
                                   hl_space space, double c_ref,
                                   unsigned workers, hl_lsi_report* out);
HEISLAB_API hl_status hl_heat_residual(const hl_form* form,
                                       const hl_path_config* cfg,
                                       const char* f_spec, size_t m,
                                       double delta_t, unsigned workers,
                                       double* residual, double* std_error);

/* ---- distance ---- */
HEISLAB_API hl_status hl_cc_distance(const hl_form* form,
                                     const double* target, int K,
                                     hl_distance_result* out);
HEISLAB_API hl_status hl_cc_distance_reduced(const hl_form* form,
                                             const double* target, int K,
                                             int k_window,
                                             hl_distance_result* out);

/* ---- experiment harness ---- */
/* On HL_ERR_INVALID_ARGUMENT every configuration error is listed in
 * hl_last_error(), one per line. */
HEISLAB_API hl_status hl_config_parse(const char* text, hl_config** out);
HEISLAB_API void hl_config_free(hl_config* config);
/* Canonical text of the resolved config. Writes at most cap bytes including
 * the terminator; *needed receives the full size. */
HEISLAB_API hl_status hl_config_text(const hl_config* config, char* buf,
                                     size_t cap, size_t* needed);
/* Runs a subcommand and returns its process exit code: 0 ok, 1 a check
 * failed, 2 configuration error or unknown subcommand, 3 output error. */
HEISLAB_API int hl_run(const char* subcommand, const hl_config* config,
                       unsigned workers, int dump_endpoints);
HEISLAB_API const char* hl_usage(void);

#ifdef __cplusplus
}
#endif

#endif  // HEISLAB_HEISLAB_H_
