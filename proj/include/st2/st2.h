// Copyright 2026 The st2 Authors.
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

#ifndef ST2_ST2_H_
#define ST2_ST2_H_

#include <stddef.h>
#include <stdint.h>

#if defined(ST2_BUILDING_LIBRARY)
#define ST2_API __attribute__((visibility("default")))
#else
#define ST2_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  ST2_OK = 0,
  ST2_ERR_INVALID = 1,   /* malformed input or violated precondition */
  ST2_ERR_DOMAIN = 2,    /* input outside the mathematical domain */
  ST2_ERR_IO = 3,        /* file could not be read or written */
  ST2_ERR_UNKNOWN = 4,   /* unknown experiment or named object */
  ST2_ERR_BUFFER = 5,    /* output buffer too small; *len holds the size needed */
  ST2_ERR_INTERNAL = 6
} st2_status;

typedef struct st2_matrix st2_matrix;         /* bounding matrix */
typedef struct st2_collection st2_collection; /* operator collection */
typedef struct st2_complex st2_complex;       /* finite Hilbert complex */
typedef struct st2_algebra st2_algebra;       /* graded nilpotent Lie algebra */
typedef struct st2_report st2_report;

/* Message of the last failing call on this thread; empty after success. */
ST2_API const char* st2_last_error(void);
ST2_API const char* st2_version(void);

/* Functions that return text take (buf, len). On entry *len is the buffer
 * size; on return it is the size needed including the terminator. Pass
 * buf = NULL to query the size. */

/* Bounding matrices. Rationals are passed as strings: "p", "p/q", "0.25". */
ST2_API st2_status st2_bm_load(const char* path, st2_matrix** out);
ST2_API st2_status st2_bm_from_json(const char* json, st2_matrix** out);
/* name: "rumin", "g2", "nilpotent" (uses s), "carnot" (uses s). */
ST2_API st2_status st2_bm_standard(const char* name, int s, st2_matrix** out);
ST2_API void st2_bm_free(st2_matrix* m);
ST2_API size_t st2_bm_size(const st2_matrix* m);
ST2_API st2_status st2_bm_to_json(const st2_matrix* m, char* buf, size_t* len);
ST2_API st2_status st2_bm_check(const st2_matrix* m, int* decreasing, st2_report** report);
ST2_API st2_status st2_bm_contains(const st2_matrix* m, const char* const* t, size_t n,
                                   int* inside);
/* t_out gets size() entries; *empty is set when the cone is empty. */
ST2_API st2_status st2_bm_sample(const st2_matrix* m, double margin, double* t_out, size_t n,
                                 int* empty);
/* rho entries may be "inf". The bound is written as a rational string. */
ST2_API st2_status st2_bm_order_bound(const st2_matrix* m, const char* const* t,
                                      const char* const* rho, size_t n, char* buf, size_t* len);

/* Operator collections, JSON as read by the matrix loader. */
ST2_API st2_status st2_collection_load(const char* path, st2_collection** out);
ST2_API void st2_collection_free(st2_collection* c);
ST2_API size_t st2_collection_count(const st2_collection* c);
ST2_API size_t st2_collection_dim(const st2_collection* c);
ST2_API st2_status st2_collection_verify(const st2_collection* c, st2_report** report);
/* Assembles with exponents t and checks the square against Sum |D_j|^{2 t_j}.
 * When out_stem is not NULL the assembled matrix is written there. */
ST2_API st2_status st2_collection_assemble(const st2_collection* c, const double* t, size_t n,
                                           const char* out_stem, st2_report** report);

/* Finite Hilbert complexes. */
ST2_API st2_status st2_complex_load(const char* path, st2_complex** out);
ST2_API void st2_complex_free(st2_complex* c);
ST2_API size_t st2_complex_length(const st2_complex* c);
/* Validation, Betti numbers, bounding matrix, signed powers and assembly. */
ST2_API st2_status st2_complex_analyze(const st2_complex* c, double tau, st2_report** report);

/* Nilpotent algebras. name: "heisenberg", "filiformN", "nN", "abelianN". */
ST2_API st2_status st2_algebra_standard(const char* name, st2_algebra** out);
ST2_API st2_status st2_algebra_load(const char* path, st2_algebra** out);
ST2_API void st2_algebra_free(st2_algebra* a);
ST2_API int st2_algebra_dim(const st2_algebra* a);
ST2_API int st2_algebra_step(const st2_algebra* a);
ST2_API st2_status st2_algebra_validate(const st2_algebra* a, st2_report** report);
/* eps NULL means the generic matrix max(i - j, 0). options_json may hold
 * "radii", "slope_tol", "delta", "random_points", "seed", "chart". */
ST2_API st2_status st2_algebra_verify_bound(const st2_algebra* a, const st2_matrix* eps,
                                            const char* options_json, st2_report** report);
ST2_API st2_status st2_algebra_truncate(const st2_algebra* a, double radius, size_t max_points,
                                        st2_report** report);
ST2_API st2_status st2_algebra_dilation(const st2_algebra* a, double tau, const char* t,
                                        int samples, uint64_t seed, st2_report** report);

/* Symbol computations. */
ST2_API st2_status st2_rumin_characters(const double* xi, size_t count, double alpha,
                                        st2_report** report);
ST2_API st2_status st2_rumin_oscillator(int n, double lambda, int padding, st2_report** report);
ST2_API st2_status st2_rumin_naive_demo(const double* alphas, size_t n_alpha, const double* ladder,
                                        size_t n_ladder, st2_report** report);

/* Experiment registry. config_json NULL means the defaults. */
ST2_API size_t st2_experiment_count(void);
ST2_API const char* st2_experiment_name(size_t i);
ST2_API const char* st2_experiment_anchor(size_t i);
ST2_API const char* st2_experiment_summary(size_t i);
ST2_API st2_status st2_run_experiment(const char* name, const char* config_json,
                                      st2_report** report);
/* Newline separated close names. */
ST2_API st2_status st2_suggest(const char* name, char* buf, size_t* len);

/* Reports. */
ST2_API void st2_report_free(st2_report* r);
ST2_API int st2_report_passed(const st2_report* r);
ST2_API size_t st2_report_failures(const st2_report* r);
ST2_API st2_status st2_report_json(const st2_report* r, char* buf, size_t* len);
/* Writes dir/report.json and one CSV per series. */
ST2_API st2_status st2_report_write(const st2_report* r, const char* dir);

#ifdef __cplusplus
}
#endif

#endif  /* ST2_ST2_H_ */
