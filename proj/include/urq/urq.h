/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * urq: universal rate-efficient scalar quantization
 * Copyright (C) 2026 The urq authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ------------------------------------------------------------------------
 *
 * C interface of liburq. Every function returns a status code; on failure the
 * message of the most recent error on the calling thread is available from
 * urq_last_error(). Output arguments are left untouched on failure. Handles
 * are opaque and must be released with the matching *_destroy function
 * (passing NULL is allowed).
 */

#ifndef URQ_URQ_H
#define URQ_URQ_H

#include <stddef.h>
#include <stdint.h>

#if defined(URQ_BUILDING_LIBRARY)
#define URQ_API __attribute__((visibility("default")))
#else
#define URQ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum urq_status
{
    URQ_OK = 0,
    URQ_ERR_PARAM = 1,    /* precondition violated by an argument */
    URQ_ERR_DOMAIN = 2,   /* non-finite input or numerically unreachable value */
    URQ_ERR_VACUOUS = 3,  /* bound carries no information (c_r >= 1) */
    URQ_ERR_IO = 4,       /* file missing, unreadable or malformed */
    URQ_ERR_NOMEM = 5,
    URQ_ERR_INTERNAL = 6
} urq_status;

URQ_API const char *urq_version(void);
URQ_API const char *urq_last_error(void);
URQ_API const char *urq_status_name(urq_status status);

/* ---- measurement ensembles and quantization ---------------------------- */

typedef struct urq_ensemble urq_ensemble;

typedef struct urq_ensemble_params
{
    size_t rows;   /* M */
    size_t dim;    /* K */
    double sigma;
    double delta;
    unsigned bits; /* B, 1..31 */
    uint64_t seed;
} urq_ensemble_params;

URQ_API urq_status urq_ensemble_create(const urq_ensemble_params *params, urq_ensemble **out);
/* Per-row precision variant; row_delta holds params->rows values. */
URQ_API urq_status urq_ensemble_create_rows(const urq_ensemble_params *params, const double *row_delta,
                                            urq_ensemble **out);
URQ_API void urq_ensemble_destroy(urq_ensemble *ens);
URQ_API urq_status urq_ensemble_info(const urq_ensemble *ens, urq_ensemble_params *out);
URQ_API urq_status urq_ensemble_save(const urq_ensemble *ens, const char *path);
URQ_API urq_status urq_ensemble_load(const char *path, urq_ensemble **out);

/* y and q receive `rows` values. */
URQ_API urq_status urq_measure(const urq_ensemble *ens, const double *x, size_t dim, double *y);
URQ_API urq_status urq_quantize(const urq_ensemble *ens, const double *x, size_t dim, uint32_t *q);
URQ_API urq_status urq_quantize_scalar(double v, unsigned bits, uint32_t *out);
URQ_API urq_status urq_consistency(const uint32_t *a, const uint32_t *b, size_t n, int *equal, size_t *hamming);

/* ---- analytic laws and bounds ------------------------------------------ */

URQ_API urq_status urq_triangle_consistency(double l, double delta, unsigned bits, double *out);
URQ_API urq_status urq_consistency_prob_series(double d, double sigma, double delta, double *out);
URQ_API urq_status urq_consistency_prob(double d, double sigma, double delta, unsigned bits, double *out);

typedef struct urq_bounds
{
    double exact;
    double lower_first;
    double lower_linear;
    double upper;
} urq_bounds;

URQ_API urq_status urq_consistency_bounds(double d, double sigma, double delta, urq_bounds *out);
URQ_API urq_status urq_norm_tail(size_t dim, double sigma, double c_p, double *out);
URQ_API urq_status urq_ball_pair_failure_bound(double d, double epsilon, double c_p, double sigma, double delta,
                                               size_t dim, double *out);

typedef struct urq_theorem_params
{
    size_t dim;
    double c_p;
    double r1;
    double r2;
    double c_r_ceiling; /* 0: use the derived expression */
} urq_theorem_params;

typedef struct urq_theorem_constants
{
    double c_o;
    double c_r;
    double c_r_expression;
    double half_term;
    double exp_term;
    double width_term;
    double tail_term;
} urq_theorem_constants;

typedef struct urq_theorem_design
{
    double sigma;
    double delta;
    double epsilon;
} urq_theorem_design;

/* c_p = 2, r1 = 0.2, r2 = 1, no ceiling. */
URQ_API void urq_theorem_default_params(size_t dim, urq_theorem_params *out);
/* The rounded instance c_o = 60, c_r = 3/4; requires dim > 8. */
URQ_API urq_status urq_concrete_instance(size_t dim, urq_theorem_params *out);
URQ_API urq_status urq_theorem_constants_eval(const urq_theorem_params *params, urq_theorem_constants *out);
URQ_API urq_status urq_theorem_design_eval(const urq_theorem_params *params, double d, urq_theorem_design *out);
URQ_API urq_status urq_theorem_failure_bound(const urq_theorem_params *params, size_t measurements, double d,
                                             double *log_bound, double *bound);
URQ_API urq_status urq_corollary_distance(size_t dim, double measurements, double p0, double c_o, double c_r,
                                          double *out);
URQ_API urq_status urq_rate_overhead(double c_r, double *out);
URQ_API urq_status urq_required_rate(unsigned bits, size_t dim, double p0, double c_o, double c_r, size_t *out);

/* ---- signal models and rate planning ----------------------------------- */

typedef struct urq_model urq_model;

/* "unit:K", "sparse:N:K", "union:N:K:L", "similar:K:D" */
URQ_API urq_status urq_model_parse(const char *spec, urq_model **out);
URQ_API urq_status urq_model_unit_ball(size_t dim, urq_model **out);
URQ_API urq_status urq_model_sparse(size_t ambient, size_t sparsity, urq_model **out);
URQ_API urq_status urq_model_union_count(size_t ambient, size_t dim, double count, urq_model **out);
/* bases: `count` row-major N x K matrices with orthonormal columns, back to back. */
URQ_API urq_status urq_model_union(size_t ambient, size_t dim, size_t count, const double *bases, urq_model **out);
URQ_API urq_status urq_model_similar(const double *center, size_t dim, double radius, urq_model **out);
URQ_API void urq_model_destroy(urq_model *model);
URQ_API urq_status urq_model_ambient_dim(const urq_model *model, size_t *out);
/* Writes at most cap bytes including the terminator; *needed gets the full length + 1. */
URQ_API urq_status urq_model_describe(const urq_model *model, char *buf, size_t cap, size_t *needed);

URQ_API urq_status urq_covering_log(const urq_model *model, double epsilon, double *out);

typedef struct urq_rate_plan
{
    double distance;
    double p0;
    double c_o;
    double c_r;
    double epsilon;
    double covering_log;
    size_t required_m;
} urq_rate_plan;

URQ_API urq_status urq_plan_rate(const urq_model *model, double d, double p0, const urq_theorem_params *params,
                                 urq_rate_plan *out);

/* ---- Monte Carlo -------------------------------------------------------- */

typedef struct urq_mc_options
{
    uint64_t trials;
    uint64_t seed;
    unsigned partitions;
    unsigned threads; /* 0: automatic; never changes the result */
} urq_mc_options;

typedef struct urq_mc_estimate
{
    double mean;
    double std_error;
    uint64_t trials;
    uint64_t seed;
} urq_mc_estimate;

URQ_API void urq_mc_default_options(urq_mc_options *out);
URQ_API urq_status urq_mc_consistency(double d, double sigma, double delta, size_t dim, unsigned bits,
                                      const urq_mc_options *opts, urq_mc_estimate *out);
URQ_API urq_status urq_mc_pair_consistency(const double *x, const double *x2, size_t dim, double sigma, double delta,
                                           unsigned bits, const urq_mc_options *opts, urq_mc_estimate *out);
URQ_API urq_status urq_mc_norm_tail(size_t dim, double sigma, double c_p, const urq_mc_options *opts,
                                    urq_mc_estimate *out);
URQ_API urq_status urq_mc_ball_guarantee(double d, double epsilon, double c_p, double sigma, double delta, size_t dim,
                                         const urq_mc_options *opts, urq_mc_estimate *out);
URQ_API urq_status urq_z_score(const urq_mc_estimate *est, double analytic, double *out);

/* ---- reconstruction ----------------------------------------------------- */

typedef struct urq_candidates urq_candidates;

URQ_API urq_status urq_candidates_grid(const urq_model *model, double spacing, urq_candidates **out);
URQ_API urq_status urq_candidates_cloud(const urq_model *model, size_t count, uint64_t seed, urq_candidates **out);
URQ_API urq_status urq_candidates_from_points(size_t dim, const double *points, size_t count, urq_candidates **out);
URQ_API void urq_candidates_destroy(urq_candidates *cands);
URQ_API urq_status urq_candidates_size(const urq_candidates *cands, size_t *count, size_t *dim);
URQ_API urq_status urq_candidates_point(const urq_candidates *cands, size_t index, double *out);

/* Compares the first q_len rows. *index is SIZE_MAX and best is untouched when
   nothing is consistent; best may be NULL. */
URQ_API urq_status urq_reconstruct(const urq_ensemble *ens, const uint32_t *q, size_t q_len,
                                   const urq_candidates *cands, double *best, size_t *index,
                                   size_t *consistent_count);

typedef struct urq_family
{
    size_t dim;
    double sigma;
    double delta;
    unsigned bits;
    uint64_t seed;
} urq_family;

typedef struct urq_pair_options
{
    uint64_t n_pairs;
    uint64_t seed;
    int shared_ensemble; /* 0: fresh ensemble per pair */
    unsigned partitions;
    unsigned threads;
} urq_pair_options;

typedef struct urq_worst_distance
{
    double worst;
    double mean;
    int any_consistent;
    uint64_t consistent_pairs;
    uint64_t n_pairs;
    double max_pair_distance;
    urq_mc_estimate consistent_fraction;
} urq_worst_distance;

URQ_API urq_status urq_worst_distance_model(const urq_family *family, size_t measurements, const urq_model *model,
                                            const urq_pair_options *opts, urq_worst_distance *out);
URQ_API urq_status urq_worst_distance_pair(const urq_family *family, size_t measurements, const double *x,
                                           const double *x2, const urq_pair_options *opts, urq_worst_distance *out);

/* ---- decay experiment --------------------------------------------------- */

typedef struct urq_decay urq_decay;

typedef struct urq_decay_config
{
    size_t dim;
    const size_t *m_list; /* strictly increasing */
    size_t m_count;
    uint64_t trials;
    uint64_t seed;
    const urq_model *model; /* NULL: unit ball */
    int target_delta;       /* 0: fixed delta; 1: delta(M) = d(M) r2 / sqrt(K) */
    double delta;
    double sigma; /* 0: 1/sqrt(K) */
    unsigned bits;
    double p0;
    double c_o;
    double c_r;
    double r2;
    double grid_spacing;
    size_t cloud_size; /* > 0 selects a random cloud instead of the grid */
    unsigned partitions;
    unsigned threads;
} urq_decay_config;

typedef struct urq_decay_row
{
    size_t m;
    double worst;
    double mean;
    uint64_t pairs_tested;
    uint64_t empty_trials;
    double guarantee;
    double delta;
} urq_decay_row;

typedef struct urq_decay_summary
{
    int fit_valid;
    double slope;
    double intercept;
    double r_squared;
    double ratio_per_2k;
    size_t fit_points;
    size_t floor_index;
    double resolution;
    double dominance_fraction;
} urq_decay_summary;

/* K = 2, 2000 trials, delta = 0.2, B = 1, P0 = 0.05, c_o = 60, c_r = 3/4,
   r2 = 1, grid spacing 0.01; m_list left empty. */
URQ_API void urq_decay_default_config(urq_decay_config *out);
URQ_API urq_status urq_decay_run(const urq_decay_config *config, urq_decay **out);
URQ_API void urq_decay_destroy(urq_decay *report);
URQ_API urq_status urq_decay_row_count(const urq_decay *report, size_t *out);
URQ_API urq_status urq_decay_get_row(const urq_decay *report, size_t index, urq_decay_row *out);
URQ_API urq_status urq_decay_get_summary(const urq_decay *report, urq_decay_summary *out);
/* Fit note ("" when the fit is regular); valid for the lifetime of the handle. */
URQ_API const char *urq_decay_fit_note(const urq_decay *report);

#ifdef __cplusplus
}
#endif

#endif /* URQ_URQ_H */
