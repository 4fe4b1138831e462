// SPDX-License-Identifier: Apache-2.0
//
// urq: universal rate-efficient scalar quantization
// Copyright (C) 2026 The urq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "urq/urq.h"

#include "urq/analytics.hpp"
#include "urq/core.hpp"
#include "urq/errors.hpp"
#include "urq/model.hpp"
#include "urq/montecarlo.hpp"
#include "urq/reconstruct.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <vector>

struct urq_ensemble
{
    urq::MeasurementEnsemble ens;
};

struct urq_model
{
    urq::SignalModel model;
};

struct urq_candidates
{
    urq::CandidateSet set;
};

struct urq_decay
{
    urq::DecayReport report;
};

namespace
{

thread_local std::string last_error;

// Runs fn, mapping library exceptions onto status codes.
template <class Fn>
urq_status guard(Fn &&fn) noexcept
{
    try
    {
        fn();
        last_error.clear();
        return URQ_OK;
    }
    catch (const urq::VacuousBoundError &e)
    {
        last_error = e.what();
        return URQ_ERR_VACUOUS;
    }
    catch (const urq::IoError &e)
    {
        last_error = e.what();
        return URQ_ERR_IO;
    }
    catch (const urq::ParameterError &e)
    {
        last_error = e.what();
        return URQ_ERR_PARAM;
    }
    catch (const urq::DomainError &e)
    {
        last_error = e.what();
        return URQ_ERR_DOMAIN;
    }
    catch (const std::bad_alloc &)
    {
        last_error = "out of memory";
        return URQ_ERR_NOMEM;
    }
    catch (const std::exception &e)
    {
        last_error = e.what();
        return URQ_ERR_INTERNAL;
    }
    catch (...)
    {
        last_error = "unknown error";
        return URQ_ERR_INTERNAL;
    }
}

template <class T>
void need(const T *p, const char *what)
{
    if (p == nullptr)
        throw urq::ParameterError(std::string(what) + " must not be NULL");
}

urq::EnsembleParams to_cpp(const urq_ensemble_params &p)
{
    return {p.rows, p.dim, p.sigma, p.delta, p.bits, p.seed};
}

urq::TheoremParams to_cpp(const urq_theorem_params &p)
{
    urq::TheoremParams t;
    t.dim = p.dim;
    t.c_p = p.c_p;
    t.r1 = p.r1;
    t.r2 = p.r2;
    if (p.c_r_ceiling != 0.0)
        t.c_r_ceiling = p.c_r_ceiling;
    return t;
}

urq_theorem_params to_c(const urq::TheoremParams &t)
{
    return {t.dim, t.c_p, t.r1, t.r2, t.c_r_ceiling.value_or(0.0)};
}

urq::McOptions to_cpp(const urq_mc_options &o)
{
    return {o.trials, o.seed, o.partitions, o.threads};
}

urq_mc_estimate to_c(const urq::McEstimate &e)
{
    return {e.mean, e.std_err, e.trials, e.seed};
}

urq::McEstimate to_cpp(const urq_mc_estimate &e)
{
    return {e.mean, e.std_error, e.trials, e.seed};
}

urq::EnsembleFamily to_cpp(const urq_family &f)
{
    return {f.dim, f.sigma, f.delta, f.bits, f.seed};
}

urq::PairOptions to_cpp(const urq_pair_options &o)
{
    return {o.n_pairs, o.seed, o.shared_ensemble ? urq::EnsembleMode::Shared : urq::EnsembleMode::Fresh,
            o.partitions, o.threads};
}

urq_worst_distance to_c(const urq::WorstDistance &w)
{
    return {w.worst,   w.mean, w.any_consistent ? 1 : 0, w.consistent_pairs, w.n_pairs, w.max_pair_distance,
            to_c(w.consistent_fraction)};
}

template <class Handle, class Value>
void emit(Handle **out, Value &&v)
{
    need(out, "output handle");
    *out = new Handle{std::forward<Value>(v)};
}

} // namespace

extern "C" {

const char *urq_version(void)
{
    return urq::version();
}

const char *urq_last_error(void)
{
    return last_error.c_str();
}

const char *urq_status_name(urq_status status)
{
    switch (status)
    {
    case URQ_OK:
        return "ok";
    case URQ_ERR_PARAM:
        return "parameter error";
    case URQ_ERR_DOMAIN:
        return "domain error";
    case URQ_ERR_VACUOUS:
        return "vacuous bound";
    case URQ_ERR_IO:
        return "i/o error";
    case URQ_ERR_NOMEM:
        return "out of memory";
    case URQ_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

// ---- ensembles ---------------------------------------------------------

urq_status urq_ensemble_create(const urq_ensemble_params *params, urq_ensemble **out)
{
    return guard([&] {
        need(params, "params");
        emit(out, urq::MeasurementEnsemble::make(to_cpp(*params)));
    });
}

urq_status urq_ensemble_create_rows(const urq_ensemble_params *params, const double *row_delta, urq_ensemble **out)
{
    return guard([&] {
        need(params, "params");
        need(row_delta, "row_delta");
        emit(out, urq::MeasurementEnsemble::make(to_cpp(*params), {row_delta, params->rows}));
    });
}

void urq_ensemble_destroy(urq_ensemble *ens)
{
    delete ens;
}

urq_status urq_ensemble_info(const urq_ensemble *ens, urq_ensemble_params *out)
{
    return guard([&] {
        need(ens, "ensemble");
        need(out, "out");
        const auto &p = ens->ens.params();
        *out = {ens->ens.rows(), p.dim, p.sigma, p.delta, p.bits, p.seed};
    });
}

urq_status urq_ensemble_save(const urq_ensemble *ens, const char *path)
{
    return guard([&] {
        need(ens, "ensemble");
        need(path, "path");
        urq::save_ensemble(ens->ens, path);
    });
}

urq_status urq_ensemble_load(const char *path, urq_ensemble **out)
{
    return guard([&] {
        need(path, "path");
        emit(out, urq::load_ensemble(path));
    });
}

urq_status urq_measure(const urq_ensemble *ens, const double *x, size_t dim, double *y)
{
    return guard([&] {
        need(ens, "ensemble");
        need(x, "x");
        need(y, "y");
        const auto v = urq::measure(ens->ens, {x, dim});
        std::copy(v.begin(), v.end(), y);
    });
}

urq_status urq_quantize(const urq_ensemble *ens, const double *x, size_t dim, uint32_t *q)
{
    return guard([&] {
        need(ens, "ensemble");
        need(x, "x");
        need(q, "q");
        const auto code = urq::quantize(ens->ens, {x, dim});
        std::copy(code.symbols().begin(), code.symbols().end(), q);
    });
}

urq_status urq_quantize_scalar(double v, unsigned bits, uint32_t *out)
{
    return guard([&] {
        need(out, "out");
        *out = urq::quantize_scalar(v, bits);
    });
}

urq_status urq_consistency(const uint32_t *a, const uint32_t *b, size_t n, int *equal, size_t *hamming)
{
    return guard([&] {
        if (n > 0)
        {
            need(a, "a");
            need(b, "b");
        }
        size_t h = 0;
        for (size_t i = 0; i < n; ++i)
            h += a[i] != b[i] ? 1 : 0;
        if (equal)
            *equal = h == 0 ? 1 : 0;
        if (hamming)
            *hamming = h;
    });
}

// ---- analytics ---------------------------------------------------------

urq_status urq_triangle_consistency(double l, double delta, unsigned bits, double *out)
{
    return guard([&] {
        need(out, "out");
        *out = bits == 1 ? urq::triangle_consistency(l, delta) : urq::triangle_consistency_multibit(l, delta, bits);
    });
}

urq_status urq_consistency_prob_series(double d, double sigma, double delta, double *out)
{
    return guard([&] {
        need(out, "out");
        *out = urq::consistency_prob_series(d, sigma, delta);
    });
}

urq_status urq_consistency_prob(double d, double sigma, double delta, unsigned bits, double *out)
{
    return guard([&] {
        need(out, "out");
        *out = urq::consistency_prob(d, sigma, delta, bits);
    });
}

urq_status urq_consistency_bounds(double d, double sigma, double delta, urq_bounds *out)
{
    return guard([&] {
        need(out, "out");
        const auto b = urq::consistency_bounds(d, sigma, delta);
        *out = {b.exact_series, b.lower_first_term, b.lower_linear, b.upper};
    });
}

urq_status urq_norm_tail(size_t dim, double sigma, double c_p, double *out)
{
    return guard([&] {
        need(out, "out");
        *out = urq::norm_tail(dim, sigma, c_p);
    });
}

urq_status urq_ball_pair_failure_bound(double d, double epsilon, double c_p, double sigma, double delta, size_t dim,
                                       double *out)
{
    return guard([&] {
        need(out, "out");
        *out = urq::ball_pair_failure_bound(d, epsilon, c_p, sigma, delta, dim);
    });
}

void urq_theorem_default_params(size_t dim, urq_theorem_params *out)
{
    if (out == nullptr)
        return;
    urq::TheoremParams t;
    t.dim = dim;
    *out = to_c(t);
}

urq_status urq_concrete_instance(size_t dim, urq_theorem_params *out)
{
    return guard([&] {
        need(out, "out");
        *out = to_c(urq::concrete_instance(dim));
    });
}

urq_status urq_theorem_constants_eval(const urq_theorem_params *params, urq_theorem_constants *out)
{
    return guard([&] {
        need(params, "params");
        need(out, "out");
        const auto c = urq::theorem_constants(to_cpp(*params));
        *out = {c.c_o, c.c_r, c.c_r_expression, c.half_term, c.exp_term, c.width_term, c.tail_term};
    });
}

urq_status urq_theorem_design_eval(const urq_theorem_params *params, double d, urq_theorem_design *out)
{
    return guard([&] {
        need(params, "params");
        need(out, "out");
        const auto g = urq::theorem_design(to_cpp(*params), d);
        *out = {g.sigma, g.delta, g.epsilon};
    });
}

urq_status urq_theorem_failure_bound(const urq_theorem_params *params, size_t measurements, double d,
                                     double *log_bound, double *bound)
{
    return guard([&] {
        need(params, "params");
        const auto b = urq::theorem_failure_bound(to_cpp(*params), measurements, d);
        if (log_bound)
            *log_bound = b.log_bound;
        if (bound)
            *bound = b.bound;
    });
}

urq_status urq_corollary_distance(size_t dim, double measurements, double p0, double c_o, double c_r, double *out)
{
    return guard([&] {
        need(out, "out");
        *out = urq::corollary_distance(dim, measurements, p0, c_o, c_r);
    });
}

urq_status urq_rate_overhead(double c_r, double *out)
{
    return guard([&] {
        need(out, "out");
        *out = urq::rate_overhead(c_r);
    });
}

urq_status urq_required_rate(unsigned bits, size_t dim, double p0, double c_o, double c_r, size_t *out)
{
    return guard([&] {
        need(out, "out");
        *out = urq::required_rate(bits, dim, p0, c_o, c_r);
    });
}

// ---- models ------------------------------------------------------------

urq_status urq_model_parse(const char *spec, urq_model **out)
{
    return guard([&] {
        need(spec, "spec");
        emit(out, urq::parse_model(spec));
    });
}

urq_status urq_model_unit_ball(size_t dim, urq_model **out)
{
    return guard([&] { emit(out, urq::make_unit_ball(dim)); });
}

urq_status urq_model_sparse(size_t ambient, size_t sparsity, urq_model **out)
{
    return guard([&] { emit(out, urq::make_sparse(ambient, sparsity)); });
}

urq_status urq_model_union_count(size_t ambient, size_t dim, double count, urq_model **out)
{
    return guard([&] { emit(out, urq::make_union_count(ambient, dim, count)); });
}

urq_status urq_model_union(size_t ambient, size_t dim, size_t count, const double *bases, urq_model **out)
{
    return guard([&] {
        need(bases, "bases");
        std::vector<std::vector<double>> b(count);
        const size_t stride = ambient * dim;
        for (size_t i = 0; i < count; ++i)
            b[i].assign(bases + i * stride, bases + (i + 1) * stride);
        emit(out, urq::make_union(ambient, dim, std::move(b)));
    });
}

urq_status urq_model_similar(const double *center, size_t dim, double radius, urq_model **out)
{
    return guard([&] {
        need(center, "center");
        emit(out, urq::make_similar(urq::Signal(center, center + dim), radius));
    });
}

void urq_model_destroy(urq_model *model)
{
    delete model;
}

urq_status urq_model_ambient_dim(const urq_model *model, size_t *out)
{
    return guard([&] {
        need(model, "model");
        need(out, "out");
        *out = urq::ambient_dim(model->model);
    });
}

urq_status urq_model_describe(const urq_model *model, char *buf, size_t cap, size_t *needed)
{
    return guard([&] {
        need(model, "model");
        const auto s = urq::describe(model->model);
        if (needed)
            *needed = s.size() + 1;
        if (buf != nullptr && cap > 0)
        {
            const size_t n = std::min(cap - 1, s.size());
            std::memcpy(buf, s.data(), n);
            buf[n] = '\0';
        }
    });
}

urq_status urq_covering_log(const urq_model *model, double epsilon, double *out)
{
    return guard([&] {
        need(model, "model");
        need(out, "out");
        *out = urq::covering_log(model->model, epsilon);
    });
}

urq_status urq_plan_rate(const urq_model *model, double d, double p0, const urq_theorem_params *params,
                         urq_rate_plan *out)
{
    return guard([&] {
        need(model, "model");
        need(params, "params");
        need(out, "out");
        const auto p = urq::plan_rate(model->model, d, p0, to_cpp(*params));
        *out = {p.distance, p.p0, p.c_o, p.c_r, p.epsilon, p.covering_log, p.required_m};
    });
}

// ---- Monte Carlo -------------------------------------------------------

void urq_mc_default_options(urq_mc_options *out)
{
    if (out == nullptr)
        return;
    const urq::McOptions o;
    *out = {o.trials, o.seed, o.partitions, o.threads};
}

urq_status urq_mc_consistency(double d, double sigma, double delta, size_t dim, unsigned bits,
                              const urq_mc_options *opts, urq_mc_estimate *out)
{
    return guard([&] {
        need(opts, "options");
        need(out, "out");
        *out = to_c(urq::mc_consistency(d, sigma, delta, dim, bits, to_cpp(*opts)));
    });
}

urq_status urq_mc_pair_consistency(const double *x, const double *x2, size_t dim, double sigma, double delta,
                                   unsigned bits, const urq_mc_options *opts, urq_mc_estimate *out)
{
    return guard([&] {
        need(x, "x");
        need(x2, "x2");
        need(opts, "options");
        need(out, "out");
        *out = to_c(urq::mc_pair_consistency({x, dim}, {x2, dim}, sigma, delta, bits, to_cpp(*opts)));
    });
}

urq_status urq_mc_norm_tail(size_t dim, double sigma, double c_p, const urq_mc_options *opts, urq_mc_estimate *out)
{
    return guard([&] {
        need(opts, "options");
        need(out, "out");
        *out = to_c(urq::mc_norm_tail(dim, sigma, c_p, to_cpp(*opts)));
    });
}

urq_status urq_mc_ball_guarantee(double d, double epsilon, double c_p, double sigma, double delta, size_t dim,
                                 const urq_mc_options *opts, urq_mc_estimate *out)
{
    return guard([&] {
        need(opts, "options");
        need(out, "out");
        *out = to_c(urq::mc_ball_guarantee(d, epsilon, c_p, sigma, delta, dim, to_cpp(*opts)));
    });
}

urq_status urq_z_score(const urq_mc_estimate *est, double analytic, double *out)
{
    return guard([&] {
        need(est, "estimate");
        need(out, "out");
        *out = urq::z_score(to_cpp(*est), analytic);
    });
}

// ---- reconstruction ----------------------------------------------------

urq_status urq_candidates_grid(const urq_model *model, double spacing, urq_candidates **out)
{
    return guard([&] {
        need(model, "model");
        emit(out, urq::CandidateSet::grid(model->model, spacing));
    });
}

urq_status urq_candidates_cloud(const urq_model *model, size_t count, uint64_t seed, urq_candidates **out)
{
    return guard([&] {
        need(model, "model");
        emit(out, urq::CandidateSet::cloud(model->model, count, seed));
    });
}

urq_status urq_candidates_from_points(size_t dim, const double *points, size_t count, urq_candidates **out)
{
    return guard([&] {
        if (count > 0)
            need(points, "points");
        emit(out, urq::CandidateSet::from_points(dim, std::vector<double>(points, points + count * dim)));
    });
}

void urq_candidates_destroy(urq_candidates *cands)
{
    delete cands;
}

urq_status urq_candidates_size(const urq_candidates *cands, size_t *count, size_t *dim)
{
    return guard([&] {
        need(cands, "candidates");
        if (count)
            *count = cands->set.size();
        if (dim)
            *dim = cands->set.dim();
    });
}

urq_status urq_candidates_point(const urq_candidates *cands, size_t index, double *out)
{
    return guard([&] {
        need(cands, "candidates");
        need(out, "out");
        if (index >= cands->set.size())
            throw urq::ParameterError("candidate index out of range");
        const auto p = cands->set.point(index);
        std::copy(p.begin(), p.end(), out);
    });
}

urq_status urq_reconstruct(const urq_ensemble *ens, const uint32_t *q, size_t q_len, const urq_candidates *cands,
                           double *best, size_t *index, size_t *consistent_count)
{
    return guard([&] {
        need(ens, "ensemble");
        need(cands, "candidates");
        if (q_len > 0)
            need(q, "q");
        const urq::QuantizedCode code(std::vector<uint32_t>(q, q + q_len), ens->ens.bits());
        const auto r = urq::consistent_reconstruct(ens->ens, code, cands->set);
        if (index)
            *index = r.index ? *r.index : std::numeric_limits<size_t>::max();
        if (best && r.best)
            std::copy(r.best->begin(), r.best->end(), best);
        if (consistent_count)
            *consistent_count = r.consistent_count;
    });
}

urq_status urq_worst_distance_model(const urq_family *family, size_t measurements, const urq_model *model,
                                    const urq_pair_options *opts, urq_worst_distance *out)
{
    return guard([&] {
        need(family, "family");
        need(model, "model");
        need(opts, "options");
        need(out, "out");
        *out = to_c(urq::worst_consistent_distance(to_cpp(*family), measurements, model->model, to_cpp(*opts)));
    });
}

urq_status urq_worst_distance_pair(const urq_family *family, size_t measurements, const double *x, const double *x2,
                                   const urq_pair_options *opts, urq_worst_distance *out)
{
    return guard([&] {
        need(family, "family");
        need(x, "x");
        need(x2, "x2");
        need(opts, "options");
        need(out, "out");
        urq::FixedPair pair{urq::Signal(x, x + family->dim), urq::Signal(x2, x2 + family->dim)};
        *out = to_c(urq::worst_consistent_distance(to_cpp(*family), measurements, std::move(pair), to_cpp(*opts)));
    });
}

// ---- decay -------------------------------------------------------------

void urq_decay_default_config(urq_decay_config *out)
{
    if (out == nullptr)
        return;
    const urq::DecayConfig c;
    *out = urq_decay_config{};
    out->dim = c.dim;
    out->trials = c.trials;
    out->seed = c.seed;
    out->delta = c.delta;
    out->sigma = c.sigma;
    out->bits = c.bits;
    out->p0 = c.p0;
    out->c_o = c.c_o;
    out->c_r = c.c_r;
    out->r2 = c.r2;
    out->grid_spacing = c.grid_spacing;
    out->cloud_size = c.cloud_size;
    out->partitions = c.partitions;
    out->threads = c.threads;
}

urq_status urq_decay_run(const urq_decay_config *config, urq_decay **out)
{
    return guard([&] {
        need(config, "config");
        if (config->m_count > 0)
            need(config->m_list, "m_list");
        urq::DecayConfig c;
        c.dim = config->dim;
        c.m_list.assign(config->m_list, config->m_list + config->m_count);
        c.trials = config->trials;
        c.seed = config->seed;
        if (config->model)
            c.model = config->model->model;
        c.delta_rule = config->target_delta ? urq::DeltaRule::Target : urq::DeltaRule::Fixed;
        c.delta = config->delta;
        c.sigma = config->sigma;
        c.bits = config->bits;
        c.p0 = config->p0;
        c.c_o = config->c_o;
        c.c_r = config->c_r;
        c.r2 = config->r2;
        c.grid_spacing = config->grid_spacing;
        c.cloud_size = config->cloud_size;
        c.partitions = config->partitions;
        c.threads = config->threads;
        emit(out, urq::decay_experiment(c));
    });
}

void urq_decay_destroy(urq_decay *report)
{
    delete report;
}

urq_status urq_decay_row_count(const urq_decay *report, size_t *out)
{
    return guard([&] {
        need(report, "report");
        need(out, "out");
        *out = report->report.rows.size();
    });
}

urq_status urq_decay_get_row(const urq_decay *report, size_t index, urq_decay_row *out)
{
    return guard([&] {
        need(report, "report");
        need(out, "out");
        if (index >= report->report.rows.size())
            throw urq::ParameterError("decay row index out of range");
        const auto &r = report->report.rows[index];
        *out = {r.m, r.worst, r.mean, r.pairs_tested, r.empty_trials, r.guarantee, r.delta};
    });
}

urq_status urq_decay_get_summary(const urq_decay *report, urq_decay_summary *out)
{
    return guard([&] {
        need(report, "report");
        need(out, "out");
        const auto &r = report->report;
        *out = {r.fit.valid ? 1 : 0, r.fit.slope,       r.fit.intercept, r.fit.r_squared,       r.fit.ratio_per_2k,
                r.fit.points,        r.floor_index,     r.resolution,    r.dominance_fraction};
    });
}

const char *urq_decay_fit_note(const urq_decay *report)
{
    return report == nullptr ? "" : report->report.fit.note.c_str();
}

} // extern "C"
