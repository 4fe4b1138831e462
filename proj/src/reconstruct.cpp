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

#include "urq/reconstruct.hpp"
#include "urq/analytics.hpp"
#include "urq/errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace urq
{

namespace
{

constexpr double kMaxGridPoints = 5e7;

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double distance(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return std::sqrt(s);
}

// Radius of the model's pieces: 1 except for a similar-signal ball.
double model_radius(const SignalModel &model)
{
    if (const auto *m = std::get_if<SimilarSignal>(&model))
        return m->radius;
    return 1.0;
}

double unit_ball_volume(std::size_t k)
{
    const double h = 0.5 * static_cast<double>(k);
    return std::exp(h * std::log(std::numbers::pi) - std::lgamma(h + 1.0));
}

void check_family(const EnsembleFamily &f)
{
    if (f.dim < 1)
        throw ParameterError("ensemble family: K must be >= 1");
    if (!(f.sigma > 0.0) || !std::isfinite(f.sigma))
        throw ParameterError("ensemble family: sigma must be positive");
    if (!(f.delta > 0.0) || !std::isfinite(f.delta))
        throw ParameterError("ensemble family: delta must be positive");
    if (f.bits < 1 || f.bits > kMaxBits)
        throw ParameterError("ensemble family: bits must be in [1, 31]");
}

} // namespace

CandidateSet CandidateSet::grid(const SignalModel &model, double spacing)
{
    validate(model);
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw ParameterError("candidate grid: spacing must be positive");

    Signal center;
    double radius = 1.0;
    if (const auto *m = std::get_if<UnitBall>(&model))
        center.assign(m->dim, 0.0);
    else if (const auto *m = std::get_if<SimilarSignal>(&model))
    {
        center = m->center;
        radius = m->radius;
    }
    else
        throw ParameterError("candidate grid: only unit-ball and similar-signal models are gridded");

    const std::size_t k = center.size();
    const double half = std::floor(radius / spacing * (1.0 + 1e-12));
    if (std::pow(2.0 * half + 1.0, static_cast<double>(k)) > kMaxGridPoints)
        throw ParameterError("candidate grid: too many points; increase the spacing");
    const auto n = static_cast<long long>(half);

    CandidateSet set;
    set.kind_ = Kind::Grid;
    set.dim_ = k;
    set.spacing_ = spacing;
    set.resolution_ = spacing;

    // Odometer over [-n, n]^K.
    std::vector<long long> idx(k, -n);
    std::vector<double> p(k);
    const double r2 = radius * radius * (1.0 + 1e-12);
    for (;;)
    {
        double n2 = 0.0;
        for (std::size_t i = 0; i < k; ++i)
        {
            const double off = spacing * static_cast<double>(idx[i]);
            n2 += off * off;
            p[i] = center[i] + off;
        }
        if (n2 <= r2)
            set.points_.insert(set.points_.end(), p.begin(), p.end());

        std::size_t i = 0;
        while (i < k && idx[i] == n)
            idx[i++] = -n;
        if (i == k)
            break;
        ++idx[i];
    }
    return set;
}

CandidateSet CandidateSet::cloud(const SignalModel &model, std::size_t count, std::uint64_t seed)
{
    validate(model);
    if (count < 1)
        throw ParameterError("candidate cloud: count must be >= 1");

    CandidateSet set;
    set.kind_ = Kind::Cloud;
    set.dim_ = ambient_dim(model);
    set.seed_ = seed;
    const auto k = static_cast<double>(piece_dim(model));
    set.resolution_ = model_radius(model) * std::pow(unit_ball_volume(piece_dim(model)) / static_cast<double>(count), 1.0 / k);

    set.points_.reserve(count * set.dim_);
    detail::Stream s(detail::derive_seed(seed, detail::kCandidateStream));
    for (std::size_t i = 0; i < count; ++i)
    {
        const auto x = detail::sample_model(model, s);
        set.points_.insert(set.points_.end(), x.begin(), x.end());
    }
    return set;
}

CandidateSet CandidateSet::from_points(std::size_t dim, std::vector<double> points)
{
    if (dim < 1)
        throw ParameterError("candidate set: dimension must be >= 1");
    if (points.size() % dim != 0)
        throw ParameterError("candidate set: point buffer is not a multiple of the dimension");
    for (double v : points)
        if (!std::isfinite(v))
            throw ParameterError("candidate set: non-finite coordinate");
    CandidateSet set;
    set.kind_ = Kind::Explicit;
    set.dim_ = dim;
    set.points_ = std::move(points);
    return set;
}

Reconstruction consistent_reconstruct(const MeasurementEnsemble &ens, const QuantizedCode &q,
                                      const CandidateSet &candidates)
{
    if (candidates.dim() != ens.dim())
        throw ParameterError("reconstruct: candidate dimension does not match the ensemble");
    if (q.size() > ens.rows())
        throw ParameterError("reconstruct: code is longer than the ensemble");
    if (!q.empty() && q.bits() != ens.bits())
        throw ParameterError("reconstruct: code bit depth does not match the ensemble");

    Reconstruction out;
    for (std::size_t i = 0; i < candidates.size(); ++i)
    {
        const auto c = candidates.point(i);
        bool match = true;
        for (std::size_t m = 0; m < q.size() && match; ++m)
            match = quantize_scalar(ens.scaled_measurement(m, c), ens.bits()) == q[m];
        if (!match)
            continue;
        if (out.consistent_count++ == 0)
        {
            out.best = Signal(c.begin(), c.end());
            out.index = i;
        }
    }
    return out;
}

WorstDistance worst_consistent_distance(const EnsembleFamily &family, std::size_t measurements,
                                        const PairSource &source, const PairOptions &opts)
{
    check_family(family);
    if (opts.n_pairs < 1)
        throw ParameterError("worst distance: n_pairs must be >= 1");
    if (opts.partitions < 1)
        throw ParameterError("worst distance: partitions must be >= 1");
    if (const auto *model = std::get_if<SignalModel>(&source))
    {
        validate(*model);
        if (ambient_dim(*model) != family.dim)
            throw ParameterError("worst distance: model dimension does not match the ensemble");
    }
    else
    {
        const auto &p = std::get<FixedPair>(source);
        if (p.x.size() != family.dim || p.x2.size() != family.dim)
            throw ParameterError("worst distance: pair dimension does not match the ensemble");
    }

    const EnsembleParams base{std::max<std::size_t>(measurements, 1), family.dim, family.sigma,
                              family.delta,                           family.bits, family.seed};
    std::optional<MeasurementEnsemble> shared;
    if (opts.mode == EnsembleMode::Shared && measurements > 0)
        shared = make_ensemble(base);

    // Per-pair distance, negated when the codes differ. Indexed by pair so the
    // merge order never depends on scheduling.
    std::vector<double> dist(opts.n_pairs);
    detail::run_blocks<char>(opts.n_pairs, opts.partitions, opts.threads, [&](const detail::Block &b, char &) {
        Signal xa, xb;
        for (std::uint64_t t = 0; t < b.count; ++t)
        {
            const std::uint64_t i = b.begin + t;
            if (const auto *model = std::get_if<SignalModel>(&source))
            {
                detail::Stream s(detail::derive_seed(opts.seed, detail::kSignalStream, i));
                xa = detail::sample_model(*model, s);
                xb = detail::sample_model(*model, s);
            }
            else
            {
                xa = std::get<FixedPair>(source).x;
                xb = std::get<FixedPair>(source).x2;
            }

            bool equal = true;
            if (measurements > 0)
            {
                std::optional<MeasurementEnsemble> fresh;
                if (!shared)
                {
                    auto p = base;
                    p.seed = detail::derive_seed(family.seed, detail::kWorkerStream, i);
                    fresh = make_ensemble(p);
                }
                const auto &ens = shared ? *shared : *fresh;
                for (std::size_t m = 0; m < measurements && equal; ++m)
                    equal = quantize_scalar(ens.scaled_measurement(m, xa), family.bits) ==
                            quantize_scalar(ens.scaled_measurement(m, xb), family.bits);
            }
            const double d = distance(xa, xb);
            dist[i] = equal ? d : -d - 1.0; // -1 offset keeps d = 0 distinguishable
        }
    });

    WorstDistance out;
    out.n_pairs = opts.n_pairs;
    double sum = 0.0;
    for (double v : dist)
    {
        const double d = v >= 0.0 ? v : -(v + 1.0);
        out.max_pair_distance = std::max(out.max_pair_distance, d);
        if (v < 0.0)
            continue;
        ++out.consistent_pairs;
        out.worst = std::max(out.worst, v);
        sum += v;
    }
    out.any_consistent = out.consistent_pairs > 0;
    if (out.any_consistent)
        out.mean = sum / static_cast<double>(out.consistent_pairs);
    out.consistent_fraction = bernoulli_estimate(out.consistent_pairs, opts.n_pairs, opts.seed);
    return out;
}

DecayFit fit_log_linear(std::span<const double> x, std::span<const double> y, std::size_t dim)
{
    if (x.size() != y.size())
        throw ParameterError("fit: abscissa and ordinate lengths differ");

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (y[i] > 0.0 && std::isfinite(y[i]) && std::isfinite(x[i]))
        {
            xs.push_back(x[i]);
            ys.push_back(std::log(y[i]));
        }

    DecayFit fit;
    fit.points = xs.size();
    if (xs.size() < 2)
    {
        fit.note = "insufficient points";
        return fit;
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0)
    {
        fit.note = "degenerate abscissa";
        return fit;
    }
    fit.valid = true;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy == 0.0)
    {
        fit.r_squared = 1.0;
        fit.note = "constant ordinate";
    }
    else
    {
        double ssr = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i)
        {
            const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
            ssr += r * r;
        }
        fit.r_squared = 1.0 - ssr / syy;
    }
    fit.ratio_per_2k = std::exp(2.0 * static_cast<double>(dim) * fit.slope);
    return fit;
}

DecayReport decay_experiment(const DecayConfig &cfg)
{
    if (cfg.dim < 1)
        throw ParameterError("decay: K must be >= 1");
    if (cfg.m_list.empty())
        throw ParameterError("decay: M list must not be empty");
    for (std::size_t j = 1; j < cfg.m_list.size(); ++j)
        if (cfg.m_list[j] <= cfg.m_list[j - 1])
            throw ParameterError("decay: M list must be strictly increasing");
    if (cfg.trials < 1)
        throw ParameterError("decay: trials must be >= 1");
    if (cfg.partitions < 1)
        throw ParameterError("decay: partitions must be >= 1");
    if (!(cfg.sigma >= 0.0) || !std::isfinite(cfg.sigma))
        throw ParameterError("decay: sigma must be nonnegative (0 selects 1/sqrt(K))");
    if (cfg.bits < 1 || cfg.bits > kMaxBits)
        throw ParameterError("decay: bits must be in [1, 31]");
    if (!(cfg.r2 > 0.0))
        throw ParameterError("decay: r2 must be positive");
    if (cfg.delta_rule == DeltaRule::Fixed && (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta)))
        throw ParameterError("decay: delta must be positive");

    const SignalModel model = cfg.model ? *cfg.model : make_unit_ball(cfg.dim);
    validate(model);
    if (ambient_dim(model) != cfg.dim)
        throw ParameterError("decay: model dimension does not match K");

    const std::size_t k = cfg.dim;
    const double sigma = cfg.sigma > 0.0 ? cfg.sigma : 1.0 / std::sqrt(static_cast<double>(k));
    const std::size_t rows_n = cfg.m_list.size();
    const std::size_t m_max = cfg.m_list.back();

    DecayReport report;
    report.rows.resize(rows_n);
    for (std::size_t j = 0; j < rows_n; ++j)
    {
        auto &r = report.rows[j];
        r.m = cfg.m_list[j];
        r.guarantee = corollary_distance(k, static_cast<double>(r.m), cfg.p0, cfg.c_o, cfg.c_r);
        r.delta = cfg.delta_rule == DeltaRule::Fixed ? cfg.delta : r.guarantee * cfg.r2 / std::sqrt(static_cast<double>(k));
        r.pairs_tested = cfg.trials;
        r.empty_trials = 0;
    }

    const CandidateSet cands = cfg.cloud_size > 0
                                   ? CandidateSet::cloud(model, cfg.cloud_size, detail::derive_seed(cfg.seed, detail::kCandidateStream))
                                   : CandidateSet::grid(model, cfg.grid_spacing);
    report.resolution = cands.resolution();

    // Per (trial, row) largest surviving distance; -1 when nothing survives.
    std::vector<double> per_trial(cfg.trials * rows_n);
    detail::run_blocks<char>(cfg.trials, cfg.partitions, cfg.threads, [&](const detail::Block &b, char &) {
        std::vector<std::size_t> alive, all(cands.size());
        for (std::size_t i = 0; i < all.size(); ++i)
            all[i] = i;

        for (std::uint64_t t = 0; t < b.count; ++t)
        {
            const std::uint64_t trial = b.begin + t;
            detail::Stream s(detail::derive_seed(cfg.seed, detail::kSignalStream, trial));
            const Signal x = detail::sample_model(model, s);
            // Unit-scale dither u_m; a row at precision delta uses delta * u_m.
            const auto ens = make_ensemble({std::max<std::size_t>(m_max, 1), k, sigma, 1.0, cfg.bits,
                                            detail::derive_seed(cfg.seed, detail::kWorkerStream, trial)});

            auto filter = [&](std::size_t m, double delta) {
                const auto phi = ens.row(m);
                const double w = delta * ens.dither()[m];
                const auto sx = quantize_scalar((dot(x, phi) + w) / delta, cfg.bits);
                std::erase_if(alive, [&](std::size_t i) {
                    return quantize_scalar((dot(cands.point(i), phi) + w) / delta, cfg.bits) != sx;
                });
            };
            auto record = [&](std::size_t j) {
                double worst = -1.0;
                for (std::size_t i : alive)
                    worst = std::max(worst, distance(x, cands.point(i)));
                per_trial[trial * rows_n + j] = worst;
            };

            if (cfg.delta_rule == DeltaRule::Fixed)
            {
                alive = all;
                std::size_t j = 0;
                for (std::size_t m = 0; m <= m_max; ++m)
                {
                    if (j < rows_n && cfg.m_list[j] == m)
                        record(j++);
                    if (m < m_max)
                        filter(m, cfg.delta);
                }
            }
            else
            {
                for (std::size_t j = 0; j < rows_n; ++j)
                {
                    alive = all;
                    for (std::size_t m = 0; m < cfg.m_list[j] && !alive.empty(); ++m)
                        filter(m, report.rows[j].delta);
                    record(j);
                }
            }
        }
    });

    for (std::size_t j = 0; j < rows_n; ++j)
    {
        auto &r = report.rows[j];
        double worst = 0.0, sum = 0.0;
        std::uint64_t nonempty = 0;
        for (std::uint64_t t = 0; t < cfg.trials; ++t)
        {
            const double v = per_trial[t * rows_n + j];
            if (v < 0.0)
            {
                ++r.empty_trials;
                continue;
            }
            ++nonempty;
            worst = std::max(worst, v);
            sum += v;
        }
        r.worst = worst;
        r.mean = nonempty > 0 ? sum / static_cast<double>(nonempty) : 0.0;
    }

    report.floor_index = rows_n;
    for (std::size_t j = 0; j < rows_n; ++j)
    {
        const auto &r = report.rows[j];
        if (2 * r.empty_trials > r.pairs_tested || r.worst <= report.resolution)
        {
            report.floor_index = j;
            break;
        }
    }

    std::vector<double> xs, ys;
    for (std::size_t j = 0; j < report.floor_index; ++j)
    {
        xs.push_back(static_cast<double>(report.rows[j].m));
        ys.push_back(report.rows[j].worst);
    }
    report.fit = fit_log_linear(xs, ys, k);

    std::size_t dominated = 0;
    for (const auto &r : report.rows)
        dominated += r.worst <= r.guarantee ? 1 : 0;
    report.dominance_fraction = static_cast<double>(dominated) / static_cast<double>(rows_n);
    return report;
}

} // namespace urq
