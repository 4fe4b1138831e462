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

#include "urq/montecarlo.hpp"
#include "urq/core.hpp"
#include "urq/errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace urq
{

namespace
{

void check_options(const McOptions &opts)
{
    if (opts.trials < 1)
        throw ParameterError("monte carlo: trials must be >= 1");
    if (opts.partitions < 1)
        throw ParameterError("monte carlo: partitions must be >= 1");
}

void check_scale(double sigma, double delta)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw ParameterError("monte carlo: sigma must be positive");
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw ParameterError("monte carlo: delta must be positive");
}

// Counts successes of trial(stream) over opts.trials, partitioned per McOptions.
template <class Trial>
McEstimate run_bernoulli(const McOptions &opts, Trial trial)
{
    check_options(opts);
    const auto counts = detail::run_blocks<std::uint64_t>(
        opts.trials, opts.partitions, opts.threads, [&](const detail::Block &b, std::uint64_t &out) {
            detail::Stream stream(detail::derive_seed(opts.seed, detail::kWorkerStream, b.index));
            std::uint64_t hits = 0;
            for (std::uint64_t t = 0; t < b.count; ++t)
                hits += trial(stream) ? 1 : 0;
            out = hits;
        });
    std::uint64_t total = 0;
    for (auto c : counts)
        total += c;
    return bernoulli_estimate(total, opts.trials, opts.seed);
}

} // namespace

McEstimate bernoulli_estimate(std::uint64_t successes, std::uint64_t trials, std::uint64_t seed)
{
    if (trials < 1)
        throw ParameterError("estimate: trials must be >= 1");
    McEstimate e;
    e.trials = trials;
    e.seed = seed;
    e.mean = static_cast<double>(successes) / static_cast<double>(trials);
    e.std_err = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(trials));
    return e;
}

double z_score(const McEstimate &est, double analytic)
{
    const double diff = est.mean - analytic;
    double se = est.std_err;
    if (se == 0.0)
    {
        const double p = std::clamp(analytic, 0.0, 1.0);
        se = std::sqrt(p * (1.0 - p) / static_cast<double>(est.trials));
    }
    if (se == 0.0)
        return diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
    return diff / se;
}

McEstimate mc_consistency(double d, double sigma, double delta, std::size_t dim, unsigned bits, const McOptions &opts)
{
    if (!(d >= 0.0) || !std::isfinite(d))
        throw ParameterError("mc_consistency: d must be nonnegative");
    if (dim < 1)
        throw ParameterError("mc_consistency: K must be >= 1");
    std::vector<double> x(dim, 0.0), x2(dim, 0.0);
    x2[0] = d;
    return mc_pair_consistency(x, x2, sigma, delta, bits, opts);
}

McEstimate mc_pair_consistency(std::span<const double> x, std::span<const double> x2, double sigma, double delta,
                               unsigned bits, const McOptions &opts)
{
    if (x.empty() || x.size() != x2.size())
        throw ParameterError("mc_pair_consistency: signals must have equal, nonzero length");
    check_scale(sigma, delta);
    if (bits < 1 || bits > kMaxBits)
        throw ParameterError("mc_pair_consistency: bits must be in [1, 31]");

    const std::size_t k = x.size();
    return run_bernoulli(opts, [&](detail::Stream &s) {
        double p1 = 0.0, p2 = 0.0;
        for (std::size_t i = 0; i < k; ++i)
        {
            const double phi = sigma * s.normal();
            p1 += phi * x[i];
            p2 += phi * x2[i];
        }
        const double w = delta * s.uniform();
        return quantize_scalar((p1 + w) / delta, bits) == quantize_scalar((p2 + w) / delta, bits);
    });
}

McEstimate mc_norm_tail(std::size_t dim, double sigma, double c_p, const McOptions &opts)
{
    if (dim < 1)
        throw ParameterError("mc_norm_tail: K must be >= 1");
    if (!(sigma > 0.0))
        throw ParameterError("mc_norm_tail: sigma must be positive");
    if (!(c_p >= 0.0))
        throw ParameterError("mc_norm_tail: c_p must be nonnegative");
    const double c2 = c_p * c_p;
    return run_bernoulli(opts, [&](detail::Stream &s) {
        double n2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
        {
            const double v = sigma * s.normal();
            n2 += v * v;
        }
        return n2 >= c2;
    });
}

McEstimate mc_ball_guarantee(double d, double epsilon, double c_p, double sigma, double delta, std::size_t dim,
                             const McOptions &opts)
{
    if (!(d >= 0.0) || !std::isfinite(d))
        throw ParameterError("mc_ball_guarantee: d must be nonnegative");
    if (!(epsilon >= 0.0))
        throw ParameterError("mc_ball_guarantee: epsilon must be nonnegative");
    if (!(c_p > 0.0))
        throw ParameterError("mc_ball_guarantee: c_p must be positive");
    if (dim < 1)
        throw ParameterError("mc_ball_guarantee: K must be >= 1");
    check_scale(sigma, delta);
    if (!(2.0 * c_p * epsilon < delta))
        throw ParameterError("mc_ball_guarantee: requires 2 c_p epsilon < delta");

    return run_bernoulli(opts, [&](detail::Stream &s) {
        double n2 = 0.0, first = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
        {
            const double v = sigma * s.normal();
            n2 += v * v;
            if (i == 0)
                first = v;
        }
        const double w = delta * s.uniform();
        const double norm = std::sqrt(n2);
        if (norm >= c_p)
            return true;

        // Ball around c projects onto [c - eps ||phi||, c + eps ||phi||]; ceil
        // is constant on (n - 1, n], so one symbol iff both ends share a ceil.
        const double r = epsilon * norm;
        const double c1 = w;             // <0, phi> + w
        const double c2 = d * first + w; // <d e_1, phi> + w
        const double lo1 = std::ceil((c1 - r) / delta), hi1 = std::ceil((c1 + r) / delta);
        const double lo2 = std::ceil((c2 - r) / delta), hi2 = std::ceil((c2 + r) / delta);
        if (lo1 != hi1 || lo2 != hi2)
            return true; // a straddling interval holds both symbols
        return quantize_scalar(lo1, 1) == quantize_scalar(lo2, 1);
    });
}

} // namespace urq
