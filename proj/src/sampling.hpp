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

#pragma once

#include "rng.hpp"
#include "urq/errors.hpp"
#include "urq/model.hpp"

#include <cmath>
#include <numeric>

namespace urq::detail
{

// Uniform point of the k-dimensional unit ball.
inline std::vector<double> sample_ball(std::size_t k, Stream &s)
{
    std::vector<double> v(k);
    double n2 = 0.0;
    do
    {
        n2 = 0.0;
        for (double &e : v)
        {
            e = s.normal();
            n2 += e * e;
        }
    } while (n2 == 0.0);
    const double radius = std::pow(s.uniform(), 1.0 / static_cast<double>(k)) / std::sqrt(n2);
    for (double &e : v)
        e *= radius;
    return v;
}

inline Signal sample_model(const SignalModel &model, Stream &s)
{
    if (const auto *m = std::get_if<UnitBall>(&model))
        return sample_ball(m->dim, s);

    if (const auto *m = std::get_if<Sparse>(&model))
    {
        // Partial Fisher-Yates for the support.
        std::vector<std::size_t> idx(m->ambient);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t i = 0; i < m->sparsity; ++i)
            std::swap(idx[i], idx[i + s.below(m->ambient - i)]);
        const auto coef = sample_ball(m->sparsity, s);
        Signal x(m->ambient, 0.0);
        for (std::size_t i = 0; i < m->sparsity; ++i)
            x[idx[i]] = coef[i];
        return x;
    }

    if (const auto *m = std::get_if<UnionOfSubspaces>(&model))
    {
        if (m->bases.empty())
            throw ParameterError("union of subspaces: sampling needs explicit bases");
        const auto &basis = m->bases[s.below(m->bases.size())];
        const auto coef = sample_ball(m->dim, s);
        Signal x(m->ambient, 0.0);
        for (std::size_t i = 0; i < m->ambient; ++i)
            for (std::size_t k = 0; k < m->dim; ++k)
                x[i] += basis[i * m->dim + k] * coef[k];
        return x;
    }

    const auto &m = std::get<SimilarSignal>(model);
    auto x = sample_ball(m.center.size(), s);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = m.center[i] + m.radius * x[i];
    return x;
}

} // namespace urq::detail
