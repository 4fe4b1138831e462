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

#include "urq/model.hpp"
#include "urq/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace urq
{

namespace
{

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double norm2(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x)
        s += v * v;
    return std::sqrt(s);
}

void check_orthonormal(const std::vector<double> &basis, std::size_t n, std::size_t k)
{
    if (basis.size() != n * k)
        throw ParameterError("union of subspaces: basis must be N x K");
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a; b < k; ++b)
        {
            double dot = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                dot += basis[i * k + a] * basis[i * k + b];
            const double expected = a == b ? 1.0 : 0.0;
            if (std::abs(dot - expected) > 1e-9)
                throw ParameterError("union of subspaces: basis columns are not orthonormal");
        }
}

} // namespace

SignalModel make_unit_ball(std::size_t dim)
{
    SignalModel m = UnitBall{dim};
    validate(m);
    return m;
}

SignalModel make_sparse(std::size_t ambient, std::size_t sparsity)
{
    SignalModel m = Sparse{ambient, sparsity};
    validate(m);
    return m;
}

SignalModel make_union(std::size_t ambient, std::size_t dim, std::vector<std::vector<double>> bases)
{
    const double count = static_cast<double>(bases.size());
    SignalModel m = UnionOfSubspaces{ambient, dim, count, std::move(bases)};
    validate(m);
    return m;
}

SignalModel make_union_count(std::size_t ambient, std::size_t dim, double count)
{
    SignalModel m = UnionOfSubspaces{ambient, dim, count, {}};
    validate(m);
    return m;
}

SignalModel make_similar(Signal center, double radius)
{
    SignalModel m = SimilarSignal{std::move(center), radius};
    validate(m);
    return m;
}

void validate(const SignalModel &model)
{
    std::visit(overloaded{
                   [](const UnitBall &m) {
                       if (m.dim < 1)
                           throw ParameterError("unit ball: K must be >= 1");
                   },
                   [](const Sparse &m) {
                       if (m.sparsity < 1 || m.sparsity > m.ambient)
                           throw ParameterError("sparse model: need 1 <= K <= N");
                   },
                   [](const UnionOfSubspaces &m) {
                       if (m.dim < 1 || m.dim > m.ambient)
                           throw ParameterError("union of subspaces: need 1 <= K <= N");
                       if (!(m.count >= 1.0) || !std::isfinite(m.count))
                           throw ParameterError("union of subspaces: L must be >= 1");
                       if (!m.bases.empty())
                       {
                           if (static_cast<double>(m.bases.size()) != m.count)
                               throw ParameterError("union of subspaces: L does not match the number of bases");
                           for (const auto &b : m.bases)
                               check_orthonormal(b, m.ambient, m.dim);
                       }
                   },
                   [](const SimilarSignal &m) {
                       if (m.center.empty())
                           throw ParameterError("similar-signal model: center must be non-empty");
                       if (!(m.radius > 0.0) || !std::isfinite(m.radius))
                           throw ParameterError("similar-signal model: D must be > 0");
                   },
               },
               model);
}

std::size_t ambient_dim(const SignalModel &model)
{
    return std::visit(overloaded{
                          [](const UnitBall &m) { return m.dim; },
                          [](const Sparse &m) { return m.ambient; },
                          [](const UnionOfSubspaces &m) { return m.ambient; },
                          [](const SimilarSignal &m) { return m.center.size(); },
                      },
                      model);
}

std::size_t piece_dim(const SignalModel &model)
{
    return std::visit(overloaded{
                          [](const UnitBall &m) { return m.dim; },
                          [](const Sparse &m) { return m.sparsity; },
                          [](const UnionOfSubspaces &m) { return m.dim; },
                          [](const SimilarSignal &m) { return m.center.size(); },
                      },
                      model);
}

bool contains(const SignalModel &model, std::span<const double> x, double tol)
{
    if (x.size() != ambient_dim(model))
        return false;
    return std::visit(overloaded{
                          [&](const UnitBall &) { return norm2(x) <= 1.0 + tol; },
                          [&](const Sparse &m) {
                              std::size_t nnz = 0;
                              for (double v : x)
                                  nnz += v != 0.0;
                              return nnz <= m.sparsity && norm2(x) <= 1.0 + tol;
                          },
                          [&](const UnionOfSubspaces &m) {
                              if (norm2(x) > 1.0 + tol)
                                  return false;
                              if (m.bases.empty())
                                  return false;
                              // Distance to each subspace via projection onto its basis.
                              for (const auto &b : m.bases)
                              {
                                  std::vector<double> coef(m.dim, 0.0);
                                  for (std::size_t i = 0; i < m.ambient; ++i)
                                      for (std::size_t k = 0; k < m.dim; ++k)
                                          coef[k] += b[i * m.dim + k] * x[i];
                                  double resid = 0.0;
                                  for (std::size_t i = 0; i < m.ambient; ++i)
                                  {
                                      double p = 0.0;
                                      for (std::size_t k = 0; k < m.dim; ++k)
                                          p += b[i * m.dim + k] * coef[k];
                                      resid += (x[i] - p) * (x[i] - p);
                                  }
                                  if (std::sqrt(resid) <= tol)
                                      return true;
                              }
                              return false;
                          },
                          [&](const SimilarSignal &m) {
                              double s = 0.0;
                              for (std::size_t i = 0; i < x.size(); ++i)
                                  s += (x[i] - m.center[i]) * (x[i] - m.center[i]);
                              return std::sqrt(s) <= m.radius + tol;
                          },
                      },
                      model);
}

std::string describe(const SignalModel &model)
{
    char buf[128];
    std::visit(overloaded{
                   [&](const UnitBall &m) { std::snprintf(buf, sizeof buf, "unit:%zu", m.dim); },
                   [&](const Sparse &m) { std::snprintf(buf, sizeof buf, "sparse:%zu:%zu", m.ambient, m.sparsity); },
                   [&](const UnionOfSubspaces &m) {
                       std::snprintf(buf, sizeof buf, "union:%zu:%zu:%.17g", m.ambient, m.dim, m.count);
                   },
                   [&](const SimilarSignal &m) {
                       std::snprintf(buf, sizeof buf, "similar:%zu:%.17g", m.center.size(), m.radius);
                   },
               },
               model);
    return buf;
}

SignalModel parse_model(const std::string &spec)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;)
    {
        const auto colon = spec.find(':', start);
        parts.push_back(spec.substr(start, colon - start));
        if (colon == std::string::npos)
            break;
        start = colon + 1;
    }

    auto bad = [&]() { return ParameterError("model spec '" + spec + "': expected unit:K, sparse:N:K, union:N:K:L or similar:K:D"); };
    auto count = [&](const std::string &t) {
        if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
            throw bad();
        return static_cast<std::size_t>(std::strtoull(t.c_str(), nullptr, 10));
    };
    auto real = [&](const std::string &t) {
        char *end = nullptr;
        const double v = std::strtod(t.c_str(), &end);
        if (t.empty() || *end != '\0')
            throw bad();
        return v;
    };

    const auto &kind = parts[0];
    if (kind == "unit" && parts.size() == 2)
        return make_unit_ball(count(parts[1]));
    if (kind == "sparse" && parts.size() == 3)
        return make_sparse(count(parts[1]), count(parts[2]));
    if (kind == "union" && parts.size() == 4)
        return make_union_count(count(parts[1]), count(parts[2]), real(parts[3]));
    if (kind == "similar" && parts.size() == 3)
        return make_similar(Signal(count(parts[1]), 0.0), real(parts[2]));
    throw bad();
}

} // namespace urq
