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

#include "urq/core.hpp"

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace urq
{

// Signals with ||x||_2 <= 1 in R^K.
struct UnitBall
{
    std::size_t dim;
};

// K-sparse signals in R^N, ||x||_2 <= 1.
struct Sparse
{
    std::size_t ambient;
    std::size_t sparsity;
};

// Signals in one of L K-dimensional subspaces of R^N, ||x||_2 <= 1. Each basis
// is an orthonormal N x K matrix stored row-major. The list may be left empty
// when only the count matters (rate planning); sampling needs the bases.
struct UnionOfSubspaces
{
    std::size_t ambient;
    std::size_t dim;
    double count; // L, kept real: planners accept counts beyond 2^64
    std::vector<std::vector<double>> bases;
};

// The D-ball around a known signal x_s.
struct SimilarSignal
{
    Signal center;
    double radius;
};

using SignalModel = std::variant<UnitBall, Sparse, UnionOfSubspaces, SimilarSignal>;

SignalModel make_unit_ball(std::size_t dim);
SignalModel make_sparse(std::size_t ambient, std::size_t sparsity);
SignalModel make_union(std::size_t ambient, std::size_t dim, std::vector<std::vector<double>> bases);
SignalModel make_union_count(std::size_t ambient, std::size_t dim, double count);
SignalModel make_similar(Signal center, double radius);

// Throws ParameterError if the model violates its invariants.
void validate(const SignalModel &model);

// Dimension of the vectors in the model (K for UnitBall/SimilarSignal, N otherwise).
std::size_t ambient_dim(const SignalModel &model);

// Dimension of each piece (K in every variant).
std::size_t piece_dim(const SignalModel &model);

bool contains(const SignalModel &model, std::span<const double> x, double tol = 1e-9);

std::string describe(const SignalModel &model);

// Inverse of describe for "unit:K", "sparse:N:K", "union:N:K:L" (count only)
// and "similar:K:D" (centered at the origin). Throws ParameterError.
SignalModel parse_model(const std::string &spec);

} // namespace urq
