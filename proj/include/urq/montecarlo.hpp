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

#include <cstddef>
#include <cstdint>
#include <span>

namespace urq
{

/*!MD
# Monte Carlo estimators

Every estimator is a Bernoulli frequency. Trials are split into `partitions`
contiguous blocks; block p draws from a substream derived from (seed, p). The
estimate depends on (arguments, seed, partitions) only: the number of threads
used to evaluate the blocks never changes the result.
*/
struct McOptions
{
    std::uint64_t trials = 100000;
    std::uint64_t seed = 0;
    unsigned partitions = 1;
    unsigned threads = 0; // 0: one per partition, capped by hardware concurrency
};

struct McEstimate
{
    double mean = 0.0;
    double std_err = 0.0; // sqrt(p (1 - p) / trials)
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;

    bool operator==(const McEstimate &) const = default;
};

McEstimate bernoulli_estimate(std::uint64_t successes, std::uint64_t trials, std::uint64_t seed);

// (mean - analytic) / stderr. When the empirical stderr is zero, the binomial
// stderr at the analytic value is used; 0 when both vanish and the values agree.
double z_score(const McEstimate &est, double analytic);

// Fraction of single measurements on which x = 0 and x' = d e_1 quantize to the
// same symbol.
McEstimate mc_consistency(double d, double sigma, double delta, std::size_t dim, unsigned bits, const McOptions &opts);

// Same estimator for an arbitrary pair of signals.
McEstimate mc_pair_consistency(std::span<const double> x, std::span<const double> x2, double sigma, double delta,
                               unsigned bits, const McOptions &opts);

// Fraction of Gaussian vectors (K iid N(0, sigma^2) entries) with norm >= c_p.
McEstimate mc_norm_tail(std::size_t dim, double sigma, double c_p, const McOptions &opts);

// Fraction of measurements that fail to separate the epsilon-balls around
// x = 0 and x' = d e_1: either ||phi|| >= c_p, or the projected balls share a
// symbol (an interval straddling a threshold carries both symbols). B = 1.
McEstimate mc_ball_guarantee(double d, double epsilon, double c_p, double sigma, double delta, std::size_t dim,
                             const McOptions &opts);

} // namespace urq
