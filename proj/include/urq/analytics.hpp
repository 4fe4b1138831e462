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

#include "urq/model.hpp"

#include <cstddef>
#include <optional>

namespace urq
{

/*!MD
# Consistency probabilities

For two signals at distance d measured by one row (phi ~ N(0, sigma^2 I),
w ~ U[0, delta]) the projected distance l = |<x - x', phi>| is half-normal with
scale sigma*d. Given l, the dither makes the probability of equal symbols a
periodic function of l alone:

- B = 1: a triangle wave of period 2*delta, 1 at even multiples of delta and 0
  at odd multiples.
- B > 1: period 2^B * delta; equal to the triangle on the two delta-wide flanks
  around each multiple of 2^B * delta and zero in between.

Averaging over l gives the per-measurement consistency probability. For B = 1
it has the rapidly converging series

    P(d) = 1/2 + sum_{i>=0} exp(-(pi (2i+1) sigma d / (sqrt(2) delta))^2) / (pi (i + 1/2))^2.
*/

double triangle_consistency(double l, double delta);
double triangle_consistency_multibit(double l, double delta, unsigned bits);

// Half-normal density of the projected distance, f(l | d) with scale sigma*d.
double projected_distance_density(double l, double d, double sigma);

// Series above, truncated once a term drops below tol. d = 0 returns exactly 1.
double consistency_prob_series(double d, double sigma, double delta, double tol = 1e-15);

// Exact integral of the consistency law against f(l | d) for any bit depth,
// evaluated piecewise in closed form (erfc and exp per delta-wide piece).
double consistency_prob(double d, double sigma, double delta, unsigned bits);

struct ConsistencyBounds
{
    double exact_series;
    double lower_first_term; // 1/2 + (4/pi^2) e^{-a^2}
    double lower_linear;     // 1 - sqrt(2/pi) sigma d / delta
    double upper;            // 1/2 + (1/2) e^{-a^2}
};

ConsistencyBounds consistency_bounds(double d, double sigma, double delta);

// P(||phi||_2 >= c_p) for phi with K iid N(0, sigma^2) entries, i.e. the
// regularized upper incomplete gamma Q(K/2, c_p^2 / (2 sigma^2)).
double norm_tail(std::size_t dim, double sigma, double c_p);

// Upper bound on the probability that one measurement fails to separate the
// epsilon-balls around two centers at distance d:
// min(1, P(d) + 2 c_p epsilon / delta + P(||phi|| >= c_p)). Requires 2 c_p epsilon < delta.
double ball_pair_failure_bound(double d, double epsilon, double c_p, double sigma, double delta, std::size_t dim);

/*!MD
# Design constants

With sigma = 1/sqrt(K), epsilon = delta r1 / (2 c_p) and delta = d r2 / sqrt(K)
the failure probability over the unit ball is at most

    (c_o sqrt(K) / d)^{2K} c_r^M,  c_o = 6 c_p / (r1 r2),
    c_r = 1/2 + (1/2) e^{-pi^2 / (2 r2^2)} + r1 + P(||phi|| >= c_p).

Any value above the derived c_r is also valid, which is how the rounded
instance (c_p = 2, r1 = 1/5, r2 = 1, c_r = 3/4, c_o = 60) is expressed: set
`c_r_ceiling`.
*/
struct TheoremParams
{
    std::size_t dim = 1; // dimension used for sigma, delta and the norm tail
    double c_p = 2.0;
    double r1 = 0.2;
    double r2 = 1.0;
    std::optional<double> c_r_ceiling;
};

struct TheoremConstants
{
    double c_o;
    double c_r;            // ceiling when set, otherwise c_r_expression
    double c_r_expression; // sum of the four terms below
    double half_term;      // 1/2
    double exp_term;       // (1/2) e^{-pi^2 / (2 r2^2)}
    double width_term;     // r1
    double tail_term;      // norm tail at sigma = 1/sqrt(K)
};

TheoremConstants theorem_constants(const TheoremParams &params);

// c_p = 2, epsilon = delta / 20, delta = d / sqrt(K), c_r rounded up to 3/4.
// Requires K > 8.
TheoremParams concrete_instance(std::size_t dim);

// Quantizer design implied by the constants for target distance d.
struct TheoremDesign
{
    double sigma;
    double delta;
    double epsilon;
};

TheoremDesign theorem_design(const TheoremParams &params, double d);

struct TheoremBound
{
    double log_bound; // natural log of the bound
    double bound;     // exp(log_bound); may exceed 1
    double c_o;
    double c_r;
};

// (c_o sqrt(K) / d)^{2K} c_r^M, in log space. Throws VacuousBoundError when c_r >= 1.
TheoremBound theorem_failure_bound(const TheoremParams &params, std::size_t measurements, double d);

// Distance beyond which every pair is separated with probability >= 1 - P0:
// c_o sqrt(K) P0^{-1/(2K)} c_r^{M/(2K)}.
double corollary_distance(std::size_t dim, double measurements, double p0, double c_o, double c_r);

// Asymptotic bits-per-dimension overhead relative to a B-bit orthonormal basis
// expansion: 2 ln 2 / ln(1/c_r).
double rate_overhead(double c_r);

// Smallest M with M/K >= 2 (B ln 2 + ln(c_o / (2 P0^{1/(2K)}))) / ln(1/c_r).
std::size_t required_rate(unsigned bits, std::size_t dim, double p0, double c_o, double c_r);

// Natural log of the covering-number upper bound of the model at radius epsilon.
double covering_log(const SignalModel &model, double epsilon);

struct RatePlan
{
    SignalModel model;
    double distance;
    double p0;
    double c_o;
    double c_r;
    double epsilon;      // 3 d / (c_o sqrt(n)), n = ambient dimension
    double covering_log; // at epsilon
    std::size_t required_m;
};

// Smallest M with C^2 c_r^M <= P0, C the covering number at epsilon (C^2
// counts ball pairs). params.dim must equal the model's ambient dimension.
RatePlan plan_rate(const SignalModel &model, double d, double p0, const TheoremParams &params);

} // namespace urq
