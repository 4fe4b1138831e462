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

#include "urq/analytics.hpp"
#include "urq/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

namespace urq
{

namespace
{

using std::numbers::pi;

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double v, const char *what)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError(std::string(what) + " must be positive and finite");
}

void require_distance(double d)
{
    if (!(d >= 0.0) || !std::isfinite(d))
        throw DomainError("distance must be nonnegative and finite");
}

void require_probability(double p, const char *what)
{
    if (!(p > 0.0 && p < 1.0))
        throw DomainError(std::string(what) + " must lie in (0, 1)");
}

void require_decay_base(double c_r)
{
    if (!(c_r > 0.5 && c_r < 1.0))
        throw DomainError("c_r must lie in (1/2, 1)");
}

// (pi sigma d / (sqrt(2) delta))^2, the exponent shared by the series and its bounds.
double exponent_scale(double d, double sigma, double delta)
{
    const double a = pi * sigma * d / (std::numbers::sqrt2 * delta);
    return a * a;
}

double log_binomial(std::size_t n, std::size_t k)
{
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

} // namespace

double triangle_consistency(double l, double delta)
{
    return triangle_consistency_multibit(l, delta, 1);
}

double triangle_consistency_multibit(double l, double delta, unsigned bits)
{
    if (!(l >= 0.0) || !std::isfinite(l))
        throw DomainError("projected distance must be nonnegative and finite");
    require_positive(delta, "delta");
    if (bits < 1 || bits > kMaxBits)
        throw ParameterError("bits must be in [1, 31]");

    const double levels = std::ldexp(1.0, static_cast<int>(bits));
    const double t = std::fmod(l, levels * delta) / delta; // [0, 2^B)
    if (t <= 1.0)
        return 1.0 - t;
    if (t >= levels - 1.0)
        return t - (levels - 1.0);
    return 0.0;
}

double projected_distance_density(double l, double d, double sigma)
{
    require_distance(d);
    require_positive(sigma, "sigma");
    if (l < 0.0 || d == 0.0)
        return 0.0;
    const double s = sigma * d;
    return std::sqrt(2.0 / pi) * std::exp(-0.5 * (l / s) * (l / s)) / s;
}

double consistency_prob_series(double d, double sigma, double delta, double tol)
{
    require_distance(d);
    require_positive(sigma, "sigma");
    require_positive(delta, "delta");
    require_positive(tol, "tol");
    if (d == 0.0)
        return 1.0;

    const double a2 = exponent_scale(d, sigma, delta);
    // The terms only start decaying exponentially once (2i+1)^2 a2 ~ 1, so the
    // series needs ~3/sqrt(a2) terms. Below a2 = 1e-6 the piecewise integral
    // (two pieces at most) is used instead.
    if (a2 < 1e-6)
        return consistency_prob(d, sigma, delta, 1);

    double sum = 0.0;
    for (int i = 0;; ++i)
    {
        const double odd = 2.0 * i + 1.0;
        const double h = pi * (i + 0.5);
        const double term = std::exp(-odd * odd * a2) / (h * h);
        sum += term;
        if (term < tol)
            break;
    }
    return 0.5 + sum;
}

double consistency_prob(double d, double sigma, double delta, unsigned bits)
{
    require_distance(d);
    require_positive(sigma, "sigma");
    require_positive(delta, "delta");
    if (bits < 1 || bits > kMaxBits)
        throw ParameterError("bits must be in [1, 31]");
    if (d == 0.0)
        return 1.0;

    const double s = sigma * d;
    const double inv = 1.0 / (s * std::numbers::sqrt2);
    const double l_max = 40.0 * s; // half-normal mass beyond is below e^-800
    const std::uint64_t period = std::uint64_t{1} << bits;

    // Piece j covers [j delta, (j+1) delta]; with u = l/delta - j the law is
    // (1 - u) when j = 0 mod 2^B and u when j = -1 mod 2^B, zero otherwise.
    auto mass = [&](double lo, double hi) { return std::erfc(lo * inv) - std::erfc(hi * inv); };
    auto first_moment = [&](double lo, double hi) {
        return s * std::sqrt(2.0 / pi) * (std::exp(-0.5 * (lo / s) * (lo / s)) - std::exp(-0.5 * (hi / s) * (hi / s)));
    };

    const double pieces = l_max / delta;
    if (pieces / static_cast<double>(period) > 1e8)
        throw DomainError("consistency_prob: sigma*d/delta too large for piecewise evaluation");

    double total = 0.0;
    for (std::uint64_t i = 0;; ++i)
    {
        // Falling flank: j = i * 2^B.
        const double j0 = static_cast<double>(i * period);
        const double lo0 = j0 * delta;
        if (lo0 > l_max)
            break;
        {
            const double hi = lo0 + delta;
            const double a = mass(lo0, hi);
            const double u = (first_moment(lo0, hi) - lo0 * a) / delta; // integral of u f
            total += a - u;
        }
        // Rising flank: j = (i + 1) * 2^B - 1.
        const double j1 = static_cast<double>((i + 1) * period - 1);
        const double lo1 = j1 * delta;
        if (lo1 <= l_max)
        {
            const double hi = lo1 + delta;
            const double a = mass(lo1, hi);
            total += (first_moment(lo1, hi) - lo1 * a) / delta;
        }
    }
    return total;
}

ConsistencyBounds consistency_bounds(double d, double sigma, double delta)
{
    const double exact = consistency_prob_series(d, sigma, delta);
    const double e = std::exp(-exponent_scale(d, sigma, delta));
    ConsistencyBounds b;
    b.exact_series = exact;
    b.lower_first_term = 0.5 + 4.0 / (pi * pi) * e;
    b.lower_linear = 1.0 - std::sqrt(2.0 / pi) * sigma * d / delta;
    b.upper = 0.5 + 0.5 * e;
    return b;
}

double norm_tail(std::size_t dim, double sigma, double c_p)
{
    if (dim < 1)
        throw DomainError("norm_tail: K must be >= 1");
    require_positive(sigma, "sigma");
    require_positive(c_p, "c_p");
    const double x = c_p * c_p / (2.0 * sigma * sigma);
    return boost::math::gamma_q(0.5 * static_cast<double>(dim), x);
}

double ball_pair_failure_bound(double d, double epsilon, double c_p, double sigma, double delta, std::size_t dim)
{
    require_distance(d);
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw ParameterError("ball bound: epsilon must be nonnegative");
    if (!(c_p > 0.0) || !(delta > 0.0) || !(sigma > 0.0))
        throw ParameterError("ball bound: c_p, sigma and delta must be positive");
    if (!(2.0 * c_p * epsilon < delta))
        throw ParameterError("ball bound: requires 2 c_p epsilon < delta");
    const double total =
        consistency_prob_series(d, sigma, delta) + 2.0 * c_p * epsilon / delta + norm_tail(dim, sigma, c_p);
    return std::min(1.0, total);
}

TheoremConstants theorem_constants(const TheoremParams &params)
{
    if (params.dim < 1)
        throw ParameterError("theorem: K must be >= 1");
    if (!(params.c_p > 0.0) || !(params.r1 > 0.0) || !(params.r2 > 0.0))
        throw ParameterError("theorem: c_p, r1 and r2 must be positive");

    const double k = static_cast<double>(params.dim);
    TheoremConstants c;
    c.c_o = 6.0 * params.c_p / (params.r1 * params.r2);
    c.half_term = 0.5;
    c.exp_term = 0.5 * std::exp(-pi * pi / (2.0 * params.r2 * params.r2));
    c.width_term = params.r1;
    c.tail_term = norm_tail(params.dim, 1.0 / std::sqrt(k), params.c_p);
    c.c_r_expression = c.half_term + c.exp_term + c.width_term + c.tail_term;
    c.c_r = c.c_r_expression;
    if (params.c_r_ceiling)
    {
        const double ceil = *params.c_r_ceiling;
        if (!(ceil >= c.c_r_expression))
            throw ParameterError("theorem: c_r ceiling is below the derived decay base");
        c.c_r = ceil;
    }
    return c;
}

TheoremParams concrete_instance(std::size_t dim)
{
    if (dim <= 8)
        throw ParameterError("concrete instance requires K > 8");
    TheoremParams p;
    p.dim = dim;
    p.c_p = 2.0;
    p.r1 = 0.2; // epsilon = delta/20 = delta r1/(2 c_p)
    p.r2 = 1.0; // delta = d/sqrt(K)
    p.c_r_ceiling = 0.75;
    return p;
}

TheoremDesign theorem_design(const TheoremParams &params, double d)
{
    require_positive(d, "d");
    const double k = static_cast<double>(params.dim);
    TheoremDesign out;
    out.sigma = 1.0 / std::sqrt(k);
    out.delta = d * params.r2 / std::sqrt(k);
    out.epsilon = out.delta * params.r1 / (2.0 * params.c_p);
    return out;
}

TheoremBound theorem_failure_bound(const TheoremParams &params, std::size_t measurements, double d)
{
    require_positive(d, "d");
    if (d > 2.0)
        throw DomainError("theorem bound: d exceeds the diameter 2 of the unit ball");
    const auto c = theorem_constants(params);
    if (!(c.c_r < 1.0))
        throw VacuousBoundError("theorem bound: decay base c_r >= 1, bound is vacuous");

    const double k = static_cast<double>(params.dim);
    TheoremBound b;
    b.c_o = c.c_o;
    b.c_r = c.c_r;
    b.log_bound = 2.0 * k * (std::log(c.c_o) + 0.5 * std::log(k) - std::log(d)) +
                  static_cast<double>(measurements) * std::log(c.c_r);
    b.bound = std::exp(b.log_bound);
    return b;
}

double corollary_distance(std::size_t dim, double measurements, double p0, double c_o, double c_r)
{
    if (dim < 1)
        throw DomainError("corollary: K must be >= 1");
    if (!(measurements >= 0.0))
        throw DomainError("corollary: M must be nonnegative");
    require_probability(p0, "P0");
    require_positive(c_o, "c_o");
    require_decay_base(c_r);
    const double k = static_cast<double>(dim);
    const double log_d =
        std::log(c_o) + 0.5 * std::log(k) - std::log(p0) / (2.0 * k) + measurements / (2.0 * k) * std::log(c_r);
    return std::exp(log_d);
}

double rate_overhead(double c_r)
{
    require_decay_base(c_r);
    return 2.0 * std::numbers::ln2 / std::log(1.0 / c_r);
}

std::size_t required_rate(unsigned bits, std::size_t dim, double p0, double c_o, double c_r)
{
    if (bits < 1)
        throw DomainError("required_rate: B must be >= 1");
    if (dim < 1)
        throw DomainError("required_rate: K must be >= 1");
    require_probability(p0, "P0");
    require_positive(c_o, "c_o");
    require_decay_base(c_r);
    const double k = static_cast<double>(dim);
    const double per_dim =
        2.0 * (bits * std::numbers::ln2 + std::log(c_o / 2.0) - std::log(p0) / (2.0 * k)) / std::log(1.0 / c_r);
    const double m = std::ceil(k * per_dim);
    return m < 1.0 ? 1 : static_cast<std::size_t>(m);
}

double covering_log(const SignalModel &model, double epsilon)
{
    require_positive(epsilon, "epsilon");
    validate(model);
    const double value = std::visit(
        overloaded{
            [&](const UnitBall &m) { return static_cast<double>(m.dim) * std::log(3.0 / epsilon); },
            [&](const Sparse &m) {
                return log_binomial(m.ambient, m.sparsity) + static_cast<double>(m.sparsity) * std::log(3.0 / epsilon);
            },
            [&](const UnionOfSubspaces &m) {
                return std::log(m.count) + static_cast<double>(m.dim) * std::log(3.0 / epsilon);
            },
            [&](const SimilarSignal &m) {
                return static_cast<double>(m.center.size()) * std::log(3.0 * m.radius / epsilon);
            },
        },
        model);
    // A covering number is at least one.
    return std::max(0.0, value);
}

RatePlan plan_rate(const SignalModel &model, double d, double p0, const TheoremParams &params)
{
    validate(model);
    require_positive(d, "d");
    require_probability(p0, "P0");
    const std::size_t n = ambient_dim(model);
    if (params.dim != n)
        throw ParameterError("plan: theorem parameters must use the model's ambient dimension");
    const auto c = theorem_constants(params);
    if (!(c.c_r < 1.0))
        throw VacuousBoundError("plan: decay base c_r >= 1, no finite M suffices");

    RatePlan plan{model, d, p0, c.c_o, c.c_r, 0.0, 0.0, 1};
    plan.epsilon = 3.0 * d / (c.c_o * std::sqrt(static_cast<double>(n)));
    plan.covering_log = covering_log(model, plan.epsilon);
    const double m = std::ceil((2.0 * plan.covering_log + std::log(1.0 / p0)) / std::log(1.0 / c.c_r));
    plan.required_m = m < 1.0 ? 1 : static_cast<std::size_t>(m);
    return plan;
}

} // namespace urq
