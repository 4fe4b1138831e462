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
//
// Reference computations used by the tests. Nothing here calls into the
// library: each quantity is rebuilt from its definition by a different route
// (numerical quadrature, Poisson sums, long-double series, log sums).

#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace oracle
{

// P(equal symbols | projected distance l) for Q(x) = ceil(x) mod 2^B under
// uniform dither: the fraction of a unit shift u in [0, 1) for which
// ceil(u) and ceil(u + l / delta) agree mod 2^B. Written from the symbol
// difference: ceil(u + t) - ceil(u) is floor(t) or floor(t) + 1, the latter
// with probability frac(t).
inline double consistency_given_l(double l, double delta, unsigned bits)
{
    const double t = l / delta;
    const double period = std::ldexp(1.0, static_cast<int>(bits));
    const double lo = std::floor(t);
    const double frac = t - lo;
    auto agrees = [&](double jump) { return std::fmod(jump, period) == 0.0 ? 1.0 : 0.0; };
    return (1.0 - frac) * agrees(lo) + frac * agrees(lo + 1.0);
}

inline double half_normal(double l, double scale)
{
    return std::sqrt(2.0 / std::numbers::pi) / scale * std::exp(-0.5 * (l / scale) * (l / scale));
}

// Adaptive Gauss-Kronrod of P(equal | l) f(l | d) over [0, 40 sigma d], one
// call per delta-wide piece so the integrand is smooth on every call.
inline double quad_consistency(double d, double sigma, double delta, unsigned bits)
{
    if (d == 0.0)
        return 1.0;
    const double scale = sigma * d;
    const double top = 40.0 * scale;
    double total = 0.0;
    for (double a = 0.0; a < top; a += delta)
    {
        const double b = std::min(a + delta, top);
        const double mid = consistency_given_l(0.5 * (a + b), delta, bits);
        const double ends = consistency_given_l(a, delta, bits) + consistency_given_l(b * (1 - 1e-15), delta, bits);
        if (mid == 0.0 && ends == 0.0)
            continue; // dead zone
        auto f = [&](double l) { return consistency_given_l(l, delta, bits) * half_normal(l, scale); };
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 6, 1e-12);
    }
    return total;
}

// The one-bit series summed in long double with a fixed, generous term count.
inline double series_long(double d, double sigma, double delta)
{
    if (d == 0.0)
        return 1.0;
    const long double pi = std::numbers::pi_v<long double>;
    const long double a = pi * sigma * d / (std::sqrt(2.0L) * delta);
    long double s = 0.5L;
    for (int i = 0; i < 200000; ++i)
    {
        const long double k = 2 * i + 1;
        const long double term = std::exp(-(k * a) * (k * a)) / ((pi * (i + 0.5L)) * (pi * (i + 0.5L)));
        s += term;
        if (term < 1e-22L)
            break;
    }
    return static_cast<double>(s);
}

// P(chi_K >= c / sigma) by the Poisson-sum form of the incomplete gamma.
inline double chi_tail(std::size_t k, double sigma, double c)
{
    const double x = c * c / (2.0 * sigma * sigma);
    double s = 0.0;
    if (k % 2 == 0)
    {
        double term = 1.0;
        for (std::size_t j = 0; j < k / 2; ++j)
        {
            s += term;
            term *= x / static_cast<double>(j + 1);
        }
        return std::exp(-x) * s;
    }
    // Odd K: erfc(sqrt x) + e^{-x} sum_{j < (K-1)/2} x^{j + 1/2} / Gamma(j + 3/2).
    for (std::size_t j = 0; j < (k - 1) / 2; ++j)
    {
        const double h = static_cast<double>(j) + 0.5;
        s += std::exp(h * std::log(x) - std::lgamma(h + 1.0));
    }
    return std::erfc(std::sqrt(x)) + std::exp(-x) * s;
}

// ln binom(n, k) as a plain sum of logs.
inline double log_binom(std::size_t n, std::size_t k)
{
    long double s = 0.0L;
    for (std::size_t i = 1; i <= k; ++i)
        s += std::log(static_cast<long double>(n - k + i)) - std::log(static_cast<long double>(i));
    return static_cast<double>(s);
}

inline double dot(std::span<const double> a, std::span<const double> b)
{
    long double s = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += static_cast<long double>(a[i]) * b[i];
    return static_cast<double>(s);
}

// ceil(v) mod 2^B, by repeated subtraction on an integer.
inline std::uint32_t quantize(double v, unsigned bits)
{
    const long long n = static_cast<long long>(std::ceil(v));
    const long long p = 1LL << bits;
    long long r = n % p;
    if (r < 0)
        r += p;
    return static_cast<std::uint32_t>(r);
}

// Two-sided binomial agreement within z standard errors of p.
inline bool within(double mean, double p, std::uint64_t trials, double z)
{
    const double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / static_cast<double>(trials));
    return std::abs(mean - p) <= z * se;
}

} // namespace oracle
