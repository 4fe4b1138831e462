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

#include "urq/core.hpp"
#include "urq/errors.hpp"
#include "rng.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace urq
{

namespace
{

void validate_params(const EnsembleParams &p)
{
    if (p.rows < 1)
        throw ParameterError("ensemble: number of measurements M must be >= 1");
    if (p.dim < 1)
        throw ParameterError("ensemble: signal dimension K must be >= 1");
    if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
        throw ParameterError("ensemble: sigma must be positive and finite");
    if (!(p.delta > 0.0) || !std::isfinite(p.delta))
        throw ParameterError("ensemble: delta must be positive and finite");
    if (p.bits < 1 || p.bits > kMaxBits)
        throw ParameterError("ensemble: bits must be in [1, 31]");
}

void check_dims(const MeasurementEnsemble &ens, std::span<const double> x)
{
    if (x.size() != ens.dim())
        throw ParameterError("signal length " + std::to_string(x.size()) + " does not match ensemble dimension " +
                             std::to_string(ens.dim()));
}

std::string format_real(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

MeasurementEnsemble MeasurementEnsemble::make(const EnsembleParams &params)
{
    return make(params, {});
}

MeasurementEnsemble MeasurementEnsemble::make(const EnsembleParams &params, std::span<const double> row_precisions)
{
    validate_params(params);
    if (!row_precisions.empty() && row_precisions.size() != params.rows)
        throw ParameterError("ensemble: expected one precision per measurement");
    for (double d : row_precisions)
        if (!(d > 0.0) || !std::isfinite(d))
            throw ParameterError("ensemble: per-row precisions must be positive and finite");

    MeasurementEnsemble ens;
    ens.params_ = params;
    ens.row_precisions_.assign(row_precisions.begin(), row_precisions.end());

    detail::Stream phi_stream(detail::derive_seed(params.seed, detail::kPhiStream));
    ens.phi_.resize(params.rows * params.dim);
    for (double &v : ens.phi_)
        v = params.sigma * phi_stream.normal();

    detail::Stream dither_stream(detail::derive_seed(params.seed, detail::kDitherStream));
    ens.dither_.resize(params.rows);
    for (std::size_t m = 0; m < params.rows; ++m)
        ens.dither_[m] = ens.precision(m) * dither_stream.uniform();
    return ens;
}

MeasurementEnsemble MeasurementEnsemble::from_parts(std::size_t dim, std::vector<double> phi, std::vector<double> dither,
                                                    double delta, unsigned bits, double sigma, std::uint64_t seed)
{
    EnsembleParams p{dither.size(), dim, sigma, delta, bits, seed};
    validate_params(p);
    if (phi.size() != p.rows * p.dim)
        throw ParameterError("ensemble: matrix size does not match M x K");
    for (double v : phi)
        if (!std::isfinite(v))
            throw ParameterError("ensemble: matrix entries must be finite");
    for (double w : dither)
        if (!(w >= 0.0 && w <= delta))
            throw ParameterError("ensemble: dither entries must lie in [0, delta]");

    MeasurementEnsemble ens;
    ens.params_ = p;
    ens.phi_ = std::move(phi);
    ens.dither_ = std::move(dither);
    return ens;
}

std::span<const double> MeasurementEnsemble::row(std::size_t m) const
{
    return std::span<const double>(phi_).subspan(m * params_.dim, params_.dim);
}

MeasurementEnsemble MeasurementEnsemble::prefix(std::size_t m) const
{
    if (m < 1 || m > rows())
        throw ParameterError("ensemble prefix length out of range");
    MeasurementEnsemble out;
    out.params_ = params_;
    out.params_.rows = m;
    out.phi_.assign(phi_.begin(), phi_.begin() + static_cast<std::ptrdiff_t>(m * params_.dim));
    out.dither_.assign(dither_.begin(), dither_.begin() + static_cast<std::ptrdiff_t>(m));
    if (!row_precisions_.empty())
        out.row_precisions_.assign(row_precisions_.begin(), row_precisions_.begin() + static_cast<std::ptrdiff_t>(m));
    return out;
}

double MeasurementEnsemble::scaled_measurement(std::size_t m, std::span<const double> x) const
{
    const auto r = row(m);
    double acc = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k)
        acc += r[k] * x[k];
    return (acc + dither_[m]) / precision(m);
}

QuantizedCode::QuantizedCode(std::vector<std::uint32_t> symbols, unsigned bits) : symbols_(std::move(symbols)), bits_(bits)
{
    if (bits < 1 || bits > kMaxBits)
        throw ParameterError("code: bits must be in [1, 31]");
    const std::uint32_t levels = std::uint32_t{1} << bits;
    for (auto s : symbols_)
        if (s >= levels)
            throw ParameterError("code: symbol out of range for bit depth");
}

QuantizedCode QuantizedCode::prefix(std::size_t m) const
{
    if (m > symbols_.size())
        throw ParameterError("code prefix length out of range");
    return QuantizedCode(std::vector<std::uint32_t>(symbols_.begin(), symbols_.begin() + static_cast<std::ptrdiff_t>(m)),
                         bits_);
}

MeasurementEnsemble make_ensemble(const EnsembleParams &params)
{
    return MeasurementEnsemble::make(params);
}

std::vector<double> measure(const MeasurementEnsemble &ens, std::span<const double> x)
{
    check_dims(ens, x);
    std::vector<double> y(ens.rows());
    for (std::size_t m = 0; m < ens.rows(); ++m)
    {
        const auto r = ens.row(m);
        double acc = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k)
            acc += r[k] * x[k];
        y[m] = acc + ens.dither()[m];
    }
    return y;
}

std::uint32_t quantize_scalar(double v, unsigned bits)
{
    if (!std::isfinite(v))
        throw DomainError("quantize_scalar: input must be finite");
    if (bits < 1 || bits > kMaxBits)
        throw ParameterError("quantize_scalar: bits must be in [1, 31]");
    const double period = std::ldexp(1.0, static_cast<int>(bits));
    double r = std::fmod(std::ceil(v), period); // exact for integral arguments
    if (r < 0.0)
        r += period;
    return static_cast<std::uint32_t>(r);
}

QuantizedCode quantize(const MeasurementEnsemble &ens, std::span<const double> x)
{
    check_dims(ens, x);
    std::vector<std::uint32_t> symbols(ens.rows());
    for (std::size_t m = 0; m < ens.rows(); ++m)
        symbols[m] = quantize_scalar(ens.scaled_measurement(m, x), ens.bits());
    return QuantizedCode(std::move(symbols), ens.bits());
}

ConsistencyResult consistency(const QuantizedCode &a, const QuantizedCode &b)
{
    if (a.size() != b.size())
        throw ParameterError("consistency: code lengths differ");
    if (a.bits() != b.bits())
        throw ParameterError("consistency: bit depths differ");
    std::size_t hamming = 0;
    for (std::size_t m = 0; m < a.size(); ++m)
        hamming += a[m] != b[m];
    return {hamming == 0, hamming};
}

// ---------------------------------------------------------------------------
// Serialization

namespace
{
constexpr const char *kMagic = "urq-ensemble 1";
}

std::string ensemble_to_text(const MeasurementEnsemble &ens)
{
    if (ens.has_row_precisions())
        throw ParameterError("ensemble with per-row precisions cannot be serialized");
    const auto &p = ens.params();
    std::string out = kMagic;
    out += "\nM=" + std::to_string(p.rows);
    out += "\nK=" + std::to_string(p.dim);
    out += "\nsigma=" + format_real(p.sigma);
    out += "\ndelta=" + format_real(p.delta);
    out += "\nbits=" + std::to_string(p.bits);
    out += "\nseed=" + std::to_string(p.seed);
    out += "\n";
    return out;
}

MeasurementEnsemble ensemble_from_text(const std::string &text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kMagic)
        throw ParameterError("ensemble file: missing 'urq-ensemble 1' header");

    std::map<std::string, std::string> kv;
    while (std::getline(in, line))
    {
        if (line.empty() || line[0] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError("ensemble file: malformed line '" + line + "'");
        if (!kv.emplace(line.substr(0, eq), line.substr(eq + 1)).second)
            throw ParameterError("ensemble file: duplicate key '" + line.substr(0, eq) + "'");
    }

    auto take = [&](const char *key) -> const std::string & {
        auto it = kv.find(key);
        if (it == kv.end())
            throw ParameterError(std::string("ensemble file: missing key '") + key + "'");
        return it->second;
    };
    auto as_u64 = [&](const char *key) {
        const auto &s = take(key);
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw ParameterError(std::string("ensemble file: bad integer for '") + key + "'");
        return v;
    };
    auto as_real = [&](const char *key) {
        const auto &s = take(key);
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(s, &used);
        }
        catch (const std::exception &)
        {
            used = 0;
        }
        if (used == 0 || used != s.size())
            throw ParameterError(std::string("ensemble file: bad number for '") + key + "'");
        return v;
    };

    EnsembleParams p;
    p.rows = as_u64("M");
    p.dim = as_u64("K");
    p.sigma = as_real("sigma");
    p.delta = as_real("delta");
    p.bits = static_cast<unsigned>(as_u64("bits"));
    p.seed = as_u64("seed");
    if (kv.size() != 6)
        throw ParameterError("ensemble file: unexpected keys");
    return MeasurementEnsemble::make(p);
}

void save_ensemble(const MeasurementEnsemble &ens, const std::filesystem::path &path)
{
    const std::string text = ensemble_to_text(ens);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out)
        throw IoError("write to '" + path.string() + "' failed");
}

MeasurementEnsemble load_ensemble(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return ensemble_from_text(buf.str());
}

const char *version()
{
    return URQ_VERSION_STRING;
}

} // namespace urq
