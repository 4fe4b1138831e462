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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace urq
{

// A K-dimensional real signal.
using Signal = std::vector<double>;

// Largest supported quantizer depth; symbols are stored as uint32_t.
inline constexpr unsigned kMaxBits = 31;

// Everything needed to regenerate an ensemble bit-for-bit.
struct EnsembleParams
{
    std::size_t rows = 1;   // M, number of measurements
    std::size_t dim = 1;    // K, signal dimension
    double sigma = 1.0;     // std-dev of the entries of Phi
    double delta = 1.0;     // quantizer precision
    unsigned bits = 1;      // B
    std::uint64_t seed = 0; // master seed

    bool operator==(const EnsembleParams &) const = default;
};

/*!
Randomized measurement system: Gaussian matrix Phi (M x K, row-major), uniform
dither w in [0, delta] and the modulo quantizer of depth B.

Phi and w are drawn from two independent substreams of the master seed in row
order, so the first m rows of an ensemble with M > m rows are identical to the
ensemble generated with M = m.
*/
class MeasurementEnsemble
{
public:
    static MeasurementEnsemble make(const EnsembleParams &params);

    // Per-row precision variant: w_m is drawn in [0, delta_m]. The nominal
    // params.delta is kept for bookkeeping. Such ensembles cannot be serialized.
    static MeasurementEnsemble make(const EnsembleParams &params, std::span<const double> row_precisions);

    // Ensemble from explicit data (tests, externally supplied matrices).
    // phi is row-major with dither.size() rows and `dim` columns.
    static MeasurementEnsemble from_parts(std::size_t dim, std::vector<double> phi, std::vector<double> dither,
                                          double delta, unsigned bits, double sigma = 1.0, std::uint64_t seed = 0);

    std::size_t rows() const { return dither_.size(); }
    std::size_t dim() const { return params_.dim; }
    double sigma() const { return params_.sigma; }
    double delta() const { return params_.delta; }
    unsigned bits() const { return params_.bits; }
    std::uint64_t seed() const { return params_.seed; }
    const EnsembleParams &params() const { return params_; }

    std::span<const double> row(std::size_t m) const;
    std::span<const double> matrix() const { return phi_; }
    std::span<const double> dither() const { return dither_; }
    double precision(std::size_t m) const { return row_precisions_.empty() ? params_.delta : row_precisions_[m]; }
    bool has_row_precisions() const { return !row_precisions_.empty(); }

    // First m rows (1 <= m <= rows()).
    MeasurementEnsemble prefix(std::size_t m) const;

    // Scaled measurement (<x, phi_m> + w_m) / delta_m for one row.
    double scaled_measurement(std::size_t m, std::span<const double> x) const;

private:
    MeasurementEnsemble() = default;

    EnsembleParams params_;
    std::vector<double> phi_;
    std::vector<double> dither_;
    std::vector<double> row_precisions_;
};

// Output of the quantizer: M symbols in {0, ..., 2^B - 1}.
class QuantizedCode
{
public:
    QuantizedCode(std::vector<std::uint32_t> symbols, unsigned bits);

    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    unsigned bits() const { return bits_; }
    std::uint32_t operator[](std::size_t m) const { return symbols_[m]; }
    std::span<const std::uint32_t> symbols() const { return symbols_; }

    QuantizedCode prefix(std::size_t m) const;

    bool operator==(const QuantizedCode &) const = default;

private:
    std::vector<std::uint32_t> symbols_;
    unsigned bits_;
};

struct ConsistencyResult
{
    bool equal;
    std::size_t hamming;
};

MeasurementEnsemble make_ensemble(const EnsembleParams &params);

// y = Phi x + w.
std::vector<double> measure(const MeasurementEnsemble &ens, std::span<const double> x);

// ceil(v) mod 2^bits, normalized into {0, ..., 2^bits - 1}. Integers map to
// themselves modulo 2^bits.
std::uint32_t quantize_scalar(double v, unsigned bits);

QuantizedCode quantize(const MeasurementEnsemble &ens, std::span<const double> x);

ConsistencyResult consistency(const QuantizedCode &a, const QuantizedCode &b);

// Text serialization of the ensemble parameters; the matrix and dither are
// regenerated from the seed on load. See README for the format.
std::string ensemble_to_text(const MeasurementEnsemble &ens);
MeasurementEnsemble ensemble_from_text(const std::string &text);
void save_ensemble(const MeasurementEnsemble &ens, const std::filesystem::path &path);
MeasurementEnsemble load_ensemble(const std::filesystem::path &path);

const char *version();

} // namespace urq
