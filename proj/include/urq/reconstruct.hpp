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
#include "urq/model.hpp"
#include "urq/montecarlo.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace urq
{

/*!MD
# Brute-force consistent reconstruction

A candidate set is a finite sample of the signal model: either the points of
the lattice h Z^K inside a ball (unit ball or similar-signal ball), or a cloud
of points drawn uniformly from the model. Reconstruction scans the set and
keeps the candidates whose code matches the observed one. The cost is linear in
the number of candidates, which for a grid grows like (2/h)^K; this is a
desk-scale oracle, not a practical decoder.
*/
class CandidateSet
{
public:
    enum class Kind
    {
        Grid,
        Cloud,
        Explicit
    };

    // Lattice points within the ball of a UnitBall or SimilarSignal model.
    static CandidateSet grid(const SignalModel &model, double spacing);

    // `count` points drawn uniformly from the model.
    static CandidateSet cloud(const SignalModel &model, std::size_t count, std::uint64_t seed);

    // Row-major points, `dim` coordinates each.
    static CandidateSet from_points(std::size_t dim, std::vector<double> points);

    Kind kind() const { return kind_; }
    std::size_t size() const { return dim_ == 0 ? 0 : points_.size() / dim_; }
    std::size_t dim() const { return dim_; }
    double spacing() const { return spacing_; }
    std::uint64_t seed() const { return seed_; }
    std::span<const double> point(std::size_t i) const { return {points_.data() + i * dim_, dim_}; }
    std::span<const double> points() const { return points_; }

    // Typical gap between neighbouring candidates: h for a grid, the radius of
    // a ball holding one cloud point on average otherwise (0 for explicit sets).
    double resolution() const { return resolution_; }

private:
    CandidateSet() = default;

    Kind kind_ = Kind::Explicit;
    std::size_t dim_ = 0;
    double spacing_ = 0.0;
    double resolution_ = 0.0;
    std::uint64_t seed_ = 0;
    std::vector<double> points_;
};

struct Reconstruction
{
    std::optional<Signal> best;        // lowest-index consistent candidate
    std::optional<std::size_t> index;  // its position in the candidate set
    std::size_t consistent_count = 0;
};

// Compares the first q.size() rows of the ensemble; an empty code is matched
// by every candidate.
Reconstruction consistent_reconstruct(const MeasurementEnsemble &ens, const QuantizedCode &q,
                                      const CandidateSet &candidates);

/*!MD
# Worst consistent distance

Samples pairs, quantizes both members and reports the largest and mean
distance among pairs whose codes agree. The sampled maximum is a lower estimate
of the true worst case.

- `Fresh`: every pair sees its own ensemble (per-pair probability statements).
- `Shared`: one ensemble for all pairs (the uniform "for all pairs" event).
*/
enum class EnsembleMode
{
    Fresh,
    Shared
};

// Ensemble family: everything but the number of rows.
struct EnsembleFamily
{
    std::size_t dim = 1;
    double sigma = 1.0;
    double delta = 1.0;
    unsigned bits = 1;
    std::uint64_t seed = 0;
};

struct FixedPair
{
    Signal x;
    Signal x2;
};

using PairSource = std::variant<SignalModel, FixedPair>;

struct PairOptions
{
    std::uint64_t n_pairs = 1000;
    std::uint64_t seed = 0; // pair sampling; ensembles use the family seed
    EnsembleMode mode = EnsembleMode::Fresh;
    unsigned partitions = 1;
    unsigned threads = 0;
};

struct WorstDistance
{
    double worst = 0.0;           // 0 when no pair is consistent
    double mean = 0.0;
    bool any_consistent = false;
    std::uint64_t consistent_pairs = 0;
    std::uint64_t n_pairs = 0;
    double max_pair_distance = 0.0; // largest distance among all sampled pairs
    McEstimate consistent_fraction;
};

WorstDistance worst_consistent_distance(const EnsembleFamily &family, std::size_t measurements,
                                        const PairSource &source, const PairOptions &opts);

/*!MD
# Decay experiment

Each trial draws a signal x from the model and an ensemble with max(M) rows,
then filters the candidate set one measurement at a time. Because ensembles
are prefix-stable the surviving sets are nested, and at each M in the list the
trial records the largest distance from x to a surviving candidate.

Per M the report holds the maximum of these over trials (`worst`) and their
mean over trials with a nonempty survivor set (`mean`). ln(worst) is fitted
against M by least squares on the rows above the resolution floor: the floor
starts at the first row where more than half of the trials keep no candidate
or where worst is at or below the candidate resolution.

With `DeltaRule::Target`, delta follows the guarantee curve,
delta(M) = d(M) r2 / sqrt(K), and each M is filtered from scratch.
*/
enum class DeltaRule
{
    Fixed,
    Target
};

struct DecayConfig
{
    std::size_t dim = 2;
    std::vector<std::size_t> m_list;
    std::uint64_t trials = 2000;
    std::uint64_t seed = 0;
    std::optional<SignalModel> model; // default: unit ball of dimension `dim`
    DeltaRule delta_rule = DeltaRule::Fixed;
    double delta = 0.2;
    double sigma = 0.0; // 0: 1/sqrt(K)
    unsigned bits = 1;
    double p0 = 0.05;
    double c_o = 60.0;
    double c_r = 0.75;
    double r2 = 1.0;
    double grid_spacing = 0.01; // used when cloud_size == 0
    std::size_t cloud_size = 0;
    unsigned partitions = 1;
    unsigned threads = 0;
};

struct DecayRow
{
    std::size_t m;
    double worst;
    double mean;
    std::uint64_t pairs_tested; // trials at this M
    std::uint64_t empty_trials; // trials with no surviving candidate
    double guarantee;           // corollary distance at p0
    double delta;
};

struct DecayFit
{
    bool valid = false;
    double slope = 0.0; // of ln(worst) per measurement
    double intercept = 0.0;
    double r_squared = 0.0;
    double ratio_per_2k = 0.0; // exp(2 K slope), comparable to c_r
    std::size_t points = 0;
    std::string note;
};

struct DecayReport
{
    std::vector<DecayRow> rows;
    DecayFit fit;
    std::size_t floor_index = 0; // first row excluded from the fit
    double resolution = 0.0;
    double dominance_fraction = 0.0; // rows with worst <= guarantee
};

DecayReport decay_experiment(const DecayConfig &config);

// Least squares of ln(y) on x; nonpositive y are skipped. `dim` only scales
// ratio_per_2k.
DecayFit fit_log_linear(std::span<const double> x, std::span<const double> y, std::size_t dim);

} // namespace urq
