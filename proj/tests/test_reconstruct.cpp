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
#include "urq/reconstruct.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace urq;

namespace
{

Signal random_in_ball(std::size_t k, std::mt19937_64 &g)
{
    std::normal_distribution<double> n;
    std::uniform_real_distribution<double> u;
    Signal x(k);
    double s = 0.0;
    for (double &v : x)
    {
        v = n(g);
        s += v * v;
    }
    const double r = std::pow(u(g), 1.0 / static_cast<double>(k)) / std::sqrt(s);
    for (double &v : x)
        v *= r;
    return x;
}

double dist(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

} // namespace

TEST_CASE("lattice candidates fill the ball", "[reconstruct]")
{
    const auto g = CandidateSet::grid(make_unit_ball(2), 0.1);
    CHECK(g.size() == 317); // lattice points with i^2 + j^2 <= 100
    CHECK(g.kind() == CandidateSet::Kind::Grid);
    CHECK(g.resolution() == 0.1);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(contains(make_unit_ball(2), g.point(i)));

    const Signal c = {0.5, -0.25, 0.1};
    const auto s = CandidateSet::grid(make_similar(c, 0.3), 0.1);
    CHECK(s.size() == 123); // lattice points of radius 3 in Z^3
    for (std::size_t i = 0; i < s.size(); ++i)
        CHECK(dist(s.point(i), c) <= 0.3 + 1e-12);

    CHECK_THROWS_AS(CandidateSet::grid(make_unit_ball(2), 0.0), ParameterError);
    CHECK_THROWS_AS(CandidateSet::grid(make_sparse(5, 2), 0.1), ParameterError);
    CHECK_THROWS_AS(CandidateSet::grid(make_unit_ball(8), 0.01), ParameterError);
}

TEST_CASE("random clouds stay inside their model", "[reconstruct]")
{
    const SignalModel models[] = {make_unit_ball(3), make_sparse(10, 2), make_similar({0.2, 0.1}, 0.05),
                                  make_union(3, 1, {{1.0, 0.0, 0.0}, {0.0, 0.6, 0.8}})};
    for (const auto &m : models)
    {
        const auto cloud = CandidateSet::cloud(m, 500, 17);
        CHECK(cloud.size() == 500);
        CHECK(cloud.dim() == ambient_dim(m));
        for (std::size_t i = 0; i < cloud.size(); ++i)
            CHECK(contains(m, cloud.point(i), 1e-9));
        const auto again = CandidateSet::cloud(m, 500, 17);
        CHECK(std::equal(cloud.points().begin(), cloud.points().end(), again.points().begin()));
    }
    CHECK_THROWS_AS(CandidateSet::cloud(make_unit_ball(2), 0, 1), ParameterError);
    CHECK_THROWS_AS(CandidateSet::cloud(make_union_count(4, 2, 3.0), 10, 1), ParameterError);
}

TEST_CASE("reconstruction finds the true signal among the candidates", "[reconstruct]")
{
    std::mt19937_64 g(3);
    const auto ens = make_ensemble({25, 3, 1.0, 0.3, 1, 44});
    std::vector<double> pts;
    for (int i = 0; i < 200; ++i)
    {
        const auto x = random_in_ball(3, g);
        pts.insert(pts.end(), x.begin(), x.end());
    }
    const auto cands = CandidateSet::from_points(3, pts);
    const Signal truth(cands.point(137).begin(), cands.point(137).end());
    const auto q = quantize(ens, truth);
    const auto r = consistent_reconstruct(ens, q, cands);
    REQUIRE(r.best);
    CHECK(r.consistent_count >= 1);
    CHECK(*r.index <= 137);
    CHECK(quantize(ens, *r.best) == q);
}

TEST_CASE("an empty code is matched by every candidate", "[reconstruct]")
{
    const auto ens = make_ensemble({5, 2, 1.0, 1.0, 1, 1});
    const auto cands = CandidateSet::grid(make_unit_ball(2), 0.2);
    const auto r = consistent_reconstruct(ens, QuantizedCode({}, 1), cands);
    CHECK(r.consistent_count == cands.size());
    CHECK(r.index == std::size_t{0});
}

TEST_CASE("no consistent candidate yields nothing", "[reconstruct]")
{
    const auto ens = make_ensemble({40, 2, 1.0, 0.05, 1, 2});
    const auto far = CandidateSet::from_points(2, {0.9, 0.0, 0.8, 0.1});
    const auto q = quantize(ens, Signal{-0.9, 0.0});
    const auto r = consistent_reconstruct(ens, q, far);
    CHECK_FALSE(r.best);
    CHECK_FALSE(r.index);
    CHECK(r.consistent_count == 0);
}

TEST_CASE("reconstruction argument checks", "[reconstruct]")
{
    const auto ens = make_ensemble({5, 2, 1.0, 1.0, 1, 1});
    const auto c3 = CandidateSet::grid(make_unit_ball(3), 0.5);
    CHECK_THROWS_AS(consistent_reconstruct(ens, QuantizedCode({0}, 1), c3), ParameterError);
    const auto c2 = CandidateSet::grid(make_unit_ball(2), 0.5);
    CHECK_THROWS_AS(consistent_reconstruct(ens, QuantizedCode(std::vector<std::uint32_t>(6, 0), 1), c2),
                    ParameterError);
    CHECK_THROWS_AS(consistent_reconstruct(ens, QuantizedCode({0}, 2), c2), ParameterError);
    CHECK_THROWS_AS(CandidateSet::from_points(2, {1.0, 2.0, 3.0}), ParameterError);
}

TEST_CASE("adding measurements never grows the consistent set", "[reconstruct]")
{
    std::mt19937_64 g(8);
    const auto cands = CandidateSet::grid(make_unit_ball(2), 0.05);
    for (int trial = 0; trial < 5; ++trial)
    {
        const auto x = random_in_ball(2, g);
        const auto ens = make_ensemble({60, 2, 1.0, 0.2, 1, static_cast<std::uint64_t>(trial)});
        const auto q = quantize(ens, x);
        std::size_t prev = cands.size() + 1;
        for (std::size_t m = 0; m <= 60; m += 5)
        {
            const auto r = consistent_reconstruct(ens, q.prefix(m), cands);
            CHECK(r.consistent_count <= prev);
            prev = r.consistent_count;
        }
    }
}

TEST_CASE("grid reconstruction error is within the guarantee", "[reconstruct]")
{
    std::mt19937_64 g(21);
    const auto cands = CandidateSet::grid(make_unit_ball(2), 0.01);
    const double bound = corollary_distance(2, 100.0, 0.05, 60.0, 0.75); // about 0.135
    int ok = 0;
    for (int t = 0; t < 200; ++t)
    {
        // Truth on the lattice, so at least one candidate is always consistent.
        const auto p = cands.point(std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(g));
        const Signal x(p.begin(), p.end());
        const auto ens = make_ensemble({100, 2, 1.0 / std::sqrt(2.0), 0.2, 1, 1000 + static_cast<std::uint64_t>(t)});
        const auto r = consistent_reconstruct(ens, quantize(ens, x), cands);
        REQUIRE(r.best);
        if (dist(*r.best, x) <= bound)
            ++ok;
    }
    CHECK(ok >= 190); // the guarantee allows a 5% failure rate
}

TEST_CASE("worst distance with no measurements is the widest pair", "[reconstruct]")
{
    const EnsembleFamily fam{2, 1.0, 0.5, 1, 3};
    PairOptions o;
    o.n_pairs = 500;
    o.seed = 4;
    const auto w = worst_consistent_distance(fam, 0, make_unit_ball(2), o);
    CHECK(w.consistent_pairs == 500);
    CHECK(w.any_consistent);
    CHECK(w.worst == w.max_pair_distance);
    CHECK(w.worst > 1.5);
    CHECK(w.worst <= 2.0);
    CHECK(w.mean <= w.worst);
    CHECK(w.consistent_fraction.mean == 1.0);
}

TEST_CASE("fixed pair consistency decays like the per-bit law to the power M", "[reconstruct]")
{
    const EnsembleFamily fam{3, 1.0, 1.0, 1, 7};
    const FixedPair pair{{0.0, 0.0, 0.0}, {0.0, 0.4, 0.0}};
    const double p = consistency_prob_series(0.4, 1.0, 1.0);
    PairOptions o;
    o.n_pairs = 40000;
    o.partitions = 4;
    for (std::size_t m : {1u, 3u, 8u})
    {
        const auto w = worst_consistent_distance(fam, m, pair, o);
        CHECK(std::abs(z_score(w.consistent_fraction, std::pow(p, static_cast<double>(m)))) <= 4.0);
        if (w.any_consistent)
        {
            CHECK(w.worst == Catch::Approx(0.4));
            CHECK(w.mean == Catch::Approx(0.4));
        }
    }
}

TEST_CASE("worst distance is deterministic across partitions and threads", "[reconstruct]")
{
    const EnsembleFamily fam{2, 1.0, 0.3, 1, 9};
    PairOptions a;
    a.n_pairs = 3000;
    a.seed = 5;
    a.partitions = 1;
    a.threads = 1;
    PairOptions b = a;
    b.partitions = 7;
    b.threads = 3;
    const auto wa = worst_consistent_distance(fam, 6, make_unit_ball(2), a);
    const auto wb = worst_consistent_distance(fam, 6, make_unit_ball(2), b);
    CHECK(wa.worst == wb.worst);
    CHECK(wa.mean == wb.mean);
    CHECK(wa.consistent_pairs == wb.consistent_pairs);

    a.mode = EnsembleMode::Shared;
    const auto s1 = worst_consistent_distance(fam, 6, make_unit_ball(2), a);
    const auto s2 = worst_consistent_distance(fam, 6, make_unit_ball(2), a);
    CHECK(s1.worst == s2.worst);
    CHECK(s1.consistent_pairs == s2.consistent_pairs);
}

TEST_CASE("shared ensemble pairs agree with direct quantization", "[reconstruct]")
{
    // With a single pair source the shared ensemble is the family ensemble.
    const EnsembleFamily fam{2, 1.0, 0.4, 1, 12};
    const FixedPair pair{{0.1, 0.2}, {0.15, 0.18}};
    PairOptions o;
    o.n_pairs = 1;
    o.mode = EnsembleMode::Shared;
    const auto ens = make_ensemble({5, 2, 1.0, 0.4, 1, 12});
    const bool equal = quantize(ens, pair.x) == quantize(ens, pair.x2);
    const auto w = worst_consistent_distance(fam, 5, pair, o);
    CHECK(w.any_consistent == equal);
}

TEST_CASE("worst distance argument checks", "[reconstruct]")
{
    PairOptions o;
    o.n_pairs = 0;
    CHECK_THROWS_AS(worst_consistent_distance({2, 1.0, 1.0, 1, 0}, 3, make_unit_ball(2), o), ParameterError);
    o.n_pairs = 10;
    CHECK_THROWS_AS(worst_consistent_distance({3, 1.0, 1.0, 1, 0}, 3, make_unit_ball(2), o), ParameterError);
    CHECK_THROWS_AS(worst_consistent_distance({2, 1.0, 1.0, 1, 0}, 3, FixedPair{{0.0}, {1.0, 0.0}}, o),
                    ParameterError);
    CHECK_THROWS_AS(worst_consistent_distance({2, -1.0, 1.0, 1, 0}, 3, make_unit_ball(2), o), ParameterError);
}

TEST_CASE("log-linear fit", "[reconstruct]")
{
    std::vector<double> x, y;
    for (int m = 10; m <= 100; m += 10)
    {
        x.push_back(m);
        y.push_back(3.0 * std::exp(-0.05 * m));
    }
    const auto f = fit_log_linear(x, y, 2);
    CHECK(f.valid);
    CHECK(f.slope == Catch::Approx(-0.05));
    CHECK(f.intercept == Catch::Approx(std::log(3.0)));
    CHECK(f.r_squared == Catch::Approx(1.0));
    CHECK(f.ratio_per_2k == Catch::Approx(std::exp(-0.2)));
    CHECK(f.points == 10);

    const auto one = fit_log_linear(std::vector<double>{10.0}, std::vector<double>{0.5}, 2);
    CHECK_FALSE(one.valid);
    CHECK(one.note == "insufficient points");

    const auto same_x = fit_log_linear(std::vector<double>{1.0, 1.0}, std::vector<double>{0.5, 0.4}, 2);
    CHECK_FALSE(same_x.valid);
}

TEST_CASE("decay report invariants", "[reconstruct]")
{
    DecayConfig c;
    c.dim = 2;
    c.m_list = {0, 10, 20, 40, 80};
    c.trials = 60;
    c.grid_spacing = 0.02;
    c.seed = 3;
    const auto r = decay_experiment(c);
    REQUIRE(r.rows.size() == 5);
    CHECK(r.resolution == 0.02);
    for (std::size_t j = 0; j < r.rows.size(); ++j)
    {
        const auto &row = r.rows[j];
        CHECK(row.m == c.m_list[j]);
        CHECK(row.worst >= row.mean);
        CHECK(row.mean >= 0.0);
        CHECK(row.pairs_tested == 60);
        CHECK(row.guarantee == Catch::Approx(corollary_distance(2, static_cast<double>(row.m), 0.05, 60.0, 0.75)));
        if (j > 0)
        {
            // Surviving sets are nested within a trial.
            CHECK(row.worst <= r.rows[j - 1].worst);
            CHECK(row.empty_trials >= r.rows[j - 1].empty_trials);
        }
    }
    CHECK(r.rows[0].empty_trials == 0);
    CHECK(r.rows[0].worst > 1.5);

    c.partitions = 5;
    c.threads = 2;
    const auto r2 = decay_experiment(c);
    for (std::size_t j = 0; j < r.rows.size(); ++j)
    {
        CHECK(r2.rows[j].worst == r.rows[j].worst);
        CHECK(r2.rows[j].mean == r.rows[j].mean);
    }
}

TEST_CASE("decay with a single M flags the fit", "[reconstruct]")
{
    DecayConfig c;
    c.m_list = {10};
    c.trials = 20;
    c.grid_spacing = 0.05;
    const auto r = decay_experiment(c);
    CHECK_FALSE(r.fit.valid);
    CHECK(r.fit.note == "insufficient points");
}

TEST_CASE("decay under the target precision rule shrinks with M", "[reconstruct]")
{
    DecayConfig c;
    c.dim = 3;
    c.delta_rule = DeltaRule::Target;
    c.m_list = {20, 40, 60, 80, 100, 120, 140, 160, 180, 200};
    c.trials = 100;
    c.cloud_size = 20000;
    c.seed = 1;
    const auto r = decay_experiment(c);
    for (std::size_t j = 0; j < r.rows.size(); ++j)
    {
        CHECK(r.rows[j].delta == Catch::Approx(r.rows[j].guarantee / std::sqrt(3.0)));
        if (j > 0)
            CHECK(r.rows[j].worst <= r.rows[j - 1].worst + r.resolution);
    }
    CHECK(r.rows.back().worst < r.rows.front().worst);
}

TEST_CASE("decay argument checks", "[reconstruct]")
{
    DecayConfig c;
    c.m_list = {};
    CHECK_THROWS_AS(decay_experiment(c), ParameterError);
    c.m_list = {10, 10};
    CHECK_THROWS_AS(decay_experiment(c), ParameterError);
    c.m_list = {10};
    c.trials = 0;
    CHECK_THROWS_AS(decay_experiment(c), ParameterError);
    c.trials = 1;
    c.model = make_unit_ball(3);
    CHECK_THROWS_AS(decay_experiment(c), ParameterError);
}
