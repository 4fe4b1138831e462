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
// Acceptance suite. `urq_acceptance N` runs criterion N, `urq_acceptance`
// runs all of them. Each criterion prints one line
//
//     criterion N: PASS|FAIL  <summary>  (<seconds> s, limit <seconds> s)
//
// and the process exits nonzero if any selected criterion fails, including
// by exceeding its time budget.

#include "oracles.hpp"
#include "urq/analytics.hpp"
#include "urq/montecarlo.hpp"
#include "urq/reconstruct.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace urq;
namespace fs = std::filesystem;

namespace
{

struct Outcome
{
    bool pass;
    std::string summary;
};

std::string fmt(const char *f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

McOptions mc(std::uint64_t trials, std::uint64_t seed, unsigned partitions = 8, unsigned threads = 0)
{
    return {trials, seed, partitions, threads};
}

// Lemma 1: frequency of equal one-bit symbols against the series.
Outcome criterion_1()
{
    int good = 0;
    double worst_z = 0.0;
    for (int i = 1; i <= 20; ++i)
    {
        const double d = 0.15 * i;
        const auto e = mc_consistency(d, 1.0, 1.0, 8, 1, mc(100000, 1000 + i, 1, 1));
        const double z = z_score(e, consistency_prob_series(d, 1.0, 1.0));
        good += std::abs(z) <= 4.0;
        worst_z = std::max(worst_z, std::abs(z));
    }
    return {good >= 19, fmt("%d/20 points within 4 stderr, max |z| = %.2f", good, worst_z)};
}

// Bound sandwich on a 200-point grid.
Outcome criterion_2()
{
    int violations = 0;
    for (int i = 0; i < 200; ++i)
    {
        const double d = 3.0 * i / 199.0;
        const auto b = consistency_bounds(d, 1.0, 1.0);
        violations += !(b.lower_first_term <= b.exact_series + 1e-12);
        violations += !(b.exact_series <= b.upper + 1e-12);
        violations += !(b.lower_linear <= b.exact_series + 1e-12);
    }
    return {violations == 0, fmt("%d violations on 200 points", violations)};
}

// Series against adaptive quadrature of the conditional law.
Outcome criterion_3()
{
    double worst = 0.0;
    for (int i = 1; i <= 100; ++i)
    {
        const double d = 0.03 * i;
        worst = std::max(worst, std::abs(consistency_prob_series(d, 1.0, 1.0) - oracle::quad_consistency(d, 1.0, 1.0, 1)));
    }
    return {worst <= 1e-8, fmt("max |series - quadrature| = %.3e on 100 points", worst)};
}

// Norm tail: closed form at K = 2 and simulation at K = 1, 8, 32.
Outcome criterion_4()
{
    double worst_rel = 0.0;
    for (double c : {0.1, 0.5, 1.0, 2.0, 3.0, 5.0})
        for (double sigma : {0.5, 1.0, 2.0})
        {
            const double exact = std::exp(-c * c / (2.0 * sigma * sigma));
            worst_rel = std::max(worst_rel, std::abs(norm_tail(2, sigma, c) - exact) / exact);
        }
    bool ok = worst_rel <= 1e-12;
    std::string z_text;
    for (std::size_t k : {1u, 8u, 32u})
    {
        const double c = std::sqrt(static_cast<double>(k));
        const auto e = mc_norm_tail(k, 1.0, c, mc(1000000, 40 + k));
        const double z = z_score(e, norm_tail(k, 1.0, c));
        ok = ok && std::abs(z) <= 4.0;
        z_text += fmt(" K=%zu z=%.2f", k, z);
    }
    return {ok, fmt("K=2 max rel err %.2e;", worst_rel) + z_text};
}

// Lemma 2: simulated ball-pair failure dominated by the bound.
Outcome criterion_5()
{
    int good = 0, n = 0;
    double worst_margin = -1e9;
    for (std::size_t k : {2u, 4u, 8u, 16u})
        for (double d : {0.25, 0.5, 1.0, 1.5, 2.5})
        {
            const double sigma = 1.0 / std::sqrt(static_cast<double>(k));
            const double delta = 0.35 * (1.0 + 0.25 * static_cast<double>(n % 3));
            const double c_p = 1.0 + 0.5 * static_cast<double>(n % 4);
            const double eps = delta / (20.0 * c_p) * (1.0 + static_cast<double>(n % 5)); // 2 c_p eps < delta
            const auto e = mc_ball_guarantee(d, eps, c_p, sigma, delta, k, mc(100000, 500 + n));
            const double bound = ball_pair_failure_bound(d, eps, c_p, sigma, delta, k);
            good += e.mean <= bound + 4.0 * e.std_err;
            worst_margin = std::max(worst_margin, (e.mean - bound) / std::max(e.std_err, 1e-300));
            ++n;
        }
    return {good == n, fmt("%d/%d configurations dominated, max (mc - bound)/stderr = %.2f", good, n, worst_margin)};
}

// Concrete instance at K = 9 through the full parameter chain.
Outcome criterion_6()
{
    const std::size_t k = 9;
    const double c_p = 2.0, d = 0.3;
    const double delta = d / std::sqrt(static_cast<double>(k)), eps = delta / 20.0;
    // The ratios implied by epsilon = delta / 20 and delta = d / sqrt(K).
    const double r1 = 2.0 * c_p * eps / delta, r2 = delta * std::sqrt(static_cast<double>(k)) / d;
    const bool chain = std::abs(r1 - 0.2) <= 1e-15 && std::abs(r2 - 1.0) <= 1e-15;
    TheoremParams p;
    p.dim = k;
    p.c_p = c_p;
    p.r1 = 0.2;
    p.r2 = 1.0;
    p.c_r_ceiling = 0.75;
    const auto c = theorem_constants(p);
    const auto concrete = theorem_constants(concrete_instance(k));
    const auto design = theorem_design(p, d);
    const bool ok = chain && c.c_o == 60.0 && c.c_r == 0.75 && concrete.c_o == 60.0 && concrete.c_r == 0.75 &&
                    c.c_r_expression <= 0.75 && std::abs(design.delta - delta) <= 1e-15 &&
                    std::abs(design.epsilon - eps) <= 1e-15 && std::abs(design.sigma - 1.0 / 3.0) <= 1e-15;
    return {ok, fmt("c_o = %.17g, c_r = %.17g (derived expression %.6f)", c.c_o, c.c_r, c.c_r_expression)};
}

Outcome criterion_7()
{
    const double v = rate_overhead(0.75);
    return {std::abs(v - 4.82) <= 0.005, fmt("overhead = %.6f", v)};
}

// Exponential decay of the worst consistent distance at K = 2.
Outcome criterion_8()
{
    DecayConfig cfg;
    cfg.dim = 2;
    cfg.delta = 0.2;
    cfg.bits = 1;
    cfg.trials = 2000;
    cfg.seed = 1;
    cfg.partitions = 8;
    for (std::size_t m = 10; m <= 150; m += 10)
        cfg.m_list.push_back(m);
    const auto r = decay_experiment(cfg);
    const bool ok = r.fit.valid && r.fit.r_squared >= 0.9 && r.dominance_fraction >= 0.95;
    return {ok, fmt("R^2 = %.4f over %zu points (floor at M = %zu), slope = %.4f, dominance = %.2f", r.fit.r_squared,
                    r.fit.points, r.floor_index < r.rows.size() ? r.rows[r.floor_index].m : std::size_t{0},
                    r.fit.slope, r.dominance_fraction)};
}

// Independence of the M measurements for a fixed pair.
Outcome criterion_9()
{
    const double d = 0.2;
    const FixedPair pair{{0.1, -0.2, 0.05}, {0.1 + d, -0.2, 0.05}};
    const double p = consistency_prob_series(d, 1.0, 1.0);
    bool ok = true;
    std::string text;
    for (std::size_t m : {1u, 5u, 20u})
    {
        PairOptions o;
        o.n_pairs = 200000;
        o.seed = 90 + m;
        o.mode = EnsembleMode::Fresh;
        o.partitions = 8;
        const auto w = worst_consistent_distance({3, 1.0, 1.0, 1, 900 + m}, m, pair, o);
        const double z = z_score(w.consistent_fraction, std::pow(p, static_cast<double>(m)));
        ok = ok && std::abs(z) <= 4.0;
        text += fmt(" M=%zu z=%.2f", m, z);
    }
    return {ok, "fixed pair at d = 0.2:" + text};
}

// Multibit law at B = 3 against the independent quadrature.
Outcome criterion_10()
{
    int good = 0;
    double worst_z = 0.0;
    for (int i = 1; i <= 10; ++i)
    {
        const double d = 0.6 * i;
        const auto e = mc_consistency(d, 1.0, 1.0, 3, 3, mc(200000, 300 + i));
        const double z = z_score(e, oracle::quad_consistency(d, 1.0, 1.0, 3));
        good += std::abs(z) <= 4.0;
        worst_z = std::max(worst_z, std::abs(z));
    }
    return {good == 10, fmt("%d/10 points within 4 stderr, max |z| = %.2f", good, worst_z)};
}

// Byte-identical CLI output for every command.
Outcome criterion_11()
{
    const fs::path dir = fs::temp_directory_path() / ("urq_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::vector<std::string> cmds = {"bounds", "mc --trials 20000", "decay --trials 300", "plan"};
    int same = 0;
    std::string failed;
    for (std::size_t i = 0; i < cmds.size(); ++i)
    {
        std::string text[2];
        bool ran = true;
        for (int r = 0; r < 2; ++r)
        {
            const fs::path out = dir / fmt("%zu_%d.csv", i, r);
            const std::string cmd = std::string(URQ_CLI_PATH) + " " + cmds[i] + " --seed 7 --out " + out.string();
            const int rc = std::system(cmd.c_str());
            ran = ran && rc != -1 && WIFEXITED(rc) && WEXITSTATUS(rc) == 0;
            std::ifstream in(out, std::ios::binary);
            std::ostringstream s;
            s << in.rdbuf();
            text[r] = s.str();
        }
        if (ran && !text[0].empty() && text[0] == text[1])
            ++same;
        else
            failed += " " + cmds[i];
    }
    fs::remove_all(dir);
    return {same == 4, fmt("%d/4 commands byte-identical", same) + (failed.empty() ? "" : ";failed:" + failed)};
}

struct Criterion
{
    std::function<Outcome()> run;
    double limit_s;
};

const Criterion kCriteria[] = {
    {criterion_1, 30.0},  {criterion_2, 1.0},   {criterion_3, 5.0},  {criterion_4, 60.0},
    {criterion_5, 120.0}, {criterion_6, 1.0},   {criterion_7, 1.0},  {criterion_8, 300.0},
    {criterion_9, 60.0},  {criterion_10, 60.0}, {criterion_11, 120.0},
};

bool run_one(int n)
{
    const auto &c = kCriteria[n - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try
    {
        o = c.run();
    }
    catch (const std::exception &e)
    {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_s;
    const bool pass = o.pass && in_time;
    std::printf("criterion %d: %s  %s%s  (%.2f s, limit %.0f s)\n", n, pass ? "PASS" : "FAIL", o.summary.c_str(),
                in_time ? "" : " [over time budget]", secs, c.limit_s);
    std::fflush(stdout);
    return pass;
}

} // namespace

int main(int argc, char **argv)
{
    constexpr int count = static_cast<int>(std::size(kCriteria));
    if (argc > 2)
    {
        std::fprintf(stderr, "usage: %s [criterion 1-%d]\n", argv[0], count);
        return 2;
    }
    if (argc == 2)
    {
        const int n = std::atoi(argv[1]);
        if (n < 1 || n > count)
        {
            std::fprintf(stderr, "unknown criterion '%s'\n", argv[1]);
            return 2;
        }
        return run_one(n) ? 0 : 1;
    }
    bool all = true;
    for (int n = 1; n <= count; ++n)
        all = run_one(n) && all;
    return all ? 0 : 1;
}
