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
// urq command-line front end. Talks to the library through the C interface
// only. Every command writes one CSV document: a metadata comment line, a
// fixed header and one row per point. Reals use 17 significant digits.
//
// Exit codes: 0 success, 1 i/o or internal failure, 2 usage error,
// 3 precondition violated.

#include "urq/urq.h"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <regex>
#include <stdexcept>
#include <string>
#include <vector>

#include <unistd.h>

namespace
{

constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitPrecondition = 3;

struct UsageError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct LibraryError : std::runtime_error
{
    urq_status status;
    LibraryError(urq_status s, const std::string &what) : std::runtime_error(what), status(s) {}
};

void check(urq_status s, const char *context)
{
    if (s != URQ_OK)
        throw LibraryError(s, std::string(context) + ": " + urq_last_error());
}

std::string real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---- argument grammar ---------------------------------------------------

double parse_real(const std::string &t, const std::string &what)
{
    std::size_t used = 0;
    double v = 0.0;
    try
    {
        v = std::stod(t, &used);
    }
    catch (const std::exception &)
    {
        throw UsageError("bad number '" + t + "' in " + what);
    }
    if (used != t.size())
        throw UsageError("bad number '" + t + "' in " + what);
    return v;
}

std::size_t parse_count(const std::string &t, const std::string &what)
{
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
        throw UsageError("bad integer '" + t + "' in " + what);
    return std::stoull(t);
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;)
    {
        const auto at = s.find(sep, start);
        out.push_back(s.substr(start, at - start));
        if (at == std::string::npos)
            return out;
        start = at + 1;
    }
}

// "start:stop:count" (inclusive, evenly spaced) or "a,b,c".
std::vector<double> parse_real_grid(const std::string &spec, const std::string &what)
{
    std::vector<double> out;
    if (spec.find(':') != std::string::npos)
    {
        const auto p = split(spec, ':');
        if (p.size() != 3)
            throw UsageError(what + ": expected start:stop:count");
        const double a = parse_real(p[0], what), b = parse_real(p[1], what);
        const auto n = parse_count(p[2], what);
        if (n < 1)
            throw UsageError(what + ": count must be >= 1");
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
    }
    else
        for (const auto &t : split(spec, ','))
            out.push_back(parse_real(t, what));
    return out;
}

// "start:stop:step" (inclusive) or "a,b,c".
std::vector<std::size_t> parse_count_grid(const std::string &spec, const std::string &what)
{
    std::vector<std::size_t> out;
    if (spec.find(':') != std::string::npos)
    {
        const auto p = split(spec, ':');
        if (p.size() != 3)
            throw UsageError(what + ": expected start:stop:step");
        const auto a = parse_count(p[0], what), b = parse_count(p[1], what), step = parse_count(p[2], what);
        if (step < 1 || b < a)
            throw UsageError(what + ": need step >= 1 and stop >= start");
        for (std::size_t m = a; m <= b; m += step)
            out.push_back(m);
    }
    else
        for (const auto &t : split(spec, ','))
            out.push_back(parse_count(t, what));
    return out;
}

void check_model_syntax(const std::string &spec)
{
    static const std::regex re(R"((unit:\d+)|(sparse:\d+:\d+)|(union:\d+:\d+:[0-9.eE+]+)|(similar:\d+:[0-9.eE+\-]+))");
    if (!std::regex_match(spec, re))
        throw UsageError("model spec '" + spec + "': expected unit:K, sparse:N:K, union:N:K:L or similar:K:D");
}

struct ModelHandle
{
    urq_model *p = nullptr;
    ~ModelHandle() { urq_model_destroy(p); }
};

// ---- output -------------------------------------------------------------

struct Common
{
    std::string out = "-";
    std::uint64_t seed = 0;
    std::uint64_t trials = 0; // 0: command default
    std::string config;
};

std::string metadata(const std::string &command, std::uint64_t seed)
{
    return "# urq " + command + " seed=" + std::to_string(seed) + " version=" + urq_version() + "\n";
}

// Writes next to the target and renames, so a failed run leaves no partial file.
void publish(const std::string &path, const std::string &text)
{
    if (path == "-")
    {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
        return;
    }
    const std::filesystem::path target(path);
    auto tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        f << text;
        f.flush();
        if (!f)
        {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("cannot write " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec)
    {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error("cannot rename onto " + path);
    }
}

// ---- commands -----------------------------------------------------------

struct BoundsArgs
{
    std::string grid = "0:3:100";
    double sigma = 1.0;
    double delta = 1.0;
};

std::string cmd_bounds(const BoundsArgs &a, const Common &c)
{
    const auto grid = parse_real_grid(a.grid, "--grid");
    for (double d : grid)
        if (!(d >= 0.0))
            throw LibraryError(URQ_ERR_PARAM, "bounds: d must be >= 0");
    std::string text = metadata("bounds", c.seed) + "d,exact,lower1,lower2,upper\n";
    for (double d : grid)
    {
        urq_bounds b;
        check(urq_consistency_bounds(d, a.sigma, a.delta, &b), "bounds");
        text += real(d) + "," + real(b.exact) + "," + real(b.lower_first) + "," + real(b.lower_linear) + "," +
                real(b.upper) + "\n";
    }
    return text;
}

struct McArgs
{
    std::string kind = "consistency";
    std::string grid;
    std::size_t dim = 8;
    double sigma = 1.0;
    double delta = 1.0;
    unsigned bits = 1;
    double c_p = 2.0;
    double epsilon = 0.0; // ball kind; 0 selects delta / 20
    unsigned partitions = 1;
    unsigned threads = 0;
};

std::string cmd_mc(const McArgs &a, const Common &c)
{
    if (a.kind != "consistency" && a.kind != "tail" && a.kind != "ball")
        throw UsageError("--kind must be consistency, tail or ball");
    std::string grid_spec = a.grid;
    if (grid_spec.empty())
        grid_spec = a.kind == "tail" ? "0.5:4:8" : "0.15:3:20";
    const auto grid = parse_real_grid(grid_spec, "--grid");

    urq_mc_options opts;
    urq_mc_default_options(&opts);
    if (c.trials > 0)
        opts.trials = c.trials;
    opts.seed = c.seed;
    opts.partitions = a.partitions;
    opts.threads = a.threads;

    const double eps = a.epsilon > 0.0 ? a.epsilon : a.delta / 20.0;

    // Validate every point before running any simulation.
    std::vector<double> analytic;
    for (double p : grid)
    {
        double v = 0.0;
        if (a.kind == "consistency")
            check(a.bits == 1 ? urq_consistency_prob_series(p, a.sigma, a.delta, &v)
                              : urq_consistency_prob(p, a.sigma, a.delta, a.bits, &v),
                  "mc consistency");
        else if (a.kind == "tail")
            check(urq_norm_tail(a.dim, a.sigma, p, &v), "mc tail");
        else
            check(urq_ball_pair_failure_bound(p, eps, a.c_p, a.sigma, a.delta, a.dim, &v), "mc ball");
        analytic.push_back(v);
    }

    std::string text = metadata("mc", c.seed) + "point,mc_mean,stderr,analytic,z_score\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        const double p = grid[i];
        urq_mc_estimate est;
        if (a.kind == "consistency")
            check(urq_mc_consistency(p, a.sigma, a.delta, a.dim, a.bits, &opts, &est), "mc consistency");
        else if (a.kind == "tail")
            check(urq_mc_norm_tail(a.dim, a.sigma, p, &opts, &est), "mc tail");
        else
            check(urq_mc_ball_guarantee(p, eps, a.c_p, a.sigma, a.delta, a.dim, &opts, &est), "mc ball");
        double z = 0.0;
        check(urq_z_score(&est, analytic[i], &z), "z score");
        text += real(p) + "," + real(est.mean) + "," + real(est.std_error) + "," + real(analytic[i]) + "," + real(z) +
                "\n";
    }
    return text;
}

struct DecayArgs
{
    std::size_t dim = 2;
    std::string m_list = "10:150:10";
    std::string delta_rule = "fixed";
    std::string model;
    double delta = 0.2;
    double sigma = 0.0;
    unsigned bits = 1;
    double p0 = 0.05;
    double c_o = 60.0;
    double c_r = 0.75;
    double r2 = 1.0;
    double grid_spacing = 0.01;
    std::size_t cloud = 0;
    unsigned partitions = 1;
    unsigned threads = 0;
};

std::string cmd_decay(const DecayArgs &a, const Common &c)
{
    if (a.delta_rule != "fixed" && a.delta_rule != "target")
        throw UsageError("--delta-rule must be fixed or target");
    const auto ms = parse_count_grid(a.m_list, "--m-list");

    ModelHandle model;
    if (!a.model.empty())
    {
        check_model_syntax(a.model);
        check(urq_model_parse(a.model.c_str(), &model.p), "model");
    }

    urq_decay_config cfg;
    urq_decay_default_config(&cfg);
    cfg.dim = a.dim;
    cfg.m_list = ms.data();
    cfg.m_count = ms.size();
    if (c.trials > 0)
        cfg.trials = c.trials;
    cfg.seed = c.seed;
    cfg.model = model.p;
    cfg.target_delta = a.delta_rule == "target";
    cfg.delta = a.delta;
    cfg.sigma = a.sigma;
    cfg.bits = a.bits;
    cfg.p0 = a.p0;
    cfg.c_o = a.c_o;
    cfg.c_r = a.c_r;
    cfg.r2 = a.r2;
    cfg.grid_spacing = a.grid_spacing;
    cfg.cloud_size = a.cloud;
    cfg.partitions = a.partitions;
    cfg.threads = a.threads;

    urq_decay *raw = nullptr;
    check(urq_decay_run(&cfg, &raw), "decay");
    std::unique_ptr<urq_decay, void (*)(urq_decay *)> report(raw, urq_decay_destroy);

    std::size_t n = 0;
    check(urq_decay_row_count(report.get(), &n), "decay");
    std::string text = metadata("decay", c.seed) + "M,worst,mean,guarantee_d\n";
    for (std::size_t i = 0; i < n; ++i)
    {
        urq_decay_row r;
        check(urq_decay_get_row(report.get(), i, &r), "decay");
        text += std::to_string(r.m) + "," + real(r.worst) + "," + real(r.mean) + "," + real(r.guarantee) + "\n";
    }
    urq_decay_summary s;
    check(urq_decay_get_summary(report.get(), &s), "decay");
    const std::string note = urq_decay_fit_note(report.get());
    if (s.fit_valid)
        text += "# fit slope=" + real(s.slope) + " intercept=" + real(s.intercept) + " r_squared=" + real(s.r_squared) +
                " ratio_per_2k=" + real(s.ratio_per_2k) + " points=" + std::to_string(s.fit_points);
    else
        text += "# fit " + note + " points=" + std::to_string(s.fit_points);
    text += " floor_index=" + std::to_string(s.floor_index) + " resolution=" + real(s.resolution) +
            " dominance=" + real(s.dominance_fraction);
    if (s.fit_valid && !note.empty())
        text += " note=" + note;
    text += "\n";
    return text;
}

struct PlanArgs
{
    std::string model = "unit:2";
    double d = 0.1;
    double p0 = 0.05;
    double c_p = 2.0;
    double r1 = 0.2;
    double r2 = 1.0;
    double c_r_ceiling = 0.75; // 0: use the derived expression
};

std::string cmd_plan(const PlanArgs &a, const Common &c)
{
    check_model_syntax(a.model);
    ModelHandle model;
    check(urq_model_parse(a.model.c_str(), &model.p), "model");
    std::size_t n = 0;
    check(urq_model_ambient_dim(model.p, &n), "model");

    urq_theorem_params tp{n, a.c_p, a.r1, a.r2, a.c_r_ceiling};
    urq_rate_plan plan;
    check(urq_plan_rate(model.p, a.d, a.p0, &tp, &plan), "plan");

    char name[128];
    check(urq_model_describe(model.p, name, sizeof name, nullptr), "model");
    return metadata("plan", c.seed) + "model,d,P0,c_o,c_r,covering_log,required_M\n" + name + "," + real(plan.distance) +
           "," + real(plan.p0) + "," + real(plan.c_o) + "," + real(plan.c_r) + "," + real(plan.covering_log) + "," +
           std::to_string(plan.required_m) + "\n";
}

// ---- configuration file ---------------------------------------------------

// Flat key=value lines ('#' comments) become --key=value arguments placed
// before the command-line flags, so flags given explicitly win.
std::vector<std::string> config_args(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw UsageError("cannot read config file " + path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(f, line))
    {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line without '=': " + line);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const auto key = trim(line.substr(0, eq));
        if (key.empty() || key == "config")
            throw UsageError("bad config key in: " + line);
        out.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
    }
    return out;
}

std::vector<std::string> expand_config(int argc, char **argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i)
    {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty() || args.empty())
        return args;
    const auto extra = config_args(path);
    // Insert right after the subcommand name.
    args.insert(args.begin() + 1, extra.begin(), extra.end());
    return args;
}

void add_common(CLI::App *cmd, Common &c)
{
    cmd->add_option("--out", c.out, "Output CSV path ('-' for stdout)");
    cmd->add_option("--seed", c.seed, "Master seed");
    cmd->add_option("--trials", c.trials, "Trial budget (command default when omitted)");
    cmd->add_option("--config", c.config, "Flat key=value file; flags override it");
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"urq: universal scalar quantization bounds, simulations and rate planning"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.set_version_flag("--version", std::string(urq_version()));
    app.require_subcommand(1);

    Common common;

    BoundsArgs ba;
    auto *bounds = app.add_subcommand("bounds", "Consistency probability and its bounds over a distance grid");
    add_common(bounds, common);
    bounds->add_option("--grid", ba.grid, "Distances: start:stop:count or a,b,c");
    bounds->add_option("--sigma", ba.sigma, "Std-dev of the measurement entries");
    bounds->add_option("--delta", ba.delta, "Quantizer precision");

    McArgs ma;
    auto *mc = app.add_subcommand("mc", "Monte Carlo estimate next to the analytic value");
    add_common(mc, common);
    mc->add_option("--kind", ma.kind, "consistency | tail | ball");
    mc->add_option("--grid", ma.grid, "Points (d, or c_p for tail): start:stop:count or a,b,c");
    mc->add_option("--dim", ma.dim, "Signal dimension K");
    mc->add_option("--sigma", ma.sigma, "Std-dev of the measurement entries");
    mc->add_option("--delta", ma.delta, "Quantizer precision");
    mc->add_option("--bits", ma.bits, "Bit depth B (consistency kind)");
    mc->add_option("--c-p", ma.c_p, "Norm threshold c_p (ball kind)");
    mc->add_option("--epsilon", ma.epsilon, "Ball radius (ball kind; default delta / 20)");
    mc->add_option("--partitions", ma.partitions, "Deterministic trial partitions");
    mc->add_option("--threads", ma.threads, "Worker threads (0: automatic)");

    DecayArgs da;
    auto *decay = app.add_subcommand("decay", "Worst consistent distance against the number of measurements");
    add_common(decay, common);
    decay->add_option("--dim", da.dim, "Signal dimension K");
    decay->add_option("--m-list", da.m_list, "Measurement counts: start:stop:step or a,b,c");
    decay->add_option("--delta-rule", da.delta_rule, "fixed | target");
    decay->add_option("--model", da.model, "Signal model (default unit:K)");
    decay->add_option("--delta", da.delta, "Fixed quantizer precision");
    decay->add_option("--sigma", da.sigma, "Std-dev of the measurement entries (0: 1/sqrt(K))");
    decay->add_option("--bits", da.bits, "Bit depth B");
    decay->add_option("--p0", da.p0, "Failure probability of the guarantee curve");
    decay->add_option("--c-o", da.c_o, "Leading constant c_o");
    decay->add_option("--c-r", da.c_r, "Decay base c_r");
    decay->add_option("--r2", da.r2, "Ratio delta sqrt(K) / d for the target rule");
    decay->add_option("--grid-spacing", da.grid_spacing, "Candidate lattice spacing");
    decay->add_option("--cloud", da.cloud, "Random candidate cloud size (replaces the lattice)");
    decay->add_option("--partitions", da.partitions, "Deterministic trial partitions");
    decay->add_option("--threads", da.threads, "Worker threads (0: automatic)");

    PlanArgs pa;
    auto *plan = app.add_subcommand("plan", "Measurements needed for a worst-case distance");
    add_common(plan, common);
    plan->add_option("--model", pa.model, "unit:K | sparse:N:K | union:N:K:L | similar:K:D");
    plan->add_option("--d", pa.d, "Target worst-case distance");
    plan->add_option("--p0", pa.p0, "Allowed failure probability");
    plan->add_option("--c-p", pa.c_p, "Norm threshold c_p");
    plan->add_option("--r1", pa.r1, "Ball-width ratio r1");
    plan->add_option("--r2", pa.r2, "Precision ratio r2");
    plan->add_option("--c-r-ceiling", pa.c_r_ceiling, "Rounded c_r (0: derived value)");

    try
    {
        auto args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end()); // CLI11 consumes a reversed vector
        app.parse(args);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }
    catch (const UsageError &e)
    {
        std::fprintf(stderr, "urq: %s\n", e.what());
        return kExitUsage;
    }

    try
    {
        std::string text;
        if (*bounds)
            text = cmd_bounds(ba, common);
        else if (*mc)
            text = cmd_mc(ma, common);
        else if (*decay)
            text = cmd_decay(da, common);
        else
            text = cmd_plan(pa, common);
        publish(common.out, text);
    }
    catch (const UsageError &e)
    {
        std::fprintf(stderr, "urq: %s\n", e.what());
        return kExitUsage;
    }
    catch (const LibraryError &e)
    {
        std::fprintf(stderr, "urq: %s\n", e.what());
        return e.status == URQ_ERR_PARAM || e.status == URQ_ERR_DOMAIN || e.status == URQ_ERR_VACUOUS
                   ? kExitPrecondition
                   : kExitIo;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "urq: %s\n", e.what());
        return kExitIo;
    }
    return 0;
}
