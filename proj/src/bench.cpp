// SPDX-License-Identifier: Apache-2.0
//
// ddpchan - parameter estimation for double-directional dual-polarized MIMO channels
// Copyright (C) 2026 the ddpchan developers
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

#include <ddpchan/bench.hpp>

#include <ddpchan/bounds.hpp>
#include <ddpchan/channel.hpp>
#include <ddpchan/errors.hpp>
#include <ddpchan/rng.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace ddpchan
{

namespace
{

// O(n^3) assignment by the potentials method; returns row -> column.
std::vector<int> hungarian(const MatR& cost)
{
    const int n = static_cast<int>(cost.rows());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i)
    {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::vector<char> used(n + 1, 0);
        do
        {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j)
                if (!used[j])
                {
                    const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if (cur < minv[j])
                    {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if (minv[j] < delta)
                    {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            for (int j = 0; j <= n; ++j)
            {
                if (used[j])
                {
                    u[p[j]] += delta;
                    v[j] -= delta;
                }
                else
                    minv[j] -= delta;
            }
            j0 = j1;
        } while (p[j0] != 0);
        do
        {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] != 0)
            row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct TrialSetup
{
    ArrayGeometry geom;
    std::optional<double> snr_db;
    int k_true = 0;
    int k_est = 0;
};

// Per-trial stream assignments: children of the trial seed, fixed so that
// methods sharing a pilot see identical data.
enum : std::uint64_t
{
    stream_paths = 0,
    stream_orth_pilot = 1,
    stream_frugal_pilot = 2,
    stream_orth_noise = 3,
    stream_frugal_noise = 4,
    stream_cpd = 5,
    stream_k_draw = 6
};

TrialSetup resolve_trial(const SweepConfig& cfg, double axis_value, Rng& rng)
{
    TrialSetup setup;
    setup.geom = cfg.geom;
    setup.snr_db = cfg.snr_db;
    if (cfg.axis == "snr_db")
        setup.snr_db = axis_value;
    else if (cfg.axis == "mt")
    {
        const int mt = static_cast<int>(axis_value);
        if (mt < 1 || cfg.geom.my < 1 || mt % cfg.geom.my != 0)
            throw std::invalid_argument(
                "SweepConfig.axis_values: mt value must be a positive multiple of geom.my");
        setup.geom.mx = mt / cfg.geom.my;
    }

    if (cfg.axis == "k")
        setup.k_true = static_cast<int>(axis_value);
    else if (cfg.k_min == cfg.k_max)
        setup.k_true = cfg.k_min;
    else
    {
        Rng k_rng = rng.child(stream_k_draw);
        const int span = cfg.k_max - cfg.k_min + 1;
        setup.k_true =
            cfg.k_min + std::min(span - 1, static_cast<int>(k_rng.uniform() * span));
    }
    setup.k_est = cfg.k_policy == KPolicy::fixed ? cfg.k_fixed : setup.k_true;
    return setup;
}

void validate_config(const SweepConfig& cfg)
{
    cfg.geom.validate();
    if (cfg.axis != "snr_db" && cfg.axis != "mt" && cfg.axis != "k")
        throw std::invalid_argument("SweepConfig.axis: must be one of snr_db, mt, k");
    if (cfg.axis_values.empty())
        throw std::invalid_argument("SweepConfig.axis_values: must not be empty");
    if (cfg.methods.empty())
        throw std::invalid_argument("SweepConfig.methods: must not be empty");
    if (cfg.trials < 1)
        throw std::invalid_argument("SweepConfig.trials: must be >= 1");
    if (cfg.k_min < 1 || cfg.k_max < cfg.k_min)
        throw std::invalid_argument("SweepConfig.k_min/k_max: need 1 <= k_min <= k_max");
    if (cfg.k_policy == KPolicy::fixed && cfg.k_fixed < 1)
        throw std::invalid_argument("SweepConfig.k_fixed: must be >= 1 under the fixed policy");
    if (cfg.axis == "k")
        for (double v : cfg.axis_values)
            if (v < 1.0 || v != std::floor(v))
                throw std::invalid_argument("SweepConfig.axis_values: k values must be integers >= 1");

    const bool needs_frugal =
        std::find(cfg.methods.begin(), cfg.methods.end(), Method::ctd) != cfg.methods.end() ||
        cfg.ls_pilot_kind == PilotKind::frugal;

    // Reject identifiability violations up front, before spending trials.
    for (double v : cfg.axis_values)
    {
        Rng probe(0);
        const TrialSetup setup = resolve_trial(cfg, v, probe);
        const int k_worst = cfg.k_policy == KPolicy::fixed
                                ? cfg.k_fixed
                                : (cfg.axis == "k" ? setup.k_true : cfg.k_max);
        for (Method m : cfg.methods)
        {
            if (m == Method::parafac)
            {
                const int cap = kmax_kruskal(setup.geom.mr, setup.geom.mx, setup.geom.my);
                if (k_worst > cap)
                    throw infeasible_rank_error(
                        "run_sweep: parafac with k = " + std::to_string(k_worst) +
                        " exceeds the uniqueness bound kmax = " + std::to_string(cap));
            }
            if (m == Method::ctd)
            {
                const int cap = kmax_ctd(setup.geom.mr, cfg.frugal_pilot_length);
                if (k_worst > cap)
                    throw infeasible_rank_error(
                        "run_sweep: ctd with k = " + std::to_string(k_worst) +
                        " exceeds the smoothing bound kmax = " + std::to_string(cap));
            }
        }
        if (needs_frugal)
        {
            const int n = cfg.frugal_pilot_length;
            if (n < 4 || n % 2 != 0 || n >= 2 * setup.geom.mt())
                throw std::invalid_argument(
                    "SweepConfig.frugal_pilot_length: need an even length in [4, 2*mt)");
        }
    }
}

double run_method(Method method, const SweepConfig& cfg, const TrialSetup& setup,
                  const ChannelMatrix& h, Rng& rng, std::string& warning)
{
    const int mt = setup.geom.mt();
    switch (method)
    {
    case Method::ls:
    {
        const bool orth = cfg.ls_pilot_kind == PilotKind::row_orthogonal;
        Rng pilot_rng = rng.child(orth ? stream_orth_pilot : stream_frugal_pilot);
        const PilotMatrix pilot =
            orth ? make_orthogonal_pilot(mt, 2 * mt, pilot_rng)
                 : make_frugal_pilot(mt, cfg.frugal_pilot_length, pilot_rng);
        Rng noise_rng = rng.child(orth ? stream_orth_noise : stream_frugal_noise);
        const ReceivedData data = transmit(h, pilot, setup.snr_db, noise_rng);
        return nmse(ls_channel_estimate(data, pilot, setup.geom.mr, mt), h);
    }
    case Method::parafac:
    {
        Rng pilot_rng = rng.child(stream_orth_pilot);
        const PilotMatrix pilot = make_orthogonal_pilot(mt, 2 * mt, pilot_rng);
        Rng noise_rng = rng.child(stream_orth_noise);
        const ReceivedData data = transmit(h, pilot, setup.snr_db, noise_rng);
        const ChannelMatrix hls = ls_channel_estimate(data, pilot, setup.geom.mr, mt);
        CpdOptions opts = cfg.cpd;
        opts.seed = rng.child(stream_cpd).seed();
        opts.exec = Exec::serial; // trials are the parallel axis
        const ParafacEstimate est = parafac_estimate(hls, setup.geom, setup.k_est, opts);
        if (est.projected_paths > 0)
            warning = "clamped " + std::to_string(est.projected_paths) + " path angle(s)";
        const ChannelMatrix rebuilt =
            synthesize_from_phases(est.phases, est.paths.pathloss, setup.geom);
        return nmse(rebuilt, h);
    }
    default:
    {
        Rng pilot_rng = rng.child(stream_frugal_pilot);
        const PilotMatrix pilot = make_frugal_pilot(mt, cfg.frugal_pilot_length, pilot_rng);
        Rng noise_rng = rng.child(stream_frugal_noise);
        const ReceivedData data = transmit(h, pilot, setup.snr_db, noise_rng);
        CtdOptions opts = cfg.ctd;
        opts.exec = Exec::serial;
        const CtdEstimate est = ctd_estimate(data, pilot, setup.geom, setup.k_est, opts);
        if (est.esprit_min_separation < 1e-6)
            warning = "near-coincident receive phases";
        else if (est.projected_paths > 0)
            warning = "clamped " + std::to_string(est.projected_paths) + " path angle(s)";
        const ChannelMatrix rebuilt =
            synthesize_from_phases(est.phases, est.paths.pathloss, setup.geom);
        return nmse(rebuilt, h);
    }
    }
}

} // namespace

double nmse(const MatC& est, const MatC& truth)
{
    if (est.rows() != truth.rows() || est.cols() != truth.cols())
        throw std::invalid_argument("nmse: size mismatch");
    const double ref = truth.squaredNorm();
    if (!(ref > 0.0))
        throw std::domain_error("nmse: zero reference channel");
    return (est - truth).squaredNorm() / ref;
}

double nmse(const ChannelMatrix& est, const ChannelMatrix& truth)
{
    return nmse(est.h, truth.h);
}

PathMatch match_paths(const PathParams& est, const PathParams& truth)
{
    const int k = truth.num_paths();
    if (est.num_paths() != k)
        throw std::invalid_argument("match_paths: path counts differ");
    MatR cost(k, k);
    for (int t = 0; t < k; ++t)
        for (int e = 0; e < k; ++e)
            cost(t, e) = std::abs(est.theta(e) - truth.theta(t)) +
                         std::abs(est.vartheta(e) - truth.vartheta(t)) +
                         std::abs(est.phi(e) - truth.phi(t));
    PathMatch match;
    match.perm = hungarian(cost);
    match.theta_err.resize(k);
    match.vartheta_err.resize(k);
    match.phi_err.resize(k);
    for (int t = 0; t < k; ++t)
    {
        const int e = match.perm[t];
        match.theta_err(t) = std::abs(est.theta(e) - truth.theta(t));
        match.vartheta_err(t) = std::abs(est.vartheta(e) - truth.vartheta(t));
        match.phi_err(t) = std::abs(est.phi(e) - truth.phi(t));
        match.total_cost += cost(t, e);
    }
    return match;
}

std::string method_name(Method m)
{
    switch (m)
    {
    case Method::ls:
        return "ls";
    case Method::parafac:
        return "parafac";
    default:
        return "ctd";
    }
}

SweepResult run_sweep(const SweepConfig& cfg)
{
    validate_config(cfg);
    const int n_axis = static_cast<int>(cfg.axis_values.size());
    const int n_methods = static_cast<int>(cfg.methods.size());
    SweepResult result;
    result.trial_log.resize(static_cast<std::size_t>(n_axis) * cfg.trials * n_methods);

    parallel_for(cfg.exec, static_cast<std::int64_t>(n_axis) * cfg.trials, [&](std::int64_t job) {
        const int a = static_cast<int>(job / cfg.trials);
        const int t = static_cast<int>(job % cfg.trials);
        const double axis_value = cfg.axis_values[a];
        const std::uint64_t trial_seed = mix_seed(cfg.seed, a, t);
        Rng rng(trial_seed);
        const TrialSetup setup = resolve_trial(cfg, axis_value, rng);

        Rng paths_rng = rng.child(stream_paths);
        const PathParams paths = sample_paths(setup.k_true, cfg.kappa_db, paths_rng);
        const ChannelMatrix h = synthesize_channel(paths, setup.geom);

        for (int mi = 0; mi < n_methods; ++mi)
        {
            TrialRecord rec;
            rec.axis_value = axis_value;
            rec.method = cfg.methods[mi];
            rec.trial = t;
            rec.seed = trial_seed;
            const auto start = std::chrono::steady_clock::now();
            try
            {
                rec.nmse = run_method(cfg.methods[mi], cfg, setup, h, rng, rec.warning);
            }
            catch (const std::exception& ex)
            {
                rec.nmse = 1.0;
                rec.warning = ex.what();
                rec.failed = true;
            }
            rec.wall_time_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            result.trial_log[(static_cast<std::size_t>(a) * cfg.trials + t) * n_methods + mi] =
                std::move(rec);
        }
    });

    // Deterministic reduction over the preassigned trial slots.
    for (int a = 0; a < n_axis; ++a)
        for (int mi = 0; mi < n_methods; ++mi)
        {
            SweepCell cell;
            cell.axis_value = cfg.axis_values[a];
            cell.method = cfg.methods[mi];
            cell.trials = cfg.trials;
            std::vector<double> values(cfg.trials);
            double sum = 0.0;
            for (int t = 0; t < cfg.trials; ++t)
            {
                const TrialRecord& rec =
                    result.trial_log[(static_cast<std::size_t>(a) * cfg.trials + t) * n_methods +
                                     mi];
                values[t] = rec.nmse;
                sum += rec.nmse;
            }
            cell.nmse_mean = sum / cfg.trials;
            std::sort(values.begin(), values.end());
            cell.nmse_median = cfg.trials % 2 == 1
                                   ? values[cfg.trials / 2]
                                   : 0.5 * (values[cfg.trials / 2 - 1] + values[cfg.trials / 2]);
            result.cells.push_back(cell);
        }

    for (const TrialRecord& rec : result.trial_log)
        if (rec.failed)
            ++result.failed_trials;
    return result;
}

void write_aggregate_csv(const SweepResult& result, std::ostream& out)
{
    out << "axis_value,method,trials,nmse_mean,nmse_median\n";
    for (const SweepCell& cell : result.cells)
        out << format_double(cell.axis_value) << ',' << method_name(cell.method) << ','
            << cell.trials << ',' << format_double(cell.nmse_mean) << ','
            << format_double(cell.nmse_median) << '\n';
}

void write_trial_csv(const SweepResult& result, std::ostream& out)
{
    out << "axis_value,method,trial,seed,nmse,wall_time_s\n";
    for (const TrialRecord& rec : result.trial_log)
    {
        char seed_buf[32];
        std::snprintf(seed_buf, sizeof(seed_buf), "%llu",
                      static_cast<unsigned long long>(rec.seed));
        char wall_buf[32];
        std::snprintf(wall_buf, sizeof(wall_buf), "%.6f", rec.wall_time_s);
        out << format_double(rec.axis_value) << ',' << method_name(rec.method) << ','
            << rec.trial << ',' << seed_buf << ',' << format_double(rec.nmse) << ','
            << wall_buf << '\n';
    }
}

} // namespace ddpchan
