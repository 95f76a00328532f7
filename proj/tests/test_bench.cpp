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

#include "helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

using namespace ddpchan;

namespace
{

PathParams perturbed_permutation(const PathParams& truth,
                                 const std::vector<int>& order, double eps)
{
    const int k = truth.num_paths();
    PathParams out;
    out.theta.resize(k);
    out.vartheta.resize(k);
    out.phi.resize(k);
    out.pathloss = MatC::Zero(4, k);
    out.kappa = truth.kappa;
    for (int j = 0; j < k; ++j)
    {
        out.theta(j) = truth.theta(order[j]) + eps * (j + 1);
        out.vartheta(j) = truth.vartheta(order[j]) - eps * (j + 1);
        out.phi(j) = truth.phi(order[j]);
        out.pathloss.col(j) = truth.pathloss.col(order[j]);
    }
    return out;
}

double brute_force_cost(const PathParams& est, const PathParams& truth)
{
    const int k = truth.num_paths();
    std::vector<int> perm(k);
    for (int j = 0; j < k; ++j)
        perm[j] = j;
    double best = std::numeric_limits<double>::infinity();
    do
    {
        double cost = 0.0;
        for (int t = 0; t < k; ++t)
        {
            const int e = perm[t];
            cost += std::abs(est.theta(e) - truth.theta(t)) +
                    std::abs(est.vartheta(e) - truth.vartheta(t)) +
                    std::abs(est.phi(e) - truth.phi(t));
        }
        best = std::min(best, cost);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace

TEST_CASE("nmse is a relative squared error", "[bench]")
{
    MatC ref(2, 2);
    ref << cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1);
    REQUIRE(nmse(ref, ref) == 0.0);
    REQUIRE(nmse(MatC::Zero(2, 2), ref) == 1.0);
    REQUIRE(nmse(2.0 * ref, ref) == Catch::Approx(1.0).margin(1e-14));
    REQUIRE_THROWS_AS(nmse(ref, MatC::Zero(2, 2)), std::domain_error);
}

TEST_CASE("path matching solves the assignment exactly", "[bench]")
{
    Rng rng(81);
    for (int k : {2, 3, 5, 6})
    {
        const PathParams truth = sample_paths(k, 13.2, rng);
        std::vector<int> order(k);
        for (int j = 0; j < k; ++j)
            order[j] = j;
        std::reverse(order.begin(), order.end());
        const PathParams est = perturbed_permutation(truth, order, 1e-5);

        const PathMatch match = match_paths(est, truth);
        REQUIRE(match.total_cost ==
                Catch::Approx(brute_force_cost(est, truth)).margin(1e-12));
        // The inverse of the applied reversal maps truth index to estimate slot.
        for (int t = 0; t < k; ++t)
            REQUIRE(order[match.perm[t]] == t);
        REQUIRE(match.theta_err.maxCoeff() < 1e-4);
    }
    const PathParams a = sample_paths(3, 13.2, rng);
    const PathParams b = sample_paths(4, 13.2, rng);
    REQUIRE_THROWS_AS(match_paths(a, b), std::invalid_argument);
}

TEST_CASE("noiseless sweep drives every estimator to machine precision", "[bench]")
{
    SweepConfig cfg;
    cfg.geom.mr = 3;
    cfg.geom.mx = 4;
    cfg.geom.my = 4;
    cfg.axis = "k";
    cfg.axis_values = {1, 2};
    cfg.methods = {Method::ls, Method::parafac, Method::ctd};
    cfg.trials = 2;
    cfg.snr_db = std::nullopt;
    cfg.frugal_pilot_length = 16;
    cfg.seed = 424242;
    cfg.cpd.seed = 1;

    const SweepResult res = run_sweep(cfg);
    REQUIRE(res.failed_trials == 0);
    REQUIRE(res.cells.size() == 6);
    REQUIRE(res.trial_log.size() == 12);
    for (const SweepCell& cell : res.cells)
    {
        REQUIRE(cell.trials == 2);
        REQUIRE(cell.nmse_mean < 1e-8);
        REQUIRE(cell.nmse_median < 1e-8);
    }
    for (const TrialRecord& rec : res.trial_log)
    {
        REQUIRE_FALSE(rec.failed);
        REQUIRE(rec.nmse < 1e-8);
        REQUIRE(rec.wall_time_s >= 0.0);
    }
}

TEST_CASE("identical seeds give byte-identical csv artifacts", "[bench]")
{
    SweepConfig cfg;
    cfg.geom.mr = 2;
    cfg.geom.mx = 4;
    cfg.geom.my = 4;
    cfg.axis = "snr_db";
    cfg.axis_values = {10.0, 20.0};
    cfg.methods = {Method::ls, Method::parafac};
    cfg.trials = 3;
    cfg.k_min = 1;
    cfg.k_max = 2;
    cfg.seed = 99;
    cfg.cpd.restarts = 4;
    cfg.cpd.max_iters = 200;

    const SweepResult a = run_sweep(cfg);
    const SweepResult b = run_sweep(cfg);
    std::ostringstream csv_a, csv_b;
    write_aggregate_csv(a, csv_a);
    write_aggregate_csv(b, csv_b);
    REQUIRE(csv_a.str() == csv_b.str());
    REQUIRE(csv_a.str().rfind("axis_value,method,trials,nmse_mean,nmse_median", 0) == 0);

    std::ostringstream trial_a, trial_b;
    write_trial_csv(a, trial_a);
    write_trial_csv(b, trial_b);
    REQUIRE(trial_a.str().rfind("axis_value,method,trial,seed,nmse,wall_time_s", 0) == 0);
    // Wall times differ between runs; compare rows without the last column.
    std::istringstream sa(trial_a.str()), sb(trial_b.str());
    std::string la, lb;
    while (std::getline(sa, la) && std::getline(sb, lb))
    {
        REQUIRE(la.substr(0, la.rfind(',')) == lb.substr(0, lb.rfind(',')));
    }
}

TEST_CASE("execution modes produce identical sweep statistics", "[bench]")
{
    SweepConfig cfg;
    cfg.geom.mr = 2;
    cfg.geom.mx = 4;
    cfg.geom.my = 4;
    cfg.axis = "snr_db";
    cfg.axis_values = {15.0};
    cfg.methods = {Method::ls, Method::parafac};
    cfg.trials = 3;
    cfg.k_min = 1;
    cfg.k_max = 3;
    cfg.seed = 7;
    cfg.cpd.restarts = 3;
    cfg.cpd.max_iters = 150;
    cfg.exec = Exec::serial;

    const SweepResult serial = run_sweep(cfg);
    cfg.exec = Exec::openmp;
    const SweepResult par = run_sweep(cfg);

    std::ostringstream csv_serial, csv_par;
    write_aggregate_csv(serial, csv_serial);
    write_aggregate_csv(par, csv_par);
    REQUIRE(csv_serial.str() == csv_par.str());
}

TEST_CASE("sweep axis mt resizes the transmit array", "[bench]")
{
    SweepConfig cfg;
    cfg.geom.mr = 2;
    cfg.geom.mx = 4;
    cfg.geom.my = 4;
    cfg.axis = "mt";
    cfg.axis_values = {8, 16};
    cfg.methods = {Method::ls};
    cfg.trials = 2;
    cfg.k_min = 1;
    cfg.k_max = 1;
    cfg.seed = 5;

    const SweepResult res = run_sweep(cfg);
    REQUIRE(res.cells.size() == 2);
    for (const SweepCell& cell : res.cells)
        REQUIRE(cell.nmse_mean < 1e-8);
}

TEST_CASE("sweep configs are validated up front", "[bench]")
{
    SweepConfig cfg;
    cfg.geom.mr = 2;
    cfg.geom.mx = 4;
    cfg.geom.my = 8;
    cfg.axis = "k";
    cfg.axis_values = {8}; // kruskal bound for 2x4x8 is 7
    cfg.methods = {Method::parafac};
    cfg.trials = 1;
    REQUIRE_THROWS_AS(run_sweep(cfg), infeasible_rank_error);

    cfg.axis_values = {2};
    cfg.methods = {Method::ctd};
    cfg.frugal_pilot_length = 15; // odd
    REQUIRE_THROWS_AS(run_sweep(cfg), std::invalid_argument);

    cfg.methods = {Method::ls};
    cfg.axis = "voltage";
    REQUIRE_THROWS_AS(run_sweep(cfg), std::invalid_argument);

    cfg.axis = "mt";
    cfg.axis_values = {10}; // not divisible by my = 8
    REQUIRE_THROWS_AS(run_sweep(cfg), std::invalid_argument);

    cfg.axis = "k";
    cfg.axis_values = {2};
    cfg.trials = 0;
    REQUIRE_THROWS_AS(run_sweep(cfg), std::invalid_argument);
}
