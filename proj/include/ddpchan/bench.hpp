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

#pragma once

#include <ddpchan/cpd.hpp>
#include <ddpchan/ctd.hpp>
#include <ddpchan/types.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ddpchan
{

// Normalized channel estimation error ||est - truth||_F^2 / ||truth||_F^2.
// A zero reference raises std::domain_error.
double nmse(const MatC& est, const MatC& truth);
double nmse(const ChannelMatrix& est, const ChannelMatrix& truth);

// Minimum-total-cost assignment between estimated and true paths, cost
// |dtheta| + |dvartheta| + |dphi| per pair. perm[j] is the estimated path
// matched to truth path j; the error vectors follow the truth ordering.
struct PathMatch
{
    std::vector<int> perm;
    VecR theta_err;
    VecR vartheta_err;
    VecR phi_err;
    double total_cost = 0.0;
};

PathMatch match_paths(const PathParams& est, const PathParams& truth);

enum class Method
{
    ls,
    parafac,
    ctd
};

std::string method_name(Method m);

enum class KPolicy
{
    known, // estimators receive the true per-trial K
    fixed  // estimators always receive k_fixed
};

// Sweep over one axis: "snr_db" (values are SNRs in dB), "mt" (values are
// transmit array sizes, my fixed and mx = value / my), or "k" (values are
// true path counts).
struct SweepConfig
{
    ArrayGeometry geom;
    std::string axis = "snr_db";
    std::vector<double> axis_values;
    std::vector<Method> methods;
    int trials = 200;
    int k_min = 1;
    int k_max = 1; // true K drawn uniformly in [k_min, k_max] unless the axis is "k"
    KPolicy k_policy = KPolicy::known;
    int k_fixed = 0;
    double kappa_db = 13.2;
    std::optional<double> snr_db; // fixed SNR when the axis is not "snr_db"; absent = noiseless
    PilotKind ls_pilot_kind = PilotKind::row_orthogonal;
    int frugal_pilot_length = 0; // required when any method needs the frugal pilot
    std::uint64_t seed = 0;
    CpdOptions cpd;
    CtdOptions ctd;
    Exec exec = Exec::serial;
};

struct TrialRecord
{
    double axis_value = 0.0;
    Method method = Method::ls;
    int trial = 0;
    std::uint64_t seed = 0;
    double nmse = 0.0;
    double wall_time_s = 0.0;
    std::string warning;
    bool failed = false; // the method threw; nmse was pinned to 1
};

struct SweepCell
{
    double axis_value = 0.0;
    Method method = Method::ls;
    int trials = 0;
    double nmse_mean = 0.0;
    double nmse_median = 0.0;
};

struct SweepResult
{
    std::vector<SweepCell> cells;
    std::vector<TrialRecord> trial_log;
    int failed_trials = 0;
};

// Run every (axis value, trial) pair with a per-trial seed split from the
// master seed, so the execution mode and trial order cannot change any
// stream. A trial that throws is recorded as NMSE 1 with a warning.
SweepResult run_sweep(const SweepConfig& cfg);

// Aggregate rows, header `axis_value,method,trials,nmse_mean,nmse_median`;
// byte-identical across repeated runs of the same (config, seed).
void write_aggregate_csv(const SweepResult& result, std::ostream& out);

// Per-trial rows including wall time, header
// `axis_value,method,trial,seed,nmse,wall_time_s`.
void write_trial_csv(const SweepResult& result, std::ostream& out);

} // namespace ddpchan
