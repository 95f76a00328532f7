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

#include <ddpchan/parallel.hpp>
#include <ddpchan/types.hpp>

#include <cstdint>
#include <vector>

namespace ddpchan
{

struct CpdOptions
{
    int max_iters = 1000;
    double tol = 1e-8;          // stop when the fit change per iteration drops below this
    int restarts = 10;
    double target_fit = 1e-11;  // accept a restart early once its fit reaches this
    std::uint64_t seed = 0;
    Exec exec = Exec::serial;
};

// Rank-K factors of the channel tensor. ax and ay are the transmit-axis
// factors proper (not conjugated), so the model for the mode-4 unfolding
// is (conj(ay) kr conj(ax) kr ar) * b^T.
struct CpdFactors
{
    MatC ar;
    MatC ax;
    MatC ay;
    MatC b;
};

struct CpdResult
{
    CpdFactors factors;
    double fit = 1.0;           // relative residual of the winning restart
    std::vector<double> fit_history; // per-sweep fits of the winning restart
    int iterations = 0;
    int restart_index = 0;
    bool gram_loaded = false;   // a singular LS subproblem needed diagonal loading
};

// View the dual-polarized channel as a 4-way tensor
// T[m, lx, ly, p] = H^{(p)}[m, ly*mx + lx] with p running over the
// polarization pairs (VV, VH, HV, HH), and return the requested matrix
// unfolding (mode in 1..4). Row orderings, fastest index last:
//   mode 1: (p, ly, lx) x m      mode 2: (p, ly, m) x lx
//   mode 3: (p, lx, m) x ly      mode 4: (ly, lx, m) x p
MatC unfold_channel(const ChannelMatrix& h, int mx, int my, int mode);

// Mode-4 unfolding rebuilt from factors.
MatC cpd_reconstruct_h4(const CpdFactors& f);

// Alternating least squares on the mode-4 unfolding h4 of size
// (mr*mx*my)-by-4. Restart 0 starts from an algebraic pencil solution
// when the geometry admits one; later restarts use random factors.
// Restarts run independently from per-index seeds; the winner is the
// lowest-index restart reaching target_fit, else the best (fit, index)
// pair, so results do not depend on the execution mode.
CpdResult cpd_als(const MatC& h4, int mr, int mx, int my, int k,
                  const CpdOptions& opts = {});

// Phase of a Vandermonde-like column, invariant to complex scaling:
// arg(head^H tail) over the leading and trailing m-1 entries. Returns 0
// for a length-1 column.
double extract_phase(const VecC& column);

// Columnwise extraction. A column whose norm is negligible next to the
// largest column raises degenerate_path_error.
VecR extract_phases(const MatC& factor);

struct ParafacEstimate
{
    PathParams paths;
    std::vector<PhaseTriple> phases; // raw extracted phases, drive reconstruction
    int projected_paths = 0;         // paths whose reported angles needed domain clamping
    CpdResult cpd;
};

// Full pipeline: ALS decomposition, per-column phase extraction, angle
// inversion, then a least-squares refit of the polarimetric losses
// against steering matrices rebuilt from the extracted phases.
ParafacEstimate parafac_estimate(const ChannelMatrix& h, const ArrayGeometry& geom,
                                 int k, const CpdOptions& opts = {});

} // namespace ddpchan
