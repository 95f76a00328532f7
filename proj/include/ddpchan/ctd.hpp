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

#include <vector>

namespace ddpchan
{

struct CtdOptions
{
    int max_grad_iters = 500;
    double grad_norm_tol = 1e-10;
    Exec exec = Exec::serial;
};

// Spatial smoothing layout for an Mr-element receive array and pilot
// length n: pr subarrays rows, qr = mr + 1 - pr shifts, kmax the largest
// resolvable path count.
struct SmoothingPlan
{
    int pr = 0;
    int qr = 0;
    int kmax = 0;
};

// Pick pr in 2..mr maximizing min(4*(pr-1), (mr+1-pr)*n/2); ties resolve
// to the larger pr. Throws infeasible_rank_error when mr < 2.
SmoothingPlan choose_pr(int mr, int n);

// Compressed tensor unfoldings of the frugal-pilot observation x
// (2*mr rows, even column count n).
//   z:      (mr*n/2)-by-4,  row m*n/2 + t, column = polarization pair
//   xprime: (4*mr)-by-(n/2), row m*4 + p
MatC ctd_unfold_z(const MatC& x, int mr);
MatC ctd_unfold_xprime(const MatC& x, int mr);

// Spatially smoothed matrix of size (4*pr)-by-((mr+1-pr)*n/2); shift w
// contributes columns w*n/2..w*n/2+n/2-1 from rows 4w..4(w+pr)-1 of
// xprime.
MatC ctd_smooth(const MatC& xprime, int pr);

// Shift-invariance harvest on the smoothed matrix: receive phases from
// the signal-subspace pencil, per-path polarimetric signatures from the
// pencil eigenvectors, and the compressed transmit signatures e_k
// (columns of Q^H A_t, up to the per-path scale absorbed into b) from a
// least-squares refit against xprime.
struct EspritResult
{
    VecR omega_r;
    MatC b; // 4-by-k, scaled per path
    MatC e; // (n/2)-by-k, inversely scaled so (ar kr b) (e^*)^T reproduces xprime
    double min_separation = 0.0; // smallest pairwise pencil-eigenvalue distance
};

EspritResult smoothed_esprit(const MatC& xprime, int k, int pr);

// Projection spectrum for direction-of-departure recovery:
// f(wx, wy) = || (I - e e^H / ||e||^2) q^T a_t(wx, wy) ||^2, with its
// analytic gradient. Invariant to rescaling e.
double dod_objective(double omega_x, double omega_y, const VecC& e,
                     const MatR& q, int mx, int my);
Eigen::Vector2d dod_gradient(double omega_x, double omega_y, const VecC& e,
                             const MatR& q, int mx, int my);

struct DodPhases
{
    double omega_x = 0.0;
    double omega_y = 0.0;
    double objective = 0.0;
};

// Minimize the projection spectrum over the achievable phase rectangle:
// beamwidth-spaced grid followed by projected gradient descent with
// backtracking. A single-row transmit array (my == 1) reduces to a
// polynomial rooting step on the unit circle instead.
DodPhases recover_dod(const VecC& e, const MatR& q, const ArrayGeometry& geom,
                      const CtdOptions& opts = {});

struct CtdEstimate
{
    PathParams paths;
    std::vector<PhaseTriple> phases; // raw estimated phases, drive reconstruction
    int projected_paths = 0;         // paths whose reported angles needed domain clamping
    double esprit_min_separation = 0.0;
    SmoothingPlan plan;
};

// Full compressed pipeline on frugal-pilot data: smoothing plan, ESPRIT,
// per-path departure search, angle inversion, and a final least-squares
// refit of the polarimetric losses against the compressed model.
CtdEstimate ctd_estimate(const ReceivedData& data, const PilotMatrix& pilot,
                         const ArrayGeometry& geom, int k,
                         const CtdOptions& opts = {});

} // namespace ddpchan
