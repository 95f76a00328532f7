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

#include <ddpchan/rng.hpp>
#include <ddpchan/types.hpp>

#include <vector>

namespace ddpchan
{

// Draw K paths: theta, vartheta uniform on (-pi/3, pi/3), phi uniform on
// (0, pi/2), polarimetric losses with unit-modulus entries and uniform
// phases. Path 1 carries the Rician LOS weight sqrt(kappa / (kappa + 1)),
// the remaining paths share the diffuse power equally.
PathParams sample_paths(int k, double kappa_db, Rng& rng);

// Assemble the 2Mr-by-2Mt channel. Each polarization block is
// A_r diag(beta^{p,q}) A_t^H.
ChannelMatrix synthesize_channel(const PathParams& paths, const ArrayGeometry& geom);

// Same assembly driven by per-path spatial frequencies instead of angles;
// b is the 4-by-K polarimetric loss matrix. Estimation pipelines rebuild
// channels this way so reporting-side angle clamping cannot bias them.
ChannelMatrix synthesize_from_phases(const std::vector<PhaseTriple>& phases, const MatC& b,
                                     const ArrayGeometry& geom);

// Row-orthogonal pilot of length n >= 2Mt: scaled DFT columns with a
// random unit-phase diagonal, so s * s^H = I.
PilotMatrix make_orthogonal_pilot(int mt, int n, Rng& rng);

// Compressed pilot blockdiag(q, q) with real standard Gaussian q of size
// Mt-by-n/2; requires n even and 4 <= n < 2Mt.
PilotMatrix make_frugal_pilot(int mt, int n, Rng& rng);

// x = h * s plus circular complex Gaussian noise calibrated so the sample
// SNR equals snr_db; no noise when snr_db is absent.
ReceivedData transmit(const ChannelMatrix& h, const PilotMatrix& pilot,
                      std::optional<double> snr_db, Rng& rng);

// Unstructured least-squares channel estimate x * s^H * (s s^H)^{-1}.
// Throws singular_pilot_error when the pilot cannot identify the channel
// (n < 2Mt or rank-deficient s).
ChannelMatrix ls_channel_estimate(const ReceivedData& data, const PilotMatrix& pilot, int mr, int mt);

} // namespace ddpchan
