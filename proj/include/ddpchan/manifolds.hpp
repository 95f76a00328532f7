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

#include <ddpchan/types.hpp>

namespace ddpchan
{

// Spatial frequencies from physical angles:
//   omega_r = 2 pi dr sin(theta) / wavelength
//   omega_x = 2 pi dx sin(phi) cos(vartheta) / wavelength
//   omega_y = 2 pi dy sin(phi) sin(vartheta) / wavelength
PhaseTriple phases_from_angles(const PathAngles& angles, const ArrayGeometry& geom);

// Inverse map. Throws inconsistent_phase_error when a phase lies outside
// the range any physical angle can produce (beyond a small tolerance);
// arguments within tolerance of the domain edge are clamped.
PathAngles angles_from_phases(const PhaseTriple& phases, const ArrayGeometry& geom);

// Clamp a phase triple onto the set reachable from physical angles, so a
// subsequent angles_from_phases cannot throw. Returns true when the input
// violated the domain by more than the inversion tolerance (noisy
// estimates can; exact phases never do).
bool project_phases(PhaseTriple& phases, const ArrayGeometry& geom);

// Unit-stride Vandermonde steering vector [1, e^{jw}, ..., e^{j(m-1)w}].
VecC steering_ula(double omega, int m);

// URA transmit steering vector a_y kron a_x; the x index varies fastest,
// flat element (ly * Mx + lx).
VecC steering_ura(double omega_x, double omega_y, int mx, int my);

// Receive / transmit steering matrices for a path set, Mr-by-K and Mt-by-K.
MatC steering_matrix_rx(const PathParams& paths, const ArrayGeometry& geom);
MatC steering_matrix_tx(const PathParams& paths, const ArrayGeometry& geom);

// Factor matrices of the transmit steering along each array axis,
// Mx-by-K and My-by-K.
MatC steering_matrix_tx_x(const PathParams& paths, const ArrayGeometry& geom);
MatC steering_matrix_tx_y(const PathParams& paths, const ArrayGeometry& geom);

} // namespace ddpchan
