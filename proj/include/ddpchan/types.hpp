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

#include <Eigen/Dense>
#include <complex>
#include <optional>

namespace ddpchan
{

using cd = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;

// Transmitter is an Mx-by-My uniform rectangular array, receiver an
// Mr-element uniform linear array. Element spacings and the carrier
// wavelength share the same length unit.
struct ArrayGeometry
{
    int mx = 0;
    int my = 0;
    int mr = 0;
    double dx = 0.5;
    double dy = 0.5;
    double dr = 0.5;
    double wavelength = 1.0;

    int mt() const { return mx * my; }
    void validate() const;
};

// Spatial frequencies of one path: receive phase and the two transmit
// phases along the array axes.
struct PhaseTriple
{
    double omega_r = 0.0;
    double omega_x = 0.0;
    double omega_y = 0.0;
};

// Physical angles of one path: DOA theta, DOD azimuth vartheta and
// DOD elevation phi.
struct PathAngles
{
    double theta = 0.0;
    double vartheta = 0.0;
    double phi = 0.0;
};

// Full multipath description: per-path angles plus the 4-by-K matrix of
// complex polarimetric path losses, rows ordered (VV, VH, HV, HH) with the
// receive polarization varying slower.
struct PathParams
{
    VecR theta;
    VecR vartheta;
    VecR phi;
    MatC pathloss;
    double kappa = 0.0;

    int num_paths() const { return static_cast<int>(theta.size()); }
    void validate() const;
};

// Dual-polarized channel, 2Mr-by-2Mt. Row blocks are (V, H) receive
// polarization, column blocks are (V, H) transmit polarization.
struct ChannelMatrix
{
    MatC h;
    int mr = 0;
    int mt = 0;

    // p, q in {0, 1}: 0 = vertical, 1 = horizontal.
    MatC block(int p, int q) const;
};

enum class PilotKind
{
    row_orthogonal,
    frugal
};

// Pilot of N symbol vectors, 2Mt-by-N. For the frugal kind, s is
// blockdiag(q, q) with a real Gaussian q of size Mt-by-N/2.
struct PilotMatrix
{
    PilotKind kind = PilotKind::row_orthogonal;
    MatC s;
    MatR q;

    int length() const { return static_cast<int>(s.cols()); }
};

// Receiver observation, 2Mr-by-N. snr_db is absent for noiseless capture;
// noise_variance records the per-entry complex noise power actually added.
struct ReceivedData
{
    MatC x;
    std::optional<double> snr_db;
    double noise_variance = 0.0;
};

} // namespace ddpchan
