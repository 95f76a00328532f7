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

#include <ddpchan/channel.hpp>

#include <ddpchan/errors.hpp>
#include <ddpchan/manifolds.hpp>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ddpchan
{

PathParams sample_paths(int k, double kappa_db, Rng& rng)
{
    if (k < 1)
        throw std::invalid_argument("sample_paths: need at least one path");
    PathParams p;
    p.kappa = std::pow(10.0, kappa_db / 10.0);
    p.theta.resize(k);
    p.vartheta.resize(k);
    p.phi.resize(k);
    for (int j = 0; j < k; ++j)
    {
        p.theta(j) = rng.uniform(-M_PI / 3.0, M_PI / 3.0);
        p.vartheta(j) = rng.uniform(-M_PI / 3.0, M_PI / 3.0);
        p.phi(j) = rng.uniform(0.0, M_PI / 2.0);
    }
    // Unit-modulus polarimetric entries; the Rician power split is baked
    // into the columns so the channel is a pure function of (angles, B).
    p.pathloss.resize(4, k);
    const double los = std::sqrt(p.kappa / (p.kappa + 1.0));
    const double nlos = k > 1 ? std::sqrt(1.0 / ((p.kappa + 1.0) * (k - 1))) : 0.0;
    for (int j = 0; j < k; ++j)
    {
        const double w = j == 0 ? los : nlos;
        for (int row = 0; row < 4; ++row)
            p.pathloss(row, j) = w * std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
    }
    return p;
}

ChannelMatrix synthesize_channel(const PathParams& paths, const ArrayGeometry& geom)
{
    geom.validate();
    paths.validate();
    const int mr = geom.mr;
    const int mt = geom.mt();
    const MatC ar = steering_matrix_rx(paths, geom);
    const MatC at = steering_matrix_tx(paths, geom);
    ChannelMatrix ch;
    ch.mr = mr;
    ch.mt = mt;
    ch.h.resize(2 * mr, 2 * mt);
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
        {
            const VecC beta = paths.pathloss.row(2 * p + q).transpose();
            ch.h.block(p * mr, q * mt, mr, mt) = ar * beta.asDiagonal() * at.adjoint();
        }
    return ch;
}

ChannelMatrix synthesize_from_phases(const std::vector<PhaseTriple>& phases, const MatC& b,
                                     const ArrayGeometry& geom)
{
    geom.validate();
    const int k = static_cast<int>(phases.size());
    if (k < 1)
        throw std::invalid_argument("synthesize_from_phases: need at least one path");
    if (b.rows() != 4 || b.cols() != k)
        throw std::invalid_argument("synthesize_from_phases: b must be 4 x num_paths");
    const int mr = geom.mr;
    const int mt = geom.mt();
    MatC ar(mr, k);
    MatC at(mt, k);
    for (int j = 0; j < k; ++j)
    {
        ar.col(j) = steering_ula(phases[j].omega_r, mr);
        at.col(j) = steering_ura(phases[j].omega_x, phases[j].omega_y, geom.mx, geom.my);
    }
    ChannelMatrix ch;
    ch.mr = mr;
    ch.mt = mt;
    ch.h.resize(2 * mr, 2 * mt);
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
        {
            const VecC beta = b.row(2 * p + q).transpose();
            ch.h.block(p * mr, q * mt, mr, mt) = ar * beta.asDiagonal() * at.adjoint();
        }
    return ch;
}

PilotMatrix make_orthogonal_pilot(int mt, int n, Rng& rng)
{
    if (mt < 1)
        throw std::invalid_argument("make_orthogonal_pilot: mt must be >= 1");
    if (n < 2 * mt)
        throw std::invalid_argument("make_orthogonal_pilot: need n >= 2*mt, got n = " +
                                    std::to_string(n));
    // Leading rows of the n-point DFT are orthonormal; a random unit-phase
    // column scaling keeps s * s^H = I while varying with the seed.
    PilotMatrix pilot;
    pilot.kind = PilotKind::row_orthogonal;
    pilot.s.resize(2 * mt, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int c = 0; c < n; ++c)
    {
        const cd col_phase = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
        for (int r = 0; r < 2 * mt; ++r)
            pilot.s(r, c) =
                scale * col_phase *
                std::polar(1.0, -2.0 * M_PI * static_cast<double>(r) * c / n);
    }
    return pilot;
}

PilotMatrix make_frugal_pilot(int mt, int n, Rng& rng)
{
    if (mt < 1)
        throw std::invalid_argument("make_frugal_pilot: mt must be >= 1");
    if (n % 2 != 0)
        throw std::invalid_argument("make_frugal_pilot: n must be even, got " +
                                    std::to_string(n));
    if (n < 4)
        throw std::invalid_argument("make_frugal_pilot: need n >= 4, got " + std::to_string(n));
    if (n >= 2 * mt)
        throw std::invalid_argument("make_frugal_pilot: need n < 2*mt for a compressed pilot");
    PilotMatrix pilot;
    pilot.kind = PilotKind::frugal;
    pilot.q.resize(mt, n / 2);
    for (int c = 0; c < n / 2; ++c)
        for (int r = 0; r < mt; ++r)
            pilot.q(r, c) = rng.gaussian();
    pilot.s = MatC::Zero(2 * mt, n);
    pilot.s.topLeftCorner(mt, n / 2) = pilot.q.cast<cd>();
    pilot.s.bottomRightCorner(mt, n / 2) = pilot.q.cast<cd>();
    return pilot;
}

ReceivedData transmit(const ChannelMatrix& h, const PilotMatrix& pilot,
                      std::optional<double> snr_db, Rng& rng)
{
    if (h.h.cols() != pilot.s.rows())
        throw std::invalid_argument("transmit: channel width does not match pilot height");
    ReceivedData data;
    data.x = h.h * pilot.s;
    data.snr_db = snr_db;
    if (!snr_db)
        return data;
    const double signal_power = data.x.squaredNorm();
    const double snr = std::pow(10.0, *snr_db / 10.0);
    const double sigma2 =
        signal_power / (static_cast<double>(data.x.size()) * snr);
    data.noise_variance = sigma2;
    const double sigma = std::sqrt(sigma2);
    for (Eigen::Index c = 0; c < data.x.cols(); ++c)
        for (Eigen::Index r = 0; r < data.x.rows(); ++r)
            data.x(r, c) += sigma * rng.cgaussian();
    return data;
}

ChannelMatrix ls_channel_estimate(const ReceivedData& data, const PilotMatrix& pilot,
                                  int mr, int mt)
{
    const MatC& s = pilot.s;
    const Eigen::Index n = s.cols();
    if (data.x.rows() != 2 * mr || data.x.cols() != n)
        throw std::invalid_argument("ls_channel_estimate: observation size mismatch");
    if (s.rows() != 2 * mt)
        throw std::invalid_argument("ls_channel_estimate: pilot size mismatch");
    if (n < 2 * mt)
        throw singular_pilot_error("ls_channel_estimate: pilot length " + std::to_string(n) +
                                   " is shorter than 2*mt = " + std::to_string(2 * mt));
    Eigen::JacobiSVD<MatC> svd(s);
    const VecR& sv = svd.singularValues();
    const double cutoff = std::numeric_limits<double>::epsilon() *
                          static_cast<double>(std::max(s.rows(), s.cols())) * sv(0);
    if (sv(sv.size() - 1) <= cutoff)
        throw singular_pilot_error("ls_channel_estimate: pilot Gram matrix is rank deficient");
    const MatC gram = s * s.adjoint();
    ChannelMatrix est;
    est.mr = mr;
    est.mt = mt;
    est.h = gram.ldlt().solve((data.x * s.adjoint()).adjoint()).adjoint();
    return est;
}

} // namespace ddpchan
