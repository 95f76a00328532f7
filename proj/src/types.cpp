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

#include <ddpchan/types.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace ddpchan
{

void ArrayGeometry::validate() const
{
    if (mx < 1)
        throw std::invalid_argument("ArrayGeometry: mx must be >= 1, got " + std::to_string(mx));
    if (my < 1)
        throw std::invalid_argument("ArrayGeometry: my must be >= 1, got " + std::to_string(my));
    if (mr < 1)
        throw std::invalid_argument("ArrayGeometry: mr must be >= 1, got " + std::to_string(mr));
    if (!(dx > 0.0))
        throw std::invalid_argument("ArrayGeometry: dx must be positive");
    if (!(dy > 0.0))
        throw std::invalid_argument("ArrayGeometry: dy must be positive");
    if (!(dr > 0.0))
        throw std::invalid_argument("ArrayGeometry: dr must be positive");
    if (!(wavelength > 0.0))
        throw std::invalid_argument("ArrayGeometry: wavelength must be positive");
}

void PathParams::validate() const
{
    const int k = num_paths();
    if (k < 1)
        throw std::invalid_argument("PathParams: at least one path required");
    if (vartheta.size() != k || phi.size() != k)
        throw std::invalid_argument("PathParams: angle vectors disagree on the path count");
    if (pathloss.rows() != 4 || pathloss.cols() != k)
        throw std::invalid_argument("PathParams: pathloss must be 4 x num_paths");
    const double half_pi = M_PI / 2.0;
    for (int j = 0; j < k; ++j)
    {
        if (!(std::abs(theta(j)) <= half_pi))
            throw std::invalid_argument("PathParams: theta out of [-pi/2, pi/2]");
        if (!(std::abs(vartheta(j)) <= half_pi))
            throw std::invalid_argument("PathParams: vartheta out of [-pi/2, pi/2]");
        if (!(phi(j) >= 0.0 && phi(j) <= half_pi))
            throw std::invalid_argument("PathParams: phi out of [0, pi/2]");
    }
    if (!(kappa >= 0.0))
        throw std::invalid_argument("PathParams: kappa must be nonnegative");
}

MatC ChannelMatrix::block(int p, int q) const
{
    if (p < 0 || p > 1 || q < 0 || q > 1)
        throw std::invalid_argument("ChannelMatrix::block: polarization indices must be 0 or 1");
    if (h.rows() != 2 * mr || h.cols() != 2 * mt)
        throw std::invalid_argument("ChannelMatrix::block: matrix does not match mr/mt");
    return h.block(p * mr, q * mt, mr, mt);
}

} // namespace ddpchan
