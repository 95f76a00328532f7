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

#include <ddpchan/ddpchan.hpp>

#include <algorithm>
#include <vector>

namespace ddpchan::test
{

inline MatC random_complex(int rows, int cols, Rng& rng)
{
    MatC m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
            m(r, c) = rng.cgaussian();
    return m;
}

inline VecR random_phases(int k, double lo, double hi, Rng& rng)
{
    VecR w(k);
    for (int j = 0; j < k; ++j)
        w(j) = rng.uniform(lo, hi);
    return w;
}

// Vandermonde steering matrix for a phase vector.
inline MatC vandermonde(const VecR& omega, int m)
{
    MatC a(m, omega.size());
    for (Eigen::Index j = 0; j < omega.size(); ++j)
        a.col(j) = steering_ula(omega(j), m);
    return a;
}

inline double max_abs_diff(const MatC& a, const MatC& b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

// Angle set distance after sorting, for permutation-free comparisons.
inline double sorted_diff(VecR a, VecR b)
{
    std::sort(a.data(), a.data() + a.size());
    std::sort(b.data(), b.data() + b.size());
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace ddpchan::test
