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

#include <ddpchan/bounds.hpp>

#include <ddpchan/ctd.hpp>
#include <ddpchan/errors.hpp>

#include <algorithm>
#include <stdexcept>

namespace ddpchan
{

int kmax_kruskal(int mr, int mx, int my)
{
    if (mr < 1 || mx < 1 || my < 1)
        throw std::invalid_argument("kmax_kruskal: array dimensions must be >= 1");
    // The left side grows by at most 4 per unit K while the right side
    // grows by 2, and the condition fails for K past the dimensions, so a
    // bounded scan finds the largest feasible K.
    int best = 0;
    const int k_cap = mr + mx + my + 4;
    for (int k = 1; k <= k_cap; ++k)
    {
        const int lhs =
            std::min(mr, k) + std::min(mx, k) + std::min(my, k) + std::min(4, k);
        if (lhs >= 2 * k + 3)
            best = k;
    }
    return best;
}

int kmax_imdf(int mr, int mx, int my)
{
    if (mr < 1 || mx < 1 || my < 1)
        throw std::invalid_argument("kmax_imdf: array dimensions must be >= 1");
    int best = 0;
    for (int pr = 1; pr <= mr; ++pr)
        for (int px = 1; px <= mx; ++px)
            for (int py = 1; py <= my; ++py)
            {
                const int qr = mr + 1 - pr;
                const int qx = mx + 1 - px;
                const int qy = my + 1 - py;
                const int rank_cap = std::max({(pr - 1) * px * py, pr * (px - 1) * py,
                                               pr * px * (py - 1)});
                const int f = std::min(rank_cap, 8 * qr * qx * qy);
                best = std::max(best, f);
            }
    return best;
}

int kmax_ctd(int mr, int n)
{
    try
    {
        return choose_pr(mr, n).kmax;
    }
    catch (const infeasible_rank_error&)
    {
        return 0;
    }
}

} // namespace ddpchan
