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

namespace ddpchan
{

// Largest path count K for which the Kruskal-style uniqueness condition
//   min(mr,K) + min(mx,K) + min(my,K) + min(4,K) >= 2K + 3
// holds for generic parameters. Returns 0 when no K >= 1 qualifies.
int kmax_kruskal(int mr, int mx, int my);

// Largest K certified by multi-dimensional smoothing: the best over all
// subarray splits (pr, px, py) of
//   min( max((pr-1)px py, pr(px-1)py, pr px(py-1)), 8 qr qx qy )
// with qi = mi + 1 - pi.
int kmax_imdf(int mr, int mx, int my);

// Largest K the compressed receive-smoothing pipeline can resolve for an
// mr-element receive array and pilot length n; 0 when smoothing is
// infeasible.
int kmax_ctd(int mr, int n);

} // namespace ddpchan
