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

#include <stdexcept>
#include <string>

namespace ddpchan
{

// A phase triple cannot be mapped back to physical angles: an asin argument
// exceeds 1 by more than the clamping tolerance.
class inconsistent_phase_error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// S*S^H is rank deficient, so the linear LS channel estimate does not exist.
class singular_pilot_error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// The requested number of paths exceeds what the algorithm can identify.
class infeasible_rank_error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// A factor column is numerically zero, or two estimated paths coincide.
class degenerate_path_error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

} // namespace ddpchan
