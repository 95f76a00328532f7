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

// Columnwise Khatri-Rao product: column k is a_k kron b_k, so the row
// index runs as i_a * rows(b) + i_b with the first factor varying slower.
MatC khatri_rao(const MatC& a, const MatC& b);

// Column-stacking vectorization.
VecC vec(const MatC& m);

// Moore-Penrose pseudoinverse via SVD. Singular values below
// tol * max_sv are truncated; tol <= 0 selects an Eigen-style default.
MatC pinv(const MatC& m, double tol = -1.0);

} // namespace ddpchan
