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

#include <ddpchan/linalg.hpp>

#include <Eigen/SVD>

#include <limits>
#include <stdexcept>

namespace ddpchan
{

MatC khatri_rao(const MatC& a, const MatC& b)
{
    if (a.cols() != b.cols())
        throw std::invalid_argument("khatri_rao: column counts differ");
    const Eigen::Index ra = a.rows();
    const Eigen::Index rb = b.rows();
    MatC out(ra * rb, a.cols());
    for (Eigen::Index k = 0; k < a.cols(); ++k)
        for (Eigen::Index i = 0; i < ra; ++i)
            out.col(k).segment(i * rb, rb) = a(i, k) * b.col(k);
    return out;
}

VecC vec(const MatC& m)
{
    return Eigen::Map<const VecC>(m.data(), m.size());
}

MatC pinv(const MatC& m, double tol)
{
    Eigen::JacobiSVD<MatC> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VecR& sv = svd.singularValues();
    if (sv.size() == 0)
        return MatC::Zero(m.cols(), m.rows());
    double threshold = tol;
    if (!(threshold > 0.0))
        threshold = std::numeric_limits<double>::epsilon() *
                    static_cast<double>(std::max(m.rows(), m.cols()));
    const double cutoff = threshold * sv(0);
    VecR inv_sv = VecR::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff)
            inv_sv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint();
}

} // namespace ddpchan
