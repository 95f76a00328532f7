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

#include <cstdint>
#include <exception>

namespace ddpchan
{

// Execution mode for the data-parallel loops (Monte-Carlo trials, ALS
// restarts, per-path searches). The serial path is the reference
// implementation the OpenMP kernels are validated against: every loop body
// is seeded by index, so both modes must produce identical results.
enum class Exec
{
    serial,
    openmp
};

bool openmp_compiled();
int max_threads();

template <typename F>
void parallel_for(Exec mode, std::int64_t n, F&& fn)
{
#ifdef DDPCHAN_HAVE_OPENMP
    if (mode == Exec::openmp)
    {
        std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < n; ++i)
        {
            try
            {
                fn(i);
            }
            catch (...)
            {
#pragma omp critical(ddpchan_parallel_for_error)
                if (!first_error)
                    first_error = std::current_exception();
            }
        }
        if (first_error)
            std::rethrow_exception(first_error);
        return;
    }
#else
    (void)mode;
#endif
    for (std::int64_t i = 0; i < n; ++i)
        fn(i);
}

} // namespace ddpchan
