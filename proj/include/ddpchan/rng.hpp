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

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace ddpchan
{

// Counter-based seed derivation (splitmix64 finalizer). Used to give every
// Monte-Carlo trial, ALS restart and path search its own stream so that
// parallel and serial execution draw identical numbers.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// Deterministic random stream. All distributions are synthesized from raw
// mt19937_64 output (whose sequence is fixed by the standard), so results do
// not depend on the standard library's distribution implementations.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // Uniform on [0, 1) with 53 random bits.
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi)
    {
        return lo + (hi - lo) * uniform();
    }

    // Standard normal via Box-Muller; the paired draw is cached.
    double gaussian();

    // Circularly symmetric complex normal with unit variance,
    // i.e. real and imaginary parts are independent N(0, 1/2).
    std::complex<double> cgaussian()
    {
        return {gaussian() * M_SQRT1_2, gaussian() * M_SQRT1_2};
    }

    // Independent stream derived from the construction seed and counters.
    // Does not consume state.
    Rng child(std::uint64_t a, std::uint64_t b = 0) const
    {
        return Rng(mix_seed(seed_, a, b));
    }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace ddpchan
