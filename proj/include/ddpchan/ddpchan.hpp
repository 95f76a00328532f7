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

#include <ddpchan/bench.hpp>
#include <ddpchan/bounds.hpp>
#include <ddpchan/channel.hpp>
#include <ddpchan/cpd.hpp>
#include <ddpchan/ctd.hpp>
#include <ddpchan/errors.hpp>
#include <ddpchan/linalg.hpp>
#include <ddpchan/manifolds.hpp>
#include <ddpchan/parallel.hpp>
#include <ddpchan/rng.hpp>
#include <ddpchan/types.hpp>
