// Copyright 2026 The dpbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPBOUNDS_DPBOUNDS_HPP_
#define DPBOUNDS_DPBOUNDS_HPP_

#include "dpbounds/bounds.hpp"
#include "dpbounds/dataset.hpp"
#include "dpbounds/divergence.hpp"
#include "dpbounds/emst.hpp"
#include "dpbounds/error.hpp"
#include "dpbounds/experiments.hpp"
#include "dpbounds/featsel.hpp"
#include "dpbounds/oracle.hpp"
#include "dpbounds/quadrature.hpp"
#include "dpbounds/report.hpp"
#include "dpbounds/rng.hpp"

#endif  // DPBOUNDS_DPBOUNDS_HPP_
