//  Copyright 2026 The opsched Authors
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#ifndef OPSCHED_OPSCHED_HPP
#define OPSCHED_OPSCHED_HPP

#include "opsched/control.hpp"
#include "opsched/io.hpp"
#include "opsched/loop.hpp"
#include "opsched/metrics.hpp"
#include "opsched/planner.hpp"
#include "opsched/queueing.hpp"
#include "opsched/simengine.hpp"
#include "opsched/stats.hpp"
#include "opsched/topology.hpp"

namespace opsched {

inline constexpr const char* kVersion = "0.3.0";

}  // namespace opsched

#endif  // OPSCHED_OPSCHED_HPP
