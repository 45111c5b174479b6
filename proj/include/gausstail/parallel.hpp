// Copyright 2026 The gausstail Authors
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

// Minimal fork-join helpers. Work is split into caller-defined tasks so that
// results never depend on the number of workers.

#pragma once

#include <cstddef>
#include <functional>

namespace gausstail {

// GAUSSTAIL_THREADS if set to a positive integer, else the hardware count.
std::size_t worker_count();

// Runs fn(0) .. fn(n - 1) on up to `workers` threads (0 = worker_count()).
// The first exception thrown by a task is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, std::size_t workers = 0);

}  // namespace gausstail
