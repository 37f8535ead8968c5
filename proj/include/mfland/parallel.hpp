// Copyright 2026 The mfland Authors. All Rights Reserved.
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


#pragma once

namespace mfland {

/// Environment variable capping the OpenMP thread count.
inline constexpr const char* kThreadsEnv = "MFLAND_THREADS";

/// Applies MFLAND_THREADS (a positive integer) as the OpenMP thread cap and
/// returns the number of threads parallel kernels will use. Unset or invalid
/// values leave the OpenMP default in place.
int apply_thread_limit_from_env();

/// Threads available to the parallel kernels.
int max_threads();

/// Sets the cap directly (values < 1 are ignored).
void set_max_threads(int threads);

}  // namespace mfland
