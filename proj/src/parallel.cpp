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


#include "mfland/parallel.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace mfland {

int apply_thread_limit_from_env() {
  if (const char* value = std::getenv(kThreadsEnv)) {
    char* end = nullptr;
    const long n = std::strtol(value, &end, 10);
    if (end != value && *end == '\0' && n > 0) {
      set_max_threads(static_cast<int>(n));
    }
  }
  return max_threads();
}

int max_threads() { return omp_get_max_threads(); }

void set_max_threads(int threads) {
  if (threads >= 1) omp_set_num_threads(threads);
}

}  // namespace mfland
