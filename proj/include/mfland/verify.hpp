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

#include <cstdint>
#include <string>
#include <vector>

#include "mfland/core.hpp"

namespace mfland {

/// One property of the suite: the worst observed value of its metric and the
/// limit it must not exceed.
struct CheckResult {
  std::string name;
  double worst = 0.0;
  double limit = 0.0;
  int cases = 0;
  std::string note;

  /// A check with no applicable cases passes vacuously.
  bool passed() const { return worst <= limit; }
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  /// Random (non-critical) points for the derivative and orbit identities.
  int random_points = 8;
  int fd_trials = 16;
  /// Condition-number cap for random group elements.
  double max_cond = 100.0;
  /// Condition-number cap for the canonical round trip.
  double round_trip_cond = 1e3;
  /// Largest k tried; selections beyond max_selections per k are sampled.
  int max_k = 4;
  int max_selections = 64;
  bool include_flow = true;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};

/// Runs the full property suite on X: derivative identities, orbit
/// identities, closed-form spectra against the dense oracle, inertia and
/// bound transport, canonical recovery, M0 machinery and flow conservation.
VerifyReport run_property_suite(const DataMatrixSVD& X,
                                const VerifyOptions& options = {});

}  // namespace mfland
