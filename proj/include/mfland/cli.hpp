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
#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

namespace mfland {

inline constexpr int kSchemaVersion = 1;

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitInputError = 2;

/// Everything a CLI invocation needs. Defaults match the command-line
/// defaults.
struct RunConfig {
  /// spectrum | classify | orbit | flow | verify
  std::string command;
  std::string x_path;
  int k = 1;
  /// Comma-separated 1-based indices; absent selects the zero family.
  std::optional<std::string> select;
  std::string c0_path;
  /// Scale a: A = a I for `orbit`, (a W_c, S_c / a) for `spectrum` with q = k.
  double scale = 1.0;
  /// CSV file holding A for `orbit`; overrides scale.
  std::string group_path;
  /// Use the balanced point of the selection.
  bool balanced = false;
  std::uint64_t seed = 0;
  double rank_tol = 1e-10;
  double crit_tol = 1e-8;
  double inertia_tol = 1e-8;
  double grad_tol = 1e-9;
  double t_max = 1e4;
  /// Flow initialization: balanced | gaussian | file.
  std::string init = "balanced";
  double init_scale = 1.0;
  std::string w0_path;
  std::string s0_path;
  /// json | csv
  std::string format = "json";
  /// Empty writes to the output stream given to run().
  std::string out_path;
};

nlohmann::ordered_json to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::ordered_json& j);

/// Serializes with every floating-point number printed to 17 significant
/// digits so reports are byte-stable across runs.
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

/// Executes a command. Reports go to `out` (or to config.out_path), messages
/// to `err`. Returns kExitSuccess, kExitVerificationFailure or
/// kExitInputError.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace mfland
