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


#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mfland/cli.hpp"

namespace {

void add_common(CLI::App* sub, mfland::RunConfig* c) {
  sub->add_option("--x", c->x_path, "CSV file holding X (row-major, no header)")
      ->required();
  sub->add_option("--format", c->format, "Report format: json or csv")
      ->capture_default_str();
  sub->add_option("--out", c->out_path, "Write the report to this file");
  sub->add_option("--seed", c->seed, "Random seed")->capture_default_str();
  sub->add_option("--rank-tol", c->rank_tol,
                  "Relative tolerance for the rank of X")
      ->capture_default_str();
}

void add_point(CLI::App* sub, mfland::RunConfig* c) {
  sub->add_option("--k", c->k, "Inner dimension")->capture_default_str();
  sub->add_option("--select", c->select,
                  "Comma-separated 1-based singular value indices");
  sub->add_option("--c0", c->c0_path, "CSV file holding the null-space block");
  sub->add_flag("--balanced", c->balanced, "Use the balanced point");
  sub->add_option("--inertia-tol", c->inertia_tol,
                  "Relative zero threshold for inertia")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical points and Hessian spectra of low-rank factorization"};
  app.require_subcommand(1);
  bool print_config = false;
  app.add_flag("--print-config", print_config,
               "Print the parsed configuration as JSON and exit");

  mfland::RunConfig config;

  auto* spectrum = app.add_subcommand("spectrum", "Hessian spectrum report");
  add_common(spectrum, &config);
  add_point(spectrum, &config);
  spectrum->add_option("--scale", config.scale,
                       "Scale a of the point (a W, S / a), q = k only")
      ->capture_default_str();

  auto* classify = app.add_subcommand("classify", "Classify a canonical point");
  add_common(classify, &config);
  add_point(classify, &config);
  classify->add_option("--crit-tol", config.crit_tol)->capture_default_str();

  auto* orbit = app.add_subcommand("orbit", "Transport a point along its orbit");
  add_common(orbit, &config);
  add_point(orbit, &config);
  orbit->add_option("--scale", config.scale, "Use A = a I")
      ->capture_default_str();
  orbit->add_option("--group", config.group_path, "CSV file holding A");

  auto* flow = app.add_subcommand("flow", "Integrate the gradient flow");
  add_common(flow, &config);
  flow->add_option("--k", config.k, "Inner dimension")->capture_default_str();
  flow->add_option("--init", config.init, "balanced, gaussian or file")
      ->capture_default_str();
  flow->add_option("--init-scale", config.init_scale)->capture_default_str();
  flow->add_option("--w0", config.w0_path, "CSV file holding W(0)");
  flow->add_option("--s0", config.s0_path, "CSV file holding S(0)");
  flow->add_option("--grad-tol", config.grad_tol)->capture_default_str();
  flow->add_option("--t-max", config.t_max)->capture_default_str();
  flow->add_option("--crit-tol", config.crit_tol)->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run the property suite");
  add_common(verify, &config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return mfland::kExitInputError;
  }

  config.command = app.get_subcommands().front()->get_name();
  if (print_config) {
    std::cout << mfland::dump_json(mfland::to_json(config)) << '\n';
    return mfland::kExitSuccess;
  }
  return mfland::run(config, std::cout, std::cerr);
}
