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

#include "mfland/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "mfland/calculus.hpp"
#include "mfland/canonical.hpp"
#include "mfland/core.hpp"
#include "mfland/flow.hpp"
#include "mfland/oracle.hpp"
#include "mfland/orbit.hpp"
#include "mfland/parallel.hpp"
#include "mfland/spectrum.hpp"
#include "mfland/verify.hpp"

namespace mfland {

using json = nlohmann::ordered_json;

namespace {

void dump_value(const json& j, int indent, int depth, std::string* out) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out->push_back('\n');
    out->append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out->append("{}");
        return;
      }
      out->push_back('{');
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out->push_back(',');
        first = false;
        newline(depth + 1);
        out->append(json(it.key()).dump());
        out->append(indent < 0 ? ":" : ": ");
        dump_value(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out->push_back('}');
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out->append("[]");
        return;
      }
      out->push_back('[');
      bool first = true;
      for (const json& v : j) {
        if (!first) out->push_back(',');
        first = false;
        newline(depth + 1);
        dump_value(v, indent, depth + 1, out);
      }
      newline(depth);
      out->push_back(']');
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out->append("null");
        return;
      }
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out->append(buf);
      return;
    }
    default:
      out->append(j.dump());
  }
}

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json vector_json(const VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json inertia_json(const Inertia& in) {
  return json::array({in.positive, in.negative, in.zero});
}

json selection_json(const Selection& sel) {
  json arr = json::array();
  for (int i : sel.indices()) arr.push_back(i + 1);
  return arr;
}

json header(const RunConfig& config, const DataMatrixSVD& X) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = config.command;
  j["m"] = X.m();
  j["n"] = X.n();
  j["rank"] = X.rank();
  j["transposed"] = X.transposed();
  return j;
}

DataMatrixSVD load_x(const RunConfig& config) {
  if (config.x_path.empty()) throw InvalidInput("--x is required");
  return load_data_matrix(read_csv_matrix(config.x_path), config.rank_tol);
}

bool has_selection(const RunConfig& config) {
  return config.select.has_value() && !config.select->empty();
}

Selection selection_of(const RunConfig& config) {
  return has_selection(config) ? Selection::parse(*config.select)
                               : Selection();
}

/// The C0 block in internal orientation; empty when no file was given.
MatrixXd null_block(const RunConfig& config) {
  return config.c0_path.empty() ? MatrixXd() : read_csv_matrix(config.c0_path);
}

CanonicalPoint canonical_of(const RunConfig& config, const DataMatrixSVD& X) {
  return build_canonical(X, selection_of(config), config.k,
                         null_block(config));
}

/// Oracle minimum eigenvalue, or nullopt when the dense Hessian is too big.
std::optional<double> oracle_lambda_min(const DataMatrixSVD& X,
                                        const FactorPair& p) {
  try {
    return numeric_spectrum(dense_hessian(X, p)).values(0);
  } catch (const TooLarge&) {
    return std::nullopt;
  }
}

std::optional<double> closed_form_or_null(const PointDescriptor& d) {
  try {
    return lambda_min_closed_form(d);
  } catch (const NotASaddle&) {
    return std::nullopt;
  }
}

struct PointChoice {
  std::string family;
  SpectrumReport report;
  std::optional<double> closed_form;
};

PointChoice spectrum_point(const RunConfig& config, const DataMatrixSVD& X) {
  const Selection sel = selection_of(config);
  if (config.balanced) {
    if (sel.q() == 0) throw InvalidSelection("--balanced needs --select");
    return {"balanced", spectrum_balanced(X, sel, config.k),
            closed_form_or_null(describe_balanced(X, sel, config.k))};
  }
  if (sel.q() == 0) {
    MatrixXd C0 = null_block(config);
    if (C0.size() == 0) C0 = MatrixXd::Zero(X.n() - X.rank(), config.k);
    return {"zero", spectrum_zero_family(X, C0, config.k),
            closed_form_or_null(describe_zero_family(X, C0, config.k))};
  }
  const CanonicalPoint cp = canonical_of(config, X);
  if (config.scale != 1.0) {
    if (cp.q() != cp.k) {
      throw InvalidInput("--scale applies to spectra only when q = k");
    }
    return {"canonical", spectrum_full_rank_scaled(X, sel, config.scale),
            closed_form_or_null(describe_canonical(cp, config.scale))};
  }
  return {"canonical", spectrum_canonical(cp),
          closed_form_or_null(describe_canonical(cp))};
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int cmd_spectrum(const RunConfig& config, std::ostream& out) {
  const DataMatrixSVD X = load_x(config);
  const PointChoice choice = spectrum_point(config, X);
  const SpectrumReport& rep = choice.report;

  std::vector<std::size_t> order(rep.eigpairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return rep.eigpairs[a].value < rep.eigpairs[b].value;
  });

  if (config.format == "csv") {
    write_csv_row(out, {"value", "provenance", "coupling"});
    for (std::size_t idx : order) {
      const EigPair& e = rep.eigpairs[idx];
      write_csv_row(out, {num(e.value), e.provenance.to_string(),
                          e.coupling ? num(*e.coupling) : std::string()});
    }
    return kExitSuccess;
  }

  json j = header(config, X);
  j["family"] = choice.family;
  j["k"] = config.k;
  j["selection"] = selection_json(selection_of(config));
  j["scale"] = config.scale;
  json values = json::array();
  json prov = json::array();
  for (std::size_t idx : order) {
    const EigPair& e = rep.eigpairs[idx];
    values.push_back(e.value);
    json p;
    p["family"] = e.provenance.family;
    p["i"] = e.provenance.i < 0 ? json(nullptr) : json(e.provenance.i + 1);
    p["j"] = e.provenance.j < 0 ? json(nullptr) : json(e.provenance.j + 1);
    p["branch"] = e.provenance.branch;
    p["coupling"] = optional_number(e.coupling);
    prov.push_back(p);
  }
  j["eigenvalues"] = values;
  j["inertia"] = inertia_json(rep.inertia);
  j["lambda_min"] = rep.lambda_min;
  j["lambda_min_closed_form"] = optional_number(choice.closed_form);
  j["J"] = evaluate_J(X, rep.point);
  const std::optional<double> oracle = oracle_lambda_min(X, rep.point);
  j["oracle_lambda_min"] = optional_number(oracle);
  j["provenance"] = prov;
  out << dump_json(j) << '\n';
  return kExitSuccess;
}

int cmd_classify(const RunConfig& config, std::ostream& out) {
  const DataMatrixSVD X = load_x(config);
  const CanonicalPoint cp = canonical_of(config, X);
  const ClassificationResult res = classify_canonical(cp);
  const FactorPair p = cp.materialize();
  const std::optional<double> oracle = oracle_lambda_min(X, p);

  if (config.format == "csv") {
    write_csv_row(out, {"kind", "maximal", "p", "lambda_min_closed_form",
                        "oracle_lambda_min", "J"});
    write_csv_row(out, {to_string(res.kind),
                        is_maximal(X, cp.selection) ? "true" : "false",
                        res.p ? std::to_string(*res.p + 1) : std::string(),
                        res.lambda_min_closed_form
                            ? num(*res.lambda_min_closed_form)
                            : std::string(),
                        oracle ? num(*oracle) : std::string(),
                        num(cp.J_value())});
    return kExitSuccess;
  }

  json j = header(config, X);
  j["k"] = config.k;
  j["selection"] = selection_json(cp.selection);
  j["kind"] = to_string(res.kind);
  j["maximal"] = is_maximal(X, cp.selection);
  j["p"] = res.p ? json(*res.p + 1) : json(nullptr);
  j["lambda_min_closed_form"] = optional_number(res.lambda_min_closed_form);
  j["oracle_lambda_min"] = optional_number(oracle);
  j["J"] = cp.J_value();
  out << dump_json(j) << '\n';
  return kExitSuccess;
}

int cmd_orbit(const RunConfig& config, std::ostream& out) {
  const DataMatrixSVD X = load_x(config);
  const Selection sel = selection_of(config);
  FactorPair p;
  if (config.balanced) {
    p = build_balanced(X, sel, config.k);
  } else {
    p = canonical_of(config, X).materialize();
  }
  const GroupElement g =
      config.group_path.empty()
          ? GroupElement::scalar(config.k, config.scale)
          : GroupElement(read_csv_matrix(config.group_path));
  if (g.k() != config.k) {
    throw DimensionError("group element must be k x k");
  }
  const FactorPair moved = apply_group_action(g, p);

  const NumericSpectrum at_p = numeric_spectrum(dense_hessian(X, p));
  const NumericSpectrum at_moved = numeric_spectrum(dense_hessian(X, moved));
  const double lam_p = at_p.values(0);
  const double lam_moved = at_moved.values(0);
  const bool saddle =
      lam_p < -config.inertia_tol * at_p.values.cwiseAbs().maxCoeff();
  const double bound = saddle ? transported_lambda_min_bound(lam_p, g) : 0.0;
  const Inertia in_p = inertia_from_values(at_p.values, config.inertia_tol);
  const Inertia in_moved =
      inertia_from_values(at_moved.values, config.inertia_tol);

  json j = header(config, X);
  j["k"] = config.k;
  j["selection"] = selection_json(sel);
  j["condition_number"] = g.condition_number();
  j["induced_norm"] = induced_norm(g);
  j["J"] = evaluate_J(X, p);
  j["J_transported"] = evaluate_J(X, moved);
  j["lambda_min"] = lam_p;
  j["lambda_min_transported"] = lam_moved;
  j["transported_bound"] = saddle ? json(bound) : json(nullptr);
  j["bound_holds"] = saddle ? json(lam_moved <= bound + 1e-10) : json(nullptr);
  j["inertia"] = inertia_json(in_p);
  j["inertia_transported"] = inertia_json(in_moved);
  j["inertia_preserved"] = in_p == in_moved;

  if (config.format == "csv") {
    write_csv_row(out, {"quantity", "value"});
    for (auto it = j.begin(); it != j.end(); ++it) {
      std::string v;
      dump_value(it.value(), -1, 0, &v);
      if (it.value().is_array()) v = "\"" + v + "\"";
      write_csv_row(out, {it.key(), v});
    }
    return kExitSuccess;
  }
  out << dump_json(j) << '\n';
  return kExitSuccess;
}

FactorPair flow_start(const RunConfig& config, const DataMatrixSVD& X) {
  std::mt19937_64 rng(config.seed);
  if (config.init == "balanced") {
    return random_balanced_point(X.m(), X.n(), config.k, rng,
                                 config.init_scale);
  }
  if (config.init == "gaussian") {
    return random_gaussian_point(X.m(), X.n(), config.k, rng,
                                 config.init_scale);
  }
  if (config.init == "file") {
    if (config.w0_path.empty() || config.s0_path.empty()) {
      throw InvalidInput("--init file needs --w0 and --s0");
    }
    const FactorPair user{read_csv_matrix(config.w0_path),
                          read_csv_matrix(config.s0_path)};
    const FactorPair p = to_internal(X, user);
    check_dimensions(X, p);
    return p;
  }
  throw InvalidInput("unknown --init '" + config.init + "'");
}

json diagnosis_json(const DataMatrixSVD& X, const FlowTrajectory& traj,
                    const RunConfig& config) {
  if (traj.status != FlowStatus::Converged) return nullptr;
  const LimitDiagnosis d = classify_limit(X, traj, config.crit_tol);
  json j;
  j["q"] = d.q;
  j["lambda"] = vector_json(d.lambda);
  j["maximal"] = d.maximal;
  j["kind"] = to_string(d.kind);
  j["balance_residual"] = d.balance_residual;
  j["lambda_min"] = d.lambda_min;
  return j;
}

int cmd_flow(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const DataMatrixSVD X = load_x(config);
  const FactorPair p0 = flow_start(config, X);
  const FlowTrajectory traj =
      integrate_flow(X, p0, config.grad_tol, config.t_max);
  const FlowSample& last = traj.samples.back();

  json j = header(config, X);
  j["k"] = config.k;
  j["init"] = config.init;
  j["seed"] = config.seed;
  j["status"] = to_string(traj.status);
  j["t_final"] = last.t;
  j["J_initial"] = traj.samples.front().J;
  j["J_final"] = last.J;
  j["grad_norm_final"] = last.grad_norm;
  j["max_drift"] = traj.max_drift;
  j["max_norm_gap_drift"] = traj.max_norm_gap_drift;
  j["max_J_increase"] = traj.max_J_increase;
  j["accepted_steps"] = traj.accepted_steps;
  j["rejected_steps"] = traj.rejected_steps;
  j["diagnosis"] = diagnosis_json(X, traj, config);

  if (config.format == "csv") {
    write_trajectory_csv(out, traj);
    err << dump_json(j) << '\n';
    return kExitSuccess;
  }
  out << dump_json(j) << '\n';
  return kExitSuccess;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const DataMatrixSVD X = load_x(config);
  VerifyOptions opt;
  opt.seed = config.seed;
  const VerifyReport rep = run_property_suite(X, opt);

  if (config.format == "csv") {
    write_csv_row(out, {"check", "passed", "worst", "limit", "cases"});
    for (const CheckResult& c : rep.checks) {
      write_csv_row(out, {c.name, c.passed() ? "true" : "false", num(c.worst),
                          num(c.limit), std::to_string(c.cases)});
    }
  } else {
    json j = header(config, X);
    j["seed"] = config.seed;
    j["passed"] = rep.passed();
    json checks = json::array();
    for (const CheckResult& c : rep.checks) {
      json e;
      e["name"] = c.name;
      e["passed"] = c.passed();
      e["worst"] = c.worst;
      e["limit"] = c.limit;
      e["cases"] = c.cases;
      if (!c.note.empty()) e["note"] = c.note;
      checks.push_back(e);
    }
    j["checks"] = checks;
    out << dump_json(j) << '\n';
  }
  for (const CheckResult& c : rep.checks) {
    if (!c.passed()) {
      err << "FAIL " << c.name << ": worst " << num(c.worst) << " > limit "
          << num(c.limit) << '\n';
    }
  }
  return rep.passed() ? kExitSuccess : kExitVerificationFailure;
}

void validate_config(const RunConfig& config) {
  if (config.format != "json" && config.format != "csv") {
    throw InvalidInput("--format must be json or csv");
  }
  if (config.k < 1) throw InvalidInput("--k must be at least 1");
  if (!(config.rank_tol > 0.0 && config.crit_tol > 0.0 &&
        config.inertia_tol > 0.0 && config.grad_tol > 0.0)) {
    throw InvalidInput("tolerances must be positive");
  }
}

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
  validate_config(config);
  if (config.command == "spectrum") return cmd_spectrum(config, out);
  if (config.command == "classify") return cmd_classify(config, out);
  if (config.command == "orbit") return cmd_orbit(config, out);
  if (config.command == "flow") return cmd_flow(config, out, err);
  if (config.command == "verify") return cmd_verify(config, out, err);
  throw InvalidInput("unknown command '" + config.command + "'");
}

}  // namespace

std::string dump_json(const json& j, int indent) {
  std::string out;
  dump_value(j, indent, 0, &out);
  return out;
}

json to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["x_path"] = c.x_path;
  j["k"] = c.k;
  j["select"] = c.select ? json(*c.select) : json(nullptr);
  j["c0_path"] = c.c0_path;
  j["scale"] = c.scale;
  j["group_path"] = c.group_path;
  j["balanced"] = c.balanced;
  j["seed"] = c.seed;
  j["rank_tol"] = c.rank_tol;
  j["crit_tol"] = c.crit_tol;
  j["inertia_tol"] = c.inertia_tol;
  j["grad_tol"] = c.grad_tol;
  j["t_max"] = c.t_max;
  j["init"] = c.init;
  j["init_scale"] = c.init_scale;
  j["w0_path"] = c.w0_path;
  j["s0_path"] = c.s0_path;
  j["format"] = c.format;
  j["out_path"] = c.out_path;
  return j;
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  try {
    c.command = j.value("command", c.command);
    c.x_path = j.value("x_path", c.x_path);
    c.k = j.value("k", c.k);
    if (j.contains("select") && !j.at("select").is_null()) {
      c.select = j.at("select").get<std::string>();
    }
    c.c0_path = j.value("c0_path", c.c0_path);
    c.scale = j.value("scale", c.scale);
    c.group_path = j.value("group_path", c.group_path);
    c.balanced = j.value("balanced", c.balanced);
    c.seed = j.value("seed", c.seed);
    c.rank_tol = j.value("rank_tol", c.rank_tol);
    c.crit_tol = j.value("crit_tol", c.crit_tol);
    c.inertia_tol = j.value("inertia_tol", c.inertia_tol);
    c.grad_tol = j.value("grad_tol", c.grad_tol);
    c.t_max = j.value("t_max", c.t_max);
    c.init = j.value("init", c.init);
    c.init_scale = j.value("init_scale", c.init_scale);
    c.w0_path = j.value("w0_path", c.w0_path);
    c.s0_path = j.value("s0_path", c.s0_path);
    c.format = j.value("format", c.format);
    c.out_path = j.value("out_path", c.out_path);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("bad config: ") + e.what());
  }
  return c;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  apply_thread_limit_from_env();
  try {
    if (config.out_path.empty()) return dispatch(config, out, err);
    std::ostringstream buffer;
    const int code = dispatch(config, buffer, err);
    std::ofstream file(config.out_path, std::ios::binary);
    if (!file) throw InvalidInput("cannot write " + config.out_path);
    file << buffer.str();
    return code;
  } catch (const InvalidInput& e) {
    err << "input error: " << e.what() << '\n';
  } catch (const DimensionError& e) {
    err << "dimension error: " << e.what() << '\n';
  } catch (const InvalidSelection& e) {
    err << "invalid selection: " << e.what() << '\n';
  } catch (const SingularGroupElement& e) {
    err << "singular group element: " << e.what() << '\n';
  } catch (const TooLarge& e) {
    err << "too large: " << e.what() << '\n';
  } catch (const RankAmbiguous& e) {
    err << "rank ambiguous: " << e.what() << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerificationFailure;
  }
  return kExitInputError;
}

}  // namespace mfland
