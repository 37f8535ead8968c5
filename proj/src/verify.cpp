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

#include "mfland/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "mfland/calculus.hpp"
#include "mfland/canonical.hpp"
#include "mfland/flow.hpp"
#include "mfland/oracle.hpp"
#include "mfland/orbit.hpp"
#include "mfland/random.hpp"
#include "mfland/spectrum.hpp"

namespace mfland {

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed(); });
}

const CheckResult* VerifyReport::find(const std::string& name) const {
  for (const CheckResult& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

class Tracker {
 public:
  void declare(const std::string& name, double limit) {
    index_[name] = results_.size();
    results_.push_back({name, 0.0, limit, 0, ""});
  }

  void observe(const std::string& name, double value) {
    CheckResult& c = results_.at(index_.at(name));
    ++c.cases;
    if (!(value <= c.worst)) c.worst = std::isnan(value) ? INFINITY : value;
  }

  void note(const std::string& name, const std::string& text) {
    CheckResult& c = results_.at(index_.at(name));
    if (c.note.empty()) c.note = text;
  }

  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::map<std::string, std::size_t> index_;
  std::vector<CheckResult> results_;
};

double rel_diff(const TangentPair& a, const TangentPair& b) {
  return (a - b).norm() / std::max(1.0, std::max(a.norm(), b.norm()));
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

TangentPair random_tangent(int m, int n, int k, Rng& rng) {
  return {random_gaussian(m, k, rng), random_gaussian(k, n, rng)};
}

std::vector<Selection> selections_for(int m, int k, int max_count, Rng& rng) {
  std::vector<Selection> out;
  const int qmax = std::min(k, m);
  for (int mask = 0; mask < (1 << m); ++mask) {
    if (__builtin_popcount(mask) > qmax) continue;
    std::vector<int> idx;
    for (int i = 0; i < m; ++i) {
      if (mask & (1 << i)) idx.push_back(i);
    }
    out.emplace_back(std::move(idx));
  }
  if (static_cast<int>(out.size()) > max_count) {
    std::shuffle(out.begin(), out.end(), rng);
    out.resize(max_count);
  }
  return out;
}

// Derivative and orbit identities at random non-critical points.
void check_random_points(const DataMatrixSVD& X, const VerifyOptions& opt,
                         Rng& rng, Tracker& t) {
  const int m = X.m(), n = X.n();
  const int kmax = std::min(opt.max_k, m + 1);
  for (int trial = 0; trial < opt.random_points; ++trial) {
    const int k = 1 + trial % kmax;
    const FactorPair p = {random_gaussian(m, k, rng), random_gaussian(k, n, rng)};
    const TangentPair d1 = random_tangent(m, n, k, rng);
    const TangentPair d2 = random_tangent(m, n, k, rng);

    const FdReport fd = fd_validate(X, p, opt.fd_trials, rng());
    t.observe("calculus.fd_gradient", fd.worst_gradient_error);
    t.observe("calculus.fd_second_derivative", fd.worst_second_error);

    const double h12 = inner(hessian_apply(X, p, d1), d2);
    const double h21 = inner(d1, hessian_apply(X, p, d2));
    t.observe("calculus.hessian_symmetry", rel_diff(h12, h21));
    t.observe("calculus.second_derivative_consistency",
              rel_diff(second_derivative(X, p, d1),
                       inner(hessian_apply(X, p, d1), d1)));

    const TangentPair grad = gradient(X, p);
    const TangentPair tangent = orbit_tangent(p, random_gaussian(k, k, rng));
    t.observe("calculus.gradient_orbit_orthogonality",
              std::abs(inner(grad, tangent)) /
                  std::max(1.0, grad.norm() * tangent.norm()));

    const double J = evaluate_J(X, p);
    t.observe("core.J_nonnegative", J >= 0.0 ? 0.0 : -J);
    const double J_t =
        0.5 * (X.X().transpose() - p.S.transpose() * p.W.transpose())
                  .squaredNorm();
    t.observe("core.orientation", rel_diff(J, J_t));

    const GroupElement g = random_group_element(k, opt.max_cond, rng);
    const FactorPair q = apply_group_action(g, p);
    t.observe("orbit.J_invariance", rel_diff(evaluate_J(X, q), J));
    t.observe("orbit.gradient_transport",
              rel_diff(gradient(X, q),
                       apply_group_action(g.inverse_transpose(), grad)));
    const GroupElement g_inv = g.inverse();
    const TangentPair pulled = apply_group_action(g_inv, d1);
    t.observe("orbit.hessian_transport",
              rel_diff(hessian_apply(X, q, d1),
                       apply_group_action(g.inverse_transpose(),
                                          hessian_apply(X, p, pulled))));
    t.observe("orbit.second_derivative_transport",
              rel_diff(second_derivative(X, q, d1),
                       second_derivative(X, p, pulled)));

    if (trial < 2) {
      const DenseHessian P = dense_hessian(X, p);
      const DenseHessian Q = dense_hessian(X, q);
      const MatrixXd M = action_matrix(g.A_inv(), g.A(), m, n);
      const MatrixXd congruent = M.transpose() * P.matrix * M;
      t.observe("oracle.congruence",
                (Q.matrix - congruent).norm() / std::max(1.0, Q.matrix.norm()));
      const DenseHessian serial = dense_hessian_serial(X, p);
      t.observe("oracle.parallel_matches_serial",
                (serial.matrix - P.matrix).cwiseAbs().maxCoeff());
      t.observe("oracle.symmetry", P.asymmetry);
      VectorXd flat = flatten(d1);
      t.observe("oracle.matvec",
                (P.matrix * flat - flatten(hessian_apply(X, p, d1))).norm() /
                    std::max(1.0, flat.norm() * P.matrix.norm()));
    }
  }
}

void check_coupling_products(const SpectrumReport& rep, Tracker& t) {
  std::map<std::tuple<std::string, int, int>, std::vector<double>> groups;
  for (const EigPair& e : rep.eigpairs) {
    if (e.coupling && e.provenance.branch != 0) {
      groups[{e.provenance.family, e.provenance.i, e.provenance.j}].push_back(
          *e.coupling);
    }
  }
  for (const auto& [key, c] : groups) {
    if (c.size() == 2) {
      t.observe("spectrum.coupling_products", std::abs(c[0] * c[1] + 1.0));
    }
  }
}

void check_spectrum(const DataMatrixSVD& X, const SpectrumReport& rep,
                    const std::optional<double>& closed_min,
                    const std::string& prefix, Tracker& t) {
  const int dim = rep.point.k() * (X.m() + X.n());
  t.observe(prefix + "count",
            std::abs(static_cast<double>(rep.eigpairs.size()) - dim));
  const NumericSpectrum ns = numeric_spectrum(dense_hessian(X, rep.point));
  const VectorXd cf = rep.sorted_values();
  if (cf.size() == ns.values.size()) {
    t.observe(prefix + "oracle_agreement",
              (cf - ns.values).cwiseAbs().maxCoeff());
  } else {
    t.observe(prefix + "oracle_agreement", INFINITY);
  }
  const std::vector<double> res = eigpair_residuals(X, rep);
  t.observe(prefix + "eigen_residual",
            *std::max_element(res.begin(), res.end()));
  t.observe(prefix + "orthogonality", max_pairwise_overlap(rep));
  if (closed_min) {
    t.observe(prefix + "lambda_min_vs_oracle", std::abs(*closed_min - ns.values(0)));
  } else {
    // Global minimum: no negative eigenvalue.
    t.observe(prefix + "lambda_min_vs_oracle",
              std::max(0.0, -ns.values(0) - 1e-8 * std::max(1.0, ns.values.cwiseAbs().maxCoeff())));
  }
}

void check_canonical_family(const DataMatrixSVD& X, const VerifyOptions& opt,
                            Rng& rng, Tracker& t) {
  const int m = X.m(), n = X.n(), r = X.rank();
  const int kmax = std::min(opt.max_k, m + 1);

  for (int k = 1; k <= kmax; ++k) {
    for (const Selection& sel : selections_for(m, k, opt.max_selections, rng)) {
      const int q = sel.q();
      const MatrixXd C0 = (k > q && rng() % 2)
                              ? MatrixXd(random_gaussian(n - r, k - q, rng))
                              : MatrixXd::Zero(n - r, k - q);
      const CanonicalPoint cp = build_canonical(X, sel, k, C0);
      const FactorPair p = cp.materialize();

      t.observe("canonical.criticality",
                gradient(X, p).norm() / std::max(1.0, X.frobenius_norm()));
      t.observe("canonical.J_value",
                std::abs(evaluate_J(X, p) - cp.J_value()) /
                    std::max(1.0, cp.J_value()));
      const TangentPair deg = orbit_tangent(p, random_gaussian(k, k, rng));
      t.observe("canonical.degenerate_direction",
                std::abs(second_derivative(X, p, deg)) /
                    std::max(1e-300, deg.squared_norm()));

      const ClassificationResult cls = classify_canonical(cp);
      const SpectrumReport rep = spectrum_canonical(cp);
      check_spectrum(X, rep, cls.lambda_min_closed_form, "spectrum.", t);
      check_coupling_products(rep, t);
      if (cls.lambda_min_closed_form) {
        t.observe("spectrum.lambda_min_dispatch",
                  std::abs(*cls.lambda_min_closed_form - rep.lambda_min));
      }

      // Orbit transport of inertia, eigenvalues and the lambda_min bound.
      if (k * (m + n) <= 200) {
        const GroupElement g = random_group_element(k, opt.max_cond, rng);
        const FactorPair moved = apply_group_action(g, p);
        const bool same = inertia_of(X, p) == inertia_of(X, moved);
        t.observe("orbit.inertia_invariance", same ? 0.0 : 1.0);
        const GroupElement orth(random_orthogonal(k, rng));
        const VectorXd e0 = numeric_spectrum(dense_hessian(X, p)).values;
        const VectorXd e1 =
            numeric_spectrum(dense_hessian(X, apply_group_action(orth, p)))
                .values;
        t.observe("orbit.orthogonal_eigenvalues",
                  (e0 - e1).cwiseAbs().maxCoeff());
        if (cls.lambda_min_closed_form) {
          const double bound =
              transported_lambda_min_bound(*cls.lambda_min_closed_form, g);
          const double actual =
              numeric_spectrum(dense_hessian(X, moved)).values(0);
          t.observe("orbit.bound_validity", std::max(0.0, actual - bound));
        }
      }

      // Round trip through reduction.
      if (q >= 1) {
        const GroupElement g = random_group_element(k, opt.round_trip_cond, rng);
        const FactorPair moved = apply_group_action(g, p);
        const ReducedPoint red = reduce_to_canonical(X, moved, 1e-8);
        const FactorPair back = apply_group_action(
            GroupElement(red.A), red.canonical.materialize());
        const double rec =
            std::sqrt((back.W - moved.W).squaredNorm() +
                      (back.S - moved.S).squaredNorm()) /
            moved.norm();
        const VectorXd l1 = red.canonical.lambda();
        const double dl = l1.size() == cp.lambda().size()
                              ? (l1 - cp.lambda()).cwiseAbs().maxCoeff()
                              : INFINITY;
        t.observe("canonical.round_trip", std::max(rec, dl));
      }

      // M0 intersection.
      const std::optional<GroupElement> a0 = intersect_M0(cp);
      bool lambda_invertible = true;
      for (Eigen::Index j = 0; j < cp.lambda().size(); ++j) {
        lambda_invertible = lambda_invertible && cp.lambda()(j) > 0.0;
      }
      const bool expected =
          lambda_invertible && (C0.size() == 0 || C0.cwiseAbs().maxCoeff() == 0.0);
      t.observe("orbit.M0_intersection", a0.has_value() == expected ? 0.0 : 1.0);
      if (a0) {
        const FactorPair bal = apply_group_action(*a0, p);
        const MatrixXd zero = MatrixXd::Zero(k, k);
        t.observe("orbit.M0_balance", balance_residual(bal, zero));
        const GroupElement orth(random_orthogonal(k, rng));
        t.observe("orbit.M0_orthogonal_closure",
                  balance_residual(apply_group_action(*a0 * orth, p), zero));
      }

      // Balanced point of the same selection.
      if (lambda_invertible) {
        const FactorPair bal = build_balanced(X, sel, k);
        t.observe("canonical.criticality",
                  gradient(X, bal).norm() / std::max(1.0, X.frobenius_norm()));
        t.observe("orbit.M0_balance",
                  balance_residual(bal, MatrixXd::Zero(k, k)));
        std::optional<double> bal_min;
        try {
          bal_min = lambda_min_closed_form(describe_balanced(X, sel, k));
        } catch (const NotASaddle&) {
        }
        const SpectrumReport brep = spectrum_balanced(X, sel, k);
        check_spectrum(X, brep, bal_min, "spectrum.balanced_", t);
        t.observe("spectrum.balanced_negative_count",
                  std::abs(brep.inertia.negative - rep.inertia.negative));
        if (q >= 1) {
          const ReducedPoint red = reduce_to_canonical(X, bal, 1e-8);
          const VectorXd l1 = red.canonical.lambda();
          t.observe("canonical.balanced_round_trip",
                    l1.size() == cp.lambda().size()
                        ? (l1 - cp.lambda()).cwiseAbs().maxCoeff()
                        : INFINITY);
        }
      }
    }
  }
}

// Sign trichotomy of the selected/unselected mixed eigenvalue and the scaling
// behaviour of lambda_min for q = k.
void check_scaling(const DataMatrixSVD& X, Tracker& t) {
  const int m = X.m();
  for (int q = 1; q < m; ++q) {
    for (int i = 0; i < m; ++i) {
      std::vector<int> idx;
      for (int s = 0; s < q; ++s) idx.push_back(s);
      // Swap the last selected index for i to obtain non-maximal selections.
      if (i < q) continue;
      idx.back() = i;
      std::sort(idx.begin(), idx.end());
      const Selection sel(idx);
      for (double a : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        const SpectrumReport rep = spectrum_full_rank_scaled(X, sel, a);
        int violations = 0;
        for (const EigPair& e : rep.eigpairs) {
          if (e.provenance.family != "unselected-mixed" ||
              e.provenance.branch != -1) {
            continue;
          }
          const double gap = X.sigma_at(idx[e.provenance.j]) -
                             X.sigma_at(e.provenance.i);
          const double tol = X.value_tolerance();
          const bool ok = gap < -tol   ? e.value < 0.0
                          : gap > tol  ? e.value > 0.0
                                       : std::abs(e.value) <= 1e-9 * X.sigma_at(0);
          violations += ok ? 0 : 1;
        }
        t.observe("spectrum.sign_trichotomy", violations);
      }

      if (!strict_saddle_test(X, sel)) continue;
      const double lk = X.sigma_at(idx.back());
      if (!(lk > 0.0)) continue;
      const CanonicalPoint cp = build_canonical(X, sel, q, MatrixXd());
      const double sp = X.sigma_at(*first_deficit(X, sel));
      // |lambda_min| decreases away from the balanced scale a = sqrt(lambda_k).
      std::vector<std::pair<double, double>> level_value;
      for (double f : {1.0, 2.0, 4.0, 8.0, 0.5, 0.25}) {
        const double a = std::sqrt(lk) * f;
        const double v =
            std::abs(lambda_min_closed_form(describe_canonical(cp, a)));
        const double level = std::max(a * a / lk, lk / (a * a));
        level_value.emplace_back(level, v);
        t.observe("spectrum.scaling_bound",
                  std::max(0.0, v - 2.0 * (sp * sp - lk * lk) / (lk * level)));
      }
      int bad = 0;
      for (const auto& [l1, v1] : level_value) {
        for (const auto& [l2, v2] : level_value) {
          if (l1 < l2 - 1e-12 && !(v1 > v2)) ++bad;
        }
      }
      t.observe("spectrum.scaling_monotone", bad);
    }
  }
}

void check_flow(const DataMatrixSVD& X, Rng& rng, Tracker& t) {
  const int m = X.m(), n = X.n();
  for (int variant = 0; variant < 2; ++variant) {
    const FactorPair p0 = variant == 0 ? random_balanced_point(m, n, 1, rng)
                                       : random_gaussian_point(m, n, 1, rng);
    const FlowTrajectory traj = integrate_flow(X, p0, 1e-9, 1e5);
    t.observe("flow.converged", traj.status == FlowStatus::Converged ? 0 : 1);
    t.observe("flow.conservation",
              std::max(traj.max_drift, traj.max_norm_gap_drift));
    t.observe("flow.descent", traj.max_J_increase);
    if (traj.status == FlowStatus::Converged) {
      const LimitDiagnosis diag = classify_limit(X, traj, 1e-8);
      t.observe("flow.limit_balance", diag.balance_residual);
    }
  }
}

}  // namespace

VerifyReport run_property_suite(const DataMatrixSVD& X,
                                const VerifyOptions& opt) {
  Tracker t;
  t.declare("core.svd_reconstruction", 1e-10);
  t.declare("core.svd_orthogonality", 1e-12);
  t.declare("core.J_nonnegative", 0.0);
  t.declare("core.orientation", 1e-12);
  t.declare("calculus.fd_gradient", kFdGradientTol);
  t.declare("calculus.fd_second_derivative", kFdSecondTol);
  t.declare("calculus.hessian_symmetry", 1e-10);
  t.declare("calculus.second_derivative_consistency", 1e-10);
  t.declare("calculus.gradient_orbit_orthogonality", 1e-10);
  t.declare("orbit.J_invariance", 1e-10);
  t.declare("orbit.gradient_transport", 1e-9);
  t.declare("orbit.hessian_transport", 1e-9);
  t.declare("orbit.second_derivative_transport", 1e-9);
  t.declare("oracle.congruence", 1e-8);
  t.declare("oracle.parallel_matches_serial", 0.0);
  t.declare("oracle.symmetry", 1e-12);
  t.declare("oracle.matvec", 1e-12);
  t.declare("canonical.criticality", 1e-10);
  t.declare("canonical.J_value", 1e-10);
  t.declare("canonical.degenerate_direction", 1e-10);
  t.declare("canonical.round_trip", 1e-8);
  t.declare("canonical.balanced_round_trip", 1e-8);
  t.declare("spectrum.count", 0.0);
  t.declare("spectrum.oracle_agreement", 1e-8);
  t.declare("spectrum.eigen_residual", 1e-9);
  t.declare("spectrum.orthogonality", 1e-9);
  t.declare("spectrum.lambda_min_vs_oracle", 1e-8);
  t.declare("spectrum.lambda_min_dispatch", 1e-10);
  t.declare("spectrum.coupling_products", 1e-12);
  t.declare("spectrum.balanced_count", 0.0);
  t.declare("spectrum.balanced_oracle_agreement", 1e-8);
  t.declare("spectrum.balanced_eigen_residual", 1e-9);
  t.declare("spectrum.balanced_orthogonality", 1e-9);
  t.declare("spectrum.balanced_lambda_min_vs_oracle", 1e-8);
  t.declare("spectrum.balanced_negative_count", 0.0);
  t.declare("spectrum.sign_trichotomy", 0.0);
  t.declare("spectrum.scaling_bound", 1e-12);
  t.declare("spectrum.scaling_monotone", 0.0);
  t.declare("orbit.inertia_invariance", 0.0);
  t.declare("orbit.orthogonal_eigenvalues", 1e-8);
  t.declare("orbit.bound_validity", 1e-10);
  t.declare("orbit.M0_intersection", 0.0);
  t.declare("orbit.M0_balance", 1e-10);
  t.declare("orbit.M0_orthogonal_closure", 1e-10);
  if (opt.include_flow) {
    t.declare("flow.converged", 0.0);
    t.declare("flow.conservation", 1e-8);
    t.declare("flow.descent", 1e-9);
    t.declare("flow.limit_balance", 1e-8);
  }

  Rng rng(opt.seed);
  const double xnorm = std::max(1.0, X.frobenius_norm());
  t.observe("core.svd_reconstruction",
            (X.U() * X.Sigma() * X.V().transpose() - X.X()).norm() / xnorm);
  t.observe("core.svd_orthogonality",
            std::max((X.U().transpose() * X.U() -
                      MatrixXd::Identity(X.m(), X.m()))
                         .cwiseAbs()
                         .maxCoeff(),
                     (X.V().transpose() * X.V() -
                      MatrixXd::Identity(X.n(), X.n()))
                         .cwiseAbs()
                         .maxCoeff()));

  check_random_points(X, opt, rng, t);
  check_canonical_family(X, opt, rng, t);
  check_scaling(X, t);
  if (opt.include_flow) check_flow(X, rng, t);

  VerifyReport report;
  report.checks = t.take();
  for (CheckResult& c : report.checks) {
    if (c.cases == 0) c.note = "no applicable cases";
  }
  return report;
}

}  // namespace mfland
