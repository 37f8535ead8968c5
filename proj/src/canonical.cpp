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

#include "mfland/canonical.hpp"

#include <algorithm>
#include <sstream>

#include "mfland/spectrum.hpp"

namespace mfland {

Selection::Selection(std::vector<int> zero_based)
    : indices_(std::move(zero_based)) {
  for (std::size_t j = 0; j < indices_.size(); ++j) {
    if (indices_[j] < 0) throw InvalidSelection("negative selection index");
    if (j > 0 && indices_[j] <= indices_[j - 1]) {
      throw InvalidSelection("selection indices must be strictly increasing");
    }
  }
}

Selection Selection::from_one_based(const std::vector<int>& one_based) {
  std::vector<int> idx;
  idx.reserve(one_based.size());
  for (int i : one_based) {
    if (i < 1) throw InvalidSelection("selection indices start at 1");
    idx.push_back(i - 1);
  }
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
    throw InvalidSelection("duplicate selection index");
  }
  return Selection(std::move(idx));
}

Selection Selection::parse(const std::string& text) {
  std::vector<int> idx;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) {
      throw InvalidSelection("empty entry in selection '" + text + "'");
    }
    const auto e = item.find_last_not_of(" \t");
    const std::string tok = item.substr(b, e - b + 1);
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw InvalidSelection("malformed selection entry '" + tok + "'");
    }
    if (used != tok.size()) {
      throw InvalidSelection("malformed selection entry '" + tok + "'");
    }
    idx.push_back(value);
  }
  return from_one_based(idx);
}

bool Selection::contains(int i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

VectorXd Selection::values(const DataMatrixSVD& X) const {
  VectorXd out(q());
  for (int j = 0; j < q(); ++j) out(j) = X.sigma_at(indices_[j]);
  return out;
}

void Selection::validate(const DataMatrixSVD& X) const {
  for (int i : indices_) {
    if (i >= X.m()) {
      throw InvalidSelection("selection index " + std::to_string(i + 1) +
                             " exceeds m = " + std::to_string(X.m()));
    }
  }
}

std::string Selection::to_string_one_based() const {
  std::string out;
  for (int j = 0; j < q(); ++j) {
    if (j) out += ",";
    out += std::to_string(indices_[j] + 1);
  }
  return out;
}

std::optional<int> first_deficit(const DataMatrixSVD& X, const Selection& sel) {
  sel.validate(X);
  const double tol = X.value_tolerance();
  const VectorXd lambda = sel.values(X);
  for (int j = 0; j < sel.q(); ++j) {
    if (lambda(j) < X.sigma_at(j) - tol) return j;
  }
  return std::nullopt;
}

bool is_maximal(const DataMatrixSVD& X, const Selection& sel) {
  return !first_deficit(X, sel).has_value();
}

MatrixXd CanonicalPoint::U_selected() const {
  MatrixXd out(basis.m(), q());
  for (int j = 0; j < q(); ++j) out.col(j) = basis.U().col(selection.indices()[j]);
  return out;
}

MatrixXd CanonicalPoint::V_selected() const {
  MatrixXd out(basis.n(), q());
  for (int j = 0; j < q(); ++j) out.col(j) = basis.V().col(selection.indices()[j]);
  return out;
}

FactorPair CanonicalPoint::materialize() const {
  const int m = basis.m();
  const int n = basis.n();
  const int qq = q();
  FactorPair p{MatrixXd::Zero(m, k), MatrixXd::Zero(k, n)};
  p.W.leftCols(qq) = U_selected();
  p.S.topRows(qq) = lambda().asDiagonal() * V_selected().transpose();
  if (k > qq && C0.size() > 0) {
    p.S.bottomRows(k - qq) = C0.transpose() * basis.V0().transpose();
  }
  return p;
}

double CanonicalPoint::J_value() const {
  return 0.5 * (basis.sigma().squaredNorm() - lambda().squaredNorm());
}

CanonicalPoint build_canonical(const DataMatrixSVD& X, const Selection& sel,
                               int k, const MatrixXd& C0) {
  sel.validate(X);
  if (k < 1) throw InvalidInput("k must be at least 1");
  const int q = sel.q();
  if (q > std::min(k, X.m())) {
    throw InvalidSelection("q = " + std::to_string(q) +
                           " exceeds min(k, m) = " +
                           std::to_string(std::min(k, X.m())));
  }
  const int rows = X.n() - X.rank();
  const int cols = k - q;
  MatrixXd block;
  if (C0.size() == 0) {
    block = MatrixXd::Zero(rows, cols);
  } else if (C0.rows() == rows && C0.cols() == cols) {
    block = C0;
  } else {
    std::ostringstream msg;
    msg << "C0 must be " << rows << "x" << cols << ", got " << C0.rows() << "x"
        << C0.cols();
    throw DimensionError(msg.str());
  }
  return CanonicalPoint{X, sel, k, std::move(block)};
}

FactorPair build_zero_family(const DataMatrixSVD& X, const MatrixXd& C0) {
  const int rows = X.n() - X.rank();
  if (C0.rows() != rows || C0.cols() < 1) {
    throw DimensionError("zero-family block must have n - r = " +
                         std::to_string(rows) + " rows and k >= 1 columns");
  }
  const int k = static_cast<int>(C0.cols());
  return {MatrixXd::Zero(X.m(), k), C0.transpose() * X.V0().transpose()};
}

FactorPair build_balanced(const DataMatrixSVD& X, const Selection& sel, int k) {
  sel.validate(X);
  const int q = sel.q();
  if (k < 1 || q > std::min(k, X.m())) {
    throw InvalidSelection("selection does not fit k");
  }
  const VectorXd lambda = sel.values(X);
  for (int j = 0; j < q; ++j) {
    if (!(lambda(j) > 0.0)) {
      throw InvalidSelection("balanced point needs positive selected values");
    }
  }
  FactorPair p{MatrixXd::Zero(X.m(), k), MatrixXd::Zero(k, X.n())};
  for (int j = 0; j < q; ++j) {
    const int i = sel.indices()[j];
    const double root = std::sqrt(lambda(j));
    p.W.col(j) = root * X.U().col(i);
    p.S.row(j) = root * X.V().col(i).transpose();
  }
  return p;
}

const char* to_string(CriticalKind kind) {
  return kind == CriticalKind::GlobalMinimum ? "GlobalMinimum"
                                             : "StrictSaddle";
}

ClassificationResult classify_canonical(const CanonicalPoint& cp) {
  const DataMatrixSVD& X = cp.basis;
  const int q = cp.q();
  ClassificationResult out;
  out.p = first_deficit(X, cp.selection);
  const bool maximal = !out.p.has_value();
  // A maximal selection that already covers every positive singular value
  // attains J = 0, so it is a global minimum even when q < min(k, m).
  const bool exhausts_rank = X.sigma_at(q) <= X.value_tolerance();
  if (q == X.m() || (maximal && (q == cp.k || exhausts_rank))) {
    out.kind = CriticalKind::GlobalMinimum;
    return out;
  }
  out.kind = CriticalKind::StrictSaddle;
  out.lambda_min_closed_form = lambda_min_closed_form(describe_canonical(cp));
  return out;
}

}  // namespace mfland
