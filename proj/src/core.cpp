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

#include "mfland/core.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/SVD>

namespace mfland {

MatrixXd DataMatrixSVD::Sigma() const {
  MatrixXd out = MatrixXd::Zero(m(), n());
  out.diagonal().head(m()) = sigma_;
  return out;
}

DataMatrixSVD DataMatrixSVD::with_basis(MatrixXd U, MatrixXd V) const {
  if (U.rows() != m() || U.cols() != m() || V.rows() != n() ||
      V.cols() != n()) {
    throw DimensionError("with_basis: basis shapes do not match X");
  }
  DataMatrixSVD out = *this;
  out.u_ = std::move(U);
  out.v_ = std::move(V);
  return out;
}

DataMatrixSVD load_data_matrix(const MatrixXd& raw, double rank_tol) {
  if (!(rank_tol > 0.0 && rank_tol < 1.0)) {
    throw InvalidInput("rank_tol must lie in (0, 1)");
  }
  if (raw.size() == 0 || !raw.allFinite()) {
    throw InvalidInput("data matrix must be nonempty and finite");
  }
  if (raw.cwiseAbs().maxCoeff() == 0.0) {
    throw InvalidInput("data matrix is identically zero");
  }

  DataMatrixSVD out;
  out.transposed_ = raw.rows() > raw.cols();
  out.x_ = out.transposed_ ? MatrixXd(raw.transpose()) : raw;
  out.x_norm_ = out.x_.norm();

  Eigen::JacobiSVD<MatrixXd> svd(out.x_,
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) {
    throw NumericalFailure("SVD of the data matrix did not converge");
  }
  out.u_ = svd.matrixU();
  out.v_ = svd.matrixV();
  out.sigma_ = svd.singularValues();

  const int m = out.m();
  const double cutoff = rank_tol * out.sigma_(0);
  out.rank_ = 0;
  for (int i = 0; i < m; ++i) {
    if (out.sigma_(i) > cutoff) {
      ++out.rank_;
    } else {
      out.sigma_(i) = 0.0;
    }
  }

  // Sign convention: the largest-magnitude entry of u_i is positive.
  for (int i = 0; i < m; ++i) {
    Eigen::Index at = 0;
    out.u_.col(i).cwiseAbs().maxCoeff(&at);
    if (out.u_(at, i) < 0.0) {
      out.u_.col(i) *= -1.0;
      out.v_.col(i) *= -1.0;
    }
  }
  return out;
}

double inner(const TangentPair& a, const TangentPair& b) {
  return a.G.cwiseProduct(b.G).sum() + a.H.cwiseProduct(b.H).sum();
}

TangentPair operator+(const TangentPair& a, const TangentPair& b) {
  return {a.G + b.G, a.H + b.H};
}

TangentPair operator-(const TangentPair& a, const TangentPair& b) {
  return {a.G - b.G, a.H - b.H};
}

TangentPair operator*(double s, const TangentPair& a) {
  return {s * a.G, s * a.H};
}

void check_dimensions(const DataMatrixSVD& X, const FactorPair& p) {
  if (p.W.rows() != X.m() || p.S.cols() != X.n() || p.W.cols() != p.S.rows()) {
    std::ostringstream msg;
    msg << "factor pair (" << p.W.rows() << "x" << p.W.cols() << ", "
        << p.S.rows() << "x" << p.S.cols() << ") does not fit a " << X.m()
        << "x" << X.n() << " data matrix";
    throw DimensionError(msg.str());
  }
}

void check_dimensions(const DataMatrixSVD& X, const FactorPair& p,
                      const TangentPair& d) {
  check_dimensions(X, p);
  if (d.G.rows() != p.W.rows() || d.G.cols() != p.W.cols() ||
      d.H.rows() != p.S.rows() || d.H.cols() != p.S.cols()) {
    throw DimensionError("tangent pair shape does not match the point");
  }
}

MatrixXd residual(const DataMatrixSVD& X, const FactorPair& p) {
  check_dimensions(X, p);
  return p.W * p.S - X.X();
}

double evaluate_J(const DataMatrixSVD& X, const FactorPair& p) {
  return 0.5 * residual(X, p).squaredNorm();
}

FactorPair to_internal(const DataMatrixSVD& X, const FactorPair& user) {
  if (!X.transposed()) return user;
  return {user.S.transpose(), user.W.transpose()};
}

FactorPair to_user(const DataMatrixSVD& X, const FactorPair& internal) {
  return to_internal(X, internal);
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_cell(const std::string& cell, int row, int col) {
  const std::string text = trim(cell);
  if (text.empty()) {
    throw InvalidInput("empty CSV cell at row " + std::to_string(row + 1) +
                       ", column " + std::to_string(col + 1));
  }
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw InvalidInput("malformed CSV number '" + text + "' at row " +
                       std::to_string(row + 1));
  }
  return value;
}

}  // namespace

MatrixXd parse_csv_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    int col = 0;
    while (std::getline(ss, cell, ',')) {
      row.push_back(parse_cell(cell, static_cast<int>(rows.size()), col++));
    }
    if (!line.empty() && trim(line).back() == ',') {
      throw InvalidInput("trailing comma in CSV row " +
                         std::to_string(rows.size() + 1));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidInput("ragged CSV: row " + std::to_string(rows.size() + 1) +
                         " has " + std::to_string(row.size()) +
                         " entries, expected " +
                         std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidInput("CSV matrix is empty");

  MatrixXd out(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) out(i, j) = rows[i][j];
  }
  return out;
}

MatrixXd read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return parse_csv_matrix(in);
}

void write_csv_matrix(std::ostream& out, const MatrixXd& M) {
  char buf[32];
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", M(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace mfland
