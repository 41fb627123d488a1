// Copyright 2025 dressedqed contributors
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

#include "dqed/operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "dqed/errors.hpp"

namespace dqed {

Operator::Operator(Matrix data, BasisLabel basis) : data_(std::move(data)), basis_(basis) {
  if (data_.rows() != data_.cols() || data_.rows() == 0)
    throw InvalidDimensionError("operator matrix must be square and non-empty");
  if (basis_.kind == BasisKind::ProductFock && basis_.dim_q * basis_.dim_r != data_.rows())
    throw InvalidDimensionError("product basis dimensions do not match matrix size");
}

Operator Operator::adjoint() const { return Operator(data_.adjoint(), basis_); }

bool Operator::is_hermitian(double tol) const {
  double scale = std::max(1.0, max_abs(data_));
  return max_abs(data_ - data_.adjoint()) <= tol * scale;
}

Operator Operator::operator+(const Operator& o) const {
  if (o.dim() != dim()) throw InvalidDimensionError("dimension mismatch in operator sum");
  return Operator(data_ + o.data_, basis_);
}

Operator Operator::operator-(const Operator& o) const {
  if (o.dim() != dim()) throw InvalidDimensionError("dimension mismatch in operator difference");
  return Operator(data_ - o.data_, basis_);
}

Operator Operator::operator*(const Operator& o) const {
  if (o.dim() != dim()) throw InvalidDimensionError("dimension mismatch in operator product");
  return Operator(data_ * o.data_, basis_);
}

Operator Operator::operator*(cplx s) const { return Operator(data_ * s, basis_); }

Operator ladder(int dim, BasisKind kind) {
  if (dim < 2) throw InvalidDimensionError("ladder needs dim >= 2, got " + std::to_string(dim));
  Matrix b = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator(b, {kind, 0, 0});
}

Operator identity(int dim, BasisKind kind) {
  if (dim < 1) throw InvalidDimensionError("identity needs dim >= 1");
  return Operator(Matrix::Identity(dim, dim), {kind, 0, 0});
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Operator kron(const Operator& a, const Operator& b) {
  return Operator(kron(a.data(), b.data()), {BasisKind::ProductFock, a.dim(), b.dim()});
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

RVector EigenDecomposition::values_by_label() const {
  RVector out(values.size());
  for (size_t k = 0; k < assignment.size(); ++k) out(assignment[k]) = values(k);
  return out;
}

Matrix EigenDecomposition::vectors_by_label() const {
  Matrix out(vectors.rows(), vectors.cols());
  for (size_t k = 0; k < assignment.size(); ++k) out.col(assignment[k]) = vectors.col(k);
  return out;
}

int EigenDecomposition::dressed_index(int bare) const {
  auto it = std::find(assignment.begin(), assignment.end(), bare);
  return static_cast<int>(it - assignment.begin());
}

namespace {

// Overlaps below this never trigger the tie check; they carry no label information.
constexpr double kTieFloor = 1e-3;
constexpr double kTieTol = 1e-6;

}  // namespace

EigenDecomposition eigh_assigned(const Matrix& h, const Matrix& reference) {
  const int n = static_cast<int>(h.rows());
  if (h.rows() != h.cols() || n == 0) throw InvalidDimensionError("eigh_assigned needs a square matrix");
  double scale = std::max(1.0, max_abs(h));
  if (max_abs(h - h.adjoint()) > 1e-9 * scale)
    throw ContractViolation("eigh_assigned: input is not Hermitian");
  if (reference.size() && (reference.rows() != n || reference.cols() != n))
    throw InvalidDimensionError("reference basis has the wrong shape");

  Matrix hs = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hs);
  if (solver.info() != Eigen::Success) throw SolverError("eigensolver failed");

  EigenDecomposition out;
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();

  // overlap(bare, dressed)
  Eigen::MatrixXd ov = reference.size() ? Eigen::MatrixXd((reference.adjoint() * out.vectors).cwiseAbs2())
                                        : Eigen::MatrixXd(out.vectors.cwiseAbs2());

  std::vector<std::tuple<double, int, int>> pairs;
  pairs.reserve(static_cast<size_t>(n) * n);
  for (int k = 0; k < n; ++k)
    for (int b = 0; b < n; ++b) pairs.emplace_back(ov(b, k), k, b);
  std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
    if (std::get<1>(x) != std::get<1>(y)) return std::get<1>(x) < std::get<1>(y);
    return std::get<2>(x) < std::get<2>(y);
  });

  out.assignment.assign(n, -1);
  std::vector<char> bare_used(n, 0);
  int assigned = 0;
  for (const auto& [o, k, b] : pairs) {
    if (out.assignment[k] >= 0 || bare_used[b]) continue;
    if (o > kTieFloor) {
      for (int k2 = 0; k2 < n; ++k2) {
        if (k2 == k || out.assignment[k2] >= 0) continue;
        if (std::abs(ov(b, k2) - o) < kTieTol)
          throw DegeneracyError("ambiguous assignment of bare state " + std::to_string(b), {k, k2, b});
      }
    }
    out.assignment[k] = b;
    bare_used[b] = 1;
    if (++assigned == n) break;
  }

  for (int k = 0; k < n; ++k) {
    Eigen::Index imax = 0;
    out.vectors.col(k).cwiseAbs().maxCoeff(&imax);
    cplx c = out.vectors(imax, k);
    out.vectors.col(k) *= std::conj(c) / std::abs(c);
  }
  out.phases_fixed = true;
  return out;
}

EigenDecomposition eigh_assigned(const Operator& h) { return eigh_assigned(h.data()); }

EigenDecomposition eigh_tracked(const Matrix& h0, const Matrix& dh, int steps) {
  EigenDecomposition ed = eigh_assigned(h0);
  if (dh.size() == 0 || max_abs(dh) == 0.0) return ed;
  if (steps < 1) throw InvalidDimensionError("eigh_tracked needs at least one step");
  // a degenerate starting manifold leaves the labelling to the perturbation: a resonance, not a guess
  const RVector e0 = ed.values_by_label();
  const double tol = 1e-9 * std::max(1.0, max_abs(h0));
  for (Eigen::Index i = 0; i < e0.size(); ++i)
    for (Eigen::Index j = i + 1; j < e0.size(); ++j)
      if (std::abs(e0(i) - e0(j)) < tol)
        throw DegeneracyError("eigh_tracked: degenerate levels at zero perturbation",
                              {static_cast<int>(i), static_cast<int>(j)});
  for (int s = 1; s <= steps; ++s) {
    Matrix ref = ed.vectors_by_label();
    ed = eigh_assigned(Matrix(h0 + (static_cast<double>(s) / steps) * dh), ref);
  }
  return ed;
}

}  // namespace dqed
