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

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace dqed {

using cplx = std::complex<double>;
using Matrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RVector = Eigen::VectorXd;

enum class BasisKind { TransmonFock, ResonatorFock, ProductFock };

struct BasisLabel {
  BasisKind kind = BasisKind::TransmonFock;
  int dim_q = 0;  // only meaningful for ProductFock
  int dim_r = 0;

  bool operator==(const BasisLabel&) const = default;
};

class Operator {
 public:
  Operator(Matrix data, BasisLabel basis = {});

  const Matrix& data() const { return data_; }
  int dim() const { return static_cast<int>(data_.rows()); }
  const BasisLabel& basis() const { return basis_; }

  Operator adjoint() const;
  bool is_hermitian(double tol = 1e-9) const;

  Operator operator+(const Operator& o) const;
  Operator operator-(const Operator& o) const;
  Operator operator*(const Operator& o) const;
  Operator operator*(cplx s) const;

 private:
  Matrix data_;
  BasisLabel basis_;
};

// Annihilation operator on a Fock space of the given dimension.
Operator ladder(int dim, BasisKind kind = BasisKind::TransmonFock);
Operator identity(int dim, BasisKind kind = BasisKind::TransmonFock);
Operator kron(const Operator& a, const Operator& b);
Matrix kron(const Matrix& a, const Matrix& b);

struct EigenDecomposition {
  RVector values;              // ascending
  Matrix vectors;              // column k belongs to values[k]
  std::vector<int> assignment; // dressed index -> bare index
  bool phases_fixed = false;

  // Eigenvalue / eigenvector carrying bare label n.
  RVector values_by_label() const;
  Matrix vectors_by_label() const;
  int dressed_index(int bare) const;
};

// Hermitian eigensolve with each eigenvector labelled by the reference
// column it overlaps most. Pass an empty reference for the computational basis.
EigenDecomposition eigh_assigned(const Matrix& h, const Matrix& reference = Matrix());
EigenDecomposition eigh_assigned(const Operator& h);

// Labels the eigenvectors of h0 + dh by continuation: h0 is labelled against the
// computational basis, then dh is switched on in equal steps, each labelled
// against the previous step's vectors.
EigenDecomposition eigh_tracked(const Matrix& h0, const Matrix& dh, int steps = 32);

double max_abs(const Matrix& m);

}  // namespace dqed
