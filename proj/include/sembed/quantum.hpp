// Copyright 2026 The sembed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Qubit / qudit operators and the real Hilbert-Schmidt coordinatization used
// by the GPT pipeline.
//
// Basis order for dimension d: I/sqrt(d), then for each pair j<k (row-major)
// the symmetric generator (|j><k|+|k><j|)/sqrt(2), then for each pair j<k the
// antisymmetric generator (-i|j><k|+i|k><j|)/sqrt(2), then the d-1 diagonal
// generators. Every element has unit Hilbert-Schmidt norm, so the coordinate
// map is an isometry: <vec(A), vec(B)> = Tr(AB).

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace sembed {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

class HermitianOperator {
 public:
  /// Validates hermiticity (relative to the largest entry) and stores the
  /// exactly symmetrized matrix.
  explicit HermitianOperator(const CMatrix& m, double tol = kHermitianTol);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }
  /// Ascending eigenvalues.
  RVector eigenvalues() const;

 protected:
  HermitianOperator() = default;

 private:
  CMatrix m_;
};

class DensityMatrix : public HermitianOperator {
 public:
  explicit DensityMatrix(const CMatrix& m, double herm_tol = kHermitianTol,
                         double psd_tol = kPsdTol);
  static DensityMatrix maximally_mixed(int d);
  /// |psi><psi| for a (not necessarily normalized) nonzero ket.
  static DensityMatrix from_ket(const CVector& ket);
};

class Effect : public HermitianOperator {
 public:
  explicit Effect(const CMatrix& m, double herm_tol = kHermitianTol,
                  double psd_tol = kPsdTol);
  static Effect identity(int d);
  static Effect zero(int d);
};

/// Both outcomes of a binary measurement; first + second = I.
struct DichotomicMeasurement {
  Effect first;
  Effect second;
};

DichotomicMeasurement make_dichotomic(const Effect& e);

double born(const DensityMatrix& rho, const Effect& effect);
double purity(const DensityMatrix& rho);
Effect complement(const Effect& effect);

/// Explicit basis matrices in coordinate order.
std::vector<CMatrix> gell_mann_basis(int d);

RVector vectorize(const HermitianOperator& op);
RVector vectorize(const CMatrix& hermitian_matrix);
HermitianOperator devectorize(const RVector& coords);

// Pauli matrices, handy throughout tests and the POM module.
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

}  // namespace sembed
