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

#include "sembed/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "sembed/errors.hpp"

namespace sembed {
namespace {

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_square(const CMatrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InvalidInput("operator must be a nonempty square matrix");
  }
}

void require_hermitian(const CMatrix& m, double tol) {
  require_square(m);
  const double scale = std::max(1.0, max_abs(m));
  const double asym = max_abs(m - m.adjoint());
  if (asym > tol * scale) {
    std::ostringstream os;
    os << "operator is not Hermitian (max |A - A^dagger| = " << asym << ")";
    throw InvalidInput(os.str());
  }
}

std::size_t pair_count(int d) { return static_cast<std::size_t>(d) * (d - 1) / 2; }

}  // namespace

HermitianOperator::HermitianOperator(const CMatrix& m, double tol) {
  require_hermitian(m, tol);
  m_ = 0.5 * (m + m.adjoint());
}

RVector HermitianOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

DensityMatrix::DensityMatrix(const CMatrix& m, double herm_tol, double psd_tol)
    : HermitianOperator(m, herm_tol) {
  const double tr = trace();
  if (std::abs(tr - 1.0) > herm_tol * std::max(1.0, static_cast<double>(dim()))) {
    std::ostringstream os;
    os << "density matrix trace " << tr << " differs from 1";
    throw InvalidInput(os.str());
  }
  const double lo = eigenvalues().minCoeff();
  if (lo < -psd_tol) {
    std::ostringstream os;
    os << "density matrix has negative eigenvalue " << lo;
    throw InvalidInput(os.str());
  }
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  if (d < 1) throw InvalidInput("dimension must be positive");
  return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix DensityMatrix::from_ket(const CVector& ket) {
  const double nrm = ket.norm();
  if (ket.size() == 0 || nrm == 0.0) throw InvalidInput("ket must be nonzero");
  const CVector psi = ket / nrm;
  return DensityMatrix(psi * psi.adjoint());
}

Effect::Effect(const CMatrix& m, double herm_tol, double psd_tol)
    : HermitianOperator(m, herm_tol) {
  const RVector ev = eigenvalues();
  if (ev.minCoeff() < -psd_tol || ev.maxCoeff() > 1.0 + psd_tol) {
    std::ostringstream os;
    os << "effect spectrum [" << ev.minCoeff() << ", " << ev.maxCoeff()
       << "] leaves [0, 1]";
    throw InvalidInput(os.str());
  }
}

Effect Effect::identity(int d) { return Effect(CMatrix::Identity(d, d)); }
Effect Effect::zero(int d) { return Effect(CMatrix::Zero(d, d)); }

DichotomicMeasurement make_dichotomic(const Effect& e) {
  return DichotomicMeasurement{e, complement(e)};
}

double born(const DensityMatrix& rho, const Effect& effect) {
  if (rho.dim() != effect.dim()) throw InvalidInput("born: dimension mismatch");
  // Tr(E rho) = sum_ij E_ij rho_ji
  const double p = (effect.matrix().cwiseProduct(rho.matrix().transpose())).sum().real();
  if (p < -kPsdTol || p > 1.0 + kPsdTol) {
    std::ostringstream os;
    os << "born probability " << p << " outside [0, 1]";
    throw InvalidInput(os.str());
  }
  return std::clamp(p, 0.0, 1.0);
}

double purity(const DensityMatrix& rho) {
  // Tr(rho^2) = ||rho||_F^2 for Hermitian rho.
  return rho.matrix().squaredNorm();
}

Effect complement(const Effect& effect) {
  const int d = effect.dim();
  return Effect(CMatrix::Identity(d, d) - effect.matrix());
}

std::vector<CMatrix> gell_mann_basis(int d) {
  if (d < 1) throw InvalidInput("dimension must be positive");
  std::vector<CMatrix> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  basis.push_back(CMatrix::Identity(d, d) / std::sqrt(static_cast<double>(d)));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      CMatrix b = CMatrix::Zero(d, d);
      b(j, k) = b(k, j) = inv_sqrt2;
      basis.push_back(b);
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      CMatrix b = CMatrix::Zero(d, d);
      b(j, k) = Complex(0.0, -inv_sqrt2);
      b(k, j) = Complex(0.0, inv_sqrt2);
      basis.push_back(b);
    }
  }
  for (int l = 1; l < d; ++l) {
    CMatrix b = CMatrix::Zero(d, d);
    const double c = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) b(j, j) = c;
    b(l, l) = -c * l;
    basis.push_back(b);
  }
  return basis;
}

RVector vectorize(const CMatrix& h) {
  require_hermitian(h, kHermitianTol);
  const int d = static_cast<int>(h.rows());
  const std::size_t pairs = pair_count(d);
  const double sqrt2 = std::sqrt(2.0);
  RVector v(static_cast<Eigen::Index>(d) * d);
  v(0) = h.trace().real() / std::sqrt(static_cast<double>(d));
  std::size_t p = 0;
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k, ++p) {
      // Average the two triangles so tiny asymmetry cannot bias coordinates.
      const Complex hjk = 0.5 * (h(j, k) + std::conj(h(k, j)));
      v(1 + p) = sqrt2 * hjk.real();
      v(1 + pairs + p) = -sqrt2 * hjk.imag();
    }
  }
  double prefix = 0.0;
  for (int l = 1; l < d; ++l) {
    prefix += h(l - 1, l - 1).real();
    const double c = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    v(1 + 2 * pairs + (l - 1)) = c * (prefix - l * h(l, l).real());
  }
  return v;
}

RVector vectorize(const HermitianOperator& op) { return vectorize(op.matrix()); }

HermitianOperator devectorize(const RVector& v) {
  const auto n = v.size();
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (n == 0 || static_cast<Eigen::Index>(d) * d != n) {
    throw InvalidInput("coordinate vector length is not a perfect square");
  }
  const std::size_t pairs = pair_count(d);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CMatrix h = CMatrix::Zero(d, d);
  const double id = v(0) / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) h(j, j) = id;
  std::size_t p = 0;
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k, ++p) {
      const Complex hjk(v(1 + p) * inv_sqrt2, -v(1 + pairs + p) * inv_sqrt2);
      h(j, k) = hjk;
      h(k, j) = std::conj(hjk);
    }
  }
  for (int l = 1; l < d; ++l) {
    const double c = v(1 + 2 * pairs + (l - 1)) / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) h(j, j) += c;
    h(l, l) -= c * l;
  }
  return HermitianOperator(h);
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

}  // namespace sembed
