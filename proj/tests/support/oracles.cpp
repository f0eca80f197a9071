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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace oracle {
namespace {

// Tableau rows 0..m-1 are constraints, row m is the objective (reduced costs),
// last column is the rhs.
struct Tableau {
  Matrix t;
  std::vector<int> basis;

  void pivot(int row, int col) {
    t.row(row) /= t(row, col);
    for (int i = 0; i < t.rows(); ++i) {
      if (i != row && t(i, col) != 0.0) t.row(i) -= t(i, col) * t.row(row);
    }
    basis[row] = col;
  }

  // Runs Bland's rule on columns [0, ncols). Returns false if unbounded.
  bool optimize(int ncols, double tol) {
    const int m = static_cast<int>(basis.size());
    const int rhs = static_cast<int>(t.cols()) - 1;
    for (int iter = 0; iter < 100000; ++iter) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j) {
        if (t(m, j) < -tol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < m; ++i) {
        if (t(i, enter) > tol) {
          const double ratio = t(i, rhs) / t(i, enter);
          if (leave < 0 || ratio < best - 1e-15 ||
              (std::abs(ratio - best) <= 1e-15 && basis[i] < basis[leave])) {
            leave = i;
            best = ratio;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }
};

}  // namespace

TableauResult tableau_lp(const Matrix& a_in, const Vector& b_in, const Vector& c, double tol) {
  const int m = static_cast<int>(a_in.rows());
  const int n = static_cast<int>(a_in.cols());
  Matrix a = a_in;
  Vector b = b_in;
  for (int i = 0; i < m; ++i) {
    if (b(i) < 0) {
      a.row(i) *= -1.0;
      b(i) *= -1.0;
    }
  }
  Tableau tab;
  tab.t = Matrix::Zero(m + 1, n + m + 1);
  tab.t.topLeftCorner(m, n) = a;
  tab.t.block(0, n, m, m) = Matrix::Identity(m, m);
  tab.t.topRightCorner(m, 1) = b;
  tab.basis.resize(m);
  std::iota(tab.basis.begin(), tab.basis.end(), n);
  // Phase 1 objective: sum of artificials, expressed in nonbasic columns.
  for (int i = 0; i < m; ++i) tab.t.row(m) -= tab.t.row(i);
  for (int i = 0; i < m; ++i) tab.t(m, n + i) = 0.0;
  tab.optimize(n + m, tol);
  const double scale = std::max(1.0, b.lpNorm<Eigen::Infinity>());
  TableauResult res;
  res.feasible = -tab.t(m, n + m) <= 1e-9 * scale;
  if (!res.feasible) {
    res.objective = -tab.t(m, n + m);
    return res;
  }
  // Drive remaining artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] >= n) {
      for (int j = 0; j < n; ++j) {
        if (std::abs(tab.t(i, j)) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }
  // Phase 2: drop artificial columns by zeroing them and pricing with c.
  tab.t.row(m).setZero();
  tab.t.block(m, 0, 1, n) = c.transpose();
  for (int i = 0; i < m; ++i) {
    const int bj = tab.basis[i];
    if (bj < n && tab.t(m, bj) != 0.0) tab.t.row(m) -= tab.t(m, bj) * tab.t.row(i);
  }
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] >= n) tab.t.block(i, n, 1, m).setZero();
  }
  tab.t.block(m, n, 1, m).setZero();
  tab.optimize(n, tol);
  res.x = Vector::Zero(n);
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] < n) res.x(tab.basis[i]) = tab.t(i, n + m);
  }
  res.objective = c.dot(res.x);
  return res;
}

double cone_l1_distance(const Matrix& g, const Vector& v) {
  const int p = static_cast<int>(g.rows());
  const int k = static_cast<int>(g.cols());
  Matrix a(k, p + 2 * k);
  a << g.transpose(), Matrix::Identity(k, k), -Matrix::Identity(k, k);
  Vector c = Vector::Zero(p + 2 * k);
  c.tail(2 * k).setOnes();
  const TableauResult r = tableau_lp(a, v, c);
  return r.objective;
}

Matrix brute_force_facets(const Matrix& g, double tol) {
  const int p = static_cast<int>(g.rows());
  const int k = static_cast<int>(g.cols());
  std::vector<Vector> found;
  if (k == 1) {
    Matrix out(1, 1);
    out(0, 0) = g.col(0).sum() >= 0 ? 1.0 : -1.0;
    return out;
  }
  std::vector<bool> pick(p, false);
  std::fill(pick.begin(), pick.begin() + std::min(p, k - 1), true);
  if (p < k - 1) return Matrix(0, k);
  do {
    Matrix sub(k - 1, k);
    int r = 0;
    for (int i = 0; i < p; ++i) {
      if (pick[i]) sub.row(r++) = g.row(i).normalized();
    }
    Eigen::JacobiSVD<Matrix> svd(sub, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s.size() < k - 1 || s(k - 2) < 1e-9) continue;
    Vector nvec = svd.matrixV().col(k - 1);
    Vector vals = g.rowwise().normalized() * nvec;
    if (vals.minCoeff() < -tol && vals.maxCoeff() > tol) continue;
    if (vals.minCoeff() < -tol) nvec = -nvec;
    bool dup = false;
    for (const auto& f : found) dup = dup || (f - nvec).norm() < 1e-7;
    if (!dup) found.push_back(nvec);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  Matrix out(found.size(), k);
  for (std::size_t i = 0; i < found.size(); ++i) out.row(i) = found[i].transpose();
  return out;
}

double bisection_robustness(const Matrix& proj_states, const Matrix& proj_effects,
                            const Matrix& incl_states, const Matrix& incl_effects,
                            const Matrix& depolarizer, double tol) {
  const Matrix hs = brute_force_facets(proj_states);
  const Matrix he = brute_force_facets(proj_effects);
  const int fs = static_cast<int>(hs.rows());
  const int fe = static_cast<int>(he.rows());
  const int ks = static_cast<int>(hs.cols());
  const int ke = static_cast<int>(he.cols());
  const Matrix m1 = incl_effects.transpose() * incl_states;
  const Matrix m2 = incl_effects.transpose() * depolarizer * incl_states;
  // Constraint (i, j): sum_{a,b} he(a,i) sigma(a,b) hs(b,j).
  Matrix a(ke * ks, fe * fs);
  for (int i = 0; i < ke; ++i) {
    for (int j = 0; j < ks; ++j) {
      for (int x = 0; x < fe; ++x) {
        for (int y = 0; y < fs; ++y) a(i * ks + j, x * fs + y) = he(x, i) * hs(y, j);
      }
    }
  }
  auto feasible = [&](double r) {
    const Matrix target = (1.0 - r) * m1 + r * m2;
    Vector b(ke * ks);
    for (int i = 0; i < ke; ++i) {
      for (int j = 0; j < ks; ++j) b(i * ks + j) = target(i, j);
    }
    return tableau_lp(a, b, Vector::Zero(fe * fs)).feasible;
  };
  if (feasible(0.0)) return 0.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

double inverse_normal_cdf(double p) {
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
    (cdf < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
