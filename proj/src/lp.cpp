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

#include "sembed/lp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>

#include "sembed/errors.hpp"

namespace sembed {

void LinearProgram::validate() const {
  const auto n = cost.size();
  if (eq_matrix.cols() != n || eq_matrix.rows() != eq_rhs.size() || lower.size() != n ||
      upper.size() != n) {
    throw InvalidInput("linear program: inconsistent dimensions");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!std::isfinite(lower(j))) throw InvalidInput("linear program: lower bounds must be finite");
    if (upper(j) < lower(j)) throw InvalidInput("linear program: empty variable range");
  }
}

std::string_view to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
    case LpStatus::numerical_error: return "numerical_error";
  }
  return "unknown";
}

namespace {

enum class VarState : unsigned char { basic, at_lower, at_upper };

// Revised simplex over   A x = b, 0 <= x <= ub   with b >= 0, where columns
// [n, n+m) are the artificial identity block.
class BoundedSimplex {
 public:
  BoundedSimplex(RMatrix a, RVector b, RVector ub, const SimplexOptions& opt)
      : a_(std::move(a)), b_(std::move(b)), opt_(opt) {
    m_ = a_.rows();
    n_ = a_.cols();
    ub_.resize(n_ + m_);
    ub_.head(n_) = ub;
    ub_.tail(m_).setConstant(kInf);
    state_.assign(static_cast<std::size_t>(n_ + m_), VarState::at_lower);
    basis_.resize(static_cast<std::size_t>(m_));
    for (Eigen::Index i = 0; i < m_; ++i) {
      basis_[static_cast<std::size_t>(i)] = n_ + i;
      state_[static_cast<std::size_t>(n_ + i)] = VarState::basic;
    }
  }

  LpStatus run(const RVector& cost) {
    std::size_t degenerate = 0;
    for (;;) {
      if (iterations_ >= opt_.max_iterations) return LpStatus::iteration_limit;
      ++iterations_;
      refactor();
      if (!lu_ok_) return LpStatus::numerical_error;

      RVector cb(m_);
      for (Eigen::Index i = 0; i < m_; ++i) cb(i) = cost(basis_[static_cast<std::size_t>(i)]);
      const RVector y = lu_.transpose().solve(cb);
      const RVector dstruct = cost.head(n_) - a_.transpose() * y;

      const bool bland = degenerate >= opt_.degenerate_streak;
      Eigen::Index enter = -1;
      double best = 0.0;
      for (Eigen::Index j = 0; j < n_ + m_; ++j) {
        const auto st = state_[static_cast<std::size_t>(j)];
        if (st == VarState::basic || ub_(j) <= 0.0) continue;
        const double dj = j < n_ ? dstruct(j) : cost(j) - y(j - n_);
        const bool eligible = (st == VarState::at_lower && dj < -opt_.optimality_tol) ||
                              (st == VarState::at_upper && dj > opt_.optimality_tol);
        if (!eligible) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (std::abs(dj) > best) {
          best = std::abs(dj);
          enter = j;
        }
      }
      if (enter < 0) return LpStatus::optimal;

      const double dir = state_[static_cast<std::size_t>(enter)] == VarState::at_lower ? 1.0 : -1.0;
      const RVector w = lu_.solve(column(enter));

      // Ratio test; x_B(t) = x_B - t * dir * w.
      double t_min = ub_(enter);  // bound flip of the entering variable
      Eigen::Index leave = -1;
      double leave_pivot = 0.0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double delta = dir * w(i);
        const Eigen::Index var = basis_[static_cast<std::size_t>(i)];
        double t;
        if (delta > opt_.pivot_tol) {
          t = std::max(0.0, xb_(i)) / delta;
        } else if (delta < -opt_.pivot_tol && std::isfinite(ub_(var))) {
          t = std::max(0.0, ub_(var) - xb_(i)) / -delta;
        } else {
          continue;
        }
        bool take;
        if (leave < 0) {
          take = t <= t_min + 1e-12;
        } else if (t < t_min - 1e-12) {
          take = true;
        } else if (t <= t_min + 1e-12) {
          const Eigen::Index cur = basis_[static_cast<std::size_t>(leave)];
          take = bland ? var < cur : std::abs(delta) > leave_pivot;
        } else {
          take = false;
        }
        if (take) {
          t_min = std::min(t_min, t);
          leave = i;
          leave_pivot = std::abs(delta);
        }
      }
      if (!std::isfinite(t_min)) return LpStatus::unbounded;

      degenerate = t_min <= 1e-12 ? degenerate + 1 : 0;
      if (leave < 0) {
        // Entering variable runs to its opposite bound.
        state_[static_cast<std::size_t>(enter)] =
            dir > 0 ? VarState::at_upper : VarState::at_lower;
        continue;
      }
      const Eigen::Index out = basis_[static_cast<std::size_t>(leave)];
      const double delta = dir * w(leave);
      state_[static_cast<std::size_t>(out)] = delta > 0 ? VarState::at_lower : VarState::at_upper;
      state_[static_cast<std::size_t>(enter)] = VarState::basic;
      basis_[static_cast<std::size_t>(leave)] = enter;
    }
  }

  /// Values of all n+m variables for the current basis.
  RVector values() {
    refactor();
    RVector x = RVector::Zero(n_ + m_);
    for (Eigen::Index j = 0; j < n_ + m_; ++j) {
      if (state_[static_cast<std::size_t>(j)] == VarState::at_upper) x(j) = ub_(j);
    }
    for (Eigen::Index i = 0; i < m_; ++i) x(basis_[static_cast<std::size_t>(i)]) = xb_(i);
    return x;
  }

  void fix_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) ub_(n_ + i) = 0.0;
  }

  std::size_t iterations() const { return iterations_; }

 private:
  RVector column(Eigen::Index j) const {
    if (j < n_) return a_.col(j);
    RVector e = RVector::Zero(m_);
    e(j - n_) = 1.0;
    return e;
  }

  void refactor() {
    RMatrix bmat(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i) bmat.col(i) = column(basis_[static_cast<std::size_t>(i)]);
    lu_.compute(bmat);
    RVector rhs = b_;
    for (Eigen::Index j = 0; j < n_ + m_; ++j) {
      if (state_[static_cast<std::size_t>(j)] == VarState::at_upper) rhs -= ub_(j) * column(j);
    }
    xb_ = lu_.solve(rhs);
    lu_ok_ = xb_.allFinite() && std::abs(lu_.determinant()) > 1e-300;
  }

  RMatrix a_;
  RVector b_;
  RVector ub_;
  SimplexOptions opt_;
  Eigen::Index m_ = 0;
  Eigen::Index n_ = 0;
  std::vector<VarState> state_;
  std::vector<Eigen::Index> basis_;
  Eigen::PartialPivLU<RMatrix> lu_;
  RVector xb_;
  bool lu_ok_ = false;
  std::size_t iterations_ = 0;
};

// Largest alpha with v + alpha * dv >= 0 (infinite if dv >= 0).
double max_step(const RVector& v, const RVector& dv) {
  double alpha = kInf;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
  }
  return alpha;
}

}  // namespace

LpSolution solve_simplex(const LinearProgram& lp, const SimplexOptions& options) {
  lp.validate();
  const auto n = lp.variables();
  const auto m = lp.constraints();
  LpSolution sol;

  RMatrix a = lp.eq_matrix;
  RVector b = lp.eq_rhs - a * lp.lower;
  const RVector ub = lp.upper - lp.lower;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b(i) < 0.0) {
      b(i) = -b(i);
      a.row(i) *= -1.0;
    }
  }

  BoundedSimplex simplex(a, b, ub, options);
  RVector phase1 = RVector::Zero(n + m);
  phase1.tail(m).setOnes();
  LpStatus st = simplex.run(phase1);
  sol.iterations = simplex.iterations();
  if (st != LpStatus::optimal) {
    sol.status = st == LpStatus::unbounded ? LpStatus::numerical_error : st;
    return sol;
  }
  const RVector x1 = simplex.values();
  const double infeas = x1.tail(m).sum();
  if (infeas > options.feasibility_tol * std::max(1.0, b.lpNorm<Eigen::Infinity>())) {
    sol.status = LpStatus::infeasible;
    return sol;
  }

  simplex.fix_artificials();
  RVector phase2 = RVector::Zero(n + m);
  phase2.head(n) = lp.cost;
  st = simplex.run(phase2);
  sol.iterations = simplex.iterations();
  sol.status = st;
  if (st != LpStatus::optimal) return sol;
  const RVector x = simplex.values();
  sol.x = x.head(n) + lp.lower;
  sol.objective = lp.cost.dot(sol.x);
  return sol;
}

LpSolution solve_interior_point(const LinearProgram& lp, const InteriorPointOptions& options) {
  lp.validate();
  const auto n0 = lp.variables();
  const auto m0 = lp.constraints();

  // Standard form: shift lower bounds to zero, add a slack row per finite upper bound.
  std::vector<Eigen::Index> bounded;
  for (Eigen::Index j = 0; j < n0; ++j) {
    if (std::isfinite(lp.upper(j))) bounded.push_back(j);
  }
  const auto nb = static_cast<Eigen::Index>(bounded.size());
  const Eigen::Index n = n0 + nb;
  const Eigen::Index m = m0 + nb;
  RMatrix a = RMatrix::Zero(m, n);
  a.topLeftCorner(m0, n0) = lp.eq_matrix;
  RVector b(m);
  b.head(m0) = lp.eq_rhs - lp.eq_matrix * lp.lower;
  RVector c = RVector::Zero(n);
  c.head(n0) = lp.cost;
  for (Eigen::Index i = 0; i < nb; ++i) {
    const Eigen::Index j = bounded[static_cast<std::size_t>(i)];
    a(m0 + i, j) = 1.0;
    a(m0 + i, n0 + i) = 1.0;
    b(m0 + i) = lp.upper(j) - lp.lower(j);
  }

  LpSolution sol;
  if (n < m) {
    sol.status = LpStatus::numerical_error;  // normal equations need n >= m
    return sol;
  }
  const double bnorm = b.lpNorm<Eigen::Infinity>();
  const double cnorm = c.lpNorm<Eigen::Infinity>();

  // Mehrotra starting point.
  const RMatrix aat = a * a.transpose() + 1e-12 * RMatrix::Identity(m, m);
  Eigen::LDLT<RMatrix> aat_f(aat);
  RVector x = a.transpose() * aat_f.solve(b);
  RVector lambda = aat_f.solve(a * c);
  RVector s = c - a.transpose() * lambda;
  x.array() += std::max(-1.5 * x.minCoeff(), 0.0);
  s.array() += std::max(-1.5 * s.minCoeff(), 0.0);
  {
    const double xs = x.dot(s);
    if (!(xs > 0.0)) {
      x.setOnes();
      s.setOnes();
    } else {
      const double dx = 0.5 * xs / s.sum();
      const double ds = 0.5 * xs / x.sum();
      x.array() += dx;
      s.array() += ds;
    }
  }

  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    sol.iterations = it + 1;
    const RVector rb = a * x - b;
    const RVector rc = a.transpose() * lambda + s - c;
    const double mu = x.dot(s) / static_cast<double>(n);
    const double pobj = c.dot(x);
    const double dobj = b.dot(lambda);
    if (!std::isfinite(mu) || !std::isfinite(pobj)) {
      sol.status = LpStatus::numerical_error;
      return sol;
    }
    if (rb.lpNorm<Eigen::Infinity>() <= options.feasibility_tol * (1.0 + bnorm) &&
        rc.lpNorm<Eigen::Infinity>() <= options.feasibility_tol * (1.0 + cnorm) &&
        std::abs(pobj - dobj) <= options.gap_tol * (1.0 + std::abs(pobj))) {
      sol.status = LpStatus::optimal;
      sol.x = x.head(n0) + lp.lower;
      sol.objective = lp.cost.dot(sol.x);
      return sol;
    }

    const RVector dscale = x.cwiseQuotient(s);
    // Normal matrix A D A' = R'R from a QR of D^{1/2} A', which keeps the
    // conditioning of the square root instead of squaring it.
    const RMatrix w = dscale.cwiseSqrt().asDiagonal() * a.transpose();
    Eigen::HouseholderQR<RMatrix> qr(w);
    const RMatrix r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    if (!r.allFinite() || r.diagonal().cwiseAbs().minCoeff() == 0.0) {
      sol.status = LpStatus::numerical_error;
      return sol;
    }
    auto normal_solve = [&](const RVector& rhs) {
      const RVector z = r.transpose().triangularView<Eigen::Lower>().solve(rhs);
      return RVector(r.triangularView<Eigen::Upper>().solve(z));
    };
    auto direction = [&](const RVector& rxs, RVector& dx, RVector& dl, RVector& ds) {
      const RVector sinv_rxs = rxs.cwiseQuotient(s);
      dl = normal_solve(-rb - a * (sinv_rxs + dscale.cwiseProduct(rc)));
      ds = -rc - a.transpose() * dl;
      dx = sinv_rxs - dscale.cwiseProduct(ds);
    };

    RVector dx_aff, dl_aff, ds_aff;
    direction(-x.cwiseProduct(s), dx_aff, dl_aff, ds_aff);
    const double ap_aff = std::min(1.0, max_step(x, dx_aff));
    const double ad_aff = std::min(1.0, max_step(s, ds_aff));
    const double mu_aff =
        (x + ap_aff * dx_aff).dot(s + ad_aff * ds_aff) / static_cast<double>(n);
    const double sigma = std::pow(mu_aff / mu, 3);

    RVector rxs = -x.cwiseProduct(s) - dx_aff.cwiseProduct(ds_aff);
    rxs.array() += sigma * mu;
    RVector dx, dl, ds;
    direction(rxs, dx, dl, ds);
    if (!dx.allFinite() || !ds.allFinite() || !dl.allFinite()) {
      sol.status = LpStatus::numerical_error;
      return sol;
    }
    const double ap = std::min(1.0, options.step_fraction * max_step(x, dx));
    const double ad = std::min(1.0, options.step_fraction * max_step(s, ds));
    x += ap * dx;
    lambda += ad * dl;
    s += ad * ds;
  }
  sol.status = LpStatus::iteration_limit;
  return sol;
}

}  // namespace sembed
