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

#include "sembed/robustness.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "sembed/errors.hpp"

namespace sembed {
namespace {

struct Targets {
  RMatrix identity_part;  // Ie' Is
  RMatrix depolarized;    // Ie' D Is
};

Targets targets(const AccessibleFragment& acc) {
  return {acc.inclusion_effects.transpose() * acc.inclusion_states,
          acc.inclusion_effects.transpose() * acc.depolarizer * acc.inclusion_states};
}

void check_shapes(const AccessibleFragment& acc, const ConeHRepresentation& state_cone,
                  const ConeHRepresentation& effect_cone) {
  if (state_cone.facets.cols() != acc.state_rank() ||
      effect_cone.facets.cols() != acc.effect_rank()) {
    throw InvalidInput("robustness: cone dimensions do not match the accessible fragment");
  }
}

}  // namespace

std::string_view to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::optimal: return "optimal";
    case SolverStatus::fallback_optimal: return "fallback_optimal";
    case SolverStatus::infeasible_numerics: return "infeasible_numerics";
  }
  return "unknown";
}

std::string_view to_string(SolvePath p) {
  return p == SolvePath::simplex ? "simplex" : "interior_point";
}

LinearProgram robustness_program(const AccessibleFragment& acc,
                                 const ConeHRepresentation& state_cone,
                                 const ConeHRepresentation& effect_cone) {
  check_shapes(acc, state_cone, effect_cone);
  const RMatrix& hs = state_cone.facets;
  const RMatrix& he = effect_cone.facets;
  const Eigen::Index ks = hs.cols(), ke = he.cols();
  const Eigen::Index fs = hs.rows(), fe = he.rows();
  const Targets t = targets(acc);

  LinearProgram lp;
  const Eigen::Index nvar = fe * fs + 1;
  const Eigen::Index nrow = ke * ks;
  lp.eq_matrix.resize(nrow, nvar);
  lp.eq_rhs.resize(nrow);
  for (Eigen::Index i = 0; i < ke; ++i) {
    for (Eigen::Index j = 0; j < ks; ++j) {
      const Eigen::Index row = i * ks + j;
      for (Eigen::Index a = 0; a < fe; ++a) {
        const double hea = he(a, i);
        for (Eigen::Index b = 0; b < fs; ++b) lp.eq_matrix(row, a * fs + b) = hea * hs(b, j);
      }
      lp.eq_matrix(row, nvar - 1) = t.identity_part(i, j) - t.depolarized(i, j);
      lp.eq_rhs(row) = t.identity_part(i, j);
    }
  }
  lp.cost = RVector::Zero(nvar);
  lp.cost(nvar - 1) = 1.0;
  lp.lower = RVector::Zero(nvar);
  lp.upper = RVector::Constant(nvar, kInf);
  lp.upper(nvar - 1) = 1.0;
  return lp;
}

double robustness_residual(const AccessibleFragment& acc, const ConeHRepresentation& state_cone,
                           const ConeHRepresentation& effect_cone, double r,
                           const RMatrix& sigma) {
  check_shapes(acc, state_cone, effect_cone);
  const Targets t = targets(acc);
  const RMatrix lhs = (1.0 - r) * t.identity_part + r * t.depolarized;
  const RMatrix rhs = effect_cone.facets.transpose() * sigma * state_cone.facets;
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

RobustnessResult robustness(const AccessibleFragment& acc, const ConeHRepresentation& state_cone,
                            const ConeHRepresentation& effect_cone,
                            const RobustnessOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const LinearProgram lp = robustness_program(acc, state_cone, effect_cone);
  const Eigen::Index fs = state_cone.facets.rows();
  const Eigen::Index fe = effect_cone.facets.rows();

  RobustnessResult res;
  auto attempt = [&](SolvePath path) -> bool {
    const LpSolution sol = path == SolvePath::simplex
                               ? solve_simplex(lp, options.simplex)
                               : solve_interior_point(lp, options.interior_point);
    res.iterations += sol.iterations;
    if (sol.status != LpStatus::optimal) return false;
    const double r = sol.x(sol.x.size() - 1);
    RMatrix sigma(fe, fs);
    for (Eigen::Index a = 0; a < fe; ++a) {
      for (Eigen::Index b = 0; b < fs; ++b) sigma(a, b) = sol.x(a * fs + b);
    }
    const double residual = robustness_residual(acc, state_cone, effect_cone, r, sigma);
    const double sigma_min = sigma.size() ? sigma.minCoeff() : 0.0;
    if (!(residual < options.residual_tol) || sigma_min < -options.sigma_tol ||
        r < -options.sigma_tol || r > 1.0 + options.sigma_tol) {
      return false;
    }
    res.r = std::clamp(r, 0.0, 1.0);
    res.sigma = std::move(sigma);
    res.residual = residual;
    res.path = path;
    return true;
  };

  const SolvePath second =
      options.primary == SolvePath::simplex ? SolvePath::interior_point : SolvePath::simplex;
  if (attempt(options.primary)) {
    res.status = SolverStatus::optimal;
  } else if (options.allow_fallback && attempt(second)) {
    res.status = SolverStatus::fallback_optimal;
  } else {
    res.status = SolverStatus::infeasible_numerics;
    res.path = options.primary;
  }
  res.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

ClassicalityVerdict classify(const RobustnessResult& result, double threshold) {
  if (!result.ok()) throw NumericalFailure("cannot classify a trial without a certified solve");
  if (!(threshold >= 0.0)) throw InvalidInput("classification threshold must be nonnegative");
  return {result.r > threshold, result.r, threshold};
}

Certification certify(const GptFragment& fragment, const RobustnessOptions& options) {
  Certification c{fragment, accessible_fragment(fragment), {}, {}, {}};
  c.state_cone = facet_enumeration(c.accessible.proj_states);
  c.effect_cone = facet_enumeration(c.accessible.proj_effects);
  c.result = robustness(c.accessible, c.state_cone, c.effect_cone, options);
  return c;
}

Certification certify(std::span<const DensityMatrix> states,
                      std::span<const DichotomicMeasurement> measurements,
                      const RobustnessOptions& options) {
  return certify(build_fragment(states, measurements), options);
}

}  // namespace sembed
