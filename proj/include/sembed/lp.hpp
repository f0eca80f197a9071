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

// Dense LP solvers for   min c'x  s.t.  A x = b,  lower <= x <= upper.
//
// Both solvers are tuned for the shape produced by the robustness program:
// few equality rows (k_effects * k_states) and many nonnegative columns.

#pragma once

#include <cstddef>
#include <limits>
#include <string_view>

#include "sembed/quantum.hpp"

namespace sembed {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct LinearProgram {
  RVector cost;
  RMatrix eq_matrix;
  RVector eq_rhs;
  RVector lower;  // finite
  RVector upper;  // may be +inf

  Eigen::Index variables() const { return cost.size(); }
  Eigen::Index constraints() const { return eq_rhs.size(); }
  /// Throws InvalidInput on inconsistent shapes or non-finite lower bounds.
  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit, numerical_error };

std::string_view to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::numerical_error;
  RVector x;
  double objective = 0.0;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  double optimality_tol = 1e-10;
  double pivot_tol = 1e-11;
  double feasibility_tol = 1e-9;
  std::size_t max_iterations = 50'000;
  /// Consecutive degenerate pivots tolerated before switching to Bland's rule.
  std::size_t degenerate_streak = 50;
};

struct InteriorPointOptions {
  double feasibility_tol = 1e-10;
  double gap_tol = 1e-10;
  double step_fraction = 0.995;
  std::size_t max_iterations = 200;
};

/// Bounded-variable revised primal simplex, two phases with artificials.
LpSolution solve_simplex(const LinearProgram& lp, const SimplexOptions& options = {});

/// Mehrotra predictor-corrector primal-dual interior point method.
LpSolution solve_interior_point(const LinearProgram& lp,
                                const InteriorPointOptions& options = {});

}  // namespace sembed
