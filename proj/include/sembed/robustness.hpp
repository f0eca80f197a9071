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

// Robustness of contextuality: the minimal depolarizing weight r for which the
// accessible fragment admits a simplex embedding,
//
//   minimize r  s.t.  (1-r) Ie' Is + r Ie' D Is = He' sigma Hs,  sigma >= 0.

#pragma once

#include <span>
#include <string_view>

#include "sembed/cone.hpp"
#include "sembed/fragment.hpp"
#include "sembed/lp.hpp"

namespace sembed {

inline constexpr double kDefaultThreshold = 1e-7;

enum class SolverStatus { optimal, fallback_optimal, infeasible_numerics };
enum class SolvePath { simplex, interior_point };

std::string_view to_string(SolverStatus s);
std::string_view to_string(SolvePath p);

struct RobustnessOptions {
  SolvePath primary = SolvePath::simplex;
  bool allow_fallback = true;
  double residual_tol = 1e-8;
  double sigma_tol = 1e-9;
  SimplexOptions simplex;
  InteriorPointOptions interior_point;
};

struct RobustnessResult {
  double r = 1.0;
  RMatrix sigma;  // f_effects x f_states
  SolverStatus status = SolverStatus::infeasible_numerics;
  double residual = kInf;
  double wall_time = 0.0;
  SolvePath path = SolvePath::simplex;
  std::size_t iterations = 0;

  bool ok() const { return status != SolverStatus::infeasible_numerics; }
};

struct ClassicalityVerdict {
  bool contextual = false;
  double r = 0.0;
  double threshold = kDefaultThreshold;
};

/// The LP in variable layout [sigma row-major (f_effects x f_states), r].
LinearProgram robustness_program(const AccessibleFragment& acc,
                                 const ConeHRepresentation& state_cone,
                                 const ConeHRepresentation& effect_cone);

/// max |(1-r) Ie'Is + r Ie'D Is - He' sigma Hs|.
double robustness_residual(const AccessibleFragment& acc, const ConeHRepresentation& state_cone,
                           const ConeHRepresentation& effect_cone, double r,
                           const RMatrix& sigma);

RobustnessResult robustness(const AccessibleFragment& acc, const ConeHRepresentation& state_cone,
                            const ConeHRepresentation& effect_cone,
                            const RobustnessOptions& options = {});

/// Throws NumericalFailure for results without a certified solve.
ClassicalityVerdict classify(const RobustnessResult& result,
                             double threshold = kDefaultThreshold);

/// Everything the pipeline produced for one fragment.
struct Certification {
  GptFragment fragment;
  AccessibleFragment accessible;
  ConeHRepresentation state_cone;
  ConeHRepresentation effect_cone;
  RobustnessResult result;
};

Certification certify(const GptFragment& fragment, const RobustnessOptions& options = {});
Certification certify(std::span<const DensityMatrix> states,
                      std::span<const DichotomicMeasurement> measurements,
                      const RobustnessOptions& options = {});

}  // namespace sembed
