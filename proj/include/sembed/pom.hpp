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

// 3-to-1 parity-oblivious multiplexing: optimal encodings, the noncontextual
// bound and the suboptimal-measurement case studies.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sembed/robustness.hpp"

namespace sembed {

/// `flattened` is the encoding with Bloch vectors (+-sqrt(6)/4, +-sqrt(6)/4, +-1/2);
/// `symmetric` is the regular cube with components +-1/sqrt(3).
enum class PomStates { flattened, symmetric };
enum class PomCase { optimal, random_projective, random_povm, rf_misalignment };

std::string_view to_string(PomStates s);
std::string_view to_string(PomCase c);
PomStates parse_pom_states(std::string_view text);
/// Accepts "optimal", "random-projective", "random-povm", "rf-misalignment" (or "rf").
PomCase parse_pom_case(std::string_view text);

/// Index 4*x1 + 2*x2 + x3.
std::vector<DensityMatrix> pom_cube_states(PomStates variant);
std::vector<DensityMatrix> pom_optimal_states();
/// sigma_x, sigma_y, sigma_z measurements; first outcome is the +1 projector.
std::vector<DichotomicMeasurement> pom_optimal_measurements();

double pom_noncontextual_rate(int k);
/// s = (r/2 - s_nc) / (r - 1); throws InvalidInput at the pole r = 1.
double success_from_robustness(double r, double s_nc);

struct PomTaskSpec {
  int k = 3;
  PomCase pom_case = PomCase::optimal;
  PomStates states = PomStates::flattened;
  std::size_t trials = 1000;
  double threshold = kDefaultThreshold;
  std::uint64_t base_seed = 0;
  double confidence = 0.99;
  double max_failure_rate = 0.01;
  RobustnessOptions solver;

  void validate() const;
  /// The optimal case is deterministic and runs once.
  std::size_t effective_trials() const;
};

struct PomTrial {
  double r = 0.0;
  double s = 0.0;
  SolverStatus status = SolverStatus::infeasible_numerics;
  std::string error;

  bool ok() const { return status != SolverStatus::infeasible_numerics; }
};

std::vector<DichotomicMeasurement> pom_case_measurements(const PomTaskSpec& spec,
                                                         std::size_t trial_index);
PomTrial pom_case_trial(const PomTaskSpec& spec, std::size_t trial_index);

struct PomReport {
  std::size_t trials = 0;
  std::size_t valid_trials = 0;
  std::size_t failed_trials = 0;
  std::size_t contextual_count = 0;
  double typicality = 0.0;
  double wilson_lower = 0.0;
  double mean_r = 0.0;
  double std_r = 0.0;
  double mean_s = 0.0;
  double std_s = 0.0;
  double s_nc = 0.0;
  double mean_advantage = 0.0;
  double wall_time = 0.0;
  bool error = false;
  std::string diagnostic;
};

PomReport pom_report(const PomTaskSpec& spec, std::size_t workers = 1,
                     std::vector<PomTrial>* trials = nullptr);

}  // namespace sembed
