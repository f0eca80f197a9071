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

// Monte Carlo estimation of how often random prepare-and-measure fragments
// are contextual.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sembed/robustness.hpp"
#include "sembed/sampling.hpp"

namespace sembed {

enum class EffectMode { random_projective, random_povm, fixed_grid, fixed_list };

std::string_view to_string(EffectMode mode);
/// Accepts the to_string spellings and their dashed forms; throws InvalidInput.
EffectMode parse_effect_mode(std::string_view text);

struct ScenarioSpec {
  int n = 4;  // preparations
  int m = 2;  // dichotomic measurements (ignored for fixed modes)
  int d = 2;
  std::size_t trials = 1000;
  SamplerConfig state_sampler;
  EffectMode effect_mode = EffectMode::random_projective;
  SamplerConfig effect_sampler;  // used by random_povm
  std::vector<DichotomicMeasurement> fixed_effects;
  double threshold = kDefaultThreshold;
  std::uint64_t base_seed = 0;
  double confidence = 0.99;
  double max_failure_rate = 0.01;
  RobustnessOptions solver;

  void validate() const;
  /// m for random modes, the number of fixed measurements otherwise.
  int measurement_count() const;
};

struct TrialOutcome {
  double r = 0.0;
  SolverStatus status = SolverStatus::infeasible_numerics;
  SolvePath path = SolvePath::simplex;
  double residual = 0.0;
  double wall_time = 0.0;
  std::string error;  // sampler/pipeline exception text, if any

  bool ok() const { return status != SolverStatus::infeasible_numerics; }
};

/// Samples trial `index` from RngStream(base_seed, index) and runs the pipeline.
/// Never throws for sampling or solver trouble; those become failed outcomes.
TrialOutcome run_trial(const ScenarioSpec& spec, std::size_t index);

struct TypicalityReport {
  std::size_t trials = 0;
  std::size_t contextual_count = 0;
  std::size_t valid_trials = 0;
  std::size_t failed_trials = 0;
  double typicality = 0.0;
  double wilson_lower = 0.0;
  double confidence = 0.99;
  double threshold = kDefaultThreshold;
  double mean_r = 0.0;
  double std_r = 0.0;
  double residual_max = 0.0;
  double wall_time = 0.0;
  bool error = false;
  std::string diagnostic;
};

/// Aggregates outcomes in index order. Flags an error when no trial is
/// valid or when the failure fraction exceeds max_failure_rate.
TypicalityReport summarize_trials(const std::vector<TrialOutcome>& outcomes, double threshold,
                                  double confidence, double max_failure_rate = 0.01);

TypicalityReport estimate_typicality(const ScenarioSpec& spec, std::size_t workers = 1,
                                     std::vector<TrialOutcome>* outcomes = nullptr);

/// Two-sided standard-normal quantile: P(|Z| <= z) = confidence.
double two_sided_z(double confidence);
double wilson_lower_bound(std::size_t successes, std::size_t trials, double confidence = 0.99);

struct MinimalPrepsResult {
  int n = 0;
  std::vector<std::pair<int, TypicalityReport>> history;
};

/// Smallest n in [n_start, n_max] whose typicality exceeds target.
/// Throws InvalidScenario for a single measurement, SearchExhausted otherwise.
MinimalPrepsResult minimal_preparations(ScenarioSpec spec, double target, int n_start, int n_max,
                                        std::size_t workers = 1);

struct CalibrationOptions {
  std::vector<double> thresholds{1e-5, 1e-6, 1e-7, 1e-8, 1e-9};
  std::vector<std::size_t> trial_counts{100, 1000, 10000};
  std::vector<SolvePath> paths{SolvePath::simplex, SolvePath::interior_point};
  bool include_mixed = true;
  std::uint64_t base_seed = 0;
  double confidence = 0.99;
  std::size_t workers = 1;
};

struct CalibrationRow {
  SolvePath path = SolvePath::simplex;
  bool mixed = false;
  std::size_t trials = 0;
  double threshold = 0.0;
  std::size_t contextual_count = 0;
  std::size_t valid_trials = 0;
  std::size_t failed_trials = 0;
  double typicality = 0.0;
  double wilson_lower = 0.0;
  double runtime = 0.0;  // seconds for the whole N-trial batch
};

struct CalibrationSummary {
  SolvePath path = SolvePath::simplex;
  bool mixed = false;
  /// Tightest swept threshold such that it and every looser one give zero
  /// contextual trials at every N.
  std::optional<double> tightest_zero_threshold;
};

struct CalibrationTable {
  std::vector<CalibrationRow> rows;
  std::vector<CalibrationSummary> summaries;
};

/// The (n=4, m=2, d=2) sanity scenario across thresholds, N values and solve paths.
CalibrationTable calibrate(const CalibrationOptions& options);

}  // namespace sembed
