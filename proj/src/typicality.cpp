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

#include "sembed/typicality.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "sembed/errors.hpp"
#include "sembed/parallel.hpp"

namespace sembed {
namespace {

const ProjectiveGrid& shared_grid() {
  static const ProjectiveGrid grid = fixed_projective_grid();
  return grid;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string_view to_string(EffectMode mode) {
  switch (mode) {
    case EffectMode::random_projective: return "random_projective";
    case EffectMode::random_povm: return "random_povm";
    case EffectMode::fixed_grid: return "fixed_grid";
    case EffectMode::fixed_list: return "fixed_list";
  }
  return "unknown";
}

EffectMode parse_effect_mode(std::string_view text) {
  std::string s(text);
  std::replace(s.begin(), s.end(), '-', '_');
  for (auto mode : {EffectMode::random_projective, EffectMode::random_povm, EffectMode::fixed_grid,
                    EffectMode::fixed_list}) {
    if (s == to_string(mode)) return mode;
  }
  throw InvalidInput("unknown effect mode '" + std::string(text) + "'");
}

void ScenarioSpec::validate() const {
  auto fail = [](const std::string& msg) { throw InvalidScenario(msg); };
  if (n < 1) fail("n must be at least 1");
  if (d < 2) fail("d must be at least 2");
  if (trials < 1) fail("N must be at least 1");
  if (!(threshold > 0.0)) fail("threshold must be positive");
  if (!(confidence > 0.0 && confidence < 1.0)) fail("confidence must lie in (0, 1)");
  switch (effect_mode) {
    case EffectMode::random_projective:
    case EffectMode::random_povm:
      if (m < 1) fail("m must be at least 1");
      break;
    case EffectMode::fixed_grid:
      if (d != 2) fail("the fixed projective grid is defined for qubits only (d = 2)");
      break;
    case EffectMode::fixed_list:
      if (fixed_effects.empty()) fail("fixed_list mode needs at least one measurement");
      for (const auto& meas : fixed_effects) {
        if (meas.first.dim() != d) fail("fixed measurement dimension differs from d");
      }
      break;
  }
  try {
    SamplerConfig s = state_sampler;
    s.dim = d;
    s.validate();
    SamplerConfig e = effect_sampler;
    e.dim = d;
    e.pure = effect_mode != EffectMode::random_povm;
    e.validate();
  } catch (const InvalidInput& ex) {
    fail(ex.what());
  }
}

int ScenarioSpec::measurement_count() const {
  switch (effect_mode) {
    case EffectMode::fixed_grid: return static_cast<int>(shared_grid().measurements.size());
    case EffectMode::fixed_list: return static_cast<int>(fixed_effects.size());
    default: return m;
  }
}

TrialOutcome run_trial(const ScenarioSpec& spec, std::size_t index) {
  const auto start = std::chrono::steady_clock::now();
  TrialOutcome out;
  try {
    RngStream rng(spec.base_seed, index);
    SamplerConfig state_cfg = spec.state_sampler;
    state_cfg.dim = spec.d;
    std::vector<DensityMatrix> states;
    states.reserve(static_cast<std::size_t>(spec.n));
    for (int i = 0; i < spec.n; ++i) states.push_back(sample_state(state_cfg, rng));

    std::vector<DichotomicMeasurement> sampled;
    std::span<const DichotomicMeasurement> measurements;
    switch (spec.effect_mode) {
      case EffectMode::random_projective:
      case EffectMode::random_povm: {
        SamplerConfig cfg = spec.effect_sampler;
        cfg.dim = spec.d;
        cfg.pure = spec.effect_mode == EffectMode::random_projective;
        for (int i = 0; i < spec.m; ++i) sampled.push_back(sample_dichotomic_povm(cfg, rng));
        measurements = sampled;
        break;
      }
      case EffectMode::fixed_grid:
        measurements = shared_grid().measurements;
        break;
      case EffectMode::fixed_list:
        measurements = spec.fixed_effects;
        break;
    }
    const Certification c = certify(states, measurements, spec.solver);
    out.r = c.result.r;
    out.status = c.result.status;
    out.path = c.result.path;
    out.residual = c.result.residual;
  } catch (const std::exception& ex) {
    out.status = SolverStatus::infeasible_numerics;
    out.error = ex.what();
  }
  out.wall_time = seconds_since(start);
  return out;
}

TypicalityReport summarize_trials(const std::vector<TrialOutcome>& outcomes, double threshold,
                                  double confidence, double max_failure_rate) {
  TypicalityReport rep;
  rep.trials = outcomes.size();
  rep.confidence = confidence;
  rep.threshold = threshold;
  double sum = 0.0;
  for (const auto& o : outcomes) {
    if (!o.ok()) {
      ++rep.failed_trials;
      continue;
    }
    ++rep.valid_trials;
    if (o.r > threshold) ++rep.contextual_count;
    sum += o.r;
    rep.residual_max = std::max(rep.residual_max, o.residual);
    rep.wall_time += o.wall_time;
  }
  if (rep.valid_trials == 0) {
    rep.error = true;
    rep.diagnostic = "no trial produced a certified solve";
    return rep;
  }
  const double ns = static_cast<double>(rep.valid_trials);
  rep.mean_r = sum / ns;
  double sq = 0.0;
  for (const auto& o : outcomes) {
    if (o.ok()) sq += (o.r - rep.mean_r) * (o.r - rep.mean_r);
  }
  rep.std_r = rep.valid_trials > 1 ? std::sqrt(sq / (ns - 1.0)) : 0.0;
  rep.typicality = static_cast<double>(rep.contextual_count) / ns;
  rep.wilson_lower = wilson_lower_bound(rep.contextual_count, rep.valid_trials, confidence);
  const double failure_rate =
      static_cast<double>(rep.failed_trials) / static_cast<double>(rep.trials);
  if (failure_rate > max_failure_rate) {
    rep.error = true;
    std::ostringstream os;
    os << rep.failed_trials << " of " << rep.trials << " trials failed (rate " << failure_rate
       << " exceeds " << max_failure_rate << ")";
    for (const auto& o : outcomes) {
      if (!o.ok() && !o.error.empty()) {
        os << "; first error: " << o.error;
        break;
      }
    }
    rep.diagnostic = os.str();
  }
  return rep;
}

TypicalityReport estimate_typicality(const ScenarioSpec& spec, std::size_t workers,
                                     std::vector<TrialOutcome>* outcomes) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<TrialOutcome> results(spec.trials);
  parallel_for(spec.trials, workers, [&](std::size_t i) { results[i] = run_trial(spec, i); });
  TypicalityReport rep =
      summarize_trials(results, spec.threshold, spec.confidence, spec.max_failure_rate);
  rep.wall_time = seconds_since(start);
  if (outcomes) *outcomes = std::move(results);
  return rep;
}

double two_sided_z(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InvalidInput("confidence must lie in (0, 1)");
  }
  const boost::math::normal_distribution<double> n01;
  return boost::math::quantile(n01, 0.5 + confidence / 2.0);
}

double wilson_lower_bound(std::size_t successes, std::size_t trials, double confidence) {
  if (trials == 0) throw InvalidInput("Wilson bound needs at least one valid trial");
  if (successes > trials) throw InvalidInput("successes exceed trials");
  const double z = two_sided_z(confidence);
  const double ns = static_cast<double>(trials);
  const double t = static_cast<double>(successes) / ns;
  const double z2 = z * z;
  const double bound = (t + z2 / (2.0 * ns) - z / (2.0 * ns) * std::sqrt(4.0 * ns * t * (1.0 - t) + z2)) /
                       (1.0 + z2 / ns);
  return std::clamp(bound, 0.0, t);
}

MinimalPrepsResult minimal_preparations(ScenarioSpec spec, double target, int n_start,
                                        int n_max, std::size_t workers) {
  if (spec.measurement_count() == 1) {
    throw InvalidScenario(
        "a single dichotomic measurement is always simplex-embeddable; the search would never "
        "terminate");
  }
  if (n_start < 1 || n_max < n_start) throw InvalidScenario("invalid preparation range");
  MinimalPrepsResult res;
  for (int n = n_start; n <= n_max; ++n) {
    spec.n = n;
    TypicalityReport rep = estimate_typicality(spec, workers);
    if (rep.error) throw NumericalFailure("n = " + std::to_string(n) + ": " + rep.diagnostic);
    const bool hit = rep.typicality > target;
    res.history.emplace_back(n, std::move(rep));
    if (hit) {
      res.n = n;
      return res;
    }
  }
  std::ostringstream os;
  os << "typicality never exceeded " << target << " for n in [" << n_start << ", " << n_max << "]";
  throw SearchExhausted(os.str());
}

CalibrationTable calibrate(const CalibrationOptions& options) {
  CalibrationTable table;
  std::vector<double> thresholds = options.thresholds;
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  for (SolvePath path : options.paths) {
    for (bool mixed : {false, true}) {
      if (mixed && !options.include_mixed) continue;
      ScenarioSpec spec;
      spec.n = 4;
      spec.m = 2;
      spec.d = 2;
      spec.state_sampler.pure = !mixed;
      spec.effect_mode = mixed ? EffectMode::random_povm : EffectMode::random_projective;
      spec.effect_sampler.pure = !mixed;
      spec.base_seed = options.base_seed;
      spec.confidence = options.confidence;
      spec.solver.primary = path;
      spec.solver.allow_fallback = false;
      std::map<double, bool> all_zero;
      for (double th : thresholds) all_zero[th] = true;
      for (std::size_t count : options.trial_counts) {
        spec.trials = count;
        std::vector<TrialOutcome> outcomes;
        const TypicalityReport base = estimate_typicality(spec, options.workers, &outcomes);
        for (double th : thresholds) {
          const TypicalityReport rep = summarize_trials(outcomes, th, spec.confidence, 1.0);
          table.rows.push_back({path, mixed, count, th, rep.contextual_count, rep.valid_trials,
                                rep.failed_trials, rep.typicality, rep.wilson_lower, base.wall_time});
          if (rep.contextual_count != 0) all_zero[th] = false;
        }
      }
      CalibrationSummary summary{path, mixed, std::nullopt};
      for (double th : thresholds) {
        if (!all_zero[th]) break;
        summary.tightest_zero_threshold = th;
      }
      table.summaries.push_back(summary);
    }
  }
  return table;
}

}  // namespace sembed
