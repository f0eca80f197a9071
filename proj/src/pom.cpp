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

#include "sembed/pom.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "sembed/errors.hpp"
#include "sembed/parallel.hpp"
#include "sembed/sampling.hpp"
#include "sembed/typicality.hpp"

namespace sembed {

std::string_view to_string(PomStates s) {
  return s == PomStates::flattened ? "flattened" : "symmetric";
}

std::string_view to_string(PomCase c) {
  switch (c) {
    case PomCase::optimal: return "optimal";
    case PomCase::random_projective: return "random_projective";
    case PomCase::random_povm: return "random_povm";
    case PomCase::rf_misalignment: return "rf_misalignment";
  }
  return "unknown";
}

PomStates parse_pom_states(std::string_view text) {
  if (text == "flattened") return PomStates::flattened;
  if (text == "symmetric") return PomStates::symmetric;
  throw InvalidInput("unknown POM state variant '" + std::string(text) + "'");
}

PomCase parse_pom_case(std::string_view text) {
  std::string s(text);
  std::replace(s.begin(), s.end(), '-', '_');
  if (s == "rf") return PomCase::rf_misalignment;
  for (auto c : {PomCase::optimal, PomCase::random_projective, PomCase::random_povm,
                 PomCase::rf_misalignment}) {
    if (s == to_string(c)) return c;
  }
  throw InvalidInput("unknown POM case '" + std::string(text) + "'");
}

std::vector<DensityMatrix> pom_cube_states(PomStates variant) {
  std::vector<DensityMatrix> out;
  out.reserve(8);
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);
  for (int x1 = 0; x1 < 2; ++x1) {
    for (int x2 = 0; x2 < 2; ++x2) {
      for (int x3 = 0; x3 < 2; ++x3) {
        const double s1 = x1 ? -1.0 : 1.0;
        const double s2 = x2 ? -1.0 : 1.0;
        const double s3 = x3 ? -1.0 : 1.0;
        CMatrix rho(2, 2);
        if (variant == PomStates::flattened) {
          const double off = std::sqrt(1.5) / 2.0;
          rho << 1.0 + s3 / 2.0, off * Complex(s1, -s2), off * Complex(s1, s2), 1.0 - s3 / 2.0;
          rho /= 2.0;
        } else {
          rho = (CMatrix::Identity(2, 2) +
                 inv_sqrt3 * (s1 * pauli_x() + s2 * pauli_y() + s3 * pauli_z())) /
                2.0;
        }
        out.emplace_back(rho);
      }
    }
  }
  return out;
}

std::vector<DensityMatrix> pom_optimal_states() { return pom_cube_states(PomStates::flattened); }

std::vector<DichotomicMeasurement> pom_optimal_measurements() {
  std::vector<DichotomicMeasurement> out;
  for (const CMatrix& p : {pauli_x(), pauli_y(), pauli_z()}) {
    out.push_back(make_dichotomic(Effect((CMatrix::Identity(2, 2) + p) / 2.0)));
  }
  return out;
}

double pom_noncontextual_rate(int k) {
  if (k < 1) throw InvalidInput("k must be at least 1");
  return 0.5 * (1.0 + 1.0 / k);
}

double success_from_robustness(double r, double s_nc) {
  if (!(r >= 0.0 && r < 1.0)) throw InvalidInput("robustness must lie in [0, 1)");
  return (0.5 * r - s_nc) / (r - 1.0);
}

void PomTaskSpec::validate() const {
  if (k != 3) throw InvalidScenario("only the 3-bit task has built-in optimal encodings");
  if (trials < 1) throw InvalidScenario("N must be at least 1");
  if (!(threshold > 0.0)) throw InvalidScenario("threshold must be positive");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InvalidScenario("confidence must lie in (0, 1)");
  }
}

std::size_t PomTaskSpec::effective_trials() const {
  return pom_case == PomCase::optimal ? 1 : trials;
}

std::vector<DichotomicMeasurement> pom_case_measurements(const PomTaskSpec& spec,
                                                         std::size_t trial_index) {
  RngStream rng(spec.base_seed, trial_index);
  SamplerConfig cfg;
  cfg.dim = 2;
  std::vector<DichotomicMeasurement> out;
  switch (spec.pom_case) {
    case PomCase::optimal:
      return pom_optimal_measurements();
    case PomCase::random_projective:
    case PomCase::random_povm:
      cfg.pure = spec.pom_case == PomCase::random_projective;
      for (int i = 0; i < spec.k; ++i) out.push_back(sample_dichotomic_povm(cfg, rng));
      return out;
    case PomCase::rf_misalignment: {
      // One shared misalignment for all three measurements.
      const CMatrix u = haar_unitary(2, rng);
      const auto optimal = pom_optimal_measurements();
      return rotate_measurements(optimal, u);
    }
  }
  return out;
}

PomTrial pom_case_trial(const PomTaskSpec& spec, std::size_t trial_index) {
  PomTrial t;
  try {
    const auto states = pom_cube_states(spec.states);
    const auto ms = pom_case_measurements(spec, trial_index);
    const Certification c = certify(states, ms, spec.solver);
    t.status = c.result.status;
    if (c.result.ok()) {
      t.r = c.result.r;
      t.s = success_from_robustness(t.r, pom_noncontextual_rate(spec.k));
    }
  } catch (const std::exception& ex) {
    t.status = SolverStatus::infeasible_numerics;
    t.error = ex.what();
  }
  return t;
}

PomReport pom_report(const PomTaskSpec& spec, std::size_t workers,
                     std::vector<PomTrial>* trials) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t count = spec.effective_trials();
  std::vector<PomTrial> results(count);
  parallel_for(count, workers, [&](std::size_t i) { results[i] = pom_case_trial(spec, i); });

  PomReport rep;
  rep.trials = count;
  rep.s_nc = pom_noncontextual_rate(spec.k);
  double sum_r = 0.0, sum_s = 0.0;
  for (const auto& t : results) {
    if (!t.ok()) {
      ++rep.failed_trials;
      continue;
    }
    ++rep.valid_trials;
    if (t.r > spec.threshold) ++rep.contextual_count;
    sum_r += t.r;
    sum_s += t.s;
  }
  if (rep.valid_trials == 0) {
    rep.error = true;
    rep.diagnostic = "no trial produced a certified solve";
  } else {
    const double ns = static_cast<double>(rep.valid_trials);
    rep.mean_r = sum_r / ns;
    rep.mean_s = sum_s / ns;
    double vr = 0.0, vs = 0.0;
    for (const auto& t : results) {
      if (!t.ok()) continue;
      vr += (t.r - rep.mean_r) * (t.r - rep.mean_r);
      vs += (t.s - rep.mean_s) * (t.s - rep.mean_s);
    }
    if (rep.valid_trials > 1) {
      rep.std_r = std::sqrt(vr / (ns - 1.0));
      rep.std_s = std::sqrt(vs / (ns - 1.0));
    }
    rep.typicality = static_cast<double>(rep.contextual_count) / ns;
    rep.wilson_lower = wilson_lower_bound(rep.contextual_count, rep.valid_trials, spec.confidence);
    rep.mean_advantage = rep.mean_s / rep.s_nc - 1.0;
    const double failure_rate = static_cast<double>(rep.failed_trials) / static_cast<double>(count);
    if (failure_rate > spec.max_failure_rate) {
      rep.error = true;
      std::ostringstream os;
      os << rep.failed_trials << " of " << count << " trials failed";
      rep.diagnostic = os.str();
    }
  }
  rep.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (trials) *trials = std::move(results);
  return rep;
}

}  // namespace sembed
