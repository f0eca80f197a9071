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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Criterion 10 runs the CLI and needs its path as the
// first argument.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "oracles.hpp"
#include "sembed/cone.hpp"
#include "sembed/io.hpp"
#include "sembed/pom.hpp"
#include "sembed/robustness.hpp"
#include "sembed/sampling.hpp"
#include "sembed/typicality.hpp"

using namespace sembed;
namespace fs = std::filesystem;

namespace {

// Tolerances and gates.
constexpr double kThreshold = 1e-7;
constexpr std::size_t kDeskTrials = 1000;
constexpr double kPomR = 0.42;
constexpr double kPomRTol = 0.005;
constexpr double kPomS = 0.7887;
constexpr double kPomSTol = 0.002;
constexpr double kPomAdvantage = 0.183;
constexpr double kPomAdvantageTol = 0.005;
constexpr double kSpotGate = 0.97;
constexpr double kWilsonGate = 0.99999;
constexpr double kMembershipTol = 1e-8;
constexpr double kPropertyTol = 1e-6;
constexpr double kResidualTol = 1e-8;
constexpr double kMeanRTol = 0.01;

std::size_t workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) ok = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (cond ? "" : " [x]");
  }
};

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

bool within_sd(double observed, double p, std::size_t n, double k = 3.0) {
  return std::abs(observed - p) <= k * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

ScenarioSpec scenario(int n, int m, bool mixed, EffectMode mode, std::size_t trials) {
  ScenarioSpec s;
  s.n = n;
  s.m = m;
  s.trials = trials;
  s.threshold = kThreshold;
  s.state_sampler.pure = !mixed;
  s.effect_mode = mode;
  s.effect_sampler.pure = mode != EffectMode::random_povm;
  return s;
}

struct Sample {
  std::vector<DensityMatrix> states;
  std::vector<DichotomicMeasurement> measurements;
};

Sample random_sample(int n, int m, int d, RngStream& rng, bool mixed) {
  SamplerConfig sc;
  sc.dim = d;
  sc.pure = !mixed;
  Sample s;
  for (int i = 0; i < n; ++i) s.states.push_back(sample_state(sc, rng));
  for (int j = 0; j < m; ++j) s.measurements.push_back(sample_dichotomic_povm(sc, rng));
  return s;
}

// ---- criteria ----

void four_state_scenario(Check& c) {
  const auto pure = estimate_typicality(
      scenario(4, 2, false, EffectMode::random_projective, kDeskTrials), workers());
  const auto mixed =
      estimate_typicality(scenario(4, 2, true, EffectMode::random_povm, kDeskTrials), workers());
  c.require(pure.contextual_count == 0 && pure.valid_trials == kDeskTrials,
            "pure contextual=" + std::to_string(pure.contextual_count) +
                " N_s=" + std::to_string(pure.valid_trials));
  c.require(mixed.contextual_count == 0 && mixed.valid_trials == kDeskTrials,
            "mixed contextual=" + std::to_string(mixed.contextual_count) +
                " N_s=" + std::to_string(mixed.valid_trials));
}

void pom_golden(Check& c) {
  const Certification sym =
      certify(pom_cube_states(PomStates::symmetric), pom_optimal_measurements());
  const Certification flattened =
      certify(pom_cube_states(PomStates::flattened), pom_optimal_measurements());
  const double s_nc = pom_noncontextual_rate(3);
  const double s = success_from_robustness(sym.result.r, s_nc);
  c.require(sym.result.ok() && std::abs(sym.result.r - kPomR) <= kPomRTol,
            "r=" + fmt(sym.result.r));
  c.require(std::abs(s - kPomS) <= kPomSTol, "s=" + fmt(s));
  const double advantage = (s - s_nc) / s_nc;
  c.require(std::abs(advantage - kPomAdvantage) <= kPomAdvantageTol,
            "advantage=" + fmt(100 * advantage, 4) + "%");
  c.detail << "; flattened-variant r=" << fmt(flattened.result.r);
}

void single_measurement(Check& c) {
  double worst = 0.0;
  bool all_ok = true;
  for (std::size_t t = 0; t < 1000; ++t) {
    RngStream rng(1003, t);
    const int n = 1 + static_cast<int>(t % 12);
    const Sample s = random_sample(n, 1, 2 + (t % 5 == 0), rng, t % 2 == 1);
    const Certification cert = certify(s.states, s.measurements);
    all_ok = all_ok && cert.result.ok();
    if (cert.result.ok()) worst = std::max(worst, cert.result.r);
  }
  c.require(all_ok, "all solves certified");
  c.require(worst <= kThreshold, "max r=" + fmt(worst));
}

void spot_checks(Check& c) {
  const auto a =
      estimate_typicality(scenario(7, 8, false, EffectMode::random_projective, kDeskTrials),
                          workers());
  const auto b =
      estimate_typicality(scenario(10, 4, false, EffectMode::random_projective, kDeskTrials),
                          workers());
  c.require(a.typicality > kSpotGate, "t(7,8)=" + fmt(a.typicality));
  c.require(b.typicality > kSpotGate, "t(10,4)=" + fmt(b.typicality));
}

void fixed_grid(Check& c) {
  const auto g4 = estimate_typicality(scenario(4, 0, false, EffectMode::fixed_grid, kDeskTrials),
                                      workers());
  const auto g6 = estimate_typicality(scenario(6, 0, false, EffectMode::fixed_grid, kDeskTrials),
                                      workers());
  const auto g5 = estimate_typicality(scenario(5, 0, false, EffectMode::fixed_grid, kDeskTrials),
                                      workers());
  const auto m14 = estimate_typicality(scenario(14, 0, true, EffectMode::fixed_grid, kDeskTrials),
                                       workers());
  c.require(g4.contextual_count == 0, "pure n=4 count=" + std::to_string(g4.contextual_count));
  c.require(g6.contextual_count >= 995, "pure n=6 count=" + std::to_string(g6.contextual_count));
  c.require(within_sd(g5.typicality, 0.9976, g5.valid_trials),
            "pure n=5 t=" + fmt(g5.typicality));
  c.require(m14.contextual_count >= 990,
            "mixed n=14 count=" + std::to_string(m14.contextual_count));
}

void pom_cases(Check& c) {
  auto run = [](PomCase pc) {
    PomTaskSpec s;
    s.pom_case = pc;
    s.trials = kDeskTrials;
    s.threshold = kThreshold;
    return pom_report(s, workers());
  };
  const PomReport proj = run(PomCase::random_projective);
  const PomReport povm = run(PomCase::random_povm);
  const PomReport rf = run(PomCase::rf_misalignment);
  c.require(within_sd(proj.typicality, 0.986, proj.valid_trials),
            "projective t=" + fmt(proj.typicality));
  c.require(std::abs(proj.mean_r - 0.22) <= kMeanRTol, "projective mean r=" + fmt(proj.mean_r));
  c.require(within_sd(povm.typicality, 0.555, povm.valid_trials),
            "povm t=" + fmt(povm.typicality));
  c.require(std::abs(povm.mean_r - 0.06) <= kMeanRTol, "povm mean r=" + fmt(povm.mean_r));
  c.require(rf.typicality >= 0.999, "rf t=" + fmt(rf.typicality));
  c.require(std::abs(rf.mean_r - 0.30) <= kMeanRTol, "rf mean r=" + fmt(rf.mean_r));
}

void wilson(Check& c) {
  const double w = wilson_lower_bound(1000000, 1000000, 0.99);
  c.require(w >= kWilsonGate, "bound=" + fmt(w, 8));
  bool monotone = true;
  for (std::size_t n : {10u, 1000u, 100000u}) {
    double prev = -1.0;
    for (std::size_t s = 0; s <= n; s += std::max<std::size_t>(1, n / 500)) {
      const double v = wilson_lower_bound(s, n, 0.99);
      monotone = monotone && v >= prev && v <= static_cast<double>(s) / n + 1e-15;
      prev = v;
    }
  }
  double prev = 0.0;
  bool converges = true;
  for (std::size_t n : {100u, 10000u, 1000000u}) {
    const double v = wilson_lower_bound(n / 2, n, 0.99);
    converges = converges && v > prev && 0.5 - v < 3.0 / std::sqrt(static_cast<double>(n));
    prev = v;
  }
  const double z = oracle::inverse_normal_cdf(0.995);
  const double t = 0.5;
  const double n = 1000;
  const double ref =
      (t + z * z / (2 * n) - z * std::sqrt(t * (1 - t) / n + z * z / (4 * n * n))) / (1 + z * z / n);
  c.require(monotone, "monotone in successes");
  c.require(converges, "approaches the estimate as N grows");
  c.require(std::abs(wilson_lower_bound(500, 1000, 0.99) - ref) < 1e-12,
            "matches reference formula");
}

void cone_oracle(Check& c) {
  std::mt19937_64 gen(808);
  std::normal_distribution<double> nd;
  std::exponential_distribution<double> ex;
  std::uniform_int_distribution<int> kdist(1, 4);
  std::uniform_int_distribution<int> pdist(1, 10);
  std::size_t disagreements = 0;
  std::size_t compared = 0;
  std::size_t skipped = 0;
  for (int cone = 0; cone < 500; ++cone) {
    const int k = kdist(gen);
    const int p = pdist(gen);
    RMatrix g(p, k);
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < k; ++j) g(i, j) = nd(gen);
    }
    const ConeHRepresentation h = facet_enumeration(g);
    for (int probe = 0; probe < 10000; ++probe) {
      RVector v(k);
      switch (probe % 3) {
        case 0: {
          RVector lam(p);
          for (int i = 0; i < p; ++i) lam(i) = ex(gen);
          v = g.transpose() * lam;
          break;
        }
        case 1: {
          RVector lam = RVector::Zero(p);
          lam(probe % p) = ex(gen);
          lam((probe / 3) % p) += ex(gen);
          v = g.transpose() * lam;
          for (int j = 0; j < k; ++j) v(j) += 0.05 * nd(gen);
          break;
        }
        default:
          for (int j = 0; j < k; ++j) v(j) = nd(gen);
      }
      const double dist = oracle::cone_l1_distance(g, v);
      const double margin = h.facets.rows() ? (h.facets * v).minCoeff() : 0.0;
      const bool dd = cone_contains(h, v, kMembershipTol);
      const bool lp = dist <= kMembershipTol;
      ++compared;
      if (dd == lp) continue;
      if (std::abs(margin) <= kMembershipTol || dist <= kMembershipTol) {
        ++skipped;
      } else {
        ++disagreements;
      }
    }
  }
  c.require(disagreements == 0, "disagreements=" + std::to_string(disagreements) + " of " +
                                    std::to_string(compared) + " (within tolerance " +
                                    std::to_string(skipped) + ")");
}

void lp_properties(Check& c) {
  double worst_mono = 0.0;
  double worst_drift = 0.0;
  double worst_residual = 0.0;
  std::size_t solves = 0;
  bool all_ok = true;
  auto solve = [&](const std::vector<DensityMatrix>& st,
                   const std::vector<DichotomicMeasurement>& ms) {
    const Certification cert = certify(st, ms);
    all_ok = all_ok && cert.result.ok();
    worst_residual = std::max(worst_residual, cert.result.residual);
    ++solves;
    return cert.result.r;
  };
  SamplerConfig sc;
  for (std::size_t t = 0; t < 200; ++t) {
    RngStream rng(909, t);
    const bool mixed = t % 2 == 1;
    Sample s = random_sample(5 + t % 3, 2 + t % 3, 2, rng, mixed);
    const double base = solve(s.states, s.measurements);
    Sample ext = s;
    if (t % 2 == 0) {
      ext.states.push_back(sample_state(sc, rng));
    } else {
      ext.measurements.push_back(sample_dichotomic_povm(sc, rng));
    }
    worst_mono = std::max(worst_mono, base - solve(ext.states, ext.measurements));
  }
  for (std::size_t t = 0; t < 200; ++t) {
    RngStream rng(910, t);
    const int d = 2 + (t % 5 == 0);
    const Sample s = random_sample(6, 3, d, rng, t % 2 == 1);
    const CMatrix u = haar_unitary(d, rng);
    const double a = solve(s.states, s.measurements);
    const double b = solve(rotate_states(s.states, u), rotate_measurements(s.measurements, u));
    worst_drift = std::max(worst_drift, std::abs(a - b));
  }
  c.require(all_ok, "all " + std::to_string(solves) + " solves certified");
  c.require(worst_mono < kPropertyTol, "max monotonicity violation=" + fmt(worst_mono));
  c.require(worst_drift < kPropertyTol, "max unitary drift=" + fmt(worst_drift));
  c.require(worst_residual < kResidualTol, "max residual=" + fmt(worst_residual));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void determinism(Check& c, const std::string& cli) {
  if (cli.empty()) {
    c.require(false, "CLI path not given");
    return;
  }
  const fs::path root = fs::temp_directory_path() / "sembed_acceptance_determinism";
  fs::remove_all(root);
  const std::string args =
      " sweep -n 4..7 -m 2..4 -N 200 --mixed-states --seed 17 --formats json,csv,jsonl -q";
  for (int w : {1, 8}) {
    const fs::path out = root / ("w" + std::to_string(w));
    const std::string cmd = cli + args + " --workers " + std::to_string(w) + " --output-dir " +
                            out.string() + " > /dev/null";
    if (std::system(cmd.c_str()) != 0) {
      c.require(false, "sweep with workers " + std::to_string(w) + " failed");
      return;
    }
  }
  auto run_dir = [](const fs::path& p) {
    for (const auto& e : fs::directory_iterator(p)) return e.path();
    return fs::path{};
  };
  const fs::path a = run_dir(root / "w1");
  const fs::path b = run_dir(root / "w8");
  c.require(a.filename() == b.filename(), "same run directory " + a.filename().string());
  c.require(slurp(a / "sweep.csv") == slurp(b / "sweep.csv"), "CSV identical");
  c.require(slurp(a / "trials.jsonl") == slurp(b / "trials.jsonl"), "JSONL identical");
  Json ja = Json::parse(slurp(a / "report.json"));
  Json jb = Json::parse(slurp(b / "report.json"));
  ja.erase("metadata");
  jb.erase("metadata");
  c.require(ja.dump() == jb.dump(), "JSON payload identical");
  fs::remove_all(root);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  struct Item {
    int id;
    const char* title;
    std::function<void(Check&)> run;
  };
  const std::vector<Item> items{
      {1, "(4,2,2) typicality is zero, pure and mixed", four_state_scenario},
      {2, "optimal POM robustness and success rate", pom_golden},
      {3, "single measurement is always classical", single_measurement},
      {4, "random projective spot checks", spot_checks},
      {5, "fixed projector grid spot checks", fixed_grid},
      {6, "POM case studies", pom_cases},
      {7, "Wilson lower bound", wilson},
      {8, "cone membership agrees with LP oracle", cone_oracle},
      {9, "LP property suite", lp_properties},
      {10, "sweep determinism across worker counts", [&](Check& c) { determinism(c, cli); }},
  };
  int failures = 0;
  for (const auto& item : items) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      item.run(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !c.ok;
    std::cout << (c.ok ? "PASS" : "FAIL") << " [" << item.id << "] " << item.title << " ("
              << c.detail.str() << ") " << fmt(secs, 3) << "s" << std::endl;
  }
  std::cout << (items.size() - failures) << "/" << items.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
