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

#include <gtest/gtest.h>

#include <cmath>

#include "sembed/errors.hpp"
#include "sembed/pom.hpp"
#include "sembed/robustness.hpp"
#include "sembed/sampling.hpp"

using namespace sembed;

namespace {

std::size_t index_of(int x1, int x2, int x3) { return 4 * x1 + 2 * x2 + x3; }

PomTaskSpec task(PomCase c, std::size_t trials) {
  PomTaskSpec s;
  s.pom_case = c;
  s.trials = trials;
  return s;
}

}  // namespace

TEST(Pom, CubeStates) {
  for (PomStates v : {PomStates::flattened, PomStates::symmetric}) {
    const auto st = pom_cube_states(v);
    ASSERT_EQ(st.size(), 8u);
    CMatrix avg = CMatrix::Zero(2, 2);
    for (const auto& rho : st) {
      EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
      EXPECT_NEAR(purity(rho), 1.0, 1e-10);
      avg += rho.matrix() / 8.0;
    }
    EXPECT_LT((avg - CMatrix::Identity(2, 2) / 2.0).norm(), 1e-12);
  }
  const auto flattened = pom_cube_states(PomStates::flattened);
  EXPECT_NEAR(flattened[0].matrix()(0, 0).real(), 0.75, 1e-15);
  EXPECT_NEAR(flattened[0].matrix()(1, 1).real(), 0.25, 1e-15);
  EXPECT_NEAR(flattened[index_of(0, 0, 1)].matrix()(0, 0).real(), 0.25, 1e-15);
}

TEST(Pom, ParityOblivious) {
  for (PomStates v : {PomStates::flattened, PomStates::symmetric}) {
    const auto st = pom_cube_states(v);
    const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& pr : pairs) {
      for (int parity = 0; parity < 2; ++parity) {
        CMatrix avg = CMatrix::Zero(2, 2);
        for (int x = 0; x < 8; ++x) {
          const int bits[3] = {(x >> 2) & 1, (x >> 1) & 1, x & 1};
          if ((bits[pr[0]] ^ bits[pr[1]]) == parity) {
            avg += st[index_of(bits[0], bits[1], bits[2])].matrix() / 4.0;
          }
        }
        EXPECT_LT((avg - CMatrix::Identity(2, 2) / 2.0).norm(), 1e-10);
      }
    }
  }
}

TEST(Pom, NoncontextualRate) {
  EXPECT_NEAR(pom_noncontextual_rate(3), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(pom_noncontextual_rate(1), 1.0);
  EXPECT_EQ(pom_noncontextual_rate(2), 0.75);
  EXPECT_THROW(pom_noncontextual_rate(0), InvalidInput);
}

TEST(Pom, SuccessFromRobustness) {
  EXPECT_NEAR(success_from_robustness(0.0, 2.0 / 3.0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(success_from_robustness(0.42, 2.0 / 3.0), 0.788, 0.001);
  EXPECT_NEAR(success_from_robustness(1.0 - 1.0 / std::sqrt(2.0), 0.75),
              (1.0 + 1.0 / std::sqrt(2.0)) / 2.0, 1e-12);
  EXPECT_NEAR(success_from_robustness(1.0 - 1.0 / std::sqrt(3.0), 2.0 / 3.0),
              0.5 * (1.0 + 1.0 / std::sqrt(3.0)), 1e-12);
  double prev = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double s = success_from_robustness(i / 100.0, 2.0 / 3.0);
    EXPECT_GT(s, prev);
    prev = s;
  }
  EXPECT_THROW(success_from_robustness(1.0, 0.5), InvalidInput);
  EXPECT_THROW(success_from_robustness(-0.1, 0.5), InvalidInput);
}

TEST(Pom, OptimalCase) {
  std::vector<PomTrial> trials;
  const PomReport rep = pom_report(task(PomCase::optimal, 1000), 1, &trials);
  EXPECT_EQ(rep.trials, 1u);
  ASSERT_EQ(trials.size(), 1u);
  EXPECT_NEAR(rep.mean_r, 0.42, 0.005);
  EXPECT_NEAR(rep.mean_s, 0.788, 0.002);
  EXPECT_EQ(rep.typicality, 1.0);
}

TEST(Pom, RandomPovmBoundedByOptimal) {
  PomTaskSpec s = task(PomCase::random_povm, 200);
  std::vector<PomTrial> trials;
  pom_report(s, 1, &trials);
  const double opt = certify(pom_optimal_states(), pom_optimal_measurements()).result.r;
  for (const auto& t : trials) {
    ASSERT_TRUE(t.ok());
    EXPECT_GE(t.r, 0.0);
    EXPECT_LE(t.r, opt + 1e-3);
  }
}

TEST(Pom, RfMisalignmentCovariance) {
  PomTaskSpec s = task(PomCase::rf_misalignment, 20);
  RngStream rng(61, 0);
  for (std::size_t i = 0; i < 20; ++i) {
    const auto ms = pom_case_measurements(s, i);
    const auto st = pom_cube_states(s.states);
    const double r = certify(st, ms).result.r;
    const CMatrix u = haar_unitary(2, rng);
    const double rr = certify(rotate_states(st, u), rotate_measurements(ms, u)).result.r;
    EXPECT_NEAR(r, rr, 1e-6);
  }
}

TEST(Pom, SuccessExceedsBoundIffContextual) {
  PomTaskSpec s = task(PomCase::random_povm, 200);
  std::vector<PomTrial> trials;
  const PomReport rep = pom_report(s, 1, &trials);
  const double s_nc = pom_noncontextual_rate(3);
  for (const auto& t : trials) {
    EXPECT_EQ(t.r > 0.0, t.s > s_nc);
  }
  EXPECT_NEAR(rep.s_nc, s_nc, 1e-15);
}

TEST(Pom, RandomCaseSpreads) {
  for (PomCase c : {PomCase::random_projective, PomCase::rf_misalignment}) {
    const PomReport rep = pom_report(task(c, 300));
    EXPECT_GT(rep.std_r, 0.07 / 2);
    EXPECT_LT(rep.std_r, 0.07 * 2);
    EXPECT_GT(rep.std_s, 0.02 / 2);
    EXPECT_LT(rep.std_s, 0.02 * 2);
  }
}

TEST(Pom, WorkerIndependence) {
  const PomTaskSpec s = task(PomCase::random_projective, 100);
  const PomReport a = pom_report(s, 1);
  const PomReport b = pom_report(s, 3);
  EXPECT_EQ(a.mean_r, b.mean_r);
  EXPECT_EQ(a.contextual_count, b.contextual_count);
}

TEST(Pom, Parsing) {
  EXPECT_EQ(parse_pom_case("rf"), PomCase::rf_misalignment);
  EXPECT_EQ(parse_pom_case("random-povm"), PomCase::random_povm);
  EXPECT_EQ(parse_pom_states("symmetric"), PomStates::symmetric);
  EXPECT_THROW(parse_pom_case("bogus"), InvalidInput);
  PomTaskSpec bad;
  bad.k = 4;
  EXPECT_THROW(bad.validate(), InvalidScenario);
}
