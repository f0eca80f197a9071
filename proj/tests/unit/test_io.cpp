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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sembed/errors.hpp"
#include "sembed/io.hpp"
#include "sembed/pom.hpp"

using namespace sembed;

TEST(Io, OperatorRoundTrip) {
  CMatrix m(2, 2);
  m << Complex(0.5, 0), Complex(0.1, -0.2), Complex(0.1, 0.2), Complex(0.5, 0);
  const Json j = operator_to_json(m);
  ASSERT_EQ(j.size(), 4u);
  EXPECT_EQ(operator_from_json(j, 2), m);
  const Json nested = Json::array({Json::array({j[0], j[1]}), Json::array({j[2], j[3]})});
  EXPECT_EQ(operator_from_json(nested, 2), m);
  EXPECT_THROW(operator_from_json(Json::array({1, 2, 3}), 2), InvalidInput);
}

TEST(Io, FragmentRoundTrip) {
  FragmentData f{2, pom_optimal_states(), pom_optimal_measurements()};
  const Json j = fragment_to_json(f);
  EXPECT_EQ(j["version"], kSchemaVersion);
  const FragmentData g = fragment_from_json(Json::parse(j.dump()));
  ASSERT_EQ(g.states.size(), 8u);
  ASSERT_EQ(g.measurements.size(), 3u);
  for (std::size_t i = 0; i < 8; ++i) {
    EXPECT_LT((g.states[i].matrix() - f.states[i].matrix()).norm(), 1e-15);
  }
}

TEST(Io, FragmentErrors) {
  EXPECT_THROW(fragment_from_json(Json::array()), InvalidInput);
  EXPECT_THROW(fragment_from_json(Json{{"states", Json::array()}}), InvalidInput);
  Json j = fragment_to_json({2, pom_optimal_states(), pom_optimal_measurements()});
  j["version"] = 99;
  EXPECT_THROW(fragment_from_json(j), InvalidInput);
  j = fragment_to_json({2, pom_optimal_states(), pom_optimal_measurements()});
  j["measurements"][0][1] = j["measurements"][0][0];
  EXPECT_THROW(fragment_from_json(j), InvalidInput);
  j = fragment_to_json({2, pom_optimal_states(), {}});
  j["states"][0][0] = Json::array({2.0, 0.0});
  EXPECT_THROW(fragment_from_json(j), InvalidInput);
}

TEST(Io, LoadAndMerge) {
  const auto dir = std::filesystem::temp_directory_path() / "sembed_io_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "a.json") << fragment_to_json({2, pom_optimal_states(), {}}).dump();
    std::ofstream(dir / "b.json") << fragment_to_json({2, {}, pom_optimal_measurements()}).dump();
    std::ofstream(dir / "bad.json") << "{not json";
  }
  const FragmentData m = merge_fragments(load_fragment(dir / "a.json"), load_fragment(dir / "b.json"));
  EXPECT_EQ(m.states.size(), 8u);
  EXPECT_EQ(m.measurements.size(), 3u);
  EXPECT_THROW(load_fragment(dir / "bad.json"), InvalidInput);
  EXPECT_THROW(load_fragment(dir / "missing.json"), InvalidInput);
  EXPECT_THROW(merge_fragments(m, FragmentData{3, {}, {}}), InvalidInput);
  std::filesystem::remove_all(dir);
}

TEST(Io, CsvRows) {
  EXPECT_STREQ(kSweepCsvHeader, "n,m,d,N,N_s,t,wilson_lower,mean_r,std_r");
  ScenarioSpec s;
  s.n = 5;
  s.m = 3;
  TypicalityReport r;
  r.trials = 10;
  r.valid_trials = 9;
  r.typicality = 0.5;
  EXPECT_EQ(sweep_csv_row(s, r), "5,3,2,10,9,0.5,0,0,0");
  std::ostringstream os;
  RMatrix m(2, 2);
  m << 1, 0.5, -2, 0;
  write_matrix_csv(os, m);
  EXPECT_EQ(os.str(), "1,0.5\n-2,0\n");
}

TEST(Io, ReportEnvelope) {
  const Json rep = make_report({{"a", 1}}, {{"b", 2}}, {{"failed_trials", 0}});
  EXPECT_EQ(rep["version"], kSchemaVersion);
  EXPECT_EQ(rep["config"]["a"], 1);
  EXPECT_EQ(rep["results"]["b"], 2);
  EXPECT_EQ(rep["diagnostics"]["failed_trials"], 0);
}
