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

// File formats: fragment JSON, report JSON envelopes, sweep / table CSV.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sembed/pom.hpp"
#include "sembed/robustness.hpp"
#include "sembed/typicality.hpp"

namespace sembed {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct FragmentData {
  int d = 0;
  std::vector<DensityMatrix> states;
  std::vector<DichotomicMeasurement> measurements;
};

/// Flat row-major list of [re, im] pairs.
Json operator_to_json(const CMatrix& m);
/// Accepts the flat form or a nested list of rows. Throws InvalidInput.
CMatrix operator_from_json(const Json& j, int d);

Json fragment_to_json(const FragmentData& f);
/// {version, d, states, measurements}; either list may be absent.
FragmentData fragment_from_json(const Json& j);
FragmentData load_fragment(const std::filesystem::path& path);
/// Concatenates states and measurements; dimensions must agree.
FragmentData merge_fragments(const FragmentData& a, const FragmentData& b);

Json to_json(const RobustnessResult& r, bool include_sigma = true);
Json to_json(const ClassicalityVerdict& v);
Json to_json(const SamplerConfig& c);
Json to_json(const ScenarioSpec& s);
/// Timing fields are left out; callers put them into the metadata block.
Json to_json(const TypicalityReport& r);
Json to_json(const PomTaskSpec& s);
Json to_json(const PomReport& r);
Json to_json(const CalibrationTable& t);
Json to_json(const ProjectiveGrid& g);

/// Per-trial log record {r, status, residual, wall_time, n, m, d, seed, trial}.
Json trial_record(const ScenarioSpec& spec, std::size_t index, const TrialOutcome& o);

Json make_report(Json config, Json results, Json diagnostics);

inline constexpr const char* kSweepCsvHeader = "n,m,d,N,N_s,t,wilson_lower,mean_r,std_r";
std::string sweep_csv_row(const ScenarioSpec& spec, const TypicalityReport& r);

inline constexpr const char* kPomCsvHeader =
    "strategy,typicality,mean_r,std_r,mean_s,std_s,mean_advantage,N_s";
std::string pom_csv_row(const PomTaskSpec& spec, const PomReport& r);

inline constexpr const char* kCalibrationCsvHeader =
    "path,mode,N,threshold,contextual,N_s,failed,t,wilson_lower,runtime_s";
std::string calibration_csv(const CalibrationTable& t);

void write_matrix_csv(std::ostream& os, const RMatrix& m);

}  // namespace sembed
