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

#include "sembed/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sembed/errors.hpp"

namespace sembed {
namespace {

Complex entry_from_json(const Json& e) {
  if (e.is_number()) return Complex(e.get<double>(), 0.0);
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
    throw InvalidInput("operator entries must be [re, im] pairs");
  }
  return Complex(e[0].get<double>(), e[1].get<double>());
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace

Json operator_to_json(const CMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back({m(i, j).real(), m(i, j).imag()});
  }
  return out;
}

CMatrix operator_from_json(const Json& j, int d) {
  if (!j.is_array()) throw InvalidInput("operator must be a JSON array");
  CMatrix m(d, d);
  const auto dd = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
  // Nested rows: [[[re,im],...],...]; flat: [[re,im],...].
  const bool nested = j.size() == static_cast<std::size_t>(d) && !j.empty() && j[0].is_array() &&
                      !j[0].empty() && j[0][0].is_array();
  if (nested) {
    for (int r = 0; r < d; ++r) {
      if (!j[r].is_array() || j[r].size() != static_cast<std::size_t>(d)) {
        throw InvalidInput("operator row has wrong length");
      }
      for (int c = 0; c < d; ++c) m(r, c) = entry_from_json(j[r][c]);
    }
    return m;
  }
  if (j.size() != dd) throw InvalidInput("operator must have d*d entries");
  for (std::size_t k = 0; k < dd; ++k) {
    m(static_cast<Eigen::Index>(k) / d, static_cast<Eigen::Index>(k) % d) = entry_from_json(j[k]);
  }
  return m;
}

Json fragment_to_json(const FragmentData& f) {
  Json states = Json::array();
  for (const auto& s : f.states) states.push_back(operator_to_json(s.matrix()));
  Json ms = Json::array();
  for (const auto& m : f.measurements) {
    ms.push_back({operator_to_json(m.first.matrix()), operator_to_json(m.second.matrix())});
  }
  return Json{{"version", kSchemaVersion}, {"d", f.d}, {"states", states}, {"measurements", ms}};
}

FragmentData fragment_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("fragment file must contain a JSON object");
  if (!j.contains("d") || !j["d"].is_number_integer()) throw InvalidInput("fragment: missing integer d");
  if (j.contains("version") && j["version"] != kSchemaVersion) {
    throw InvalidInput("fragment: unsupported schema version " + j["version"].dump());
  }
  FragmentData f;
  f.d = j["d"].get<int>();
  if (f.d < 1) throw InvalidInput("fragment: d must be positive");
  if (j.contains("states")) {
    if (!j["states"].is_array()) throw InvalidInput("fragment: states must be an array");
    for (const auto& s : j["states"]) f.states.emplace_back(operator_from_json(s, f.d));
  }
  if (j.contains("measurements")) {
    if (!j["measurements"].is_array()) throw InvalidInput("fragment: measurements must be an array");
    for (const auto& m : j["measurements"]) {
      if (!m.is_array() || m.size() != 2) {
        throw InvalidInput("fragment: each measurement is a pair of effects");
      }
      Effect a(operator_from_json(m[0], f.d));
      Effect b(operator_from_json(m[1], f.d));
      const double gap = (a.matrix() + b.matrix() - CMatrix::Identity(f.d, f.d)).cwiseAbs().maxCoeff();
      if (gap > 1e-9) throw InvalidInput("fragment: measurement effects do not sum to identity");
      f.measurements.push_back({std::move(a), std::move(b)});
    }
  }
  return f;
}

FragmentData load_fragment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
  return fragment_from_json(j);
}

FragmentData merge_fragments(const FragmentData& a, const FragmentData& b) {
  if (a.d != b.d) throw InvalidInput("fragment files disagree on d");
  FragmentData out = a;
  out.states.insert(out.states.end(), b.states.begin(), b.states.end());
  out.measurements.insert(out.measurements.end(), b.measurements.begin(), b.measurements.end());
  return out;
}

Json to_json(const RobustnessResult& r, bool include_sigma) {
  Json j{{"r", r.r},
         {"status", to_string(r.status)},
         {"solve_path", to_string(r.path)},
         {"residual", std::isfinite(r.residual) ? Json(r.residual) : Json(nullptr)},
         {"iterations", r.iterations}};
  if (include_sigma) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < r.sigma.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index k = 0; k < r.sigma.cols(); ++k) row.push_back(r.sigma(i, k));
      rows.push_back(row);
    }
    j["sigma"] = rows;
  }
  return j;
}

Json to_json(const ClassicalityVerdict& v) {
  return {{"contextual", v.contextual}, {"r", v.r}, {"threshold", v.threshold}};
}

Json to_json(const SamplerConfig& c) {
  return {{"dim", c.dim},
          {"pure", c.pure},
          {"purity_lower", c.purity_lower},
          {"purity_upper", c.purity_upper},
          {"max_rejections", c.max_rejections}};
}

Json to_json(const ScenarioSpec& s) {
  Json j{{"n", s.n},
         {"m", s.measurement_count()},
         {"d", s.d},
         {"N", s.trials},
         {"state_sampler", to_json(s.state_sampler)},
         {"effect_mode", to_string(s.effect_mode)},
         {"threshold", s.threshold},
         {"seed", s.base_seed},
         {"confidence", s.confidence},
         {"solver", {{"primary", to_string(s.solver.primary)},
                     {"fallback", s.solver.allow_fallback}}}};
  if (s.effect_mode == EffectMode::random_povm) j["effect_sampler"] = to_json(s.effect_sampler);
  return j;
}

Json to_json(const TypicalityReport& r) {
  return {{"N", r.trials},
          {"contextual_count", r.contextual_count},
          {"N_s", r.valid_trials},
          {"failed_trials", r.failed_trials},
          {"t", r.typicality},
          {"wilson_lower", r.wilson_lower},
          {"confidence", r.confidence},
          {"threshold", r.threshold},
          {"mean_r", r.mean_r},
          {"std_r", r.std_r},
          {"error", r.error},
          {"diagnostic", r.diagnostic}};
}

Json to_json(const PomTaskSpec& s) {
  return {{"k", s.k},
          {"case", to_string(s.pom_case)},
          {"states", to_string(s.states)},
          {"N", s.effective_trials()},
          {"threshold", s.threshold},
          {"seed", s.base_seed},
          {"confidence", s.confidence},
          {"solver", {{"primary", to_string(s.solver.primary)},
                      {"fallback", s.solver.allow_fallback}}}};
}

Json to_json(const PomReport& r) {
  return {{"N", r.trials},
          {"N_s", r.valid_trials},
          {"failed_trials", r.failed_trials},
          {"contextual_count", r.contextual_count},
          {"t", r.typicality},
          {"wilson_lower", r.wilson_lower},
          {"mean_r", r.mean_r},
          {"std_r", r.std_r},
          {"mean_s", r.mean_s},
          {"std_s", r.std_s},
          {"s_nc", r.s_nc},
          {"mean_advantage", r.mean_advantage},
          {"error", r.error},
          {"diagnostic", r.diagnostic}};
}

Json to_json(const CalibrationTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"path", to_string(r.path)},
                    {"mode", r.mixed ? "mixed" : "pure"},
                    {"N", r.trials},
                    {"threshold", r.threshold},
                    {"contextual_count", r.contextual_count},
                    {"N_s", r.valid_trials},
                    {"failed_trials", r.failed_trials},
                    {"t", r.typicality},
                    {"wilson_lower", r.wilson_lower}});
  }
  Json sums = Json::array();
  for (const auto& s : t.summaries) {
    sums.push_back({{"path", to_string(s.path)},
                    {"mode", s.mixed ? "mixed" : "pure"},
                    {"tightest_zero_threshold", s.tightest_zero_threshold
                                                    ? Json(*s.tightest_zero_threshold)
                                                    : Json(nullptr)}});
  }
  return {{"rows", rows}, {"summaries", sums}};
}

Json to_json(const ProjectiveGrid& g) {
  return {{"raw_kets", g.raw_kets},
          {"distinct_projectors", g.distinct_projectors},
          {"measurements", g.measurements.size()},
          {"effects", g.effect_count}};
}

Json trial_record(const ScenarioSpec& spec, std::size_t index, const TrialOutcome& o) {
  Json j{{"trial", index},
         {"r", o.r},
         {"status", to_string(o.status)},
         {"residual", o.residual},
         {"wall_time", o.wall_time},
         {"n", spec.n},
         {"m", spec.measurement_count()},
         {"d", spec.d},
         {"seed", spec.base_seed}};
  if (!o.error.empty()) j["error"] = o.error;
  return j;
}

Json make_report(Json config, Json results, Json diagnostics) {
  return {{"version", kSchemaVersion},
          {"config", std::move(config)},
          {"results", std::move(results)},
          {"diagnostics", std::move(diagnostics)}};
}

std::string sweep_csv_row(const ScenarioSpec& spec, const TypicalityReport& r) {
  std::ostringstream os;
  os << spec.n << ',' << spec.measurement_count() << ',' << spec.d << ',' << r.trials << ','
     << r.valid_trials << ',' << fmt(r.typicality) << ',' << fmt(r.wilson_lower) << ','
     << fmt(r.mean_r) << ',' << fmt(r.std_r);
  return os.str();
}

std::string pom_csv_row(const PomTaskSpec& spec, const PomReport& r) {
  std::ostringstream os;
  os << to_string(spec.pom_case) << ',' << fmt(r.typicality) << ',' << fmt(r.mean_r) << ','
     << fmt(r.std_r) << ',' << fmt(r.mean_s) << ',' << fmt(r.std_s) << ','
     << fmt(r.mean_advantage) << ',' << r.valid_trials;
  return os.str();
}

std::string calibration_csv(const CalibrationTable& t) {
  std::ostringstream os;
  os << kCalibrationCsvHeader << '\n';
  for (const auto& r : t.rows) {
    os << to_string(r.path) << ',' << (r.mixed ? "mixed" : "pure") << ',' << r.trials << ','
       << fmt(r.threshold) << ',' << r.contextual_count << ',' << r.valid_trials << ','
       << r.failed_trials << ',' << fmt(r.typicality) << ',' << fmt(r.wilson_lower) << ',' << fmt(r.runtime) << '\n';
  }
  return os.str();
}

void write_matrix_csv(std::ostream& os, const RMatrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << std::setprecision(17) << m(i, j);
    }
    os << '\n';
  }
}

}  // namespace sembed
