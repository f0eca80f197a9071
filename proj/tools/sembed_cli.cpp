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

// sembed command-line driver.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sembed/errors.hpp"
#include "sembed/io.hpp"
#include "sembed/pom.hpp"
#include "sembed/robustness.hpp"
#include "sembed/sampling.hpp"
#include "sembed/typicality.hpp"

namespace fs = std::filesystem;
using namespace sembed;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSearch = 1;
constexpr int kExitInput = 2;
constexpr int kExitScenario = 3;
constexpr int kExitNumerical = 4;

constexpr const char* kOutputEnv = "SEMBED_OUTPUT_DIR";

struct Output {
  std::string dir;
  std::vector<std::string> formats{"json", "csv"};
  bool quiet = false;

  bool wants(const std::string& f) const {
    return std::find(formats.begin(), formats.end(), f) != formats.end();
  }
};

struct Common {
  std::uint64_t seed = 0;
  double threshold = kDefaultThreshold;
  std::size_t workers = 1;
  double confidence = 0.99;
  double max_failure_rate = 0.01;
  std::string solver = "simplex";
  bool no_fallback = false;

  RobustnessOptions solver_options() const {
    RobustnessOptions o;
    o.primary = solver == "ipm" ? SolvePath::interior_point : SolvePath::simplex;
    o.allow_fallback = !no_fallback;
    return o;
  }
};

struct ScenarioFlags {
  int n = 4;
  int m = 2;
  int d = 2;
  std::size_t trials = 1000;
  bool mixed_states = false;
  bool povm = false;
  bool fixed_grid = false;
  std::string effects_file;
  double purity_min = 0.0;
  double purity_max = 1.0;
  double sharpness_min = 0.0;
  double sharpness_max = 1.0;
};

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Creates <dir>/<command>-<hash of config>.
fs::path run_directory(const Output& out, const std::string& command, const Json& config) {
  std::ostringstream name;
  name << command << '-' << std::hex << std::setw(16) << std::setfill('0') << fnv1a(config.dump());
  fs::path dir = fs::path(out.dir) / name.str();
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw InvalidInput("cannot write " + path.string());
  os << text;
}

void write_report(const fs::path& dir, Json config, Json results, Json diagnostics,
                  Json metadata) {
  Json report = make_report(std::move(config), std::move(results), std::move(diagnostics));
  report["metadata"] = std::move(metadata);
  write_text(dir / "report.json", report.dump(2) + "\n");
}

Json metadata(std::size_t workers, double wall_time) {
  return {{"timestamp", timestamp()}, {"workers", workers}, {"wall_time", wall_time}};
}

Json common_config(const Common& c, const Output& out) {
  return {{"seed", c.seed},
          {"threshold", c.threshold},
          {"confidence", c.confidence},
          {"max_failure_rate", c.max_failure_rate},
          {"solver", c.solver},
          {"fallback", !c.no_fallback},
          {"formats", out.formats}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void add_output_flags(CLI::App* app, Output& out) {
  app->add_option("--output-dir,-o", out.dir, "Output root directory")
      ->envname(kOutputEnv)
      ->default_str("sembed-out");
  app->add_option("--formats", out.formats, "Output formats")
      ->check(CLI::IsMember({"json", "csv", "jsonl"}))
      ->delimiter(',');
  app->add_flag("--quiet,-q", out.quiet, "Suppress the summary on stdout");
}

void add_solver_flags(CLI::App* app, Common& c) {
  app->add_option("--threshold", c.threshold, "Classicality threshold on r")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--solver", c.solver, "Primary solve path")
      ->check(CLI::IsMember({"simplex", "ipm"}));
  app->add_flag("--no-fallback", c.no_fallback, "Disable the secondary solve path");
}

void add_stochastic_flags(CLI::App* app, Common& c) {
  add_solver_flags(app, c);
  app->add_option("--seed", c.seed, "Base seed");
  app->add_option("--workers,-j", c.workers, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--confidence", c.confidence, "Confidence level of the Wilson bound")
      ->check(CLI::Range(0.0, 1.0));
  app->add_option("--max-failure-rate", c.max_failure_rate,
                  "Largest tolerated fraction of failed trials")
      ->check(CLI::Range(0.0, 1.0));
}

void add_scenario_flags(CLI::App* app, ScenarioFlags& s, bool ranges) {
  if (!ranges) {
    app->add_option("-n", s.n, "Number of preparations");
    app->add_option("-m", s.m, "Number of dichotomic measurements");
  }
  app->add_option("-d", s.d, "Hilbert space dimension");
  app->add_option("-N,--trials", s.trials, "Trials per scenario");
  auto* pure = app->add_flag("--pure-states", "Sample Haar pure states (default)");
  app->add_flag("--mixed-states", s.mixed_states, "Sample Ginibre mixed states")->excludes(pure);
  auto* proj = app->add_flag("--projective", "Random projective measurements (default)");
  auto* povm = app->add_flag("--povm", s.povm, "Random dichotomic POVMs")->excludes(proj);
  auto* grid = app->add_flag("--fixed-grid", s.fixed_grid, "Fixed qubit projector grid")
                   ->excludes(proj)
                   ->excludes(povm);
  app->add_option("--effects-file", s.effects_file, "Fixed measurements from a fragment file")
      ->check(CLI::ExistingFile)
      ->excludes(proj)
      ->excludes(povm)
      ->excludes(grid);
  app->add_option("--purity-min", s.purity_min, "Lower purity bound for mixed states");
  app->add_option("--purity-max", s.purity_max, "Upper purity bound for mixed states");
  app->add_option("--sharpness-min", s.sharpness_min, "Lower sharpness bound for POVM effects");
  app->add_option("--sharpness-max", s.sharpness_max, "Upper sharpness bound for POVM effects");
}

ScenarioSpec make_spec(const ScenarioFlags& f, const Common& c) {
  ScenarioSpec s;
  s.n = f.n;
  s.m = f.m;
  s.d = f.d;
  s.trials = f.trials;
  s.state_sampler.dim = f.d;
  s.state_sampler.pure = !f.mixed_states;
  s.state_sampler.purity_lower = f.purity_min;
  s.state_sampler.purity_upper = f.purity_max;
  s.effect_sampler.dim = f.d;
  s.effect_sampler.purity_lower = f.sharpness_min;
  s.effect_sampler.purity_upper = f.sharpness_max;
  if (f.fixed_grid) {
    s.effect_mode = EffectMode::fixed_grid;
  } else if (!f.effects_file.empty()) {
    s.effect_mode = EffectMode::fixed_list;
    FragmentData data = load_fragment(f.effects_file);
    if (data.d != f.d) throw InvalidScenario("effects file dimension differs from -d");
    s.fixed_effects = std::move(data.measurements);
  } else if (f.povm) {
    s.effect_mode = EffectMode::random_povm;
  }
  s.effect_sampler.pure = s.effect_mode != EffectMode::random_povm;
  s.threshold = c.threshold;
  s.base_seed = c.seed;
  s.confidence = c.confidence;
  s.max_failure_rate = c.max_failure_rate;
  s.solver = c.solver_options();
  s.validate();
  return s;
}

Json scenario_config(const ScenarioSpec& s, const ScenarioFlags& f) {
  Json j = to_json(s);
  if (!f.effects_file.empty()) j["effects_file"] = fs::path(f.effects_file).filename().string();
  return j;
}

Json diagnostics_of(const TypicalityReport& r) {
  return {{"failed_trials", r.failed_trials}, {"residual_max", r.residual_max}};
}

void print_report(const std::string& label, const TypicalityReport& r) {
  std::cout << label << " N=" << r.trials << " N_s=" << r.valid_trials
            << " contextual=" << r.contextual_count << " t=" << r.typicality
            << " wilson_lower=" << r.wilson_lower << " mean_r=" << r.mean_r
            << " std_r=" << r.std_r << '\n';
  if (r.error) std::cerr << "error: " << r.diagnostic << '\n';
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw InvalidInput("bad range '" + text + "', expected a..b");
  }
}

// ---- commands ----

int cmd_embed(const std::vector<std::string>& files, const Common& c, bool dump_cones,
              const Output& out) {
  const auto t0 = std::chrono::steady_clock::now();
  FragmentData data = load_fragment(files.at(0));
  if (files.size() > 1) data = merge_fragments(data, load_fragment(files[1]));
  if (data.states.empty() || data.measurements.empty()) {
    throw InvalidInput("fragment needs at least one state and one measurement");
  }
  const Certification cert = certify(data.states, data.measurements, c.solver_options());
  Json config = {{"command", "embed"},
                 {"threshold", c.threshold},
                 {"solver", c.solver},
                 {"fallback", !c.no_fallback},
                 {"fragment", fragment_to_json(data)}};
  const fs::path dir = run_directory(out, "embed", config);
  Json results = {{"robustness", to_json(cert.result)},
                  {"state_rank", cert.accessible.state_rank()},
                  {"effect_rank", cert.accessible.effect_rank()},
                  {"state_facets", cert.state_cone.facets.rows()},
                  {"effect_facets", cert.effect_cone.facets.rows()}};
  if (cert.result.ok()) results["verdict"] = to_json(classify(cert.result, c.threshold));
  if (out.wants("json")) {
    write_report(dir, config, results, {{"residual", cert.result.residual}},
                 metadata(1, seconds_since(t0)));
  }
  if (dump_cones) {
    std::ofstream hs(dir / "state_cone.csv");
    write_matrix_csv(hs, cert.state_cone.facets);
    std::ofstream he(dir / "effect_cone.csv");
    write_matrix_csv(he, cert.effect_cone.facets);
  }
  if (!cert.result.ok()) {
    std::cerr << "error: robustness LP failed on every solve path\n";
    return kExitNumerical;
  }
  const ClassicalityVerdict v = classify(cert.result, c.threshold);
  std::cout << std::setprecision(10) << "r = " << cert.result.r << '\n'
            << "verdict: " << (v.contextual ? "contextual" : "noncontextual") << '\n'
            << "solve path: " << to_string(cert.result.path) << '\n';
  if (!out.quiet) std::cout << "output: " << dir.string() << '\n';
  return kExitOk;
}

int cmd_typicality(const ScenarioFlags& f, const Common& c, const Output& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const ScenarioSpec spec = make_spec(f, c);
  Json config = {{"command", "typicality"},
                 {"scenario", scenario_config(spec, f)},
                 {"run", common_config(c, out)}};
  std::vector<TrialOutcome> outcomes;
  const TypicalityReport rep = estimate_typicality(spec, c.workers, &outcomes);
  const fs::path dir = run_directory(out, "typicality", config);
  if (out.wants("json")) {
    write_report(dir, config, to_json(rep), diagnostics_of(rep),
                 metadata(c.workers, seconds_since(t0)));
  }
  if (out.wants("csv")) {
    write_text(dir / "cells.csv",
               std::string(kSweepCsvHeader) + "\n" + sweep_csv_row(spec, rep) + "\n");
  }
  if (out.wants("jsonl")) {
    std::ofstream os(dir / "trials.jsonl");
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      Json rec = trial_record(spec, i, outcomes[i]);
      rec.erase("wall_time");
      os << rec.dump() << '\n';
    }
  }
  print_report("typicality", rep);
  if (!out.quiet) std::cout << "output: " << dir.string() << '\n';
  return rep.error ? kExitNumerical : kExitOk;
}

int cmd_sweep(ScenarioFlags f, const std::string& n_range, const std::string& m_range,
              const Common& c, const Output& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto [n_lo, n_hi] = parse_range(n_range);
  const auto [m_lo, m_hi] = parse_range(m_range);
  if (n_lo < 1 || n_hi < n_lo || m_lo < 1 || m_hi < m_lo) {
    throw InvalidScenario("empty or invalid sweep range");
  }
  const bool fixed = f.fixed_grid || !f.effects_file.empty();
  f.n = n_lo;
  f.m = m_lo;
  const ScenarioSpec probe = make_spec(f, c);
  Json config = {{"command", "sweep"},
                 {"n_range", {n_lo, n_hi}},
                 {"m_range", fixed ? Json({probe.measurement_count(), probe.measurement_count()})
                                   : Json({m_lo, m_hi})},
                 {"scenario", scenario_config(probe, f)},
                 {"run", common_config(c, out)}};
  config["scenario"].erase("n");
  config["scenario"].erase("m");
  const fs::path dir = run_directory(out, "sweep", config);

  std::string csv = std::string(kSweepCsvHeader) + "\n";
  Json cells = Json::array();
  std::size_t failed = 0;
  double residual_max = 0.0;
  bool any_error = false;
  std::ofstream jsonl;
  if (out.wants("jsonl")) jsonl.open(dir / "trials.jsonl");
  for (int m = m_lo; m <= (fixed ? m_lo : m_hi); ++m) {
    for (int n = n_lo; n <= n_hi; ++n) {
      f.n = n;
      f.m = m;
      const ScenarioSpec spec = make_spec(f, c);
      std::vector<TrialOutcome> outcomes;
      const TypicalityReport rep = estimate_typicality(spec, c.workers, &outcomes);
      csv += sweep_csv_row(spec, rep) + "\n";
      Json cell = to_json(rep);
      cell["n"] = n;
      cell["m"] = spec.measurement_count();
      cells.push_back(cell);
      failed += rep.failed_trials;
      residual_max = std::max(residual_max, rep.residual_max);
      any_error = any_error || rep.error;
      if (jsonl) {
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
          Json rec = trial_record(spec, i, outcomes[i]);
          rec.erase("wall_time");
          jsonl << rec.dump() << '\n';
        }
      }
      if (!out.quiet) print_report("n=" + std::to_string(n) + " m=" + std::to_string(m), rep);
    }
  }
  if (out.wants("json")) {
    write_report(dir, config, {{"cells", cells}},
                 {{"failed_trials", failed}, {"residual_max", residual_max}},
                 metadata(c.workers, seconds_since(t0)));
  }
  if (out.wants("csv")) write_text(dir / "sweep.csv", csv);
  if (!out.quiet) std::cout << "output: " << dir.string() << '\n';
  return any_error ? kExitNumerical : kExitOk;
}

int cmd_minimal_preps(const ScenarioFlags& f, const Common& c, double target, int n_start,
                      int n_max, const Output& out) {
  const auto t0 = std::chrono::steady_clock::now();
  if (f.m < 2 && !f.fixed_grid && f.effects_file.empty()) {
    std::cerr << "warning: a single dichotomic measurement never shows contextuality; "
                 "refusing to search\n";
    return kExitScenario;
  }
  ScenarioFlags start = f;
  start.n = n_start;
  const ScenarioSpec spec = make_spec(start, c);
  Json config = {{"command", "minimal-preps"},
                 {"target", target},
                 {"n_start", n_start},
                 {"n_max", n_max},
                 {"scenario", scenario_config(spec, f)},
                 {"run", common_config(c, out)}};
  config["scenario"].erase("n");
  const fs::path dir = run_directory(out, "minimal-preps", config);
  Json history = Json::array();
  std::string csv = std::string(kSweepCsvHeader) + "\n";
  std::optional<int> found;
  std::string failure;
  try {
    const MinimalPrepsResult res = minimal_preparations(spec, target, n_start, n_max, c.workers);
    found = res.n;
    for (const auto& [n, rep] : res.history) {
      Json h = to_json(rep);
      h["n"] = n;
      history.push_back(h);
      ScenarioSpec cell = spec;
      cell.n = n;
      csv += sweep_csv_row(cell, rep) + "\n";
      if (!out.quiet) print_report("n=" + std::to_string(n), rep);
    }
  } catch (const SearchExhausted& e) {
    failure = e.what();
  }
  Json results = {{"n", found ? Json(*found) : Json(nullptr)}, {"history", history}};
  if (out.wants("json")) {
    write_report(dir, config, results, {{"message", failure}},
                 metadata(c.workers, seconds_since(t0)));
  }
  if (out.wants("csv") && found) write_text(dir / "history.csv", csv);
  if (!found) {
    std::cerr << "error: " << failure << '\n';
    return kExitSearch;
  }
  std::cout << "minimal n = " << *found << '\n';
  if (!out.quiet) std::cout << "output: " << dir.string() << '\n';
  return kExitOk;
}

int cmd_pom(const std::string& pom_case, const std::string& states, std::size_t trials,
            const std::string& fragment_out, const Common& c, const Output& out) {
  const auto t0 = std::chrono::steady_clock::now();
  PomTaskSpec spec;
  spec.pom_case = parse_pom_case(pom_case);
  spec.states = parse_pom_states(states);
  spec.trials = trials;
  spec.threshold = c.threshold;
  spec.base_seed = c.seed;
  spec.confidence = c.confidence;
  spec.max_failure_rate = c.max_failure_rate;
  spec.solver = c.solver_options();
  spec.validate();
  if (!fragment_out.empty()) {
    FragmentData data{2, pom_cube_states(spec.states), pom_case_measurements(spec, 0)};
    write_text(fragment_out, fragment_to_json(data).dump(2) + "\n");
  }
  Json config = {{"command", "pom"}, {"task", to_json(spec)}, {"run", common_config(c, out)}};
  std::vector<PomTrial> per_trial;
  const PomReport rep = pom_report(spec, c.workers, &per_trial);
  const fs::path dir = run_directory(out, "pom", config);
  if (out.wants("json")) {
    write_report(dir, config, to_json(rep), {{"failed_trials", rep.failed_trials}},
                 metadata(c.workers, seconds_since(t0)));
  }
  if (out.wants("csv")) {
    write_text(dir / "pom.csv", std::string(kPomCsvHeader) + "\n" + pom_csv_row(spec, rep) + "\n");
  }
  if (out.wants("jsonl")) {
    std::ofstream os(dir / "trials.jsonl");
    for (std::size_t i = 0; i < per_trial.size(); ++i) {
      Json rec{{"trial", i}, {"r", per_trial[i].r}, {"s", per_trial[i].s},
               {"status", to_string(per_trial[i].status)}};
      if (!per_trial[i].error.empty()) rec["error"] = per_trial[i].error;
      os << rec.dump() << '\n';
    }
  }
  std::cout << std::setprecision(6) << "case " << to_string(spec.pom_case) << " N_s="
            << rep.valid_trials << " t=" << rep.typicality << " mean_r=" << rep.mean_r
            << " mean_s=" << rep.mean_s << " s_nc=" << rep.s_nc
            << " advantage=" << 100.0 * rep.mean_advantage << "%\n";
  if (rep.error) std::cerr << "error: " << rep.diagnostic << '\n';
  if (!out.quiet) std::cout << "output: " << dir.string() << '\n';
  return rep.error ? kExitNumerical : kExitOk;
}

int cmd_calibrate(CalibrationOptions opts, const Common& c, const Output& out) {
  const auto t0 = std::chrono::steady_clock::now();
  opts.base_seed = c.seed;
  opts.confidence = c.confidence;
  opts.workers = c.workers;
  Json config = {{"command", "calibrate"},
                 {"thresholds", opts.thresholds},
                 {"trial_counts", opts.trial_counts},
                 {"mixed", opts.include_mixed},
                 {"seed", opts.base_seed},
                 {"confidence", opts.confidence},
                 {"formats", out.formats}};
  const CalibrationTable table = calibrate(opts);
  const fs::path dir = run_directory(out, "calibrate", config);
  Json runtimes = Json::array();
  for (const auto& r : table.rows) {
    runtimes.push_back({{"path", to_string(r.path)},
                        {"mode", r.mixed ? "mixed" : "pure"},
                        {"N", r.trials},
                        {"runtime_s", r.runtime}});
  }
  if (out.wants("json")) {
    Json meta = metadata(c.workers, seconds_since(t0));
    meta["runtimes"] = runtimes;
    write_report(dir, config, to_json(table), Json::object(), meta);
  }
  if (out.wants("csv")) write_text(dir / "calibration.csv", calibration_csv(table));
  std::cout << calibration_csv(table);
  for (const auto& s : table.summaries) {
    std::cout << to_string(s.path) << ' ' << (s.mixed ? "mixed" : "pure")
              << " tightest all-zero threshold: ";
    if (s.tightest_zero_threshold) {
      std::cout << *s.tightest_zero_threshold << '\n';
    } else {
      std::cout << "none\n";
    }
  }
  if (!out.quiet) std::cout << "output: " << dir.string() << '\n';
  return kExitOk;
}

int cmd_grid_info(const Output& out) {
  const ProjectiveGrid& grid = fixed_projective_grid();
  const Json results = to_json(grid);
  Json config = {{"command", "grid-info"}};
  if (out.wants("json")) {
    const fs::path dir = run_directory(out, "grid-info", config);
    write_report(dir, config, results, Json::object(), metadata(1, 0.0));
  }
  std::cout << "raw kets: " << grid.raw_kets << '\n'
            << "distinct projectors: " << grid.distinct_projectors << '\n'
            << "measurements: " << grid.measurements.size() << '\n'
            << "effects: " << grid.effect_count << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simplex-embedding contextuality certification and typicality estimates"};
  app.require_subcommand(1);

  Common common;
  Output output;
  output.dir = std::getenv(kOutputEnv) ? std::getenv(kOutputEnv) : "sembed-out";
  ScenarioFlags scen;

  auto* embed = app.add_subcommand("embed", "Certify a fragment read from JSON");
  std::vector<std::string> files;
  bool dump_cones = false;
  embed->add_option("files", files, "Fragment file, optionally followed by a second one")
      ->required()
      ->expected(1, 2);
  embed->add_flag("--dump-cones", dump_cones, "Write facet matrices as CSV");
  add_solver_flags(embed, common);
  add_output_flags(embed, output);

  auto* typ = app.add_subcommand("typicality", "Estimate typicality of one scenario");
  add_scenario_flags(typ, scen, false);
  add_stochastic_flags(typ, common);
  add_output_flags(typ, output);

  auto* sweep = app.add_subcommand("sweep", "Typicality over a grid of (n, m)");
  std::string n_range = "4..10";
  std::string m_range = "2..10";
  sweep->add_option("-n", n_range, "Preparation range a..b");
  sweep->add_option("-m", m_range, "Measurement range a..b");
  add_scenario_flags(sweep, scen, true);
  add_stochastic_flags(sweep, common);
  add_output_flags(sweep, output);

  auto* mp = app.add_subcommand("minimal-preps", "Smallest n reaching a target typicality");
  double target = 0.99;
  int n_start = 4;
  int n_max = 40;
  add_scenario_flags(mp, scen, false);
  mp->add_option("--target", target, "Target typicality")->check(CLI::Range(0.0, 1.0));
  mp->add_option("--n-start", n_start, "First n tried");
  mp->add_option("--n-max", n_max, "Last n tried");
  add_stochastic_flags(mp, common);
  add_output_flags(mp, output);

  auto* pom = app.add_subcommand("pom", "Parity-oblivious multiplexing analysis");
  std::string pom_case = "optimal";
  std::string pom_states = "flattened";
  std::size_t pom_trials = 1000;
  std::string fragment_out;
  pom->add_option("--case", pom_case, "optimal, random-projective, random-povm or rf");
  pom->add_option("--states", pom_states, "Cube state variant: flattened or symmetric");
  pom->add_option("-N,--trials", pom_trials, "Trials for the random cases");
  pom->add_option("--write-fragment", fragment_out, "Write the trial-0 fragment as JSON");
  add_stochastic_flags(pom, common);
  add_output_flags(pom, output);

  auto* cal = app.add_subcommand("calibrate", "Threshold calibration on the (4,2,2) scenario");
  CalibrationOptions cal_opts;
  bool cal_pure_only = false;
  cal->add_option("--threshold,--thresholds", cal_opts.thresholds, "Thresholds to sweep")
      ->delimiter(',');
  cal->add_option("-N,--trials", cal_opts.trial_counts, "Trial counts")->delimiter(',');
  cal->add_flag("--pure-only", cal_pure_only, "Skip the mixed-state scenario");
  cal->add_option("--seed", common.seed, "Base seed");
  cal->add_option("--workers,-j", common.workers, "Worker threads")->check(CLI::PositiveNumber);
  cal->add_option("--confidence", common.confidence, "Confidence level of the Wilson bound")
      ->check(CLI::Range(0.0, 1.0));
  add_output_flags(cal, output);

  auto* grid = app.add_subcommand("grid-info", "Describe the fixed projector grid");
  add_output_flags(grid, output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*embed) return cmd_embed(files, common, dump_cones, output);
    if (*typ) return cmd_typicality(scen, common, output);
    if (*sweep) return cmd_sweep(scen, n_range, m_range, common, output);
    if (*mp) return cmd_minimal_preps(scen, common, target, n_start, n_max, output);
    if (*pom) return cmd_pom(pom_case, pom_states, pom_trials, fragment_out, common, output);
    if (*cal) {
      cal_opts.include_mixed = !cal_pure_only;
      return cmd_calibrate(cal_opts, common, output);
    }
    if (*grid) return cmd_grid_info(output);
  } catch (const InvalidScenario& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return kExitScenario;
  } catch (const InvalidInput& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const SamplingBudgetExceeded& e) {
    std::cerr << "sampling failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSearch;
  }
  return kExitOk;
}
