// Copyright 2026 The hazchain authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HAZCHAIN_STUDIES_HPP_
#define HAZCHAIN_STUDIES_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hazchain/model.hpp"
#include "hazchain/simulate.hpp"
#include "hazchain/transient.hpp"

namespace hazchain {

// Policy-failure-after-late-detection rate shared by the study-1 experiments.
// Calibrated so that experiment 10 reaches p_serious = 1e-3 at 9100 h over
// the shipped transition rates; not a measured input (see calibrate_study1).
inline constexpr double kStudy1PolicyFailLateRate = 8.0934393942689367e-04;

// Hazard-sojourn exit rates of the four braking states (1/h), in
// braking_states() order: F_F_B, F_S_B, IS_F_B, IS_S_B.
inline constexpr std::array<double, kBrakingStateCount> kOverlookExitRates = {
    4500.0, 2250.0, 2250.0, 1225.0};

struct ExperimentSpec {
  std::string id;  // "exp1", "exp10", ...
  std::array<HazardParams, kBrakingStateCount> hazard{};
};

struct StudySpec {
  std::string id;  // "study1" ... "study5"
  std::string description;
  std::vector<ExperimentSpec> experiments;
};

// The five built-in sensitivity studies (51 experiments total). Single-state
// experiments map their four consecutive ids onto the braking states in
// braking_states() order.
std::vector<StudySpec> builtin_studies();

// Lookup helpers; throw FormatError listing valid ids on a miss.
StudySpec find_study(const std::string& study_id);
ExperimentSpec find_experiment(const std::string& experiment_id);

// Builds the model config of one experiment over the given base rates.
ModelConfig experiment_config(const ExperimentSpec& exp, const RateTable& base_rates);

enum class StudySolver : uint8_t { Uniformization, MonteCarlo };

struct StudyRunOptions {
  StudySolver solver = StudySolver::Uniformization;
  SolverOptions solver_opts;
  TimeGrid grid = TimeGrid::regular();
  uint64_t mc_n = 1000000;
  uint64_t mc_seed = 1;
  int threads = 0;  // 0 = hardware concurrency
};

struct ExperimentResult {
  std::string study_id;
  std::string experiment_id;
  TransientResult curves;
  bool failed = false;
  std::string error;
};

struct ResultTable {
  std::vector<ExperimentResult> rows;
  // Provenance of the run; deterministic fields only.
  std::string solver;
  double truncation_epsilon = 0.0;
  uint64_t rate_hash = 0;  // hash of the rate file when known, else 0
  std::string code_version;

  friend bool operator==(const ResultTable&, const ResultTable&);
};

// Solves every experiment of the study over the grid. Experiments are
// independent; failures are recorded per experiment and do not abort the
// rest. The Monte Carlo solver derives the whole curve from one batch of
// missions per experiment via the empirical absorption-time distribution.
ResultTable run_study(const StudySpec& study, const RateTable& base_rates,
                      const StudyRunOptions& opts = {}, uint64_t rate_hash = 0);

struct CalibrationResult {
  double rate_policy_fail_late = 0.0;
  double exp10_p_serious = 0.0;
  double exp10_p_minor = 0.0;
  double exp15_p_serious = 0.0;
  double exp15_p_minor = 0.0;
  int iterations = 0;
};

// Bisection over the shared policy-fail-late rate until experiment 10's
// p_serious at 9100 h matches the target within 1% (the search keeps going
// to a tight bracket so the result is reproducible). target_p_minor is
// reported against the induced value, not fitted. Throws SolverError when
// [1e-8, 1e2] does not bracket the target.
CalibrationResult calibrate_study1(double target_p_serious, double target_p_minor,
                                   const RateTable& base_rates,
                                   const SolverOptions& opts = {});

// One run per value of the named parameter. Paths: "p_overlook",
// "rate_policy_fail_timely", ... applied to all braking states, or
// "F_F_B.p_overlook" for a single state. For parameters that cannot decrease
// absorption, non-monotone accident curves across values are reported into
// `notes` (never fatal).
ResultTable sensitivity_sweep(const ExperimentSpec& base, const RateTable& base_rates,
                              const std::string& param_path,
                              const std::vector<double>& values,
                              const StudyRunOptions& opts = {},
                              std::vector<std::string>* notes = nullptr);

// Exports. CSV: "study,experiment,t_hours,p_serious,p_minor,p_success".
void write_result_csv(const std::filesystem::path& path, const ResultTable& table);
void write_result_json(const std::filesystem::path& path, const ResultTable& table);
ResultTable read_result_json(const std::filesystem::path& path);
// One log-scale probability-vs-time plot per accident class.
void write_result_svg(const std::filesystem::path& path, const ResultTable& table,
                      AccidentClass accident_class);

// Preset file (data/studies.json) round-trip. The file is generated from
// builtin_studies(); the reader lets external tools consume the encoding.
void write_studies_preset(const std::filesystem::path& path);
std::vector<StudySpec> read_studies_preset(const std::filesystem::path& path);

}  // namespace hazchain

#endif  // HAZCHAIN_STUDIES_HPP_
