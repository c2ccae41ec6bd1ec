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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hazchain/errors.hpp"
#include "hazchain/estimation.hpp"
#include "hazchain/io.hpp"
#include "hazchain/model.hpp"
#include "hazchain/simulate.hpp"
#include "hazchain/studies.hpp"
#include "hazchain/transient.hpp"
#include "hazchain/version.hpp"

namespace fs = std::filesystem;
using namespace hazchain;

namespace {

int env_threads() {
  const char* env = std::getenv("HAZCHAIN_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 0)
    throw FormatError("HAZCHAIN_THREADS must be a non-negative integer, got '" +
                      std::string(env) + "'");
  return static_cast<int>(v);
}

void ensure_parent(const fs::path& file) {
  if (!file.parent_path().empty()) fs::create_directories(file.parent_path());
}

TimeGrid make_grid(double t_single, double grid_end, double grid_step) {
  if (t_single > 0.0) return TimeGrid::single(t_single);
  return TimeGrid::regular(grid_end, grid_step);
}

McEngine parse_engine(const std::string& name) {
  if (name == "auto") return McEngine::Auto;
  if (name == "direct") return McEngine::Direct;
  if (name == "thinning") return McEngine::Thinning;
  throw FormatError("unknown engine '" + name + "' (auto|direct|thinning)");
}

int cmd_estimate(const fs::path& data_dir, const std::string& estimator_name,
                 const fs::path& out, const fs::path& report) {
  Estimator estimator;
  if (estimator_name == "per_transition") estimator = Estimator::PerTransition;
  else if (estimator_name == "competing_risks") estimator = Estimator::CompetingRisks;
  else throw FormatError("unknown estimator '" + estimator_name + "'");

  DatasetEstimate result = estimate_dataset(data_dir, estimator);
  ensure_parent(out);
  write_rate_file(out, result.estimates.rates, &result.estimates.support);
  fs::path report_path = report.empty() ? fs::path(out.string() + ".report.json") : report;
  ensure_parent(report_path);
  write_estimation_report(report_path, result);

  std::cout << "estimated 56 transition rates from " << result.vehicles.size()
            << " vehicle log(s), " << result.total_hours << " h of driving\n"
            << "zero-count transitions: " << result.estimates.zero_count.size()
            << ", low-count (<5): " << result.estimates.low_count.size() << "\n"
            << "rates written to " << out.string() << ", report to "
            << report_path.string() << "\n";
  return 0;
}

int cmd_solve(const fs::path& config_path, const fs::path& out, const fs::path& occupancy,
              double t_single, double grid_end, double grid_step, double epsilon) {
  ModelConfig config = read_model_config(config_path);
  Ctmc chain = build_ctmc(config);
  CtmcDiagnostics diag = validate(chain);
  if (!diag.ok()) {
    std::cerr << "model validation failed:\n" << diag.summary();
    return 3;
  }
  SolverOptions opts;
  opts.truncation_epsilon = epsilon;
  TransientResult result = uniformize(chain, make_grid(t_single, grid_end, grid_step), opts);
  ensure_parent(out);
  write_curves_csv(out, result);
  if (!occupancy.empty()) {
    ensure_parent(occupancy);
    write_occupancy_csv(occupancy, chain, result);
  }
  const size_t last = result.grid.size() - 1;
  std::cout << "solved " << result.grid.size() << " grid point(s); at t="
            << result.grid.points[last] << " h: p_serious=" << result.p_serious[last]
            << " p_minor=" << result.p_minor[last]
            << " p_success=" << result.p_success[last] << "\n"
            << "curves written to " << out.string() << "\n";
  return 0;
}

int cmd_simulate(const fs::path& config_path, uint64_t n, uint64_t seed, double hours,
                 const fs::path& out, const fs::path& missions_csv,
                 const std::string& engine_name, int threads) {
  if (n < 1) throw FormatError("--n must be >= 1");
  ModelConfig config = read_model_config(config_path);
  Ctmc chain = build_ctmc(config);
  McEngine engine = parse_engine(engine_name);
  std::vector<MissionOutcome> outcomes;
  SimEstimate est = estimate(chain, hours, n, seed, threads, engine,
                             missions_csv.empty() ? nullptr : &outcomes);
  ensure_parent(out);
  write_sim_estimate_json(out, est, resolve_engine(chain, hours, engine));
  if (!missions_csv.empty()) {
    ensure_parent(missions_csv);
    write_missions_csv(missions_csv, outcomes);
  }
  std::cout << "simulated " << n << " mission(s) of " << hours << " h: p_serious="
            << est.p_serious << " p_minor=" << est.p_minor
            << " p_success=" << est.p_success << "\n"
            << "estimate written to " << out.string() << "\n";
  return 0;
}

int cmd_study(const std::string& id, const fs::path& rates_path, const fs::path& out_dir,
              const std::string& solver_name, uint64_t n, uint64_t seed, double grid_end,
              double grid_step, double epsilon, bool svg, int threads) {
  RateTable rates = read_rate_file(rates_path).rates;
  const uint64_t rate_hash = file_hash(rates_path);

  std::vector<StudySpec> studies;
  if (id == "all") studies = builtin_studies();
  else studies.push_back(find_study(id));

  StudyRunOptions opts;
  if (solver_name == "uniformization") opts.solver = StudySolver::Uniformization;
  else if (solver_name == "montecarlo") opts.solver = StudySolver::MonteCarlo;
  else throw FormatError("unknown solver '" + solver_name + "'");
  opts.solver_opts.truncation_epsilon = epsilon;
  opts.grid = TimeGrid::regular(grid_end, grid_step);
  opts.mc_n = n;
  opts.mc_seed = seed;
  opts.threads = threads;

  fs::create_directories(out_dir);
  for (const auto& study : studies) {
    ResultTable table = run_study(study, rates, opts, rate_hash);
    write_result_csv(out_dir / ("results_" + study.id + ".csv"), table);
    write_result_json(out_dir / ("results_" + study.id + ".json"), table);
    if (svg) {
      write_result_svg(out_dir / (study.id + "_serious.svg"), table, AccidentClass::Serious);
      write_result_svg(out_dir / (study.id + "_minor.svg"), table, AccidentClass::Minor);
    }
    for (const auto& row : table.rows) {
      if (row.failed) {
        std::cout << study.id << ' ' << row.experiment_id << " FAILED: " << row.error
                  << "\n";
        continue;
      }
      const size_t last = row.curves.grid.size() - 1;
      std::cout << study.id << ' ' << row.experiment_id << " t="
                << row.curves.grid.points[last]
                << " p_serious=" << row.curves.p_serious[last]
                << " p_minor=" << row.curves.p_minor[last]
                << " p_success=" << row.curves.p_success[last] << "\n";
    }
  }
  std::cout << "results written to " << out_dir.string() << "\n";
  return 0;
}

int cmd_sweep(const std::string& experiment_id, const fs::path& config_path,
              const fs::path& rates_path, const std::string& param,
              const std::vector<double>& values, const fs::path& out, double grid_end,
              double grid_step, double epsilon, int threads) {
  ExperimentSpec base;
  RateTable rates;
  if (!config_path.empty()) {
    ModelConfig config = read_model_config(config_path);
    base.id = config_path.stem().string();
    base.hazard = config.hazard;
    rates = config.rates;
  } else {
    base = find_experiment(experiment_id);
    rates = read_rate_file(rates_path).rates;
  }
  StudyRunOptions opts;
  opts.grid = TimeGrid::regular(grid_end, grid_step);
  opts.solver_opts.truncation_epsilon = epsilon;
  opts.threads = threads;
  std::vector<std::string> notes;
  ResultTable table = sensitivity_sweep(base, rates, param, values, opts, &notes);
  ensure_parent(out);
  write_result_csv(out, table);
  for (const auto& note : notes) std::cout << "note: " << note << "\n";
  std::cout << "sweep of " << param << " over " << values.size()
            << " value(s) written to " << out.string() << "\n";
  return 0;
}

int cmd_calibrate(double target_serious, double target_minor, const fs::path& rates_path,
                  const fs::path& out) {
  RateTable rates = read_rate_file(rates_path).rates;
  CalibrationResult r = calibrate_study1(target_serious, target_minor, rates);
  std::cout << "calibrated rate_policy_fail_late = " << r.rate_policy_fail_late
            << " 1/h (" << r.iterations << " solves)\n"
            << "exp10 @9100h: p_serious=" << r.exp10_p_serious
            << " p_minor=" << r.exp10_p_minor << " (targets " << target_serious << ", "
            << target_minor << ")\n"
            << "exp15 @9100h: p_serious=" << r.exp15_p_serious
            << " p_minor=" << r.exp15_p_minor << "\n";
  if (!out.empty()) {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["rate_policy_fail_late"] = r.rate_policy_fail_late;
    j["provenance"] = "calibrated, not a measured input";
    j["exp10"] = {{"p_serious", r.exp10_p_serious}, {"p_minor", r.exp10_p_minor}};
    j["exp15"] = {{"p_serious", r.exp15_p_serious}, {"p_minor", r.exp15_p_minor}};
    j["targets"] = {{"p_serious", target_serious}, {"p_minor", target_minor}};
    j["iterations"] = r.iterations;
    ensure_parent(out);
    std::ofstream f(out);
    f << j.dump(2) << '\n';
    std::cout << "report written to " << out.string() << "\n";
  }
  return 0;
}

int cmd_generate_log(const fs::path& rates_path, double hours, uint64_t seed,
                     double frame_rate, int vehicles, const fs::path& out_dir) {
  if (vehicles < 1) throw FormatError("--vehicles must be >= 1");
  RateTable rates = read_rate_file(rates_path).rates;
  DatasetMeta meta;
  meta.frame_rate_hz = frame_rate;
  meta.require_valid();
  fs::create_directories(out_dir);
  for (int v = 0; v < vehicles; ++v) {
    char name[32];
    std::snprintf(name, sizeof(name), "vehicle_%02d.csv", v);
    const fs::path log = out_dir / name;
    std::ofstream outf(log);
    if (!outf) throw FormatError("cannot write " + log.string());
    outf << "frame,driving_type,speed,braking,duration\n";
    generate_synthetic_log(
        rates, hours / vehicles, seed + static_cast<uint64_t>(v), meta,
        [&](const FrameRecord& r) {
          outf << r.frame_index << ','
               << (r.driving_type == RoadCondition::Free ? "free" : "intersection")
               << ',' << (*r.speed_band == SpeedBand::Fast ? "fast" : "slow") << ','
               << (*r.braking_flag == BrakingFlag::Braking ? "brake" : "nobrake")
               << ',' << r.duration_frames << '\n';
        });
  }
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["frame_rate_hz"] = frame_rate;
  j["generator"] = {{"rates_file", rates_path.filename().string()},
                    {"hours", hours},
                    {"seed", seed},
                    {"vehicles", vehicles}};
  std::ofstream mf(out_dir / "meta.json");
  mf << j.dump(2) << '\n';
  std::cout << "wrote " << vehicles << " synthetic log(s) covering " << hours
            << " h to " << out_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intersection-hazard driving-state CTMC: rate estimation, transient "
               "solving, mission simulation, and sensitivity studies"};
  app.set_version_flag("--version", kCodeVersion);
  app.require_subcommand(1);

  // estimate
  auto* est = app.add_subcommand("estimate", "Estimate transition rates from frame logs");
  fs::path est_data, est_out, est_report;
  std::string est_estimator = "per_transition";
  est->add_option("--data", est_data, "Dataset directory (*.csv + meta.json)")->required();
  est->add_option("--out", est_out, "Output rate JSON")->required();
  est->add_option("--report", est_report, "Diagnostics report path (default <out>.report.json)");
  est->add_option("--estimator", est_estimator, "per_transition|competing_risks");

  // solve
  auto* solve = app.add_subcommand("solve", "Transient accident-probability curves");
  fs::path solve_config, solve_out, solve_occ;
  double solve_t = 0.0, solve_end = 9100.0, solve_step = 100.0, solve_eps = 1e-12;
  solve->add_option("--config", solve_config, "Model config JSON")->required();
  solve->add_option("--out", solve_out, "Output CSV")->required();
  solve->add_option("--occupancy", solve_occ, "Optional full-occupancy CSV");
  solve->add_option("--t", solve_t, "Solve a single time point (hours)");
  solve->add_option("--grid-end", solve_end, "Grid end (hours), default 9100");
  solve->add_option("--grid-step", solve_step, "Grid step (hours), default 100");
  solve->add_option("--epsilon", solve_eps, "Poisson truncation epsilon");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo mission estimate");
  fs::path sim_config, sim_out, sim_missions;
  uint64_t sim_n = 0, sim_seed = 1;
  double sim_hours = 9100.0;
  std::string sim_engine = "auto";
  int sim_threads = -1;
  sim->add_option("--config", sim_config, "Model config JSON")->required();
  sim->add_option("--n", sim_n, "Replication count")->required();
  sim->add_option("--seed", sim_seed, "Base seed");
  sim->add_option("--hours", sim_hours, "Mission duration (hours)");
  sim->add_option("--out", sim_out, "Output JSON")->required();
  sim->add_option("--missions", sim_missions, "Optional per-mission CSV");
  sim->add_option("--engine", sim_engine, "auto|direct|thinning");
  sim->add_option("--threads", sim_threads, "Worker count (overrides HAZCHAIN_THREADS)");

  // study
  auto* study = app.add_subcommand("study", "Run built-in sensitivity studies");
  std::string study_id, study_solver = "uniformization";
  fs::path study_rates = "data/table6_rates.json", study_out = "out";
  uint64_t study_n = 1000000, study_seed = 1;
  double study_end = 9100.0, study_step = 100.0, study_eps = 1e-12;
  bool study_no_svg = false;
  int study_threads = -1;
  study->add_option("--id", study_id, "study1..study5 or 'all'")->required();
  study->add_option("--rates", study_rates, "Base rate file");
  study->add_option("--out-dir", study_out, "Output directory");
  study->add_option("--solver", study_solver, "uniformization|montecarlo");
  study->add_option("--n", study_n, "Monte Carlo replications");
  study->add_option("--seed", study_seed, "Monte Carlo seed");
  study->add_option("--grid-end", study_end, "Grid end (hours)");
  study->add_option("--grid-step", study_step, "Grid step (hours)");
  study->add_option("--epsilon", study_eps, "Poisson truncation epsilon");
  study->add_flag("--no-svg", study_no_svg, "Skip SVG plots");
  study->add_option("--threads", study_threads, "Worker count (overrides HAZCHAIN_THREADS)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Sweep one hazard parameter");
  std::string sweep_exp = "exp1", sweep_param;
  fs::path sweep_config, sweep_rates = "data/table6_rates.json", sweep_out;
  std::vector<double> sweep_values;
  double sweep_end = 9100.0, sweep_step = 100.0, sweep_eps = 1e-12;
  int sweep_threads = -1;
  sweep->add_option("--experiment", sweep_exp, "Built-in experiment id as base");
  sweep->add_option("--config", sweep_config, "Model config JSON as base (overrides --experiment)");
  sweep->add_option("--rates", sweep_rates, "Base rate file (with --experiment)");
  sweep->add_option("--param", sweep_param,
                    "Hazard field, e.g. p_overlook or F_F_B.rate_policy_fail_timely")
      ->required();
  sweep->add_option("--values", sweep_values, "Values to sweep")->required()->delimiter(',');
  sweep->add_option("--out", sweep_out, "Output CSV")->required();
  sweep->add_option("--grid-end", sweep_end, "Grid end (hours)");
  sweep->add_option("--grid-step", sweep_step, "Grid step (hours)");
  sweep->add_option("--epsilon", sweep_eps, "Poisson truncation epsilon");
  sweep->add_option("--threads", sweep_threads, "Worker count (overrides HAZCHAIN_THREADS)");

  // calibrate-study1
  auto* cal = app.add_subcommand("calibrate-study1",
                                 "Fit the study-1 policy-fail-late rate to its target");
  double cal_serious = 1e-3, cal_minor = 1.2e-3;
  fs::path cal_rates = "data/table6_rates.json", cal_out;
  cal->add_option("--target-serious", cal_serious, "exp10 p_serious target at 9100 h");
  cal->add_option("--target-minor", cal_minor, "exp10 p_minor reference value");
  cal->add_option("--rates", cal_rates, "Base rate file");
  cal->add_option("--out", cal_out, "Optional JSON report");

  // generate-log
  auto* gen = app.add_subcommand("generate-log", "Write synthetic frame logs");
  fs::path gen_rates = "data/table6_rates.json", gen_out;
  double gen_hours = 1.0, gen_rate = 10.0;
  uint64_t gen_seed = 1;
  int gen_vehicles = 1;
  gen->add_option("--rates", gen_rates, "Rate file defining the generating chain");
  gen->add_option("--hours", gen_hours, "Total hours across all vehicles");
  gen->add_option("--seed", gen_seed, "Base seed");
  gen->add_option("--frame-rate", gen_rate, "Frames per second");
  gen->add_option("--vehicles", gen_vehicles, "Number of per-vehicle logs");
  gen->add_option("--out-dir", gen_out, "Output dataset directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    int threads = env_threads();
    if (sim_threads >= 0) threads = sim_threads;
    if (study_threads >= 0) threads = study_threads;
    if (sweep_threads >= 0) threads = sweep_threads;

    if (est->parsed())
      return cmd_estimate(est_data, est_estimator, est_out, est_report);
    if (solve->parsed())
      return cmd_solve(solve_config, solve_out, solve_occ, solve_t, solve_end,
                       solve_step, solve_eps);
    if (sim->parsed())
      return cmd_simulate(sim_config, sim_n, sim_seed, sim_hours, sim_out,
                          sim_missions, sim_engine, threads);
    if (study->parsed())
      return cmd_study(study_id, study_rates, study_out, study_solver, study_n,
                       study_seed, study_end, study_step, study_eps, !study_no_svg,
                       threads);
    if (sweep->parsed())
      return cmd_sweep(sweep_config.empty() ? sweep_exp : "", sweep_config, sweep_rates,
                       sweep_param, sweep_values, sweep_out, sweep_end, sweep_step,
                       sweep_eps, threads);
    if (cal->parsed()) return cmd_calibrate(cal_serious, cal_minor, cal_rates, cal_out);
    if (gen->parsed())
      return cmd_generate_log(gen_rates, gen_hours, gen_seed, gen_rate, gen_vehicles,
                              gen_out);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "model validation error: " << e.what() << "\n";
    return 3;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
