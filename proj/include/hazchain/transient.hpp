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

#ifndef HAZCHAIN_TRANSIENT_HPP_
#define HAZCHAIN_TRANSIENT_HPP_

#include <cstdint>
#include <vector>

#include "hazchain/model.hpp"

namespace hazchain {

// Mission-time reporting grid, in hours. Strictly increasing, all > 0.
struct TimeGrid {
  std::vector<double> points;

  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> pts);

  // t = step, 2*step, ... up to end, with end appended when the step does
  // not land on it exactly. Default: 100 h steps to 9100 h.
  static TimeGrid regular(double end_hours = 9100.0, double step_hours = 100.0);
  static TimeGrid single(double t_hours);

  size_t size() const { return points.size(); }
};

struct SolverOptions {
  // Total Poisson tail mass discarded per grid point (left + right).
  double truncation_epsilon = 1e-12;
  // Cap on uniformized kernel steps, guarding against pathological rates.
  int64_t max_uniformization_steps = 500'000'000;
};

struct TransientResult {
  TimeGrid grid;
  // occupancy[k][s] = probability of flat state s at grid point k.
  std::vector<std::vector<double>> occupancy;
  std::vector<double> p_serious;
  std::vector<double> p_minor;
  std::vector<double> p_success;  // 1 - p_serious - p_minor
};

// Transient state probabilities by uniformization: occupancy(t) is the
// Poisson(Lambda*t) mixture of powers of the uniformized kernel
// P = I + Q/Lambda with Lambda = 1.02 * max exit rate. The kernel power
// iteration runs once, continued across grid points in ascending order;
// per-point Poisson windows are truncated left and right so the discarded
// mass stays below truncation_epsilon. Throws SolverError when the required
// step count exceeds the configured cap.
TransientResult uniformize(const Ctmc& chain, const TimeGrid& grid,
                           const SolverOptions& opts = {});

struct OutcomeProbs {
  double p_serious = 0.0;
  double p_minor = 0.0;
  double p_success = 1.0;
};

// Single-point wrapper of uniformize.
OutcomeProbs mission_outcome_probs(const Ctmc& chain, double mission_hours,
                                   const SolverOptions& opts = {});

}  // namespace hazchain

#endif  // HAZCHAIN_TRANSIENT_HPP_
