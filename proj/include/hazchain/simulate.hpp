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

#ifndef HAZCHAIN_SIMULATE_HPP_
#define HAZCHAIN_SIMULATE_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "hazchain/model.hpp"

namespace hazchain {

struct MissionOutcome {
  enum class Kind : uint8_t { Success, SeriousAccident, MinorAccident };
  Kind kind = Kind::Success;
  // Present iff an accident happened; always <= mission duration.
  std::optional<double> time_of_absorption;
};

struct TrajectoryEvent {
  double time_h = 0.0;  // entry time into the state
  int state = 0;
};

// How estimate() runs its missions.
//   Direct:   event-by-event jump simulation.
//   Thinning: exact long-horizon sampler; the chain without accident arcs is
//             sampled at candidate accident times generated by a dominating
//             Poisson(kappa_max) clock, and each candidate fires with
//             probability kappa(state)/kappa_max. Distribution-identical to
//             Direct, but its cost scales with the accident candidate count
//             instead of the total jump count.
//   Auto:     Direct when the worst-case expected jump count
//             (max exit rate x mission hours) stays small, else Thinning.
enum class McEngine : uint8_t { Auto, Direct, Thinning };

struct SimEstimate {
  uint64_t n = 0;
  uint64_t n_serious = 0;
  uint64_t n_minor = 0;
  uint64_t n_success = 0;
  double p_serious = 0.0;
  double p_minor = 0.0;
  double p_success = 1.0;  // 1 - p_serious - p_minor, so the triple sums to 1
  double se_serious = 0.0;
  double se_minor = 0.0;
  double se_success = 0.0;
  uint64_t seed = 0;
  double mission_hours = 0.0;
};

// One mission by direct event-by-event simulation: repeatedly sample the
// exponential race over the current state's outgoing arcs until absorption
// or until the accumulated time exceeds the mission duration. Deterministic
// given the seed. A non-absorbing state with no outgoing arcs raises
// ValidationError. The optional trajectory records entered states up to
// max_trajectory_events and then stops recording.
MissionOutcome simulate_mission(const Ctmc& chain, double mission_hours,
                                uint64_t seed,
                                std::vector<TrajectoryEvent>* trajectory = nullptr,
                                size_t max_trajectory_events = 100000);

// n independent missions; replication i draws from a dedicated stream keyed
// by (seed, i), so results are bit-identical for any worker count and the
// first m replications of an n-run match an m-run. When `outcomes` is given
// it receives one entry per replication in index order.
SimEstimate estimate(const Ctmc& chain, double mission_hours, uint64_t n,
                     uint64_t seed, int threads = 0,
                     McEngine engine = McEngine::Auto,
                     std::vector<MissionOutcome>* outcomes = nullptr);

// The engine Auto resolves to for the given inputs.
McEngine resolve_engine(const Ctmc& chain, double mission_hours, McEngine requested);

}  // namespace hazchain

#endif  // HAZCHAIN_SIMULATE_HPP_
