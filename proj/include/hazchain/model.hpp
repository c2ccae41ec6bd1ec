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

#ifndef HAZCHAIN_MODEL_HPP_
#define HAZCHAIN_MODEL_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hazchain/rates.hpp"
#include "hazchain/states.hpp"

namespace hazchain {

// Per-braking-state parameters of the hazard submodel. All rates in 1/h.
struct HazardParams {
  // Probability, per entry into the braking state, that the hazard is
  // overlooked by the perception system.
  double p_overlook = 0.0;
  // Rate of the overlooked hazard being detected after all (ends the
  // overlooked phase, entering the late-detected substate).
  double rate_overlook_exit = 0.0;
  // Rate of an accident happening while the hazard is still overlooked.
  double rate_accident_during_overlook = 0.0;
  // Driving-policy failure rate given timely and correct detection.
  double rate_policy_fail_timely = 0.0;
  // Driving-policy failure rate given late detection.
  double rate_policy_fail_late = 0.0;
  // When true, the overlooked substate also carries the state's normal
  // high-level exits (the hazard may resolve itself while undetected).
  bool overlooked_self_resolve = false;

  friend bool operator==(const HazardParams&, const HazardParams&) = default;
};

struct Thresholds {
  double speed_threshold_mps = 15.0;   // fast means strictly above
  double decel_threshold_mps2 = 2.0;   // braking means at or above

  friend bool operator==(const Thresholds&, const Thresholds&) = default;
};

// Initial-state spec accepted by ModelConfig::initial_state: a canonical
// flat-state name ("F_F_NB", "IS_F_B_O", ...), a high-level name (mapped to
// its non-braking or detected substate), or this sentinel selecting the
// stationary distribution of the embedded jump chain over non-absorbing
// states (accident arcs dropped).
inline constexpr const char* kQuasiStationaryInitial = "quasi-stationary";

struct ModelConfig {
  RateTable rates;
  // Indexed by braking_states() order: F_F_B, F_S_B, IS_F_B, IS_S_B.
  std::array<HazardParams, kBrakingStateCount> hazard{};
  std::string initial_state = "F_F_NB";
  Thresholds thresholds;

  HazardParams& hazard_for(HighLevelState s);
  const HazardParams& hazard_for(HighLevelState s) const;
};

struct Transition {
  int from = 0;
  int to = 0;
  double rate = 0.0;  // 1/h, > 0 for stored transitions

  friend bool operator==(const Transition&, const Transition&) = default;
};

// The flattened continuous-time Markov chain. Immutable once built; safe to
// share across solver and simulator threads.
struct Ctmc {
  std::vector<FlatState> states;
  std::vector<Transition> transitions;  // sorted by (from, to), merged, rate > 0
  std::vector<double> initial;          // sums to 1
  std::vector<int> absorbing;           // sorted state indices

  int num_states() const { return static_cast<int>(states.size()); }
  bool is_absorbing(int state_index) const;
  // -1 when the flat state is not part of this chain.
  int index_of(const FlatState& s) const;
  // Index of the accident state of the given class, -1 if absent.
  int accident_index(AccidentClass c) const;
  // Total outgoing rate per state.
  std::vector<double> exit_rates() const;
};

// Flat state space in documented canonical order: the 4 non-braking states,
// then Detected/Overlooked/LateDetected for each braking state, then
// Accident(Serious), Accident(Minor). 18 states. Stable across runs.
std::vector<FlatState> enumerate_states(const ModelConfig& config);

// Builds the flattened chain:
//   1. each high-level transition X -> Y with rate r produces arcs from every
//      exit-capable substate of X (NonBraking; Detected; LateDetected;
//      Overlooked only if overlooked_self_resolve) into Y's entry substates;
//   2. entry into a braking Y splits by the overlook probability:
//      r * p_overlook into Overlooked(Y), the remainder into Detected(Y);
//   3. Detected(X)  -> Accident(class of X) at rate_policy_fail_timely;
//   4. Overlooked(X) -> LateDetected(X) at rate_overlook_exit and
//      Overlooked(X) -> Accident(class of X) at rate_accident_during_overlook;
//   5. LateDetected(X) -> Accident(class of X) at rate_policy_fail_late;
//   6. accident states have no outgoing transitions.
// Zero-rate arcs are omitted. Throws ValidationError on negative rates,
// overlook probabilities outside [0,1], or an absorbing initial state.
Ctmc build_ctmc(const ModelConfig& config);

// Report-only diagnostics over an arbitrary chain.
struct CtmcDiagnostics {
  std::vector<std::string> negative_rate_arcs;
  std::vector<std::string> absorbing_violations;   // arcs leaving absorbing states
  std::vector<std::string> zero_exit_nonabsorbing; // dead-end transient states
  std::vector<std::string> unreachable_states;     // from the initial distribution
  bool serious_reachable = false;
  bool minor_reachable = false;
  double max_exit_rate = 0.0;

  bool ok() const {
    return negative_rate_arcs.empty() && absorbing_violations.empty();
  }
  std::string summary() const;
};

CtmcDiagnostics validate(const Ctmc& chain);

}  // namespace hazchain

#endif  // HAZCHAIN_MODEL_HPP_
