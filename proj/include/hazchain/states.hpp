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

#ifndef HAZCHAIN_STATES_HPP_
#define HAZCHAIN_STATES_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace hazchain {

enum class RoadCondition : uint8_t { Free, Intersection };
enum class SpeedBand : uint8_t { Fast, Slow };
enum class BrakingFlag : uint8_t { Braking, NonBraking };
enum class AccidentClass : uint8_t { Serious, Minor };

// One of the 8 driving states: road condition x speed band x braking flag.
// Canonical order (index 0..7):
//   F_F_NB, F_F_B, F_S_NB, F_S_B, IS_F_NB, IS_F_B, IS_S_NB, IS_S_B
struct HighLevelState {
  RoadCondition road = RoadCondition::Free;
  SpeedBand speed = SpeedBand::Fast;
  BrakingFlag braking = BrakingFlag::NonBraking;

  constexpr bool is_hazardous() const { return braking == BrakingFlag::Braking; }

  constexpr AccidentClass accident_class() const {
    return speed == SpeedBand::Fast ? AccidentClass::Serious
                                    : AccidentClass::Minor;
  }

  constexpr int index() const {
    return (road == RoadCondition::Intersection ? 4 : 0) +
           (speed == SpeedBand::Slow ? 2 : 0) +
           (braking == BrakingFlag::Braking ? 1 : 0);
  }

  static constexpr HighLevelState from_index(int i) {
    return HighLevelState{
        (i & 4) ? RoadCondition::Intersection : RoadCondition::Free,
        (i & 2) ? SpeedBand::Slow : SpeedBand::Fast,
        (i & 1) ? BrakingFlag::Braking : BrakingFlag::NonBraking};
  }

  std::string name() const;

  friend constexpr bool operator==(HighLevelState a, HighLevelState b) {
    return a.index() == b.index();
  }
  friend constexpr auto operator<=>(HighLevelState a, HighLevelState b) {
    return a.index() <=> b.index();
  }
};

inline constexpr int kHighLevelStateCount = 8;
inline constexpr int kBrakingStateCount = 4;

// All 8 states in canonical order.
std::array<HighLevelState, kHighLevelStateCount> all_high_level_states();

// The 4 hazardous (braking) states in canonical order:
// F_F_B, F_S_B, IS_F_B, IS_S_B.
std::array<HighLevelState, kBrakingStateCount> braking_states();

// The 4 non-braking states in canonical order:
// F_F_NB, F_S_NB, IS_F_NB, IS_S_NB.
std::array<HighLevelState, kBrakingStateCount> non_braking_states();

// Position of a braking state within braking_states(); -1 if non-braking.
int braking_slot(HighLevelState s);

// Parses a canonical name such as "IS_F_NB". Throws FormatError otherwise.
HighLevelState parse_high_level_state(std::string_view name);

std::string accident_class_name(AccidentClass c);

// A node of the flattened chain. Braking high-level states expand into
// three perception substates; accidents are absorbing terminal nodes.
struct FlatState {
  enum class Kind : uint8_t {
    NonBraking,    // non-braking driving state
    Detected,      // braking, hazard detected on entry
    Overlooked,    // braking, hazard missed on entry
    LateDetected,  // braking, hazard detected after a delay
    Accident,
  };

  Kind kind = Kind::NonBraking;
  HighLevelState state{};             // meaningful unless kind == Accident
  AccidentClass accident = AccidentClass::Serious;  // only for Accident

  static FlatState non_braking(HighLevelState s) {
    return {Kind::NonBraking, s, AccidentClass::Serious};
  }
  static FlatState detected(HighLevelState s) {
    return {Kind::Detected, s, AccidentClass::Serious};
  }
  static FlatState overlooked(HighLevelState s) {
    return {Kind::Overlooked, s, AccidentClass::Serious};
  }
  static FlatState late_detected(HighLevelState s) {
    return {Kind::LateDetected, s, AccidentClass::Serious};
  }
  static FlatState make_accident(AccidentClass c) {
    return {Kind::Accident, HighLevelState{}, c};
  }

  bool is_absorbing() const { return kind == Kind::Accident; }

  // Canonical names: "F_F_NB" / "F_F_B" (detected) / "F_F_B_O" (overlooked) /
  // "F_F_B_L" (late detected) / "Accident_Serious" / "Accident_Minor".
  std::string name() const;

  friend bool operator==(const FlatState& a, const FlatState& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Kind::Accident) return a.accident == b.accident;
    return a.state == b.state;
  }
};

// Parses a canonical flat-state name. Throws FormatError otherwise.
FlatState parse_flat_state(std::string_view name);

}  // namespace hazchain

#endif  // HAZCHAIN_STATES_HPP_
