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

#include "hazchain/states.hpp"

#include "hazchain/errors.hpp"

namespace hazchain {

std::string HighLevelState::name() const {
  std::string out = road == RoadCondition::Intersection ? "IS" : "F";
  out += speed == SpeedBand::Fast ? "_F" : "_S";
  out += braking == BrakingFlag::Braking ? "_B" : "_NB";
  return out;
}

std::array<HighLevelState, kHighLevelStateCount> all_high_level_states() {
  std::array<HighLevelState, kHighLevelStateCount> out{};
  for (int i = 0; i < kHighLevelStateCount; ++i) out[i] = HighLevelState::from_index(i);
  return out;
}

std::array<HighLevelState, kBrakingStateCount> braking_states() {
  std::array<HighLevelState, kBrakingStateCount> out{};
  int k = 0;
  for (auto s : all_high_level_states())
    if (s.is_hazardous()) out[k++] = s;
  return out;
}

std::array<HighLevelState, kBrakingStateCount> non_braking_states() {
  std::array<HighLevelState, kBrakingStateCount> out{};
  int k = 0;
  for (auto s : all_high_level_states())
    if (!s.is_hazardous()) out[k++] = s;
  return out;
}

int braking_slot(HighLevelState s) {
  if (!s.is_hazardous()) return -1;
  auto all = braking_states();
  for (int i = 0; i < kBrakingStateCount; ++i)
    if (all[i] == s) return i;
  return -1;
}

HighLevelState parse_high_level_state(std::string_view name) {
  for (auto s : all_high_level_states())
    if (s.name() == name) return s;
  throw FormatError("unknown high-level state name: '" + std::string(name) + "'");
}

std::string accident_class_name(AccidentClass c) {
  return c == AccidentClass::Serious ? "Serious" : "Minor";
}

std::string FlatState::name() const {
  switch (kind) {
    case Kind::NonBraking:
    case Kind::Detected:
      return state.name();
    case Kind::Overlooked:
      return state.name() + "_O";
    case Kind::LateDetected:
      return state.name() + "_L";
    case Kind::Accident:
      return "Accident_" + accident_class_name(accident);
  }
  return "?";
}

FlatState parse_flat_state(std::string_view name) {
  if (name == "Accident_Serious") return FlatState::make_accident(AccidentClass::Serious);
  if (name == "Accident_Minor") return FlatState::make_accident(AccidentClass::Minor);
  auto strip_suffix = [&](std::string_view sv, std::string_view suffix) {
    return sv.size() > suffix.size() &&
                   sv.substr(sv.size() - suffix.size()) == suffix
               ? sv.substr(0, sv.size() - suffix.size())
               : std::string_view{};
  };
  if (auto base = strip_suffix(name, "_O"); !base.empty()) {
    HighLevelState s = parse_high_level_state(base);
    if (s.is_hazardous()) return FlatState::overlooked(s);
  } else if (auto late = strip_suffix(name, "_L"); !late.empty()) {
    HighLevelState s = parse_high_level_state(late);
    if (s.is_hazardous()) return FlatState::late_detected(s);
  } else {
    HighLevelState s = parse_high_level_state(name);
    return s.is_hazardous() ? FlatState::detected(s) : FlatState::non_braking(s);
  }
  throw FormatError("invalid flat-state name: '" + std::string(name) + "'");
}

}  // namespace hazchain
