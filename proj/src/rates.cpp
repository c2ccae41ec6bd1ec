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

#include "hazchain/rates.hpp"

#include <cmath>

#include "hazchain/errors.hpp"

namespace hazchain {

void RateTable::set(HighLevelState from, HighLevelState to, double rate_per_hour) {
  if (from == to)
    throw ValidationError("self-transition " + from.name() + " -> " + to.name());
  if (!std::isfinite(rate_per_hour) || rate_per_hour < 0.0)
    throw ValidationError("rate " + rate_key(from, to) + " must be finite and >= 0, got " +
                          std::to_string(rate_per_hour));
  rates_[from.index() * kHighLevelStateCount + to.index()] = rate_per_hour;
}

std::vector<std::pair<HighLevelState, HighLevelState>> RateTable::all_pairs() {
  std::vector<std::pair<HighLevelState, HighLevelState>> out;
  out.reserve(kHighLevelStateCount * (kHighLevelStateCount - 1));
  for (auto from : all_high_level_states())
    for (auto to : all_high_level_states())
      if (!(from == to)) out.emplace_back(from, to);
  return out;
}

std::vector<std::pair<HighLevelState, HighLevelState>> RateTable::nonzero_pairs() const {
  std::vector<std::pair<HighLevelState, HighLevelState>> out;
  for (auto& [from, to] : all_pairs())
    if (get(from, to) > 0.0) out.emplace_back(from, to);
  return out;
}

double RateTable::total_exit_rate(HighLevelState from) const {
  double total = 0.0;
  for (auto to : all_high_level_states())
    if (!(from == to)) total += get(from, to);
  return total;
}

RateTable RateTable::scaled(double c) const {
  if (!(c > 0.0)) throw ValidationError("scale factor must be > 0");
  RateTable out = *this;
  for (double& r : out.rates_) r *= c;
  return out;
}

std::string rate_key(HighLevelState from, HighLevelState to) {
  return "rate_" + from.name() + "2" + to.name();
}

std::pair<HighLevelState, HighLevelState> parse_rate_key(std::string_view key) {
  constexpr std::string_view prefix = "rate_";
  if (key.substr(0, prefix.size()) != prefix)
    throw FormatError("rate key must start with 'rate_': '" + std::string(key) + "'");
  std::string_view body = key.substr(prefix.size());
  // State names contain no digits, so the single '2' separator is unambiguous.
  size_t sep = body.find('2');
  if (sep == std::string_view::npos)
    throw FormatError("rate key missing '2' separator: '" + std::string(key) + "'");
  HighLevelState from = parse_high_level_state(body.substr(0, sep));
  HighLevelState to = parse_high_level_state(body.substr(sep + 1));
  if (from == to)
    throw FormatError("rate key names a self-transition: '" + std::string(key) + "'");
  return {from, to};
}

}  // namespace hazchain
