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

#ifndef HAZCHAIN_RATES_HPP_
#define HAZCHAIN_RATES_HPP_

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hazchain/states.hpp"

namespace hazchain {

// The 56 directed transition rates between high-level states, in 1/h.
// Never-observed transitions are stored as rate 0.
class RateTable {
 public:
  RateTable() { rates_.fill(0.0); }

  double get(HighLevelState from, HighLevelState to) const {
    return rates_[from.index() * kHighLevelStateCount + to.index()];
  }

  // Throws ValidationError for self-transitions, negative or non-finite rates.
  void set(HighLevelState from, HighLevelState to, double rate_per_hour);

  // All 56 ordered pairs (from != to) in canonical index order.
  static std::vector<std::pair<HighLevelState, HighLevelState>> all_pairs();

  // Pairs with rate > 0, canonical order.
  std::vector<std::pair<HighLevelState, HighLevelState>> nonzero_pairs() const;

  // Sum of outgoing rates of `from`.
  double total_exit_rate(HighLevelState from) const;

  // Multiplies every rate by c (> 0). Used by time-rescaling tests.
  RateTable scaled(double c) const;

  friend bool operator==(const RateTable&, const RateTable&) = default;

 private:
  std::array<double, kHighLevelStateCount * kHighLevelStateCount> rates_;
};

// "rate_F_F_NB2F_F_B" style key used by rate files, matching the
// model-variable naming of the transition tables.
std::string rate_key(HighLevelState from, HighLevelState to);

// Parses a rate key back into its state pair. Throws FormatError.
std::pair<HighLevelState, HighLevelState> parse_rate_key(std::string_view key);

}  // namespace hazchain

#endif  // HAZCHAIN_RATES_HPP_
