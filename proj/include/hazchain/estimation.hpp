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

#ifndef HAZCHAIN_ESTIMATION_HPP_
#define HAZCHAIN_ESTIMATION_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hazchain/model.hpp"
#include "hazchain/rates.hpp"
#include "hazchain/states.hpp"

namespace hazchain {

// Dataset-level metadata. The frame rate has no default on purpose: every
// estimated rate scales with it, so the dataset must state it.
struct DatasetMeta {
  double frame_rate_hz = 0.0;  // required, > 0
  Thresholds thresholds;
  std::string vehicle_id;

  void require_valid() const;
};

// One run-length row of a frame log: the state held for duration_frames
// frames starting at frame_index. Speed and braking come either as
// categorical bands or as raw measurements, depending on the log variant.
struct FrameRecord {
  uint64_t frame_index = 0;
  RoadCondition driving_type = RoadCondition::Free;
  std::optional<SpeedBand> speed_band;
  std::optional<double> speed_mps;
  std::optional<BrakingFlag> braking_flag;
  std::optional<double> decel_mps2;
  uint32_t duration_frames = 1;
};

struct SojournRecord {
  HighLevelState state;
  double duration_s = 0.0;
  std::optional<HighLevelState> next;  // empty marks end of trace
};

// Thresholded classification of raw measurements: fast means speed strictly
// above the threshold, braking means deceleration at or above it. Negative
// speeds are rejected.
HighLevelState classify_frame(double speed_mps, double decel_mps2,
                              RoadCondition road, const DatasetMeta& meta);

// The high-level state a frame record encodes under the given thresholds.
HighLevelState classify_record(const FrameRecord& rec, const DatasetMeta& meta);

// Incremental run-length segmentation: push frame records in order, collect
// completed sojourns, and call finish() once to flush the final (end-of-
// trace) sojourn. Frame indices must be contiguous.
class SojournSegmenter {
 public:
  explicit SojournSegmenter(const DatasetMeta& meta);

  void push(const FrameRecord& rec, std::vector<SojournRecord>& out);
  void finish(std::vector<SojournRecord>& out);

 private:
  DatasetMeta meta_;
  bool open_ = false;
  bool finished_ = false;
  HighLevelState current_{};
  uint64_t next_frame_ = 0;
  uint64_t run_frames_ = 0;
};

std::vector<SojournRecord> segment_sojourns(std::span<const FrameRecord> frames,
                                            const DatasetMeta& meta);

// Transition tallies: occurrence counts and the summed duration of the
// sojourns in `from` that ended by moving to `to`. End-of-trace sojourns are
// right-censored and excluded entirely.
struct TransitionCounts {
  std::array<uint64_t, kHighLevelStateCount * kHighLevelStateCount> count{};
  std::array<double, kHighLevelStateCount * kHighLevelStateCount> duration_s{};

  uint64_t get_count(HighLevelState from, HighLevelState to) const {
    return count[static_cast<size_t>(from.index() * kHighLevelStateCount + to.index())];
  }
  double get_duration_s(HighLevelState from, HighLevelState to) const {
    return duration_s[static_cast<size_t>(from.index() * kHighLevelStateCount + to.index())];
  }
  void add(const SojournRecord& sojourn);
  // Field-wise sum; merging per-vehicle tallies is associative.
  TransitionCounts& operator+=(const TransitionCounts& other);
};

TransitionCounts count_transitions(std::span<const SojournRecord> sojourns);

enum class Estimator : uint8_t {
  // rate(f,t) = count(f,t) / total duration of f-sojourns that ended in t.
  PerTransition,
  // rate(f,t) = count(f,t) / total observed time in f; rates within a source
  // state are proportional to counts.
  CompetingRisks,
};

struct RateEstimates {
  RateTable rates;
  Estimator estimator = Estimator::PerTransition;
  TransitionCounts support;
  std::vector<std::pair<HighLevelState, HighLevelState>> zero_count;
  // Pairs observed fewer than 5 times; their rates carry little support.
  std::vector<std::pair<HighLevelState, HighLevelState>> low_count;
};

RateEstimates estimate_rates(const TransitionCounts& counts,
                             Estimator estimator = Estimator::PerTransition);

// Samples the high-level chain defined by the rate table as a per-transition
// exponential race, quantizes sojourns to whole frames (at least one), and
// emits run-length records until total_hours of frames have been produced.
// Deterministic given the seed. The walk starts in F_F_NB and fails with
// ValidationError if it enters a state with no outgoing rates.
void generate_synthetic_log(const RateTable& rates, double total_hours,
                            uint64_t seed, const DatasetMeta& meta,
                            const std::function<void(const FrameRecord&)>& sink);

std::vector<FrameRecord> generate_synthetic_log(const RateTable& rates,
                                                double total_hours, uint64_t seed,
                                                const DatasetMeta& meta);

}  // namespace hazchain

#endif  // HAZCHAIN_ESTIMATION_HPP_
