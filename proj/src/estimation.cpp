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

#include "hazchain/estimation.hpp"

#include <cmath>

#include "hazchain/errors.hpp"
#include "hazchain/rng.hpp"

namespace hazchain {

void DatasetMeta::require_valid() const {
  if (!(frame_rate_hz > 0.0) || !std::isfinite(frame_rate_hz))
    throw FormatError("dataset metadata must specify frame_rate_hz > 0");
}

HighLevelState classify_frame(double speed_mps, double decel_mps2,
                              RoadCondition road, const DatasetMeta& meta) {
  if (speed_mps < 0.0 || !std::isfinite(speed_mps))
    throw std::invalid_argument("speed must be >= 0, got " + std::to_string(speed_mps));
  return HighLevelState{
      road,
      speed_mps > meta.thresholds.speed_threshold_mps ? SpeedBand::Fast
                                                      : SpeedBand::Slow,
      decel_mps2 >= meta.thresholds.decel_threshold_mps2 ? BrakingFlag::Braking
                                                         : BrakingFlag::NonBraking};
}

HighLevelState classify_record(const FrameRecord& rec, const DatasetMeta& meta) {
  SpeedBand speed;
  if (rec.speed_band) {
    speed = *rec.speed_band;
  } else if (rec.speed_mps) {
    if (*rec.speed_mps < 0.0)
      throw FormatError("negative speed at frame " + std::to_string(rec.frame_index));
    speed = *rec.speed_mps > meta.thresholds.speed_threshold_mps ? SpeedBand::Fast
                                                                 : SpeedBand::Slow;
  } else {
    throw FormatError("frame record carries neither a speed band nor a raw speed");
  }
  BrakingFlag braking;
  if (rec.braking_flag) {
    braking = *rec.braking_flag;
  } else if (rec.decel_mps2) {
    braking = *rec.decel_mps2 >= meta.thresholds.decel_threshold_mps2
                  ? BrakingFlag::Braking
                  : BrakingFlag::NonBraking;
  } else {
    throw FormatError("frame record carries neither a braking flag nor a deceleration");
  }
  return HighLevelState{rec.driving_type, speed, braking};
}

SojournSegmenter::SojournSegmenter(const DatasetMeta& meta) : meta_(meta) {
  meta_.require_valid();
}

void SojournSegmenter::push(const FrameRecord& rec, std::vector<SojournRecord>& out) {
  if (finished_) throw FormatError("segmenter already finished");
  if (rec.duration_frames < 1)
    throw FormatError("duration must be >= 1 frame at frame " +
                      std::to_string(rec.frame_index));
  const HighLevelState state = classify_record(rec, meta_);
  if (!open_) {
    open_ = true;
    current_ = state;
    next_frame_ = rec.frame_index + rec.duration_frames;
    run_frames_ = rec.duration_frames;
    return;
  }
  if (rec.frame_index != next_frame_)
    throw FormatError("frame index " + std::to_string(rec.frame_index) +
                      " does not continue previous row (expected " +
                      std::to_string(next_frame_) + ")");
  next_frame_ += rec.duration_frames;
  if (state == current_) {
    run_frames_ += rec.duration_frames;  // adjacent rows with equal state merge
    return;
  }
  out.push_back({current_,
                 static_cast<double>(run_frames_) / meta_.frame_rate_hz,
                 state});
  current_ = state;
  run_frames_ = rec.duration_frames;
}

void SojournSegmenter::finish(std::vector<SojournRecord>& out) {
  if (finished_) return;
  finished_ = true;
  if (open_)
    out.push_back({current_,
                   static_cast<double>(run_frames_) / meta_.frame_rate_hz,
                   std::nullopt});
}

std::vector<SojournRecord> segment_sojourns(std::span<const FrameRecord> frames,
                                            const DatasetMeta& meta) {
  if (frames.empty()) throw FormatError("frame log is empty");
  SojournSegmenter seg(meta);
  std::vector<SojournRecord> out;
  for (const FrameRecord& rec : frames) seg.push(rec, out);
  seg.finish(out);
  return out;
}

void TransitionCounts::add(const SojournRecord& sojourn) {
  if (!sojourn.next) return;  // censored
  const size_t k = static_cast<size_t>(sojourn.state.index() * kHighLevelStateCount +
                                       sojourn.next->index());
  ++count[k];
  duration_s[k] += sojourn.duration_s;
}

TransitionCounts& TransitionCounts::operator+=(const TransitionCounts& other) {
  for (size_t k = 0; k < count.size(); ++k) {
    count[k] += other.count[k];
    duration_s[k] += other.duration_s[k];
  }
  return *this;
}

TransitionCounts count_transitions(std::span<const SojournRecord> sojourns) {
  TransitionCounts out;
  for (const SojournRecord& s : sojourns) out.add(s);
  return out;
}

RateEstimates estimate_rates(const TransitionCounts& counts, Estimator estimator) {
  RateEstimates out;
  out.estimator = estimator;
  out.support = counts;
  for (auto from : all_high_level_states()) {
    double time_in_from_s = 0.0;
    for (auto to : all_high_level_states())
      if (!(from == to)) time_in_from_s += counts.get_duration_s(from, to);
    for (auto to : all_high_level_states()) {
      if (from == to) continue;
      const uint64_t c = counts.get_count(from, to);
      if (c == 0) {
        out.zero_count.emplace_back(from, to);
        continue;
      }
      if (c < 5) out.low_count.emplace_back(from, to);
      const double denom_s = estimator == Estimator::PerTransition
                                 ? counts.get_duration_s(from, to)
                                 : time_in_from_s;
      out.rates.set(from, to, static_cast<double>(c) / (denom_s / 3600.0));
    }
  }
  return out;
}

void generate_synthetic_log(const RateTable& rates, double total_hours,
                            uint64_t seed, const DatasetMeta& meta,
                            const std::function<void(const FrameRecord&)>& sink) {
  meta.require_valid();
  if (total_hours < 0.0) throw std::invalid_argument("total_hours must be >= 0");

  const uint64_t total_frames = static_cast<uint64_t>(
      std::floor(total_hours * 3600.0 * meta.frame_rate_hz));
  if (total_frames == 0) return;

  // Per-state exponential race, collapsed to (holding ~ Exp(total rate),
  // destination ~ rates/total), which has the same law.
  std::array<double, kHighLevelStateCount> exit{};
  std::array<std::array<double, kHighLevelStateCount>, kHighLevelStateCount> cum{};
  for (auto from : all_high_level_states()) {
    double acc = 0.0;
    for (auto to : all_high_level_states()) {
      if (!(from == to)) acc += rates.get(from, to);
      cum[static_cast<size_t>(from.index())][static_cast<size_t>(to.index())] = acc;
    }
    exit[static_cast<size_t>(from.index())] = acc;
  }

  Rng rng(seed, 0);
  int state = HighLevelState{RoadCondition::Free, SpeedBand::Fast,
                             BrakingFlag::NonBraking}
                  .index();
  uint64_t frame = 0;
  while (frame < total_frames) {
    const double q = exit[static_cast<size_t>(state)];
    if (q <= 0.0)
      throw ValidationError("synthetic walk entered state with no outgoing rates: " +
                            HighLevelState::from_index(state).name());
    const double sojourn_s = rng.exponential(q) * 3600.0;
    uint64_t frames = static_cast<uint64_t>(
        std::llround(sojourn_s * meta.frame_rate_hz));
    if (frames < 1) frames = 1;
    if (frame + frames > total_frames) frames = total_frames - frame;

    const HighLevelState s = HighLevelState::from_index(state);
    FrameRecord rec;
    rec.frame_index = frame;
    rec.driving_type = s.road;
    rec.speed_band = s.speed;
    rec.braking_flag = s.braking;
    rec.duration_frames = static_cast<uint32_t>(frames);
    sink(rec);
    frame += frames;

    const double u =
        rng.uniform01() * cum[static_cast<size_t>(state)][kHighLevelStateCount - 1];
    int next = 0;
    while (next < kHighLevelStateCount - 1 &&
           cum[static_cast<size_t>(state)][static_cast<size_t>(next)] <= u)
      ++next;
    state = next;
  }
}

std::vector<FrameRecord> generate_synthetic_log(const RateTable& rates,
                                                double total_hours, uint64_t seed,
                                                const DatasetMeta& meta) {
  std::vector<FrameRecord> out;
  generate_synthetic_log(rates, total_hours, seed, meta,
                         [&](const FrameRecord& r) { out.push_back(r); });
  return out;
}

}  // namespace hazchain
