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

#ifndef HAZCHAIN_IO_HPP_
#define HAZCHAIN_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hazchain/estimation.hpp"
#include "hazchain/model.hpp"
#include "hazchain/simulate.hpp"
#include "hazchain/transient.hpp"

namespace hazchain {

// All JSON files carry {"schema_version": 1}; unknown versions are rejected.

// Rate file: {"schema_version", "rates": {"rate_F_F_NB2F_F_B": 170.61, ...},
// optional "counts" with the same keys}. Omitted transitions default to 0.
struct RateFile {
  RateTable rates;
  std::optional<TransitionCounts> counts;
};

RateFile read_rate_file(const std::filesystem::path& path);
void write_rate_file(const std::filesystem::path& path, const RateTable& rates,
                     const TransitionCounts* counts = nullptr);

// Model config: {"schema_version", "rates" (inline map) or "rates_file"
// (path, resolved relative to the config), "hazard": {"F_F_B": {...}, ...},
// "initial_state", "thresholds"}. Missing hazard entries default to all
// zeros; missing rates to 0.
ModelConfig read_model_config(const std::filesystem::path& path);
void write_model_config(const std::filesystem::path& path, const ModelConfig& config);

// Dataset metadata (meta.json). frame_rate_hz is required.
enum class VehicleMerge : uint8_t { Sum, AverageRates };
struct DatasetMetaFile {
  DatasetMeta meta;
  VehicleMerge merge = VehicleMerge::Sum;
};
DatasetMetaFile read_dataset_meta(const std::filesystem::path& path);

// Frame-log CSV. Two header variants:
//   frame,driving_type,speed,braking,duration          (categorical columns)
//   frame,driving_type,speed_mps,decel_mps2,duration   (raw measurements)
void read_frame_csv(const std::filesystem::path& path,
                    const std::function<void(const FrameRecord&)>& sink);
std::vector<FrameRecord> read_frame_csv(const std::filesystem::path& path);
void write_frame_csv(const std::filesystem::path& path,
                     std::span<const FrameRecord> frames);

// A dataset directory: one or more .csv frame logs plus meta.json. Counts are
// tallied per vehicle and merged per the metadata's merge mode.
struct DatasetEstimate {
  RateEstimates estimates;
  DatasetMetaFile meta;
  std::vector<std::string> vehicles;
  double total_hours = 0.0;
};
DatasetEstimate estimate_dataset(const std::filesystem::path& dir, Estimator estimator);

// Diagnostics sidecar for an estimation run.
void write_estimation_report(const std::filesystem::path& path,
                             const DatasetEstimate& result);

// Transient curves: "t_hours,p_serious,p_minor,p_success".
void write_curves_csv(const std::filesystem::path& path, const TransientResult& result);
// Full occupancy: t_hours plus one column per flat state, canonical names.
void write_occupancy_csv(const std::filesystem::path& path, const Ctmc& chain,
                         const TransientResult& result);

void write_sim_estimate_json(const std::filesystem::path& path, const SimEstimate& est,
                             McEngine engine_used);
// Per-mission outcomes: "replication,outcome,t_absorb_hours".
void write_missions_csv(const std::filesystem::path& path,
                        std::span<const MissionOutcome> outcomes);

// Deterministic double formatting used by every CSV writer (shortest
// round-trip representation).
std::string format_double(double v);

// FNV-1a 64 over a file's bytes, for provenance records.
uint64_t file_hash(const std::filesystem::path& path);

}  // namespace hazchain

#endif  // HAZCHAIN_IO_HPP_
