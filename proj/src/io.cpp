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

#include "hazchain/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hazchain/errors.hpp"
#include "hazchain/version.hpp"

namespace hazchain {

using json = nlohmann::ordered_json;

namespace {

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void check_schema(const json& j, const std::filesystem::path& path) {
  if (!j.is_object() || !j.contains("schema_version"))
    throw FormatError(path.string() + " is missing schema_version");
  if (!j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != kSchemaVersion)
    throw FormatError(path.string() + " has unsupported schema_version " +
                      j["schema_version"].dump() + " (expected " +
                      std::to_string(kSchemaVersion) + ")");
}

void save_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

double require_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number())
    throw FormatError(where + " is missing numeric field '" + key + "'");
  return j[key].get<double>();
}

std::string trim(std::string_view sv) {
  size_t b = sv.find_first_not_of(" \t\r");
  size_t e = sv.find_last_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return std::string(sv.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(trim(std::string_view(line).substr(start)));
      break;
    }
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

double parse_double_field(const std::string& s, const std::string& where) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError("bad numeric value '" + s + "' in " + where);
  }
}

uint64_t parse_uint_field(const std::string& s, const std::string& where) {
  uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw FormatError("bad integer value '" + s + "' in " + where);
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

uint64_t file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  return h;
}

RateFile read_rate_file(const std::filesystem::path& path) {
  json j = load_json(path);
  check_schema(j, path);
  if (!j.contains("rates") || !j["rates"].is_object())
    throw FormatError(path.string() + " is missing a 'rates' object");
  RateFile out;
  for (auto& [key, value] : j["rates"].items()) {
    auto [from, to] = parse_rate_key(key);
    if (!value.is_number())
      throw FormatError(path.string() + ": rate '" + key + "' is not a number");
    out.rates.set(from, to, value.get<double>());
  }
  if (j.contains("counts")) {
    TransitionCounts counts;
    for (auto& [key, value] : j["counts"].items()) {
      auto [from, to] = parse_rate_key(key);
      counts.count[static_cast<size_t>(from.index() * kHighLevelStateCount +
                                       to.index())] = value.get<uint64_t>();
    }
    out.counts = counts;
  }
  return out;
}

void write_rate_file(const std::filesystem::path& path, const RateTable& rates,
                     const TransitionCounts* counts) {
  json j;
  j["schema_version"] = kSchemaVersion;
  json r = json::object();
  for (auto& [from, to] : RateTable::all_pairs())
    r[rate_key(from, to)] = rates.get(from, to);
  j["rates"] = std::move(r);
  if (counts) {
    json c = json::object();
    for (auto& [from, to] : RateTable::all_pairs())
      c[rate_key(from, to)] = counts->get_count(from, to);
    j["counts"] = std::move(c);
  }
  save_json(path, j);
}

namespace {

HazardParams parse_hazard_block(const json& j, const std::string& where) {
  HazardParams h;
  for (auto& [key, value] : j.items()) {
    if (key == "p_overlook") h.p_overlook = value.get<double>();
    else if (key == "rate_overlook_exit") h.rate_overlook_exit = value.get<double>();
    else if (key == "rate_accident_during_overlook")
      h.rate_accident_during_overlook = value.get<double>();
    else if (key == "rate_policy_fail_timely")
      h.rate_policy_fail_timely = value.get<double>();
    else if (key == "rate_policy_fail_late")
      h.rate_policy_fail_late = value.get<double>();
    else if (key == "overlooked_self_resolve")
      h.overlooked_self_resolve = value.get<bool>();
    else
      throw FormatError(where + " has unknown hazard field '" + key + "'");
  }
  return h;
}

json hazard_block_json(const HazardParams& h) {
  json j;
  j["p_overlook"] = h.p_overlook;
  j["rate_overlook_exit"] = h.rate_overlook_exit;
  j["rate_accident_during_overlook"] = h.rate_accident_during_overlook;
  j["rate_policy_fail_timely"] = h.rate_policy_fail_timely;
  j["rate_policy_fail_late"] = h.rate_policy_fail_late;
  j["overlooked_self_resolve"] = h.overlooked_self_resolve;
  return j;
}

}  // namespace

ModelConfig read_model_config(const std::filesystem::path& path) {
  json j = load_json(path);
  check_schema(j, path);
  ModelConfig config;
  bool have_rates = false;
  for (auto& [key, value] : j.items()) {
    if (key == "schema_version") continue;
    if (key == "rates") {
      if (have_rates) throw FormatError(path.string() + ": give 'rates' or 'rates_file', not both");
      for (auto& [rk, rv] : value.items()) {
        auto [from, to] = parse_rate_key(rk);
        config.rates.set(from, to, rv.get<double>());
      }
      have_rates = true;
    } else if (key == "rates_file") {
      if (have_rates) throw FormatError(path.string() + ": give 'rates' or 'rates_file', not both");
      config.rates = read_rate_file(path.parent_path() / value.get<std::string>()).rates;
      have_rates = true;
    } else if (key == "hazard") {
      for (auto& [state_name, block] : value.items()) {
        HighLevelState s = parse_high_level_state(state_name);
        if (!s.is_hazardous())
          throw FormatError(path.string() + ": hazard block for non-braking state " +
                            state_name);
        config.hazard_for(s) =
            parse_hazard_block(block, path.string() + " hazard." + state_name);
      }
    } else if (key == "initial_state") {
      config.initial_state = value.get<std::string>();
    } else if (key == "thresholds") {
      for (auto& [tk, tv] : value.items()) {
        if (tk == "speed_threshold_mps")
          config.thresholds.speed_threshold_mps = tv.get<double>();
        else if (tk == "decel_threshold_mps2")
          config.thresholds.decel_threshold_mps2 = tv.get<double>();
        else
          throw FormatError(path.string() + " has unknown threshold '" + tk + "'");
      }
    } else {
      throw FormatError(path.string() + " has unknown field '" + key + "'");
    }
  }
  if (!have_rates)
    throw FormatError(path.string() + " must provide 'rates' or 'rates_file'");
  return config;
}

void write_model_config(const std::filesystem::path& path, const ModelConfig& config) {
  json j;
  j["schema_version"] = kSchemaVersion;
  json r = json::object();
  for (auto& [from, to] : RateTable::all_pairs())
    r[rate_key(from, to)] = config.rates.get(from, to);
  j["rates"] = std::move(r);
  json hz = json::object();
  for (auto s : braking_states())
    hz[s.name()] = hazard_block_json(config.hazard_for(s));
  j["hazard"] = std::move(hz);
  j["initial_state"] = config.initial_state;
  j["thresholds"] = {{"speed_threshold_mps", config.thresholds.speed_threshold_mps},
                     {"decel_threshold_mps2", config.thresholds.decel_threshold_mps2}};
  save_json(path, j);
}

DatasetMetaFile read_dataset_meta(const std::filesystem::path& path) {
  json j = load_json(path);
  check_schema(j, path);
  DatasetMetaFile out;
  if (!j.contains("frame_rate_hz"))
    throw FormatError(path.string() + " is missing required field frame_rate_hz");
  out.meta.frame_rate_hz = require_number(j, "frame_rate_hz", path.string());
  if (j.contains("speed_threshold_mps"))
    out.meta.thresholds.speed_threshold_mps =
        require_number(j, "speed_threshold_mps", path.string());
  if (j.contains("decel_threshold_mps2"))
    out.meta.thresholds.decel_threshold_mps2 =
        require_number(j, "decel_threshold_mps2", path.string());
  if (j.contains("vehicle_merge")) {
    std::string mode = j["vehicle_merge"].get<std::string>();
    if (mode == "sum") out.merge = VehicleMerge::Sum;
    else if (mode == "average_rates") out.merge = VehicleMerge::AverageRates;
    else throw FormatError(path.string() + ": unknown vehicle_merge '" + mode + "'");
  }
  out.meta.require_valid();
  return out;
}

void read_frame_csv(const std::filesystem::path& path,
                    const std::function<void(const FrameRecord&)>& sink) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + " is empty");
  const std::string header = trim(line);
  bool categorical;
  if (header == "frame,driving_type,speed,braking,duration") categorical = true;
  else if (header == "frame,driving_type,speed_mps,decel_mps2,duration") categorical = false;
  else throw FormatError(path.string() + " has unrecognized header '" + header + "'");

  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    auto fields = split_csv_line(line);
    if (fields.size() != 5)
      throw FormatError(where + ": expected 5 fields, got " + std::to_string(fields.size()));
    FrameRecord rec;
    rec.frame_index = parse_uint_field(fields[0], where);
    if (fields[1] == "free") rec.driving_type = RoadCondition::Free;
    else if (fields[1] == "intersection") rec.driving_type = RoadCondition::Intersection;
    else throw FormatError(where + ": unknown driving_type '" + fields[1] + "'");
    if (categorical) {
      if (fields[2] == "fast") rec.speed_band = SpeedBand::Fast;
      else if (fields[2] == "slow") rec.speed_band = SpeedBand::Slow;
      else throw FormatError(where + ": unknown speed band '" + fields[2] + "'");
      if (fields[3] == "brake") rec.braking_flag = BrakingFlag::Braking;
      else if (fields[3] == "nobrake") rec.braking_flag = BrakingFlag::NonBraking;
      else throw FormatError(where + ": unknown braking flag '" + fields[3] + "'");
    } else {
      rec.speed_mps = parse_double_field(fields[2], where);
      rec.decel_mps2 = parse_double_field(fields[3], where);
    }
    uint64_t dur = parse_uint_field(fields[4], where);
    if (dur < 1 || dur > UINT32_MAX)
      throw FormatError(where + ": duration out of range");
    rec.duration_frames = static_cast<uint32_t>(dur);
    sink(rec);
  }
}

std::vector<FrameRecord> read_frame_csv(const std::filesystem::path& path) {
  std::vector<FrameRecord> out;
  read_frame_csv(path, [&](const FrameRecord& r) { out.push_back(r); });
  return out;
}

void write_frame_csv(const std::filesystem::path& path,
                     std::span<const FrameRecord> frames) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  const bool categorical = frames.empty() || frames.front().speed_band.has_value();
  out << (categorical ? "frame,driving_type,speed,braking,duration\n"
                      : "frame,driving_type,speed_mps,decel_mps2,duration\n");
  for (const FrameRecord& r : frames) {
    out << r.frame_index << ','
        << (r.driving_type == RoadCondition::Free ? "free" : "intersection") << ',';
    if (categorical) {
      out << (*r.speed_band == SpeedBand::Fast ? "fast" : "slow") << ','
          << (*r.braking_flag == BrakingFlag::Braking ? "brake" : "nobrake");
    } else {
      out << format_double(*r.speed_mps) << ',' << format_double(*r.decel_mps2);
    }
    out << ',' << r.duration_frames << '\n';
  }
}

DatasetEstimate estimate_dataset(const std::filesystem::path& dir, Estimator estimator) {
  if (!std::filesystem::is_directory(dir))
    throw FormatError(dir.string() + " is not a directory");
  DatasetEstimate result;
  result.meta = read_dataset_meta(dir / "meta.json");

  std::vector<std::filesystem::path> logs;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      logs.push_back(entry.path());
  std::sort(logs.begin(), logs.end());
  if (logs.empty()) throw FormatError("no .csv frame logs in " + dir.string());

  std::vector<TransitionCounts> per_vehicle;
  uint64_t total_frames = 0;
  for (const auto& log : logs) {
    result.vehicles.push_back(log.filename().string());
    SojournSegmenter seg(result.meta.meta);
    TransitionCounts counts;
    std::vector<SojournRecord> buf;
    read_frame_csv(log, [&](const FrameRecord& rec) {
      total_frames += rec.duration_frames;
      seg.push(rec, buf);
      for (const auto& s : buf) counts.add(s);
      buf.clear();
    });
    seg.finish(buf);
    for (const auto& s : buf) counts.add(s);
    per_vehicle.push_back(counts);
  }
  result.total_hours =
      static_cast<double>(total_frames) / result.meta.meta.frame_rate_hz / 3600.0;

  TransitionCounts merged;
  for (const auto& c : per_vehicle) merged += c;

  if (result.meta.merge == VehicleMerge::Sum || per_vehicle.size() == 1) {
    result.estimates = estimate_rates(merged, estimator);
  } else {
    // Average the per-vehicle rate estimates over the vehicles that observed
    // each transition; support still reports the pooled counts.
    result.estimates = estimate_rates(merged, estimator);
    for (auto& [from, to] : RateTable::all_pairs()) {
      double sum = 0.0;
      int observed = 0;
      for (const auto& c : per_vehicle) {
        if (c.get_count(from, to) == 0) continue;
        RateEstimates one = estimate_rates(c, estimator);
        sum += one.rates.get(from, to);
        ++observed;
      }
      result.estimates.rates.set(from, to,
                                 observed > 0 ? sum / observed : 0.0);
    }
  }
  return result;
}

void write_estimation_report(const std::filesystem::path& path,
                             const DatasetEstimate& result) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["estimator"] = result.estimates.estimator == Estimator::PerTransition
                       ? "per_transition"
                       : "competing_risks";
  j["vehicles"] = result.vehicles;
  j["total_hours"] = result.total_hours;
  json zero = json::array();
  for (auto& [from, to] : result.estimates.zero_count)
    zero.push_back(rate_key(from, to));
  j["zero_count_transitions"] = std::move(zero);
  json low = json::array();
  for (auto& [from, to] : result.estimates.low_count) {
    low.push_back(json{{"transition", rate_key(from, to)},
                       {"count", result.estimates.support.get_count(from, to)}});
  }
  j["low_count_transitions"] = std::move(low);
  save_json(path, j);
}

void write_curves_csv(const std::filesystem::path& path, const TransientResult& result) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << "t_hours,p_serious,p_minor,p_success\n";
  for (size_t i = 0; i < result.grid.size(); ++i) {
    out << format_double(result.grid.points[i]) << ','
        << format_double(result.p_serious[i]) << ','
        << format_double(result.p_minor[i]) << ','
        << format_double(result.p_success[i]) << '\n';
  }
}

void write_occupancy_csv(const std::filesystem::path& path, const Ctmc& chain,
                         const TransientResult& result) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << "t_hours";
  for (const auto& s : chain.states) out << ',' << s.name();
  out << '\n';
  for (size_t i = 0; i < result.grid.size(); ++i) {
    out << format_double(result.grid.points[i]);
    for (double p : result.occupancy[i]) out << ',' << format_double(p);
    out << '\n';
  }
}

void write_sim_estimate_json(const std::filesystem::path& path, const SimEstimate& est,
                             McEngine engine_used) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = est.n;
  j["seed"] = est.seed;
  j["mission_hours"] = est.mission_hours;
  j["engine"] = engine_used == McEngine::Thinning ? "thinning" : "direct";
  j["counts"] = {{"serious", est.n_serious},
                 {"minor", est.n_minor},
                 {"success", est.n_success}};
  j["estimates"] = {{"p_serious", est.p_serious},
                    {"p_minor", est.p_minor},
                    {"p_success", est.p_success}};
  j["stderr"] = {{"p_serious", est.se_serious},
                 {"p_minor", est.se_minor},
                 {"p_success", est.se_success}};
  save_json(path, j);
}

void write_missions_csv(const std::filesystem::path& path,
                        std::span<const MissionOutcome> outcomes) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << "replication,outcome,t_absorb_hours\n";
  for (size_t i = 0; i < outcomes.size(); ++i) {
    const char* kind = outcomes[i].kind == MissionOutcome::Kind::Success ? "success"
                       : outcomes[i].kind == MissionOutcome::Kind::SeriousAccident
                           ? "serious"
                           : "minor";
    out << i << ',' << kind << ',';
    if (outcomes[i].time_of_absorption)
      out << format_double(*outcomes[i].time_of_absorption);
    out << '\n';
  }
}

}  // namespace hazchain
