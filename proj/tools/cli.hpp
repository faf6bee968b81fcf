// Copyright 2026 The drivescope Authors
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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "drivescope/drivescope.hpp"

namespace drivescope::cli {

inline constexpr const char* kToolName = "drivescope";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kConfigError = 2, kInputError = 3, kInternalError = 4 };

struct HistogramSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t bins = 1;

  std::vector<double> edges() const { return uniform_edges(lo, hi, bins); }
};

// Every knob of a run. Missing keys in a config file keep these defaults;
// unknown keys are rejected. Relative paths resolve against the directory of
// the config file.
struct RunConfig {
  ScoringConfig scoring;
  std::vector<std::string> event_sources{"zones", "turns"};  // subset of zones, turns, hard_brakes

  double bin_size = 20.0;
  double gate_distance = 30.0;
  ScoreSelector divergence_score = ScoreSelector::composite;
  Normalization divergence_normalization = Normalization::pooled;  // groups share normalizers

  HardBrakeConfig hard_brake;
  MobilityConfig mobility;
  double lead_gap_threshold = 50.0;
  double large_motion_threshold_deg = 5.0;
  HistogramSpec head_daz{-20.0, 20.0, 20};
  HistogramSpec head_del{-10.0, 10.0, 20};

  SteerUnit steer_unit = SteerUnit::normalized;
  double full_lock_deg = 450.0;
  ValidationGates gates;
  std::optional<double> resample_rate;

  std::string period = "week";  // week | month
  std::vector<std::string> features{"mean_speed",     "miles_per_trip",       "hard_brakes_per_trip",
                                    "mean_abs_accel", "mean_trip_duration_s", "turns_per_trip",
                                    "mean_throttle",  "mean_abs_head_daz"};
  std::size_t n_components = 2;
  std::size_t k = 2;
  std::size_t max_iter = 300;
  std::size_t n_init = 10;
  double tol = 1e-6;

  std::size_t max_windows = 3;
  std::size_t trips_per_model = 10;

  std::optional<std::string> scenario_path;
  std::optional<std::string> drivers_path;
  std::optional<std::string> route_path;
  std::optional<std::string> rules_path;

  std::uint64_t seed = 7;

  ScanConfig scan() const { return {large_motion_threshold_deg, head_daz.edges(), head_del.edges()}; }
  void validate() const;
};

nlohmann::ordered_json config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

std::string sha256_hex(std::string_view bytes);

// Plot-ready exports: one long-form CSV for all series and one fixed-edge CSV
// per histogram. Returns the written file names relative to dir.
struct PlotData {
  std::vector<NamedSeries> series;
  std::vector<std::pair<std::string, Histogram>> histograms;
};
std::vector<std::string> export_plot_data(const PlotData& data, const std::filesystem::path& dir);

// Per-(driver, period) aggregates over trips, keyed like the weekly or monthly
// profiles: mean_abs_accel, mean_throttle, mean_trip_duration_s,
// miles_per_trip, hard_brakes_per_trip, turns_per_trip and (when the channels
// exist) mean_abs_head_daz.
std::vector<PeriodRecord> trip_aggregate_records(const std::vector<const Trip*>& trips, const std::string& period,
                                                 const RunConfig& cfg);

// Expands files, directories (their *.csv and *.jsonl) and glob patterns into
// a sorted list of telemetry files.
std::vector<std::filesystem::path> expand_inputs(const std::vector<std::string>& specs);

std::vector<ManeuverEvent> trip_events(const Trip& trip, const Route& route, const RunConfig& cfg);

// Entry point behind the executable; args excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace drivescope::cli
