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

// Trip ingestion: CSV / JSON-lines record tables, schema mapping, row-level
// validation and the metadata sidecar.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "drivescope/clock.hpp"
#include "drivescope/error.hpp"
#include "drivescope/number.hpp"
#include "drivescope/telemetry.hpp"

namespace drivescope {

inline constexpr const char* kTelemetryHeader =
    "t,steer,throttle,brake,speed,accel,pos_x,pos_y,heading,head_az,head_el,lead_gap,weather";

// Raw rows keyed by header; an absent cell (empty CSV field, JSON null or
// missing key) is nullopt.
struct RecordTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<std::string>>> rows;
};

struct ValidationIssue {
  std::size_t row = 0;
  std::string field;
  std::string reason;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;
  std::size_t accepted_row_count = 0;
  std::size_t input_row_count = 0;

  bool ok() const { return errors.empty(); }
};

enum class SteerUnit { normalized, degrees };

struct ParseOptions {
  SteerUnit steer_unit = SteerUnit::normalized;
  double full_lock_deg = 450.0;  // raw steering degrees mapped to |steer| = 1
};

// Maps canonical field names to source column names. Canonical names are the
// telemetry header fields plus "lat"/"lon" as an alternative to pos_x/pos_y.
struct ColumnMap {
  std::map<std::string, std::string> source;

  std::string column_for(const std::string& canonical) const {
    auto it = source.find(canonical);
    return it == source.end() ? canonical : it->second;
  }
};

struct ParseResult {
  Trip trip;
  ValidationReport report;
};

struct ValidationGates {
  double max_speed = 70.0;      // m/s
  double max_abs_accel = 15.0;  // m/s^2
};

namespace detail {

inline std::vector<std::optional<std::string>> split_csv_line(const std::string& line) {
  std::vector<std::optional<std::string>> cells;
  std::string cur;
  bool quoted = false, was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = was_quoted = true;
    } else if (c == ',') {
      cells.push_back(cur.empty() && !was_quoted ? std::nullopt : std::optional<std::string>(cur));
      cur.clear();
      was_quoted = false;
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(cur.empty() && !was_quoted ? std::nullopt : std::optional<std::string>(cur));
  return cells;
}

}  // namespace detail

inline RecordTable read_csv(std::istream& in) {
  RecordTable table;
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty CSV input");
  for (auto& cell : detail::split_csv_line(line)) table.header.push_back(cell.value_or(""));
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() != table.header.size())
      throw InputError("CSV line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                       " cells, header has " + std::to_string(table.header.size()));
    table.rows.push_back(std::move(cells));
  }
  return table;
}

inline RecordTable read_jsonl(std::istream& in) {
  RecordTable table;
  std::map<std::string, std::size_t> index;
  std::vector<nlohmann::json> objects;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError("JSON-lines line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!obj.is_object()) throw InputError("JSON-lines line " + std::to_string(line_no) + " is not an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (index.emplace(it.key(), table.header.size()).second) table.header.push_back(it.key());
    }
    objects.push_back(std::move(obj));
  }
  for (const auto& obj : objects) {
    std::vector<std::optional<std::string>> row(table.header.size());
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      const auto& v = it.value();
      auto& cell = row[index.at(it.key())];
      if (v.is_null()) continue;
      if (v.is_string()) cell = v.get<std::string>();
      else if (v.is_number()) cell = format_number(v.get<double>());
      else cell = v.dump();
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

// Parses a record table into a trip. Rows failing range or finiteness checks
// are dropped and reported; schema problems throw InputError.
inline ParseResult parse_trip(const RecordTable& table, const TripMeta& meta, const ColumnMap& columns = {},
                              const ParseOptions& options = {}) {
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < table.header.size(); ++i) col.emplace(table.header[i], i);
  auto locate = [&](const std::string& canonical) -> std::optional<std::size_t> {
    auto it = col.find(columns.column_for(canonical));
    if (it == col.end()) return std::nullopt;
    return it->second;
  };

  const bool planar = locate("pos_x") && locate("pos_y");
  const bool geographic = !planar && locate("lat") && locate("lon");
  std::vector<std::string> mandatory = {"t", "steer", "throttle", "brake", "speed", "heading"};
  if (!planar && !geographic) mandatory.insert(mandatory.end(), {"pos_x", "pos_y"});
  for (const auto& name : mandatory) {
    if (!locate(name)) throw InputError("missing mandatory column '" + columns.column_for(name) + "'");
  }
  if (!(meta.sample_rate > 0.0) || !std::isfinite(meta.sample_rate))
    throw InputError("sample_rate must be positive");

  const std::size_t c_t = *locate("t"), c_steer = *locate("steer"), c_thr = *locate("throttle"),
                    c_brk = *locate("brake"), c_speed = *locate("speed"), c_head = *locate("heading");
  const std::size_t c_x = planar ? *locate("pos_x") : *locate("lat");
  const std::size_t c_y = planar ? *locate("pos_y") : *locate("lon");
  const auto c_accel = locate("accel"), c_az = locate("head_az"), c_el = locate("head_el"),
             c_gap = locate("lead_gap"), c_weather = locate("weather");

  ParseResult result;
  result.trip.meta = meta;
  auto& report = result.report;
  report.input_row_count = table.rows.size();

  constexpr double kEarthRadius = 6371008.8;
  constexpr double kDeg = 3.14159265358979323846 / 180.0;
  std::optional<std::pair<double, double>> origin;
  std::optional<double> last_t;
  bool in_violation = false;

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    std::string bad_field, reason;
    auto fail = [&](const std::string& field, const std::string& why) {
      if (bad_field.empty()) {
        bad_field = field;
        reason = why;
      }
    };
    auto req = [&](std::size_t c, const std::string& field) -> double {
      if (!row[c]) {
        fail(field, "missing value");
        return 0.0;
      }
      auto v = parse_number(*row[c]);
      if (!v) {
        fail(field, "not a number: '" + *row[c] + "'");
        return 0.0;
      }
      if (!std::isfinite(*v)) fail(field, "not finite");
      return *v;
    };
    auto opt = [&](const std::optional<std::size_t>& c, const std::string& field) -> std::optional<double> {
      if (!c || !row[*c]) return std::nullopt;
      auto v = parse_number(*row[*c]);
      if (!v) {
        fail(field, "not a number: '" + *row[*c] + "'");
        return std::nullopt;
      }
      if (!std::isfinite(*v)) fail(field, "not finite");
      return v;
    };
    auto in_range = [&](double v, double lo, double hi, const std::string& field) {
      if (v < lo || v > hi) fail(field, "out of range [" + format_number(lo) + ", " + format_number(hi) + "]");
    };

    TelemetrySample s;
    s.t = req(c_t, "t");
    s.steer = req(c_steer, "steer");
    if (options.steer_unit == SteerUnit::degrees) s.steer /= options.full_lock_deg;
    s.throttle = req(c_thr, "throttle");
    s.brake = req(c_brk, "brake");
    s.speed = req(c_speed, "speed");
    s.accel = opt(c_accel, "accel");
    const double x_or_lat = req(c_x, planar ? "pos_x" : "lat");
    const double y_or_lon = req(c_y, planar ? "pos_y" : "lon");
    s.heading = req(c_head, "heading");
    s.head_az = opt(c_az, "head_az");
    s.head_el = opt(c_el, "head_el");
    s.lead_gap = opt(c_gap, "lead_gap");
    if (c_weather && row[*c_weather]) {
      s.weather = parse_weather(*row[*c_weather]);
      if (!s.weather) fail("weather", "unknown weather value '" + *row[*c_weather] + "'");
    }
    in_range(s.steer, -1.0, 1.0, "steer");
    in_range(s.throttle, 0.0, 1.0, "throttle");
    in_range(s.brake, 0.0, 1.0, "brake");
    if (s.speed < 0.0) fail("speed", "negative speed");
    if (s.heading < 0.0 || s.heading >= 360.0) fail("heading", "out of range [0, 360)");
    if (s.lead_gap && *s.lead_gap < 0.0) fail("lead_gap", "negative gap");
    if (!planar) {
      in_range(x_or_lat, -90.0, 90.0, "lat");
      in_range(y_or_lon, -180.0, 180.0, "lon");
    }
    if (bad_field.empty() && last_t && !(s.t > *last_t)) {
      fail("t", "timestamp not strictly increasing");
      if (!in_violation) {
        report.warnings.push_back({r, "t", "non-monotone timestamp; following rows up to recovery rejected"});
        in_violation = true;
      }
    }
    if (!bad_field.empty()) {
      report.errors.push_back({r, bad_field, reason});
      continue;
    }
    in_violation = false;
    if (planar) {
      s.pos_x = x_or_lat;
      s.pos_y = y_or_lon;
    } else {
      if (!origin) origin.emplace(x_or_lat, y_or_lon);
      s.pos_x = kEarthRadius * (y_or_lon - origin->second) * kDeg * std::cos(origin->first * kDeg);
      s.pos_y = kEarthRadius * (x_or_lat - origin->first) * kDeg;
    }
    last_t = s.t;
    result.trip.samples.push_back(s);
  }
  report.accepted_row_count = result.trip.samples.size();
  if (report.accepted_row_count == 0) throw InputError("no rows accepted");
  if (report.accepted_row_count < 2) throw InputError("fewer than 2 rows accepted");
  return result;
}

inline std::string serialize_trip_csv(const Trip& trip) {
  std::string out = kTelemetryHeader;
  out += '\n';
  for (const auto& s : trip.samples) {
    out += format_number(s.t) + ',' + format_number(s.steer) + ',' + format_number(s.throttle) + ',' +
           format_number(s.brake) + ',' + format_number(s.speed) + ',' + format_number(s.accel) + ',' +
           format_number(s.pos_x) + ',' + format_number(s.pos_y) + ',' + format_number(s.heading) + ',' +
           format_number(s.head_az) + ',' + format_number(s.head_el) + ',' + format_number(s.lead_gap) + ',' +
           (s.weather ? std::string(to_string(*s.weather)) : std::string{}) + '\n';
  }
  return out;
}

inline std::string serialize_trip_jsonl(const Trip& trip) {
  std::string out;
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  for (const auto& s : trip.samples) {
    nlohmann::ordered_json j;
    j["t"] = s.t;
    j["steer"] = s.steer;
    j["throttle"] = s.throttle;
    j["brake"] = s.brake;
    j["speed"] = s.speed;
    j["accel"] = opt(s.accel);
    j["pos_x"] = s.pos_x;
    j["pos_y"] = s.pos_y;
    j["heading"] = s.heading;
    j["head_az"] = opt(s.head_az);
    j["head_el"] = opt(s.head_el);
    j["lead_gap"] = opt(s.lead_gap);
    j["weather"] = s.weather ? nlohmann::json(std::string(to_string(*s.weather))) : nlohmann::json(nullptr);
    out += j.dump() + '\n';
  }
  return out;
}

// Report-only check of sample invariants plus physical plausibility gates.
// Range violations are errors; plausibility violations are warnings.
inline ValidationReport validate_trip(const Trip& trip, const ValidationGates& gates = {}) {
  ValidationReport report;
  report.input_row_count = trip.samples.size();
  if (!(trip.meta.sample_rate > 0.0)) report.errors.push_back({0, "sample_rate", "must be positive"});
  if (trip.samples.size() < 2) report.errors.push_back({0, "samples", "fewer than 2 samples"});
  std::size_t accepted = 0;
  for (std::size_t k = 0; k < trip.samples.size(); ++k) {
    const auto& s = trip.samples[k];
    const std::size_t before = report.errors.size();
    auto err = [&](const char* field, const char* why) { report.errors.push_back({k, field, why}); };
    if (!std::isfinite(s.t)) err("t", "not finite");
    if (k > 0 && !(s.t > trip.samples[k - 1].t)) err("t", "timestamp not strictly increasing");
    if (!(s.steer >= -1.0 && s.steer <= 1.0)) err("steer", "out of range [-1, 1]");
    if (!(s.throttle >= 0.0 && s.throttle <= 1.0)) err("throttle", "out of range [0, 1]");
    if (!(s.brake >= 0.0 && s.brake <= 1.0)) err("brake", "out of range [0, 1]");
    if (!std::isfinite(s.speed)) err("speed", "not finite");
    else if (s.speed < 0.0) err("speed", "negative speed");
    if (s.accel && !std::isfinite(*s.accel)) err("accel", "not finite");
    if (!std::isfinite(s.pos_x) || !std::isfinite(s.pos_y)) err("pos", "not finite");
    if (!(s.heading >= 0.0 && s.heading < 360.0)) err("heading", "out of range [0, 360)");
    if (s.head_az && !std::isfinite(*s.head_az)) err("head_az", "not finite");
    if (s.head_el && !std::isfinite(*s.head_el)) err("head_el", "not finite");
    if (s.lead_gap && !(*s.lead_gap >= 0.0)) err("lead_gap", "negative or not finite");
    if (report.errors.size() == before) ++accepted;
    if (std::isfinite(s.speed) && s.speed > gates.max_speed)
      report.warnings.push_back({k, "speed", "exceeds plausibility gate " + format_number(gates.max_speed)});
    if (s.accel && std::isfinite(*s.accel) && std::abs(*s.accel) > gates.max_abs_accel)
      report.warnings.push_back({k, "accel", "exceeds plausibility gate " + format_number(gates.max_abs_accel)});
  }
  report.accepted_row_count = accepted;
  return report;
}

inline nlohmann::ordered_json meta_to_json(const TripMeta& meta) {
  nlohmann::ordered_json j;
  j["trip_id"] = meta.trip_id;
  j["driver_id"] = meta.driver_id;
  j["cohort"] = std::string(to_string(meta.cohort));
  j["start_clock"] = format_rfc3339(meta.start_clock);
  j["sample_rate"] = meta.sample_rate;
  return j;
}

inline TripMeta meta_from_json(const nlohmann::json& j) {
  try {
    TripMeta meta;
    meta.trip_id = j.at("trip_id").get<std::string>();
    meta.driver_id = j.at("driver_id").get<std::string>();
    auto cohort = parse_cohort(j.at("cohort").get<std::string>());
    if (!cohort) throw InputError("unknown cohort '" + j.at("cohort").get<std::string>() + "'");
    meta.cohort = *cohort;
    meta.start_clock = parse_rfc3339(j.at("start_clock").get<std::string>());
    meta.sample_rate = j.at("sample_rate").get<double>();
    if (!(meta.sample_rate > 0.0)) throw InputError("sample_rate must be positive");
    return meta;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("trip metadata: ") + e.what());
  }
}

inline std::string validation_report_json(const ValidationReport& report) {
  nlohmann::ordered_json j;
  j["input_row_count"] = report.input_row_count;
  j["accepted_row_count"] = report.accepted_row_count;
  auto issues = [](const std::vector<ValidationIssue>& v) {
    auto a = nlohmann::ordered_json::array();
    for (const auto& i : v) a.push_back({{"row", i.row}, {"field", i.field}, {"reason", i.reason}});
    return a;
  };
  j["errors"] = issues(report.errors);
  j["warnings"] = issues(report.warnings);
  return j.dump(2) + '\n';
}

// Sidecar path for a telemetry file: trips/x.csv -> trips/x.meta.json.
inline std::filesystem::path sidecar_path(const std::filesystem::path& telemetry) {
  auto p = telemetry;
  p.replace_extension(".meta.json");
  return p;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

// Loads a CSV or JSON-lines telemetry file plus its metadata sidecar.
inline ParseResult load_trip(const std::filesystem::path& telemetry, std::optional<std::filesystem::path> meta_path = {},
                             const ColumnMap& columns = {}, const ParseOptions& options = {}) {
  const TripMeta meta = meta_from_json(read_json_file(meta_path.value_or(sidecar_path(telemetry))));
  std::ifstream in(telemetry, std::ios::binary);
  if (!in) throw InputError("cannot open " + telemetry.string());
  const auto ext = telemetry.extension().string();
  const RecordTable table = (ext == ".jsonl" || ext == ".ndjson") ? read_jsonl(in) : read_csv(in);
  return parse_trip(table, meta, columns, options);
}

}  // namespace drivescope
