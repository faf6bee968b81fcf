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

#include "cli.hpp"

#include <glob.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include <CLI11.hpp>

namespace drivescope::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------- config

namespace {

class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  void allow(std::initializer_list<const char*> keys) {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [key, _] : j_.items()) {
      if (!ok.count(key)) throw ConfigError("unknown config key '" + prefix() + key + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  const nlohmann::json& at(const char* key) const { return j_.at(key); }
  std::string child(const char* key) const { return prefix() + key; }

  template <class T>
  void read(const char* key, T& dst) const {
    if (!has(key)) return;
    try {
      dst = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("config key '" + prefix() + key + "' has the wrong type");
    }
  }

  void read_number(const char* key, double& dst) const {
    if (!has(key)) return;
    if (!j_.at(key).is_number()) throw ConfigError("config key '" + prefix() + key + "' must be a number");
    dst = j_.at(key).get<double>();
  }

  void read_count(const char* key, std::size_t& dst) const {
    if (!has(key)) return;
    if (!j_.at(key).is_number_unsigned()) throw ConfigError("config key '" + prefix() + key + "' must be a nonnegative integer");
    dst = j_.at(key).get<std::size_t>();
  }

 private:
  std::string where() const { return path_.empty() ? "config" : "config key '" + path_ + "'"; }
  std::string prefix() const { return path_.empty() ? "" : path_ + "."; }

  const nlohmann::json& j_;
  std::string path_;
};

std::string format_clock(double seconds_of_day) {
  const auto total = static_cast<long>(std::llround(seconds_of_day / 60.0));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02ld:%02ld", total / 60, total % 60);
  return buf;
}

double parse_clock(const std::string& s, const std::string& key) {
  int h = -1, m = -1;
  char tail = 0;
  if (s.size() != 5 || std::sscanf(s.c_str(), "%2d:%2d%c", &h, &m, &tail) != 2 || h < 0 || h > 23 || m < 0 || m > 59)
    throw ConfigError("config key '" + key + "' must be HH:MM");
  return h * 3600.0 + m * 60.0;
}

ojson histogram_spec_json(const HistogramSpec& h) { return {{"lo", h.lo}, {"hi", h.hi}, {"bins", h.bins}}; }

HistogramSpec histogram_spec_from(const ObjectReader& parent, const char* key, HistogramSpec h) {
  if (!parent.has(key)) return h;
  ObjectReader r(parent.at(key), parent.child(key));
  r.allow({"lo", "hi", "bins"});
  r.read_number("lo", h.lo);
  r.read_number("hi", h.hi);
  r.read_count("bins", h.bins);
  return h;
}

std::optional<std::string> resolve(const std::optional<std::string>& p, const fs::path& base) {
  if (!p || base.empty() || fs::path(*p).is_absolute()) return p;
  return (base / *p).lexically_normal().string();
}

}  // namespace

void RunConfig::validate() const {
  scoring.validate();
  for (const auto& s : event_sources) {
    if (s != "zones" && s != "turns" && s != "hard_brakes") throw ConfigError("unknown event source '" + s + "'");
  }
  if (!(bin_size > 0.0)) throw ConfigError("bin_size must be positive");
  if (!(gate_distance > 0.0)) throw ConfigError("gate_distance must be positive");
  if (!(hard_brake.min_duration >= 0.0)) throw ConfigError("hard_brake.min_duration must be >= 0");
  if (!(mobility.short_trip_m > 0.0)) throw ConfigError("short_trip_m must be positive");
  if (!(mobility.turns.heading_threshold_deg > 0.0 && mobility.turns.max_window_s > 0.0))
    throw ConfigError("turn detection parameters must be positive");
  if (!(lead_gap_threshold > 0.0)) throw ConfigError("lead_gap_threshold must be positive");
  for (const auto* h : {&head_daz, &head_del}) {
    if (!(h->hi > h->lo) || h->bins < 1) throw ConfigError("histogram spec needs hi > lo and bins >= 1");
  }
  if (!(full_lock_deg > 0.0)) throw ConfigError("full_lock_deg must be positive");
  if (!(gates.max_speed > 0.0 && gates.max_abs_accel > 0.0)) throw ConfigError("validation gates must be positive");
  if (resample_rate && !(*resample_rate > 0.0)) throw ConfigError("resample_rate must be positive");
  if (period != "week" && period != "month") throw ConfigError("phenotype.period must be week or month");
  if (features.empty()) throw ConfigError("phenotype.features is empty");
  if (n_components < 1) throw ConfigError("phenotype.n_components must be >= 1");
  if (k < 1) throw ConfigError("phenotype.k must be >= 1");
  if (max_iter < 1) throw ConfigError("phenotype.max_iter must be >= 1");
  if (n_init < 1) throw ConfigError("phenotype.n_init must be >= 1");
  if (!(tol >= 0.0)) throw ConfigError("phenotype.tol must be >= 0");
  if (trips_per_model < 1) throw ConfigError("simulate.trips_per_model must be >= 1");
}

ojson config_to_json(const RunConfig& c) {
  auto opt = [](const std::optional<std::string>& s) { return s ? ojson(*s) : ojson(nullptr); };
  ojson j;
  j["scoring"] = {{"window_w", c.scoring.window_w},
                  {"alpha", c.scoring.alpha},
                  {"response",
                   {{"steer_delta", c.scoring.response.steer_delta},
                    {"brake", c.scoring.response.brake},
                    {"throttle_delta", c.scoring.response.throttle_delta}}},
                  {"deviation", c.scoring.deviation == DeviationStat::mean ? "mean" : "max"},
                  {"weights",
                   {{"stab", c.scoring.weights.stab}, {"react", c.scoring.weights.react}, {"route", c.scoring.weights.route}}},
                  {"top_fraction", c.scoring.top_fraction},
                  {"min_bin_samples", c.scoring.min_bin_samples},
                  {"normalization", c.scoring.normalization == Normalization::pooled ? "pooled" : "trip"},
                  {"event_sources", c.event_sources}};
  static const char* selectors[] = {"composite", "stability", "reaction", "route", "fluency"};
  j["divergence"] = {{"bin_size", c.bin_size},
                     {"gate_distance", c.gate_distance},
                     {"score", selectors[static_cast<int>(c.divergence_score)]},
                     {"normalization", c.divergence_normalization == Normalization::pooled ? "pooled" : "trip"}};
  j["features"] = {{"hard_brake", {{"threshold", c.hard_brake.threshold}, {"min_duration", c.hard_brake.min_duration}}},
                   {"night_start", format_clock(c.mobility.night_start_s)},
                   {"night_end", format_clock(c.mobility.night_end_s)},
                   {"short_trip_m", c.mobility.short_trip_m},
                   {"turn_threshold_deg", c.mobility.turns.heading_threshold_deg},
                   {"turn_max_window_s", c.mobility.turns.max_window_s},
                   {"lead_gap_threshold", c.lead_gap_threshold},
                   {"large_motion_threshold_deg", c.large_motion_threshold_deg},
                   {"histograms", {{"head_daz", histogram_spec_json(c.head_daz)}, {"head_del", histogram_spec_json(c.head_del)}}}};
  j["ingest"] = {{"steer_unit", c.steer_unit == SteerUnit::normalized ? "normalized" : "degrees"},
                 {"full_lock_deg", c.full_lock_deg},
                 {"max_speed", c.gates.max_speed},
                 {"max_abs_accel", c.gates.max_abs_accel},
                 {"resample_rate", c.resample_rate ? ojson(*c.resample_rate) : ojson(nullptr)}};
  j["phenotype"] = {{"period", c.period}, {"features", c.features}, {"n_components", c.n_components},
                    {"k", c.k},           {"max_iter", c.max_iter}, {"n_init", c.n_init},
                    {"tol", c.tol}};
  j["report"] = {{"max_windows", c.max_windows}};
  j["simulate"] = {{"trips_per_model", c.trips_per_model}};
  j["paths"] = {{"scenario", opt(c.scenario_path)},
                {"drivers", opt(c.drivers_path)},
                {"route", opt(c.route_path)},
                {"rules", opt(c.rules_path)}};
  j["seed"] = c.seed;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j, const fs::path& base_dir) {
  RunConfig c;
  ObjectReader root(j, "");
  root.allow({"scoring", "divergence", "features", "ingest", "phenotype", "report", "simulate", "paths", "seed"});
  if (root.has("scoring")) {
    ObjectReader r(root.at("scoring"), "scoring");
    r.allow({"window_w", "alpha", "response", "deviation", "weights", "top_fraction", "min_bin_samples", "normalization",
             "event_sources"});
    r.read_count("window_w", c.scoring.window_w);
    r.read_number("alpha", c.scoring.alpha);
    if (r.has("response")) {
      ObjectReader rr(r.at("response"), "scoring.response");
      rr.allow({"steer_delta", "brake", "throttle_delta"});
      rr.read_number("steer_delta", c.scoring.response.steer_delta);
      rr.read_number("brake", c.scoring.response.brake);
      rr.read_number("throttle_delta", c.scoring.response.throttle_delta);
    }
    if (r.has("deviation")) {
      std::string s;
      r.read("deviation", s);
      if (s != "mean" && s != "max") throw ConfigError("scoring.deviation must be mean or max");
      c.scoring.deviation = s == "mean" ? DeviationStat::mean : DeviationStat::max;
    }
    if (r.has("weights")) {
      ObjectReader w(r.at("weights"), "scoring.weights");
      w.allow({"stab", "react", "route"});
      w.read_number("stab", c.scoring.weights.stab);
      w.read_number("react", c.scoring.weights.react);
      w.read_number("route", c.scoring.weights.route);
    }
    r.read_number("top_fraction", c.scoring.top_fraction);
    r.read_count("min_bin_samples", c.scoring.min_bin_samples);
    if (r.has("normalization")) {
      std::string s;
      r.read("normalization", s);
      if (s != "trip" && s != "pooled") throw ConfigError("scoring.normalization must be trip or pooled");
      c.scoring.normalization = s == "trip" ? Normalization::trip : Normalization::pooled;
    }
    r.read("event_sources", c.event_sources);
  }
  if (root.has("divergence")) {
    ObjectReader r(root.at("divergence"), "divergence");
    r.allow({"bin_size", "gate_distance", "score", "normalization"});
    if (r.has("normalization")) {
      std::string s;
      r.read("normalization", s);
      if (s != "trip" && s != "pooled") throw ConfigError("divergence.normalization must be trip or pooled");
      c.divergence_normalization = s == "trip" ? Normalization::trip : Normalization::pooled;
    }
    r.read_number("bin_size", c.bin_size);
    r.read_number("gate_distance", c.gate_distance);
    if (r.has("score")) {
      std::string s;
      r.read("score", s);
      const auto sel = parse_score_selector(s);
      if (!sel) throw ConfigError("divergence.score: unknown score '" + s + "'");
      c.divergence_score = *sel;
    }
  }
  if (root.has("features")) {
    ObjectReader r(root.at("features"), "features");
    r.allow({"hard_brake", "night_start", "night_end", "short_trip_m", "turn_threshold_deg", "turn_max_window_s",
             "lead_gap_threshold", "large_motion_threshold_deg", "histograms"});
    if (r.has("hard_brake")) {
      ObjectReader h(r.at("hard_brake"), "features.hard_brake");
      h.allow({"threshold", "min_duration"});
      h.read_number("threshold", c.hard_brake.threshold);
      h.read_number("min_duration", c.hard_brake.min_duration);
    }
    if (r.has("night_start")) {
      std::string s;
      r.read("night_start", s);
      c.mobility.night_start_s = parse_clock(s, "features.night_start");
    }
    if (r.has("night_end")) {
      std::string s;
      r.read("night_end", s);
      c.mobility.night_end_s = parse_clock(s, "features.night_end");
    }
    r.read_number("short_trip_m", c.mobility.short_trip_m);
    r.read_number("turn_threshold_deg", c.mobility.turns.heading_threshold_deg);
    r.read_number("turn_max_window_s", c.mobility.turns.max_window_s);
    r.read_number("lead_gap_threshold", c.lead_gap_threshold);
    r.read_number("large_motion_threshold_deg", c.large_motion_threshold_deg);
    if (r.has("histograms")) {
      ObjectReader h(r.at("histograms"), "features.histograms");
      h.allow({"head_daz", "head_del"});
      c.head_daz = histogram_spec_from(h, "head_daz", c.head_daz);
      c.head_del = histogram_spec_from(h, "head_del", c.head_del);
    }
  }
  if (root.has("ingest")) {
    ObjectReader r(root.at("ingest"), "ingest");
    r.allow({"steer_unit", "full_lock_deg", "max_speed", "max_abs_accel", "resample_rate"});
    if (r.has("steer_unit")) {
      std::string s;
      r.read("steer_unit", s);
      if (s != "normalized" && s != "degrees") throw ConfigError("ingest.steer_unit must be normalized or degrees");
      c.steer_unit = s == "normalized" ? SteerUnit::normalized : SteerUnit::degrees;
    }
    r.read_number("full_lock_deg", c.full_lock_deg);
    r.read_number("max_speed", c.gates.max_speed);
    r.read_number("max_abs_accel", c.gates.max_abs_accel);
    if (r.has("resample_rate")) {
      double v = 0.0;
      r.read_number("resample_rate", v);
      c.resample_rate = v;
    }
  }
  if (root.has("phenotype")) {
    ObjectReader r(root.at("phenotype"), "phenotype");
    r.allow({"period", "features", "n_components", "k", "max_iter", "n_init", "tol"});
    r.read("period", c.period);
    r.read("features", c.features);
    r.read_count("n_components", c.n_components);
    r.read_count("k", c.k);
    r.read_count("max_iter", c.max_iter);
    r.read_count("n_init", c.n_init);
    r.read_number("tol", c.tol);
  }
  if (root.has("report")) {
    ObjectReader r(root.at("report"), "report");
    r.allow({"max_windows"});
    r.read_count("max_windows", c.max_windows);
  }
  if (root.has("simulate")) {
    ObjectReader r(root.at("simulate"), "simulate");
    r.allow({"trips_per_model"});
    r.read_count("trips_per_model", c.trips_per_model);
  }
  if (root.has("paths")) {
    ObjectReader r(root.at("paths"), "paths");
    r.allow({"scenario", "drivers", "route", "rules"});
    auto read_path = [&](const char* key, std::optional<std::string>& dst) {
      if (!r.has(key)) return;
      std::string s;
      r.read(key, s);
      dst = s;
    };
    read_path("scenario", c.scenario_path);
    read_path("drivers", c.drivers_path);
    read_path("route", c.route_path);
    read_path("rules", c.rules_path);
  }
  if (root.has("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("config key 'seed' must be a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  c.scenario_path = resolve(c.scenario_path, base_dir);
  c.drivers_path = resolve(c.drivers_path, base_dir);
  c.route_path = resolve(c.route_path, base_dir);
  c.rules_path = resolve(c.rules_path, base_dir);
  c.validate();
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

// ---------------------------------------------------------------- hashing

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

// ---------------------------------------------------------------- run output

namespace {

class RunWriter {
 public:
  RunWriter(fs::path root, std::string command) : root_(std::move(root)), command_(std::move(command)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw InputError("cannot create output directory " + root_.string() + ": " + ec.message());
  }

  const fs::path& root() const { return root_; }

  void write(const std::string& rel, const std::string& content) {
    const fs::path p = root_ / rel;
    fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw InputError("cannot write " + p.string());
    f << content;
    if (!f) throw InputError("cannot write " + p.string());
    artifacts_[rel] = sha256_hex(content);
  }

  void record(const std::string& rel) { artifacts_[rel] = sha256_hex(read_text_file(root_ / rel)); }

  void input(const fs::path& p) { inputs_.emplace(p.filename().string(), sha256_hex(read_text_file(p))); }

  void finish(const RunConfig& cfg, const std::optional<fs::path>& config_file) {
    ojson m;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["command"] = command_;
    // Input locations are excluded; inputs are pinned by content below.
    auto settings = config_to_json(cfg);
    settings.erase("paths");
    m["config_sha256"] = sha256_hex(settings.dump());
    m["config_file_sha256"] = config_file ? ojson(sha256_hex(read_text_file(*config_file))) : ojson(nullptr);
    auto inputs = ojson::array();
    for (const auto& [name, hash] : inputs_) inputs.push_back({{"name", name}, {"sha256", hash}});
    m["inputs"] = std::move(inputs);
    auto artifacts = ojson::array();
    for (const auto& [rel, hash] : artifacts_) artifacts.push_back({{"path", rel}, {"sha256", hash}});
    m["artifacts"] = std::move(artifacts);
    const std::string text = m.dump(2) + '\n';
    std::ofstream f(root_ / "manifest.json", std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) throw InputError("cannot write manifest");
  }

 private:
  fs::path root_;
  std::string command_;
  std::multiset<std::pair<std::string, std::string>> inputs_;
  std::map<std::string, std::string> artifacts_;
};

struct LoadedTrips {
  std::vector<Trip> trips;  // sorted by trip_id
  std::vector<fs::path> files;

  std::vector<const Trip*> pointers() const {
    std::vector<const Trip*> out;
    for (const auto& t : trips) out.push_back(&t);
    return out;
  }
};

LoadedTrips load_trips(const std::vector<std::string>& specs, RunWriter& w) {
  LoadedTrips out;
  std::vector<std::pair<Trip, fs::path>> loaded;
  for (const auto& p : expand_inputs(specs)) {
    auto r = load_trip(p);
    if (!r.report.ok())
      throw InputError(p.string() + ": " + std::to_string(r.report.errors.size()) + " invalid rows; run ingest first");
    w.input(p);
    w.input(sidecar_path(p));
    loaded.emplace_back(std::move(r.trip), p);
  }
  std::stable_sort(loaded.begin(), loaded.end(),
                   [](const auto& a, const auto& b) { return a.first.meta.trip_id < b.first.meta.trip_id; });
  for (std::size_t i = 1; i < loaded.size(); ++i) {
    if (loaded[i].first.meta.trip_id == loaded[i - 1].first.meta.trip_id)
      throw InputError("duplicate trip_id '" + loaded[i].first.meta.trip_id + "'");
  }
  for (auto& [t, p] : loaded) {
    out.trips.push_back(std::move(t));
    out.files.push_back(p);
  }
  return out;
}

Route load_route(const std::optional<std::string>& path, RunWriter& w) {
  if (!path) throw ConfigError("a route file is required (--route or paths.route)");
  w.input(*path);
  return route_from_json(read_json_file(*path));
}

std::string json_text(const ojson& j) { return j.dump(2) + '\n'; }

std::string trip_summary_csv(const std::vector<Trip>& trips, const std::vector<TripScores>& scores) {
  std::string out = "trip_id,driver_id,samples,events,mean_s_stab,mean_composite,mean_s_react,mean_s_route,mean_rt\n";
  for (std::size_t i = 0; i < trips.size(); ++i) {
    const auto& s = scores[i];
    auto mean = [](const std::vector<double>& v) {
      double sum = 0.0;
      for (double x : v) sum += x;
      return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
    };
    std::vector<double> react, route, rt;
    for (const auto& e : s.events.events) {
      react.push_back(e.s_react);
      route.push_back(e.s_route);
      rt.push_back(e.rt);
    }
    auto opt = [&](const std::vector<double>& v) { return v.empty() ? std::string() : format_number(mean(v)); };
    out += trips[i].meta.trip_id + ',' + trips[i].meta.driver_id + ',' + std::to_string(trips[i].size()) + ',' +
           std::to_string(s.events.events.size()) + ',' + format_number(mean(s.samples.s_stab)) + ',' +
           format_number(mean(s.samples.composite)) + ',' + opt(react) + ',' + opt(route) + ',' + opt(rt) + '\n';
  }
  return out;
}

std::vector<TripScores> score_loaded(const LoadedTrips& lt, const Route& route, const RunConfig& cfg) {
  std::vector<std::vector<ManeuverEvent>> events;
  for (const auto& t : lt.trips) events.push_back(trip_events(t, route, cfg));
  return score_trips(lt.pointers(), events, route.polyline, cfg.scoring);
}

ojson comparison_json(const ConditionComparison& c) {
  auto conds = ojson::array();
  for (const auto& s : c.conditions) conds.push_back({{"condition", s.condition}, {"n", s.n}, {"mean", s.mean}, {"sd", s.sd}});
  return {{"by", c.by == ContextField::lead ? "lead" : "weather"},
          {"conditions", std::move(conds)},
          {"effect_size", c.effect_size ? ojson(*c.effect_size) : ojson(nullptr)},
          {"degenerate_variance", c.degenerate_variance}};
}

}  // namespace

std::vector<std::string> export_plot_data(const PlotData& data, const fs::path& dir) {
  std::vector<std::string> written;
  fs::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    f << text;
    if (!f) throw InputError("cannot write " + (dir / name).string());
    written.push_back(name);
  };
  put("series.csv", series_csv(data.series));
  for (const auto& [name, h] : data.histograms) put("hist_" + name + ".csv", histogram_csv(h));
  return written;
}

std::vector<PeriodRecord> trip_aggregate_records(const std::vector<const Trip*>& trips, const std::string& period,
                                                 const RunConfig& cfg) {
  struct Acc {
    double abs_accel = 0.0, throttle = 0.0, duration = 0.0, head_daz = 0.0, meters = 0.0;
    std::size_t accel_n = 0, samples = 0, trips = 0, turns = 0, head_trips = 0, brakes = 0, brake_trips = 0;
  };
  std::map<RowKey, Acc> acc;
  const auto scan = cfg.scan();
  for (const Trip* t : trips) {
    const std::string key =
        period == "week" ? format_iso_week(iso_week(t->meta.start_clock)) : format_month(t->meta.start_clock);
    auto& a = acc[{t->meta.driver_id, key}];
    for (const auto& s : t->samples) {
      if (s.accel) {
        a.abs_accel += std::abs(*s.accel);
        ++a.accel_n;
      }
      a.throttle += s.throttle;
      ++a.samples;
    }
    a.duration += t->duration();
    a.meters += trip_distance_m(*t);
    try {
      a.brakes += detect_hard_brakes(*t, cfg.hard_brake).size();
      ++a.brake_trips;
    } catch (const MissingChannelError&) {
    }
    a.turns += detect_turns(*t, cfg.mobility.turns.heading_threshold_deg, cfg.mobility.turns.max_window_s).size();
    ++a.trips;
    try {
      a.head_daz += head_scan_stats(*t, scan).mean_abs_daz;
      ++a.head_trips;
    } catch (const InputError&) {
    }
  }
  std::vector<PeriodRecord> out;
  for (const auto& [key, a] : acc) {
    PeriodRecord r{key, {}};
    const auto trips_n = static_cast<double>(a.trips);
    if (a.accel_n > 0) r.metrics["mean_abs_accel"] = a.abs_accel / static_cast<double>(a.accel_n);
    r.metrics["mean_throttle"] = a.throttle / static_cast<double>(a.samples);
    r.metrics["mean_trip_duration_s"] = a.duration / trips_n;
    r.metrics["turns_per_trip"] = static_cast<double>(a.turns) / trips_n;
    r.metrics["miles_per_trip"] = a.meters / kMetersPerMile / trips_n;
    if (a.brake_trips > 0) r.metrics["hard_brakes_per_trip"] = static_cast<double>(a.brakes) / static_cast<double>(a.brake_trips);
    if (a.head_trips > 0) r.metrics["mean_abs_head_daz"] = a.head_daz / static_cast<double>(a.head_trips);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& specs) {
  auto telemetry = [](const fs::path& p) {
    const auto ext = p.extension().string();
    return ext == ".csv" || ext == ".jsonl" || ext == ".ndjson";
  };
  std::set<fs::path> out;
  for (const auto& spec : specs) {
    if (spec.find_first_of("*?[") != std::string::npos) {
      glob_t g{};
      const int rc = ::glob(spec.c_str(), 0, nullptr, &g);
      if (rc == 0) {
        for (std::size_t i = 0; i < g.gl_pathc; ++i) {
          const fs::path p = g.gl_pathv[i];
          if (fs::is_regular_file(p) && telemetry(p)) out.insert(p);
        }
      }
      globfree(&g);
      continue;
    }
    const fs::path p = spec;
    if (fs::is_directory(p)) {
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && telemetry(e.path())) out.insert(e.path());
      }
    } else if (fs::is_regular_file(p)) {
      out.insert(p);
    } else {
      throw InputError("no such file or directory: " + spec);
    }
  }
  if (out.empty()) throw InputError("no telemetry files matched the given inputs");
  return {out.begin(), out.end()};
}

std::vector<ManeuverEvent> trip_events(const Trip& trip, const Route& route, const RunConfig& cfg) {
  std::vector<ManeuverEvent> events;
  auto want = [&](const char* s) {
    return std::find(cfg.event_sources.begin(), cfg.event_sources.end(), s) != cfg.event_sources.end();
  };
  if (want("zones") && !route.zones.empty()) events = detect_event_zones(trip, route.zones, route.polyline);
  if (want("turns"))
    events = merge_events(std::move(events),
                          detect_turns(trip, cfg.mobility.turns.heading_threshold_deg, cfg.mobility.turns.max_window_s));
  if (want("hard_brakes")) {
    try {
      events = merge_events(std::move(events), braking_events(detect_hard_brakes(trip, cfg.hard_brake), trip.samples.back().t));
    } catch (const MissingChannelError&) {
    }
  }
  return events;
}

// ---------------------------------------------------------------- commands

namespace {

struct Common {
  std::optional<std::string> config;
  std::string out;
};

struct Context {
  RunConfig cfg;
  std::optional<fs::path> config_file;
};

Context make_context(const Common& c) {
  Context ctx;
  if (c.config) {
    ctx.config_file = *c.config;
    ctx.cfg = load_run_config(*c.config);
  }
  return ctx;
}

void cmd_simulate(const Common& common, const std::optional<std::string>& scenario_arg,
                  const std::optional<std::string>& drivers_arg, const std::optional<std::uint64_t>& seed_arg,
                  const std::optional<std::size_t>& trips_arg, std::ostream& out) {
  auto ctx = make_context(common);
  auto& cfg = ctx.cfg;
  if (scenario_arg) cfg.scenario_path = *scenario_arg;
  if (drivers_arg) cfg.drivers_path = *drivers_arg;
  if (seed_arg) cfg.seed = *seed_arg;
  if (trips_arg) cfg.trips_per_model = *trips_arg;
  cfg.validate();
  if (!cfg.scenario_path) throw ConfigError("simulate needs --scenario (or paths.scenario)");
  if (!cfg.drivers_path) throw ConfigError("simulate needs --drivers (or paths.drivers)");

  RunWriter w(common.out, "simulate");
  w.input(*cfg.scenario_path);
  w.input(*cfg.drivers_path);
  Scenario scenario;
  std::vector<DriverModel> models;
  try {
    scenario = scenario_from_json(read_json_file(*cfg.scenario_path));
    models = drivers_from_json(read_json_file(*cfg.drivers_path));
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  if (models.empty()) throw ConfigError("drivers file lists no models");
  const auto generated = generate_cohort(models, scenario, cfg.trips_per_model, cfg.seed);
  for (const auto& g : generated) {
    const auto& id = g.trip.meta.trip_id;
    w.write("trips/" + id + ".csv", serialize_trip_csv(g.trip));
    w.write("trips/" + id + ".meta.json", json_text(meta_to_json(g.trip.meta)));
    w.write("truth/" + id + ".truth.json", json_text(truth_to_json(g.truth)));
  }
  w.write("route.json", json_text(route_to_json(scenario.route)));
  w.finish(cfg, ctx.config_file);
  out << "simulate: " << generated.size() << " trips -> " << common.out << '\n';
}

void cmd_ingest(const Common& common, const std::vector<std::string>& inputs, const std::optional<std::string>& meta,
                const std::optional<std::string>& columns, std::ostream& out) {
  auto ctx = make_context(common);
  const auto& cfg = ctx.cfg;
  const auto files = expand_inputs(inputs);
  if (meta && files.size() != 1) throw ConfigError("--meta applies to exactly one input file");
  ColumnMap map;
  RunWriter w(common.out, "ingest");
  if (columns) {
    w.input(*columns);
    const auto j = read_json_file(*columns);
    if (!j.is_object()) throw ConfigError("column map must be a JSON object");
    for (const auto& [k, v] : j.items()) {
      if (!v.is_string()) throw ConfigError("column map values must be strings");
      map.source[k] = v.get<std::string>();
    }
  }
  std::set<std::string> ids;
  std::size_t rejected = 0;
  for (const auto& f : files) {
    const fs::path meta_path = meta ? fs::path(*meta) : sidecar_path(f);
    w.input(f);
    w.input(meta_path);
    auto r = load_trip(f, meta_path, map, {cfg.steer_unit, cfg.full_lock_deg});
    Trip trip = cfg.resample_rate ? resample_uniform(r.trip, *cfg.resample_rate) : std::move(r.trip);
    auto checks = validate_trip(trip, cfg.gates);
    ValidationReport report = r.report;
    report.warnings.insert(report.warnings.end(), checks.warnings.begin(), checks.warnings.end());
    report.errors.insert(report.errors.end(), checks.errors.begin(), checks.errors.end());
    const auto& id = trip.meta.trip_id;
    if (!ids.insert(id).second) throw InputError("duplicate trip_id '" + id + "'");
    w.write("validation/" + id + ".json", validation_report_json(report));
    if (!checks.ok()) {
      ++rejected;
      continue;
    }
    w.write("trips/" + id + ".csv", serialize_trip_csv(trip));
    w.write("trips/" + id + ".meta.json", json_text(meta_to_json(trip.meta)));
  }
  w.finish(cfg, ctx.config_file);
  out << "ingest: " << files.size() - rejected << " of " << files.size() << " trips accepted -> " << common.out << '\n';
  if (rejected > 0) throw InputError(std::to_string(rejected) + " trip(s) failed validation; see validation/");
}

void cmd_score(const Common& common, const std::vector<std::string>& trips, const std::optional<std::string>& route_arg,
               std::ostream& out) {
  auto ctx = make_context(common);
  auto& cfg = ctx.cfg;
  if (route_arg) cfg.route_path = *route_arg;
  RunWriter w(common.out, "score");
  const auto route = load_route(cfg.route_path, w);
  const auto lt = load_trips(trips, w);
  const auto scores = score_loaded(lt, route, cfg);
  for (std::size_t i = 0; i < lt.trips.size(); ++i) {
    const auto& id = lt.trips[i].meta.trip_id;
    w.write("scores/" + id + ".samples.csv", sample_scores_csv(scores[i].samples));
    w.write("scores/" + id + ".events.csv", event_scores_csv(scores[i].events));
  }
  w.write("summary.csv", trip_summary_csv(lt.trips, scores));
  w.finish(cfg, ctx.config_file);
  out << "score: " << lt.trips.size() << " trips -> " << common.out << '\n';
}

void cmd_divergence(const Common& common, const std::vector<std::string>& group_a, const std::vector<std::string>& group_b,
                    const std::optional<std::string>& route_arg, const std::optional<double>& top_frac,
                    const std::optional<double>& bin_size, const std::optional<std::string>& score, std::ostream& out) {
  auto ctx = make_context(common);
  auto& cfg = ctx.cfg;
  if (route_arg) cfg.route_path = *route_arg;
  if (top_frac) cfg.scoring.top_fraction = *top_frac;
  if (bin_size) cfg.bin_size = *bin_size;
  if (score) {
    const auto sel = parse_score_selector(*score);
    if (!sel) throw ConfigError("unknown score '" + *score + "'");
    cfg.divergence_score = *sel;
  }
  cfg.validate();
  RunWriter w(common.out, "divergence");
  const auto route = load_route(cfg.route_path, w);
  const auto a = load_trips(group_a, w);
  const auto b = load_trips(group_b, w);

  // Score both groups together so pooled normalizers are shared.
  LoadedTrips all;
  all.trips = a.trips;
  all.trips.insert(all.trips.end(), b.trips.begin(), b.trips.end());
  RunConfig scoring_cfg = cfg;
  scoring_cfg.scoring.normalization = cfg.divergence_normalization;
  const auto scores = score_loaded(all, route, scoring_cfg);
  std::vector<ScoredTripView> va, vb;
  for (std::size_t i = 0; i < all.trips.size(); ++i) {
    (i < a.trips.size() ? va : vb).push_back({&all.trips[i], &scores[i].samples});
  }
  const auto map = group_divergence_map(va, vb, route.polyline, cfg.bin_size, cfg.scoring, cfg.divergence_score,
                                        cfg.gate_distance);
  w.write("divergence.csv", divergence_csv(map));
  w.finish(cfg, ctx.config_file);
  out << "divergence: " << map.bins.size() << " bins, " << map.count(BinFlag::maximal) << " maximal -> " << common.out
      << '\n';
}

void cmd_features(const Common& common, const std::vector<std::string>& trips, std::ostream& out) {
  auto ctx = make_context(common);
  const auto& cfg = ctx.cfg;
  RunWriter w(common.out, "features");
  const auto lt = load_trips(trips, w);
  const auto ptrs = lt.pointers();
  const auto weekly = weekly_profiles(ptrs, cfg.hard_brake);
  const auto monthly = monthly_mobility(ptrs, cfg.mobility);
  w.write("weekly.csv", weekly_csv(weekly));
  w.write("monthly.csv", monthly_csv(monthly));

  const auto scan_cfg = cfg.scan();
  Histogram daz(scan_cfg.az_edges), del(scan_cfg.el_edges);
  std::string scan = "trip_id,mean_abs_daz,mean_abs_del,large_motion_fraction,frame_pairs\n";
  for (const auto& t : lt.trips) {
    try {
      const auto s = head_scan_stats(t, scan_cfg);
      for (std::size_t i = 0; i < daz.counts.size(); ++i) daz.counts[i] += s.daz_hist.counts[i];
      for (std::size_t i = 0; i < del.counts.size(); ++i) del.counts[i] += s.del_hist.counts[i];
      scan += t.meta.trip_id + ',' + format_number(s.mean_abs_daz) + ',' + format_number(s.mean_abs_del) + ',' +
              format_number(s.large_motion_fraction) + ',' + std::to_string(s.frame_pairs) + '\n';
    } catch (const MissingChannelError&) {
      scan += t.meta.trip_id + ",,,,0\n";
    }
  }
  w.write("scan_stats.csv", scan);

  const auto base = cfg.period == "week" ? to_period_records(weekly) : to_period_records(monthly);
  const auto records = join_period_records({base, trip_aggregate_records(ptrs, cfg.period, cfg)});
  const auto matrix = build_feature_matrix(records, cfg.features);
  w.write("feature_matrix.csv", feature_matrix_csv(matrix));

  PlotData plot;
  plot.histograms = {{"head_daz", daz}, {"head_del", del}};
  for (const auto& f : export_plot_data(plot, w.root() / "plot")) w.record("plot/" + f);
  w.finish(cfg, ctx.config_file);
  out << "features: " << lt.trips.size() << " trips, " << matrix.row_count() << " feature rows -> " << common.out << '\n';
}

void cmd_context(const Common& common, const std::string& trip_path, std::ostream& out) {
  auto ctx = make_context(common);
  const auto& cfg = ctx.cfg;
  RunWriter w(common.out, "context");
  const auto lt = load_trips({trip_path}, w);
  if (lt.trips.size() != 1) throw InputError("context takes exactly one trip");
  const Trip& trip = lt.trips.front();
  const auto segments = partition_context(trip, cfg.lead_gap_threshold);

  std::string seg = "t0,t1,begin,end,lead_present,weather\n";
  for (const auto& s : segments) {
    seg += format_number(s.t0) + ',' + format_number(s.t1) + ',' + std::to_string(s.begin) + ',' + std::to_string(s.end) +
           ',' + (s.lead_present ? "1" : "0") + ',' + std::string(to_string(s.weather)) + '\n';
  }
  w.write("segments.csv", seg);

  const auto t = channel(trip, &TelemetrySample::t);
  std::vector<NamedSeries> series{{"speed", t, channel(trip, &TelemetrySample::speed)},
                                  {"throttle", t, channel(trip, &TelemetrySample::throttle)}};
  bool have_head = true;
  std::vector<double> abs_az;
  for (const auto& s : trip.samples) {
    if (!s.head_az) {
      have_head = false;
      break;
    }
    abs_az.push_back(std::abs(*s.head_az));
  }
  if (have_head) series.push_back({"abs_head_az", t, abs_az});

  ojson comps = ojson::object();
  std::vector<NamedSeries> normalized;
  for (const auto& s : series) {
    comps[s.name] = {{"lead", comparison_json(compare_conditions(s.values, segments, ContextField::lead))},
                     {"weather", comparison_json(compare_conditions(s.values, segments, ContextField::weather))}};
    normalized.push_back({s.name + "_situation_z", t, situation_normalize(s.values, segments)});
  }
  w.write("comparisons.json", json_text(comps));
  series.insert(series.end(), normalized.begin(), normalized.end());
  PlotData plot;
  plot.series = std::move(series);
  for (const auto& f : export_plot_data(plot, w.root() / "plot")) w.record("plot/" + f);
  w.finish(cfg, ctx.config_file);
  out << "context: " << segments.size() << " segments -> " << common.out << '\n';
}

void cmd_cluster(const Common& common, const std::string& matrix_path, const std::optional<std::size_t>& k_arg,
                 const std::optional<std::uint64_t>& seed_arg, std::ostream& out) {
  auto ctx = make_context(common);
  auto& cfg = ctx.cfg;
  if (k_arg) cfg.k = *k_arg;
  if (seed_arg) cfg.seed = *seed_arg;
  cfg.validate();
  RunWriter w(common.out, "cluster");
  w.input(matrix_path);
  std::ifstream in(matrix_path, std::ios::binary);
  if (!in) throw InputError("cannot open " + matrix_path);
  const auto matrix = read_feature_matrix_csv(in);
  const auto st = standardize(matrix);
  const auto rows = static_cast<std::size_t>(st.matrix.row_count());
  const auto cols = static_cast<std::size_t>(st.matrix.column_count());
  if (rows < 2 || cfg.n_components > std::min(rows - 1, cols))
    throw InputError("feature matrix has " + std::to_string(rows) + " rows and " + std::to_string(cols) +
                     " usable columns; too few for " + std::to_string(cfg.n_components) + " components");
  if (cfg.k > rows) throw InputError("k = " + std::to_string(cfg.k) + " exceeds the " + std::to_string(rows) + " rows");
  const auto pca = pca_project(st.matrix, cfg.n_components);
  const auto cl = kmeans_cluster(st.matrix, cfg.k, cfg.seed, cfg.max_iter, cfg.tol, cfg.n_init);
  ImportanceRanking imp;
  std::set<std::size_t> distinct(cl.labels.begin(), cl.labels.end());
  if (distinct.size() >= 2) imp = feature_importance(st.matrix, cl.labels);
  w.write("phenotype.json", json_text(phenotype_to_json(st, pca, cl, imp)));
  w.finish(cfg, ctx.config_file);
  out << "cluster: " << rows << " rows, k = " << cfg.k << " -> " << common.out << '\n';
}

void cmd_report(const Common& common, const std::string& driver, const std::vector<std::string>& trips,
                const std::optional<std::string>& route_arg, const std::optional<std::string>& rules_arg,
                std::ostream& out) {
  auto ctx = make_context(common);
  auto& cfg = ctx.cfg;
  if (route_arg) cfg.route_path = *route_arg;
  if (rules_arg) cfg.rules_path = *rules_arg;
  if (!cfg.rules_path) throw ConfigError("report needs --rules (or paths.rules)");
  RunWriter w(common.out, "report");
  w.input(*cfg.rules_path);
  std::vector<Rule> rules;
  try {
    rules = load_rules(read_json_file(*cfg.rules_path));
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  }
  const auto route = load_route(cfg.route_path, w);
  const auto lt = load_trips(trips, w);
  const auto scores = score_loaded(lt, route, cfg);
  std::vector<TripEvidenceInput> mine;
  for (std::size_t i = 0; i < lt.trips.size(); ++i) {
    if (lt.trips[i].meta.driver_id == driver) mine.push_back({&lt.trips[i], &scores[i]});
  }
  if (mine.empty()) throw InputError("no trips for driver '" + driver + "'");
  EvidenceConfig ecfg{cfg.hard_brake, cfg.scan(), cfg.mobility, cfg.max_windows};
  const auto report = evidence_report(driver, driver_metrics(mine, ecfg), rules, cfg.max_windows);
  w.write("evidence.json", json_text(evidence_report_json(report)));
  w.write("evidence.txt", report.summary);
  w.finish(cfg, ctx.config_file);
  out << "report: " << report.flags.size() << " flag(s) for " << driver << " -> " << common.out << '\n';
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Driving-assessment toolkit", kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  auto add_common = [](CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "Run configuration (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--out", c.out, "Output run directory")->required();
  };

  Common sim_c;
  std::optional<std::string> sim_scenario, sim_drivers;
  std::optional<std::uint64_t> sim_seed;
  std::optional<std::size_t> sim_trips;
  auto* sim = app.add_subcommand("simulate", "Generate synthetic trips and ground truth");
  add_common(sim, sim_c);
  sim->add_option("--scenario", sim_scenario, "Scenario file")->check(CLI::ExistingFile);
  sim->add_option("--drivers", sim_drivers, "Driver presets file")->check(CLI::ExistingFile);
  sim->add_option("--seed", sim_seed, "Base seed");
  sim->add_option("--trips-per-model", sim_trips, "Trips per driver model");

  Common ing_c;
  std::vector<std::string> ing_inputs;
  std::optional<std::string> ing_meta, ing_columns;
  auto* ing = app.add_subcommand("ingest", "Validate raw telemetry into a trip store");
  add_common(ing, ing_c);
  ing->add_option("inputs", ing_inputs, "Telemetry files, directories or globs")->required();
  ing->add_option("--meta", ing_meta, "Metadata file (single input only)")->check(CLI::ExistingFile);
  ing->add_option("--columns", ing_columns, "Column map (JSON)")->check(CLI::ExistingFile);

  Common sc_c;
  std::vector<std::string> sc_trips;
  std::optional<std::string> sc_route;
  auto* sc = app.add_subcommand("score", "Per-sample and per-event scores");
  add_common(sc, sc_c);
  sc->add_option("--trips", sc_trips, "Trip files, directories or globs")->required();
  sc->add_option("--route", sc_route, "Route file")->check(CLI::ExistingFile);

  Common dv_c;
  std::vector<std::string> dv_a, dv_b;
  std::optional<std::string> dv_route, dv_score;
  std::optional<double> dv_top, dv_bin;
  auto* dv = app.add_subcommand("divergence", "Route-binned group divergence map");
  add_common(dv, dv_c);
  dv->add_option("--group-a", dv_a, "Group A trips")->required();
  dv->add_option("--group-b", dv_b, "Group B trips")->required();
  dv->add_option("--route", dv_route, "Route file")->check(CLI::ExistingFile);
  dv->add_option("--top-frac", dv_top, "Fraction of bins flagged maximal");
  dv->add_option("--bin-size", dv_bin, "Bin length in meters");
  dv->add_option("--score", dv_score, "composite|stability|reaction|route|fluency");

  Common ft_c;
  std::vector<std::string> ft_trips;
  auto* ft = app.add_subcommand("features", "Weekly and monthly profiles, scan statistics, feature matrix");
  add_common(ft, ft_c);
  ft->add_option("--trips", ft_trips, "Trip files, directories or globs")->required();

  Common cx_c;
  std::string cx_trip;
  auto* cx = app.add_subcommand("context", "Context partition and condition comparisons for one trip");
  add_common(cx, cx_c);
  cx->add_option("--trip", cx_trip, "Trip file")->required();

  Common cl_c;
  std::string cl_matrix;
  std::optional<std::size_t> cl_k;
  std::optional<std::uint64_t> cl_seed;
  auto* cl = app.add_subcommand("cluster", "PCA, k-means and feature importance");
  add_common(cl, cl_c);
  cl->add_option("--matrix", cl_matrix, "Feature matrix CSV")->required()->check(CLI::ExistingFile);
  cl->add_option("--k", cl_k, "Cluster count");
  cl->add_option("--seed", cl_seed, "k-means seed");

  Common rp_c;
  std::string rp_driver;
  std::vector<std::string> rp_trips;
  std::optional<std::string> rp_route, rp_rules;
  auto* rp = app.add_subcommand("report", "Rule-based evidence report for one driver");
  add_common(rp, rp_c);
  rp->add_option("--driver", rp_driver, "Driver id")->required();
  rp->add_option("--trips", rp_trips, "Trip files, directories or globs")->required();
  rp->add_option("--route", rp_route, "Route file")->check(CLI::ExistingFile);
  rp->add_option("--rules", rp_rules, "Rules file")->check(CLI::ExistingFile);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (sim->parsed()) cmd_simulate(sim_c, sim_scenario, sim_drivers, sim_seed, sim_trips, out);
    else if (ing->parsed()) cmd_ingest(ing_c, ing_inputs, ing_meta, ing_columns, out);
    else if (sc->parsed()) cmd_score(sc_c, sc_trips, sc_route, out);
    else if (dv->parsed()) cmd_divergence(dv_c, dv_a, dv_b, dv_route, dv_top, dv_bin, dv_score, out);
    else if (ft->parsed()) cmd_features(ft_c, ft_trips, out);
    else if (cx->parsed()) cmd_context(cx_c, cx_trip, out);
    else if (cl->parsed()) cmd_cluster(cl_c, cl_matrix, cl_k, cl_seed, out);
    else if (rp->parsed()) cmd_report(rp_c, rp_driver, rp_trips, rp_route, rp_rules, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kOk;
}

}  // namespace drivescope::cli
