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

// Behavioral features across time scales (sample, trip, week, month) and
// context-conditioned comparison.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "drivescope/clock.hpp"
#include "drivescope/error.hpp"
#include "drivescope/geometry.hpp"
#include "drivescope/number.hpp"
#include "drivescope/telemetry.hpp"

namespace drivescope {

inline constexpr double kMetersPerMile = 1609.344;

// Fixed-edge histogram. Values below the first edge count in the first bin,
// values above the last edge in the last bin, so counts always sum to the
// number of values added.
struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;

  explicit Histogram(std::vector<double> e = {}) : edges(std::move(e)) {
    if (!edges.empty()) {
      if (edges.size() < 2) throw ConfigError("histogram needs at least 2 edges");
      for (std::size_t i = 1; i < edges.size(); ++i) {
        if (!(edges[i] > edges[i - 1])) throw ConfigError("histogram edges must be strictly increasing");
      }
      counts.assign(edges.size() - 1, 0);
    }
  }

  void add(double v) {
    if (counts.empty()) return;
    auto it = std::upper_bound(edges.begin(), edges.end(), v);
    auto idx = static_cast<std::ptrdiff_t>(it - edges.begin()) - 1;
    idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(counts.size()) - 1);
    ++counts[static_cast<std::size_t>(idx)];
  }

  std::size_t total() const {
    std::size_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
};

inline std::vector<double> uniform_edges(double lo, double hi, std::size_t bins) {
  std::vector<double> e(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  return e;
}

struct ScanConfig {
  double large_motion_threshold_deg = 5.0;
  std::vector<double> az_edges = uniform_edges(-20.0, 20.0, 20);
  std::vector<double> el_edges = uniform_edges(-10.0, 10.0, 20);
};

struct ScanStats {
  double mean_abs_daz = 0.0;  // deg/frame
  double mean_abs_del = 0.0;  // deg/frame
  double large_motion_fraction = 0.0;
  std::size_t frame_pairs = 0;
  Histogram daz_hist;
  Histogram del_hist;
};

// Frame-to-frame head-angle changes (shortest arc). Pairs where either frame
// lacks head angles are skipped.
inline ScanStats head_scan_stats(const Trip& trip, const ScanConfig& cfg = {}) {
  const auto& s = trip.samples;
  if (s.size() < 2) throw InputError("trip " + trip.meta.trip_id + " has fewer than 2 samples");
  ScanStats out{0.0, 0.0, 0.0, 0, Histogram(cfg.az_edges), Histogram(cfg.el_edges)};
  std::size_t large = 0;
  double sum_az = 0.0, sum_el = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (!s[k].head_az || !s[k].head_el || !s[k - 1].head_az || !s[k - 1].head_el) continue;
    const double daz = angle_diff_deg(*s[k - 1].head_az, *s[k].head_az);
    const double del = angle_diff_deg(*s[k - 1].head_el, *s[k].head_el);
    sum_az += std::abs(daz);
    sum_el += std::abs(del);
    if (std::abs(daz) > cfg.large_motion_threshold_deg) ++large;
    out.daz_hist.add(daz);
    out.del_hist.add(del);
    ++out.frame_pairs;
  }
  if (out.frame_pairs == 0) throw MissingChannelError("trip " + trip.meta.trip_id + " lacks head-angle channels");
  const auto n = static_cast<double>(out.frame_pairs);
  out.mean_abs_daz = sum_az / n;
  out.mean_abs_del = sum_el / n;
  out.large_motion_fraction = static_cast<double>(large) / n;
  return out;
}

struct HardBrakeConfig {
  double threshold = -3.0;    // m/s^2
  double min_duration = 0.5;  // s
};

struct HardBrakeEvent {
  double t0 = 0.0;  // first sample of the run
  double t1 = 0.0;  // last sample of the run + one period
  double min_accel = 0.0;
};

// Maximal runs with accel <= threshold lasting at least min_duration.
inline std::vector<HardBrakeEvent> detect_hard_brakes(const Trip& trip, const HardBrakeConfig& cfg = {}) {
  const auto accel = required_channel(trip, &TelemetrySample::accel, "accel");
  const auto& s = trip.samples;
  const double period = trip.period();
  std::vector<HardBrakeEvent> runs;
  std::optional<std::size_t> start;
  auto close = [&](std::size_t last) {
    double m = accel[*start];
    for (std::size_t j = *start; j <= last; ++j) m = std::min(m, accel[j]);
    HardBrakeEvent ev{s[*start].t, s[last].t + period, m};
    if (!runs.empty() && ev.t0 - runs.back().t1 < period - 1e-9) {
      runs.back().t1 = ev.t1;
      runs.back().min_accel = std::min(runs.back().min_accel, ev.min_accel);
    } else {
      runs.push_back(ev);
    }
    start.reset();
  };
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (accel[k] <= cfg.threshold) {
      if (!start) start = k;
    } else if (start) {
      close(k - 1);
    }
  }
  if (start) close(s.size() - 1);
  std::vector<HardBrakeEvent> out;
  for (const auto& r : runs) {
    if (r.t1 - r.t0 >= cfg.min_duration - 1e-9) out.push_back(r);
  }
  return out;
}

inline std::vector<ManeuverEvent> braking_events(const std::vector<HardBrakeEvent>& brakes, double trip_end) {
  std::vector<ManeuverEvent> out;
  for (const auto& b : brakes) {
    const double t1 = std::min(b.t1, trip_end);
    if (t1 > b.t0) out.push_back({0, ManeuverKind::braking, b.t0, t1, std::nullopt, std::nullopt, std::nullopt});
  }
  return out;
}

// Distance driven, trapezoidal integration of speed (m).
inline double trip_distance_m(const Trip& trip) {
  double d = 0.0;
  const auto& s = trip.samples;
  for (std::size_t k = 1; k < s.size(); ++k) d += 0.5 * (s[k].speed + s[k - 1].speed) * (s[k].t - s[k - 1].t);
  return d;
}

struct WeeklyProfile {
  std::string driver_id;
  IsoWeek week;
  double mean_speed = 0.0;  // m/s, duration weighted
  std::size_t hard_brake_count = 0;
  std::size_t trip_count = 0;
  double total_miles = 0.0;

  std::string key() const { return format_iso_week(week); }
};

// One profile per (driver, ISO week of start_clock); weeks without trips do
// not appear.
inline std::vector<WeeklyProfile> weekly_profiles(const std::vector<const Trip*>& trips,
                                                  const HardBrakeConfig& brakes = {}) {
  struct Acc {
    double speed_time = 0.0, time = 0.0, meters = 0.0;
    std::size_t brakes = 0, trips = 0;
  };
  std::map<std::pair<std::string, IsoWeek>, Acc> acc;
  for (const Trip* trip : trips) {
    auto& a = acc[{trip->meta.driver_id, iso_week(trip->meta.start_clock)}];
    const double dt = trip->period();
    for (const auto& s : trip->samples) {
      a.speed_time += s.speed * dt;
      a.time += dt;
    }
    a.meters += trip_distance_m(*trip);
    a.brakes += detect_hard_brakes(*trip, brakes).size();
    ++a.trips;
  }
  std::vector<WeeklyProfile> out;
  for (const auto& [key, a] : acc) {
    out.push_back({key.first, key.second, a.time > 0.0 ? a.speed_time / a.time : 0.0, a.brakes, a.trips,
                   a.meters / kMetersPerMile});
  }
  return out;
}

struct MobilityConfig {
  double night_start_s = 20.0 * 3600.0;  // local seconds of day
  double night_end_s = 6.0 * 3600.0;
  double short_trip_m = 5000.0;
  TurnDetectionConfig turns;
};

inline bool is_night(const WallClock& start, const MobilityConfig& cfg) {
  const double tod = local_seconds_of_day(start);
  if (cfg.night_start_s <= cfg.night_end_s) return tod >= cfg.night_start_s && tod < cfg.night_end_s;
  return tod >= cfg.night_start_s || tod < cfg.night_end_s;
}

struct MobilityProfile {
  std::string driver_id;
  std::string month;  // YYYY-MM, local time of start_clock
  double miles_per_month = 0.0;
  std::size_t trips_per_month = 0;
  std::size_t night_trip_count = 0;
  double night_trip_fraction = 0.0;
  std::size_t short_trip_count = 0;
  double short_trip_ratio = 0.0;
  std::size_t right_turns = 0;
  std::size_t left_turns = 0;
  double right_left_ratio = 1.0;  // (R + 1) / (L + 1)
  std::size_t driving_days = 0;
};

inline std::vector<MobilityProfile> monthly_mobility(const std::vector<const Trip*>& trips,
                                                     const MobilityConfig& cfg = {}) {
  struct Acc {
    double meters = 0.0;
    std::size_t trips = 0, night = 0, short_trips = 0, right = 0, left = 0;
    std::set<std::string> days;
  };
  std::map<std::pair<std::string, std::string>, Acc> acc;
  for (const Trip* trip : trips) {
    auto& a = acc[{trip->meta.driver_id, format_month(trip->meta.start_clock)}];
    const double meters = trip_distance_m(*trip);
    a.meters += meters;
    ++a.trips;
    if (is_night(trip->meta.start_clock, cfg)) ++a.night;
    if (meters < cfg.short_trip_m) ++a.short_trips;
    for (const auto& ev : detect_turns(*trip, cfg.turns.heading_threshold_deg, cfg.turns.max_window_s)) {
      if (ev.kind == ManeuverKind::turn_right) ++a.right;
      else if (ev.kind == ManeuverKind::turn_left) ++a.left;
    }
    a.days.insert(format_date(trip->meta.start_clock));
  }
  std::vector<MobilityProfile> out;
  for (const auto& [key, a] : acc) {
    MobilityProfile p;
    p.driver_id = key.first;
    p.month = key.second;
    p.miles_per_month = a.meters / kMetersPerMile;
    p.trips_per_month = a.trips;
    p.night_trip_count = a.night;
    p.night_trip_fraction = static_cast<double>(a.night) / static_cast<double>(a.trips);
    p.short_trip_count = a.short_trips;
    p.short_trip_ratio = static_cast<double>(a.short_trips) / static_cast<double>(a.trips);
    p.right_turns = a.right;
    p.left_turns = a.left;
    p.right_left_ratio = (static_cast<double>(a.right) + 1.0) / (static_cast<double>(a.left) + 1.0);
    p.driving_days = a.days.size();
    out.push_back(std::move(p));
  }
  return out;
}

struct ContextSegment {
  double t0 = 0.0;
  double t1 = 0.0;          // start of the next segment, or the last sample time
  std::size_t begin = 0;    // sample range [begin, end)
  std::size_t end = 0;
  bool lead_present = false;
  Weather weather = Weather::unknown;
};

inline constexpr double kDefaultLeadGapThreshold = 50.0;

// Maximal runs of constant (lead_present, weather). Absent weather counts as
// unknown; lead_present requires a gap at or below the threshold.
inline std::vector<ContextSegment> partition_context(const Trip& trip,
                                                     double lead_gap_threshold = kDefaultLeadGapThreshold) {
  std::vector<ContextSegment> out;
  const auto& s = trip.samples;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const bool lead = s[k].lead_gap && *s[k].lead_gap <= lead_gap_threshold;
    const Weather w = s[k].weather.value_or(Weather::unknown);
    if (out.empty() || out.back().lead_present != lead || out.back().weather != w) {
      if (!out.empty()) {
        out.back().end = k;
        out.back().t1 = s[k].t;
      }
      out.push_back({s[k].t, s[k].t, k, k + 1, lead, w});
    }
  }
  if (!out.empty()) {
    out.back().end = s.size();
    out.back().t1 = s.back().t;
  }
  return out;
}

enum class ContextField { lead, weather };

struct ConditionStats {
  std::string condition;
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (0 when n = 1)
};

struct ConditionComparison {
  ContextField by = ContextField::lead;
  std::vector<ConditionStats> conditions;  // conditions with zero samples omitted
  std::optional<double> effect_size;       // Cohen's d, first minus second primary condition
  bool degenerate_variance = false;
};

struct EffectSize {
  double d = 0.0;
  bool degenerate = false;
};

inline ConditionStats describe(std::string name, const std::vector<double>& v) {
  ConditionStats c{std::move(name), v.size(), 0.0, 0.0};
  if (v.empty()) return c;
  double sum = 0.0;
  for (double x : v) sum += x;
  c.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - c.mean) * (x - c.mean);
    c.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return c;
}

// Cohen's d = (mean_a - mean_b) / pooled sd; 0 (flagged) when pooled sd = 0.
inline EffectSize cohens_d(const ConditionStats& a, const ConditionStats& b) {
  if (a.n == 0 || b.n == 0) return {0.0, true};
  const double dof = static_cast<double>(a.n + b.n) - 2.0;
  double pooled = 0.0;
  if (dof > 0.0) {
    pooled = std::sqrt((static_cast<double>(a.n - 1) * a.sd * a.sd + static_cast<double>(b.n - 1) * b.sd * b.sd) / dof);
  }
  if (!(pooled > 0.0)) return {0.0, true};
  return {(a.mean - b.mean) / pooled, false};
}

inline EffectSize cohens_d(const std::vector<double>& a, const std::vector<double>& b) {
  return cohens_d(describe("a", a), describe("b", b));
}

// Lead: primary conditions (lead_absent, lead_present). Weather: (clear, rain),
// with unknown reported but not used for the effect size.
inline ConditionComparison compare_conditions(const std::vector<double>& series,
                                              const std::vector<ContextSegment>& segments, ContextField by) {
  std::vector<std::string> names =
      by == ContextField::lead ? std::vector<std::string>{"lead_absent", "lead_present"}
                               : std::vector<std::string>{"clear", "rain", "unknown"};
  std::vector<std::vector<double>> groups(names.size());
  for (const auto& seg : segments) {
    if (seg.end > series.size()) throw std::invalid_argument("segments exceed the series length");
    std::size_t g = 0;
    if (by == ContextField::lead) g = seg.lead_present ? 1 : 0;
    else g = seg.weather == Weather::clear ? 0 : seg.weather == Weather::rain ? 1 : 2;
    groups[g].insert(groups[g].end(), series.begin() + static_cast<std::ptrdiff_t>(seg.begin),
                     series.begin() + static_cast<std::ptrdiff_t>(seg.end));
  }
  ConditionComparison out;
  out.by = by;
  for (std::size_t g = 0; g < names.size(); ++g) {
    if (!groups[g].empty()) out.conditions.push_back(describe(names[g], groups[g]));
  }
  if (!groups[0].empty() && !groups[1].empty()) {
    const auto e = cohens_d(describe(names[0], groups[0]), describe(names[1], groups[1]));
    out.effect_size = e.d;
    out.degenerate_variance = e.degenerate;
  }
  return out;
}

// Z-scores each value against its context stratum (lead_present, weather);
// strata with zero spread map to 0. Uses the population standard deviation.
inline std::vector<double> situation_normalize(const std::vector<double>& series,
                                               const std::vector<ContextSegment>& segments) {
  std::map<std::pair<bool, int>, std::vector<std::size_t>> strata;
  for (const auto& seg : segments) {
    if (seg.end > series.size()) throw std::invalid_argument("segments exceed the series length");
    auto& idx = strata[{seg.lead_present, static_cast<int>(seg.weather)}];
    for (std::size_t k = seg.begin; k < seg.end; ++k) idx.push_back(k);
  }
  std::vector<double> out(series.size(), 0.0);
  for (const auto& [key, idx] : strata) {
    double mean = 0.0;
    for (auto k : idx) mean += series[k];
    mean /= static_cast<double>(idx.size());
    double ss = 0.0;
    for (auto k : idx) ss += (series[k] - mean) * (series[k] - mean);
    const double sd = std::sqrt(ss / static_cast<double>(idx.size()));
    for (auto k : idx) out[k] = sd > 0.0 ? (series[k] - mean) / sd : 0.0;
  }
  return out;
}

inline std::string weekly_csv(const std::vector<WeeklyProfile>& v) {
  std::string out = "driver_id,week,mean_speed,hard_brake_count,trip_count,total_miles\n";
  for (const auto& p : v) {
    out += p.driver_id + ',' + p.key() + ',' + format_number(p.mean_speed) + ',' + std::to_string(p.hard_brake_count) +
           ',' + std::to_string(p.trip_count) + ',' + format_number(p.total_miles) + '\n';
  }
  return out;
}

inline std::string monthly_csv(const std::vector<MobilityProfile>& v) {
  std::string out =
      "driver_id,month,miles_per_month,trips_per_month,night_trip_count,night_trip_fraction,short_trip_count,"
      "short_trip_ratio,right_turns,left_turns,right_left_ratio,driving_days\n";
  for (const auto& p : v) {
    out += p.driver_id + ',' + p.month + ',' + format_number(p.miles_per_month) + ',' +
           std::to_string(p.trips_per_month) + ',' + std::to_string(p.night_trip_count) + ',' +
           format_number(p.night_trip_fraction) + ',' + std::to_string(p.short_trip_count) + ',' +
           format_number(p.short_trip_ratio) + ',' + std::to_string(p.right_turns) + ',' +
           std::to_string(p.left_turns) + ',' + format_number(p.right_left_ratio) + ',' +
           std::to_string(p.driving_days) + '\n';
  }
  return out;
}

// Plot-ready fixed-edge histogram.
inline std::string histogram_csv(const Histogram& h) {
  std::string out = "bin_left,bin_right,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out += format_number(h.edges[i]) + ',' + format_number(h.edges[i + 1]) + ',' + std::to_string(h.counts[i]) + '\n';
  }
  return out;
}

struct NamedSeries {
  std::string name;
  std::vector<double> t;
  std::vector<double> values;
};

// Long-form series table: one row per (series, t).
inline std::string series_csv(const std::vector<NamedSeries>& series) {
  std::string out = "series,t,value\n";
  for (const auto& s : series) {
    for (std::size_t k = 0; k < s.values.size(); ++k) {
      out += s.name + ',' + format_number(k < s.t.size() ? s.t[k] : static_cast<double>(k)) + ',' +
             format_number(s.values[k]) + '\n';
    }
  }
  return out;
}

}  // namespace drivescope
