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

// Telemetry data model: one trip is an ordered list of samples plus the
// identity/cohort metadata needed for period bucketing.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drivescope/clock.hpp"
#include "drivescope/error.hpp"

namespace drivescope {

enum class Weather { clear, rain, unknown };
enum class Cohort { senior, young, unlabeled };

inline std::string_view to_string(Weather w) {
  switch (w) {
    case Weather::clear: return "clear";
    case Weather::rain: return "rain";
    case Weather::unknown: return "unknown";
  }
  return "unknown";
}

inline std::optional<Weather> parse_weather(std::string_view s) {
  if (s == "clear") return Weather::clear;
  if (s == "rain") return Weather::rain;
  if (s == "unknown") return Weather::unknown;
  return std::nullopt;
}

inline std::string_view to_string(Cohort c) {
  switch (c) {
    case Cohort::senior: return "senior";
    case Cohort::young: return "young";
    case Cohort::unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

inline std::optional<Cohort> parse_cohort(std::string_view s) {
  if (s == "senior") return Cohort::senior;
  if (s == "young") return Cohort::young;
  if (s == "unlabeled") return Cohort::unlabeled;
  return std::nullopt;
}

// One telemetry frame. Optional channels are absent rather than imputed.
struct TelemetrySample {
  double t = 0.0;         // s since trip start
  double steer = 0.0;     // normalized, [-1, 1]
  double throttle = 0.0;  // [0, 1]
  double brake = 0.0;     // [0, 1]
  double speed = 0.0;     // m/s
  std::optional<double> accel;  // m/s^2, longitudinal
  double pos_x = 0.0;     // m, local planar frame
  double pos_y = 0.0;
  double heading = 0.0;   // deg clockwise from north, [0, 360)
  std::optional<double> head_az;   // deg
  std::optional<double> head_el;   // deg
  std::optional<double> lead_gap;  // m
  std::optional<Weather> weather;

  friend bool operator==(const TelemetrySample&, const TelemetrySample&) = default;
};

struct TripMeta {
  std::string trip_id;
  std::string driver_id;
  Cohort cohort = Cohort::unlabeled;
  WallClock start_clock{};
  double sample_rate = 1.0;  // Hz

  friend bool operator==(const TripMeta&, const TripMeta&) = default;
};

struct Trip {
  TripMeta meta;
  std::vector<TelemetrySample> samples;

  double period() const { return 1.0 / meta.sample_rate; }
  double duration() const { return samples.size() < 2 ? 0.0 : samples.back().t - samples.front().t; }
  std::size_t size() const { return samples.size(); }

  friend bool operator==(const Trip&, const Trip&) = default;
};

// Extracts one scalar channel as a dense series.
template <typename Member>
std::vector<double> channel(const Trip& trip, Member member) {
  std::vector<double> out;
  out.reserve(trip.samples.size());
  for (const auto& s : trip.samples) out.push_back(s.*member);
  return out;
}

// Extracts an optional channel; throws MissingChannelError if any sample lacks it.
inline std::vector<double> required_channel(const Trip& trip, std::optional<double> TelemetrySample::*member,
                                            std::string_view name) {
  std::vector<double> out;
  out.reserve(trip.samples.size());
  for (const auto& s : trip.samples) {
    const auto& v = s.*member;
    if (!v) throw MissingChannelError("trip " + trip.meta.trip_id + " lacks channel " + std::string(name));
    out.push_back(*v);
  }
  return out;
}

// True when consecutive timestamps step by exactly 1/sample_rate within tol.
inline bool is_uniform(const Trip& trip, double tol = 1e-9) {
  const double dt = trip.period();
  for (std::size_t k = 1; k < trip.samples.size(); ++k) {
    if (std::abs(trip.samples[k].t - trip.samples[k - 1].t - dt) > tol) return false;
  }
  return true;
}

// Signed shortest-arc difference b - a in degrees, in (-180, 180].
inline double angle_diff_deg(double a, double b) {
  double d = std::fmod(b - a, 360.0);
  if (d > 180.0) d -= 360.0;
  if (d <= -180.0) d += 360.0;
  return d;
}

inline double wrap_heading_deg(double h) {
  double w = std::fmod(h, 360.0);
  if (w < 0.0) w += 360.0;
  if (w >= 360.0) w -= 360.0;
  return w;
}

}  // namespace drivescope
