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

// Deterministic synthetic trips: a parametric driver on a scripted scenario
// produces telemetry plus the ground-truth log used as the test oracle.
//
// Vehicle: point mass moving along the planned route with first-order speed
// dynamics. The desired acceleration is the minimum of
//   cruise      throttle_gain * 0.6/s * (v_pref - v)
//   following   1/s * (v_lead + min(0.5, 0.2/s * (gap - 5 m - headway * v)) - v)
//   zone        -brake_aggressiveness from stimulus + reaction_latency until
//               v <= zone_speed_factor * v_pref, then hold that speed to zone exit
// and injected hard brakes override it with their scripted deceleration.
// Pedals invert  a = 4 m/s^2 * throttle - 8 m/s^2 * brake - 0.015/s * v.
// Steering is route feedforward (wheelbase 2.7 m, 35 deg at full lock,
// 0.5 s lag) plus AR(1) lane-wander noise with 1 s correlation time and
// stationary sd steer_noise_sd. Head azimuth is a sinusoid whose amplitude is
// halved while a lead vehicle is present.
// Per trip, the seed also draws a pace factor N(1, 0.03) (clipped to
// [0.9, 1.1]) on preferred speed and N(1, 0.05) (clipped) on scan amplitude,
// plus the head-scan phases.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "drivescope/clock.hpp"
#include "drivescope/error.hpp"
#include "drivescope/geometry.hpp"
#include "drivescope/rng.hpp"
#include "drivescope/telemetry.hpp"

namespace drivescope {

struct DriverModel {
  std::string name = "driver";
  Cohort cohort = Cohort::unlabeled;
  double reaction_latency = 1.0;     // s
  double preferred_speed = 14.0;     // m/s
  double throttle_gain = 0.8;        // (0, 1]
  double brake_aggressiveness = 3.5; // m/s^2, peak zone deceleration
  double steer_noise_sd = 0.015;     // normalized steer units
  double scan_amplitude = 30.0;      // deg
  double scan_period = 4.0;          // s
  double following_headway = 2.0;    // s

  void validate() const {
    if (!(reaction_latency >= 0.0)) throw ConfigError(name + ": reaction_latency must be >= 0");
    if (!(preferred_speed > 0.0)) throw ConfigError(name + ": preferred_speed must be positive");
    if (!(throttle_gain > 0.0 && throttle_gain <= 1.0)) throw ConfigError(name + ": throttle_gain must lie in (0, 1]");
    if (!(brake_aggressiveness > 0.0 && brake_aggressiveness <= 8.0))
      throw ConfigError(name + ": brake_aggressiveness must lie in (0, 8]");
    if (!(steer_noise_sd >= 0.0)) throw ConfigError(name + ": steer_noise_sd must be >= 0");
    if (!(scan_amplitude >= 0.0)) throw ConfigError(name + ": scan_amplitude must be >= 0");
    if (!(scan_period > 0.0)) throw ConfigError(name + ": scan_period must be positive");
    if (!(following_headway > 0.0)) throw ConfigError(name + ": following_headway must be positive");
  }
};

// Preset cohorts: the senior preset reacts later, drives slower with gentler
// throttle, and scans wider than the young preset.
inline DriverModel senior_default() {
  DriverModel m;
  m.name = "senior_default";
  m.cohort = Cohort::senior;
  m.reaction_latency = 1.5;
  m.preferred_speed = 12.0;
  m.throttle_gain = 0.6;
  m.brake_aggressiveness = 4.5;
  m.steer_noise_sd = 0.02;
  m.scan_amplitude = 40.0;
  m.scan_period = 3.0;
  m.following_headway = 2.5;
  return m;
}

inline DriverModel young_default() {
  DriverModel m;
  m.name = "young_default";
  m.cohort = Cohort::young;
  m.reaction_latency = 0.6;
  m.preferred_speed = 15.0;
  m.throttle_gain = 0.9;
  m.brake_aggressiveness = 3.0;
  m.steer_noise_sd = 0.01;
  m.scan_amplitude = 20.0;
  m.scan_period = 4.0;
  m.following_headway = 1.5;
  return m;
}

struct LeadPhase {
  double t_start = 0.0;
  double t_end = 0.0;
  double initial_gap = 30.0;  // m ahead of the ego vehicle at t_start
  std::vector<std::pair<double, double>> speed_profile;  // (t, m/s), piecewise linear, held at the ends

  double speed_at(double t) const {
    if (speed_profile.empty()) return 0.0;
    if (t <= speed_profile.front().first) return speed_profile.front().second;
    for (std::size_t i = 1; i < speed_profile.size(); ++i) {
      if (t <= speed_profile[i].first) {
        const auto& [t0, v0] = speed_profile[i - 1];
        const auto& [t1, v1] = speed_profile[i];
        return t1 > t0 ? v0 + (v1 - v0) * (t - t0) / (t1 - t0) : v1;
      }
    }
    return speed_profile.back().second;
  }
};

struct WeatherPhase {
  double t_start = 0.0;
  Weather weather = Weather::clear;
};

struct HardBrakeInjection {
  double t = 0.0;
  double decel = 4.0;  // m/s^2 magnitude; telemetry accel = -decel
  double duration = 1.0;
};

struct NoiseSegment {
  double arc_start = 0.0;
  double arc_end = 0.0;
  double multiplier = 1.0;
};

struct Scenario {
  Route route{RoutePolyline({{0.0, 0.0}, {0.0, 1000.0}}), {}};
  std::vector<LeadPhase> lead_schedule;
  std::vector<WeatherPhase> weather_phases;
  std::vector<HardBrakeInjection> hard_brake_injections;
  std::vector<NoiseSegment> steer_noise_segments;
  double duration = 300.0;  // s
  double sample_rate = 10.0;  // Hz
  std::optional<double> initial_speed;
  WallClock start_clock = parse_rfc3339("2025-03-03T12:00:00Z");
  double trip_spacing_s = 86400.0;
  double zone_speed_factor = 0.5;

  void validate() const {
    if (!(duration > 0.0)) throw ConfigError("scenario duration must be positive");
    if (!(sample_rate > 0.0)) throw ConfigError("scenario sample_rate must be positive");
    if (!(zone_speed_factor > 0.0 && zone_speed_factor <= 1.0)) throw ConfigError("zone_speed_factor must lie in (0, 1]");
    for (const auto& z : route.zones) validate_zone(z, route.polyline);
    for (const auto& l : lead_schedule) {
      if (!(l.t_start >= 0.0 && l.t_end <= duration && l.t_start < l.t_end))
        throw ConfigError("lead phase outside [0, duration]");
      if (!(l.initial_gap >= 0.0)) throw ConfigError("lead initial gap must be >= 0");
      if (l.speed_profile.empty()) throw ConfigError("lead phase needs a speed profile");
    }
    for (const auto& w : weather_phases) {
      if (!(w.t_start >= 0.0 && w.t_start <= duration)) throw ConfigError("weather phase outside [0, duration]");
    }
    auto inj = hard_brake_injections;
    std::sort(inj.begin(), inj.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
    for (std::size_t i = 0; i < inj.size(); ++i) {
      if (!(inj[i].t >= 0.0 && inj[i].t + inj[i].duration <= duration))
        throw ConfigError("hard-brake injection outside [0, duration]");
      if (!(inj[i].decel > 0.0 && inj[i].duration > 0.0)) throw ConfigError("hard-brake injection needs decel, duration > 0");
      if (i > 0 && inj[i].t < inj[i - 1].t + inj[i - 1].duration) throw ConfigError("hard-brake injections overlap");
    }
    for (const auto& s : steer_noise_segments) {
      if (!(s.arc_end > s.arc_start && s.multiplier >= 0.0)) throw ConfigError("invalid steer noise segment");
    }
  }
};

struct ZoneTruth {
  std::string zone_id;
  double stimulus_time = 0.0;
  double response_time = 0.0;  // stimulus_time + reaction_latency
  std::size_t stimulus_sample = 0;
  std::optional<std::size_t> response_sample;  // absent when the trip ended first
};

struct LeadInterval {
  double t0 = 0.0;
  double t1 = 0.0;
};

struct GroundTruthLog {
  std::string trip_id;
  std::uint64_t seed = 0;
  double reaction_latency = 0.0;
  std::vector<ZoneTruth> zones;
  std::vector<HardBrakeInjection> hard_brakes;
  std::vector<LeadInterval> lead_intervals;
  std::vector<std::optional<double>> lead_gap;
};

struct GeneratedTrip {
  Trip trip;
  GroundTruthLog truth;
};

namespace detail {

struct VehicleConstants {
  static constexpr double throttle_accel = 4.0;
  static constexpr double brake_decel = 8.0;
  static constexpr double drag = 0.015;
  static constexpr double cruise_gain = 0.6;
  static constexpr double follow_gain = 1.0;
  static constexpr double gap_gain = 0.2;
  static constexpr double min_gap = 5.0;
  static constexpr double wheelbase = 2.7;
  static constexpr double max_wheel_deg = 35.0;
  static constexpr double steer_lag_s = 0.5;
  static constexpr double noise_corr_s = 1.0;
  static constexpr double lateral_per_steer = 8.0;  // m of lateral offset per unit steer noise
  static constexpr double curve_drift = 0.05;        // s^2, offset = drift * v^2 * curvature
};

inline double curvature_at(const RoutePolyline& route, double s) {
  constexpr double h = 5.0;
  const double a = std::clamp(s - h, 0.0, route.total_length());
  const double b = std::clamp(s + h, 0.0, route.total_length());
  if (!(b > a)) return 0.0;
  return angle_diff_deg(route.heading_at(a), route.heading_at(b)) * kPi / 180.0 / (b - a);
}

}  // namespace detail

inline GeneratedTrip generate_trip(const DriverModel& model, const Scenario& scenario, std::uint64_t seed) {
  using C = detail::VehicleConstants;
  model.validate();
  scenario.validate();
  const auto& route = scenario.route.polyline;
  const double rate = scenario.sample_rate;
  const double dt = 1.0 / rate;
  const auto max_samples = static_cast<std::size_t>(std::floor(scenario.duration * rate + 1e-9)) + 1;

  Rng rng(seed);
  const double pace = std::clamp(1.0 + 0.03 * rng.normal(), 0.9, 1.1);
  const double amp_scale = std::clamp(1.0 + 0.05 * rng.normal(), 0.85, 1.15);
  const double az_phase = 2.0 * kPi * rng.uniform();
  const double el_phase = 2.0 * kPi * rng.uniform();
  const double v_pref = model.preferred_speed * pace;
  const double scan_amp = model.scan_amplitude * amp_scale;
  const double phi = std::exp(-dt / C::noise_corr_s);
  const double innovation = std::sqrt(1.0 - phi * phi);
  const double steer_alpha = 1.0 - std::exp(-dt / C::steer_lag_s);

  auto noise_scale = [&](double s) {
    double m = 1.0;
    for (const auto& seg : scenario.steer_noise_segments) {
      if (s >= seg.arc_start && s < seg.arc_end) m = seg.multiplier;
    }
    return model.steer_noise_sd * m;
  };

  GeneratedTrip out;
  auto& trip = out.trip;
  auto& truth = out.truth;
  trip.meta.trip_id = model.name + "_s" + std::to_string(seed);
  trip.meta.driver_id = model.name;
  trip.meta.cohort = model.cohort;
  trip.meta.start_clock = scenario.start_clock;
  trip.meta.sample_rate = rate;
  truth.trip_id = trip.meta.trip_id;
  truth.seed = seed;
  truth.reaction_latency = model.reaction_latency;
  truth.hard_brakes = scenario.hard_brake_injections;

  enum class ZonePhase { idle, waiting, braking, holding, done };
  struct ZoneState {
    ZonePhase phase = ZonePhase::idle;
    std::size_t truth_index = 0;
  };
  std::vector<ZoneState> zones(scenario.route.zones.size());

  double s = 0.0;
  double v = scenario.initial_speed.value_or(v_pref);
  double steer_route = std::clamp(std::atan(C::wheelbase * detail::curvature_at(route, 0.0)) * 180.0 / kPi / C::max_wheel_deg, -1.0, 1.0);
  double noise = noise_scale(0.0) * rng.normal();
  std::optional<std::size_t> active_lead;
  double lead_arc = 0.0;
  std::optional<std::size_t> lead_open;  // sample index where the current lead interval began

  for (std::size_t k = 0; k < max_samples; ++k) {
    const double t = static_cast<double>(k) / rate;
    if (k > 0 && s > route.total_length()) break;

    // Lead vehicle.
    std::optional<std::size_t> lead_now;
    for (std::size_t i = 0; i < scenario.lead_schedule.size(); ++i) {
      const auto& l = scenario.lead_schedule[i];
      if (t >= l.t_start - 1e-9 && t < l.t_end - 1e-9) lead_now = i;
    }
    if (lead_now != active_lead) {
      if (lead_open) truth.lead_intervals.push_back({trip.samples[*lead_open].t, t});
      lead_open.reset();
      if (lead_now) {
        lead_arc = s + scenario.lead_schedule[*lead_now].initial_gap;
        lead_open = k;
      }
      active_lead = lead_now;
    }
    std::optional<double> gap;
    double v_lead = 0.0;
    if (active_lead) {
      gap = lead_arc - s;
      v_lead = scenario.lead_schedule[*active_lead].speed_at(t);
    }

    // Zone stimulus / response bookkeeping.
    for (std::size_t z = 0; z < zones.size(); ++z) {
      const auto& zone = scenario.route.zones[z];
      auto& st = zones[z];
      const bool inside = s >= zone.arc_center - zone.trigger_radius && s <= zone.arc_center + zone.trigger_radius;
      if (st.phase == ZonePhase::idle && inside) {
        st.phase = ZonePhase::waiting;
        st.truth_index = truth.zones.size();
        truth.zones.push_back({zone.zone_id, t, t + model.reaction_latency, k, std::nullopt});
      }
      if (st.phase == ZonePhase::waiting && t >= truth.zones[st.truth_index].response_time - 1e-9) {
        st.phase = ZonePhase::braking;
        truth.zones[st.truth_index].response_sample = k;
      }
      if (st.phase == ZonePhase::braking && v <= scenario.zone_speed_factor * v_pref) st.phase = ZonePhase::holding;
      if ((st.phase == ZonePhase::holding || st.phase == ZonePhase::braking) && s > zone.arc_center + zone.trigger_radius &&
          t > truth.zones[st.truth_index].response_time)
        st.phase = ZonePhase::done;
    }

    // Longitudinal control.
    double a = model.throttle_gain * C::cruise_gain * (v_pref - v);
    if (active_lead) {
      const double desired_gap = C::min_gap + model.following_headway * v;
      const double target = v_lead + std::min(0.5, C::gap_gain * (*gap - desired_gap));
      a = std::min(a, C::follow_gain * (target - v));
    }
    for (const auto& st : zones) {
      if (st.phase == ZonePhase::braking) a = std::min(a, -model.brake_aggressiveness);
      if (st.phase == ZonePhase::holding)
        a = std::min(a, model.throttle_gain * C::cruise_gain * (scenario.zone_speed_factor * v_pref - v));
    }
    std::optional<double> injected;
    for (const auto& inj : scenario.hard_brake_injections) {
      if (t >= inj.t - 1e-9 && t < inj.t + inj.duration - 1e-9) injected = inj.decel;
    }
    double throttle = 0.0, brake = 0.0, accel = 0.0;
    if (injected) {
      accel = -*injected;
      brake = std::clamp((*injected - C::drag * v) / C::brake_decel, 0.0, 1.0);
    } else {
      const double net = a + C::drag * v;
      if (net >= 0.0) throttle = std::min(1.0, net / C::throttle_accel);
      else brake = std::min(1.0, -net / C::brake_decel);
      accel = C::throttle_accel * throttle - C::brake_decel * brake - C::drag * v;
    }
    if (v + accel * dt < 0.0) accel = -v / dt;

    // Steering and lateral placement.
    const double kappa = detail::curvature_at(route, s);
    const double target_steer =
        std::clamp(std::atan(C::wheelbase * kappa) * 180.0 / kPi / C::max_wheel_deg, -1.0, 1.0);
    if (k > 0) {
      steer_route += steer_alpha * (target_steer - steer_route);
      noise = phi * noise + noise_scale(s) * innovation * rng.normal();
    }
    const double steer = std::clamp(steer_route + noise, -1.0, 1.0);
    const double heading = route.heading_at(std::min(s, route.total_length()));
    const double offset = C::lateral_per_steer * noise + C::curve_drift * v * v * kappa;
    const Point2 base = route.point_at(std::min(s, route.total_length()));
    const double hr = heading * kPi / 180.0;

    // Head pose.
    const bool lead_present = active_lead.has_value();
    const double amp = scan_amp * (lead_present ? 0.5 : 1.0);
    const double az = amp * std::sin(2.0 * kPi * t / model.scan_period + az_phase);
    const double el = 0.15 * amp * std::sin(2.0 * kPi * t / (1.7 * model.scan_period) + el_phase);

    std::optional<Weather> weather;
    double weather_start = -1.0;
    for (const auto& w : scenario.weather_phases) {
      if (t >= w.t_start - 1e-9 && w.t_start >= weather_start) {
        weather = w.weather;
        weather_start = w.t_start;
      }
    }

    TelemetrySample sample;
    sample.t = t;
    sample.steer = steer;
    sample.throttle = throttle;
    sample.brake = brake;
    sample.speed = v;
    sample.accel = accel;
    sample.pos_x = base.x + offset * std::cos(hr);
    sample.pos_y = base.y - offset * std::sin(hr);
    sample.heading = heading;
    sample.head_az = az;
    sample.head_el = el;
    sample.lead_gap = gap;
    sample.weather = weather;
    trip.samples.push_back(sample);
    truth.lead_gap.push_back(gap);

    // Integrate.
    s += v * dt + 0.5 * accel * dt * dt;
    v = std::max(0.0, v + accel * dt);
    if (active_lead) lead_arc += v_lead * dt;
  }
  if (lead_open) truth.lead_intervals.push_back({trip.samples[*lead_open].t, trip.samples.back().t});
  if (trip.samples.size() < 2) throw ConfigError("scenario produced fewer than 2 samples");
  return out;
}

// Trip j of model m uses seed mix_seed(base_seed, m, j) and starts
// j * trip_spacing_s after the scenario's start clock.
inline GeneratedTrip generate_cohort_trip(const DriverModel& model, std::size_t m, std::size_t j,
                                          const Scenario& scenario, std::uint64_t base_seed) {
  Scenario sc = scenario;
  sc.start_clock.utc += std::chrono::milliseconds(static_cast<std::int64_t>(std::llround(
      static_cast<double>(j) * scenario.trip_spacing_s * 1000.0)));
  auto g = generate_trip(model, sc, mix_seed(base_seed, static_cast<std::uint32_t>(m), static_cast<std::uint32_t>(j)));
  char id[32];
  std::snprintf(id, sizeof id, "_t%03zu", j);
  g.trip.meta.trip_id = model.name + id;
  g.truth.trip_id = g.trip.meta.trip_id;
  return g;
}

inline std::vector<GeneratedTrip> generate_cohort(const std::vector<DriverModel>& models, const Scenario& scenario,
                                                  std::size_t trips_per_model, std::uint64_t base_seed) {
  if (trips_per_model < 1) throw ConfigError("trips_per_model must be >= 1");
  std::vector<GeneratedTrip> out;
  out.reserve(models.size() * trips_per_model);
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (std::size_t j = 0; j < trips_per_model; ++j) out.push_back(generate_cohort_trip(models[m], m, j, scenario, base_seed));
  }
  return out;
}

// 3 km reference route: two 90 degree curves (right, then left) and six
// intersection zones on the straights.
inline Scenario default_scenario() {
  Scenario sc;
  RoutePolyline route = RouteBuilder({0.0, 0.0}, 0.0).straight(600.0).arc(60.0, 90.0).straight(700.0).arc(60.0, -90.0).straight(1512.0).build();
  std::vector<EventZone> zones;
  const double centres[] = {250.0, 450.0, 1000.0, 1250.0, 1900.0, 2500.0};
  for (std::size_t i = 0; i < 6; ++i) zones.push_back({"Z" + std::to_string(i + 1), ZoneKind::intersection, centres[i], 40.0});
  sc.route = Route{std::move(route), std::move(zones)};
  sc.duration = 400.0;
  sc.sample_rate = 10.0;
  sc.weather_phases = {{0.0, Weather::clear}, {200.0, Weather::rain}};
  return sc;
}

// Straight 4 km route, no zones, with one scripted lead vehicle slower than
// either preset's preferred speed.
inline Scenario car_following_scenario() {
  Scenario sc;
  sc.route = Route{RouteBuilder({0.0, 0.0}, 0.0).straight(4000.0, 20.0).build(), {}};
  sc.duration = 180.0;
  sc.sample_rate = 10.0;
  sc.weather_phases = {{0.0, Weather::clear}};
  sc.lead_schedule = {{60.0, 120.0, 30.0, {{60.0, 9.0}, {120.0, 9.0}}}};
  return sc;
}

inline nlohmann::ordered_json driver_to_json(const DriverModel& m) {
  nlohmann::ordered_json j;
  j["name"] = m.name;
  j["cohort"] = std::string(to_string(m.cohort));
  j["reaction_latency"] = m.reaction_latency;
  j["preferred_speed"] = m.preferred_speed;
  j["throttle_gain"] = m.throttle_gain;
  j["brake_aggressiveness"] = m.brake_aggressiveness;
  j["steer_noise_sd"] = m.steer_noise_sd;
  j["scan_amplitude"] = m.scan_amplitude;
  j["scan_period"] = m.scan_period;
  j["following_headway"] = m.following_headway;
  return j;
}

inline DriverModel driver_from_json(const nlohmann::json& j) {
  try {
    DriverModel m;
    m.name = j.at("name").get<std::string>();
    const auto cohort = parse_cohort(j.value("cohort", std::string("unlabeled")));
    if (!cohort) throw ConfigError(m.name + ": unknown cohort");
    m.cohort = *cohort;
    m.reaction_latency = j.at("reaction_latency").get<double>();
    m.preferred_speed = j.at("preferred_speed").get<double>();
    m.throttle_gain = j.at("throttle_gain").get<double>();
    m.brake_aggressiveness = j.at("brake_aggressiveness").get<double>();
    m.steer_noise_sd = j.at("steer_noise_sd").get<double>();
    m.scan_amplitude = j.at("scan_amplitude").get<double>();
    m.scan_period = j.at("scan_period").get<double>();
    m.following_headway = j.at("following_headway").get<double>();
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("driver model: ") + e.what());
  }
}

// Presets file: {"models": [ ... ]}.
inline std::vector<DriverModel> drivers_from_json(const nlohmann::json& j) {
  std::vector<DriverModel> out;
  try {
    for (const auto& m : j.at("models")) out.push_back(driver_from_json(m));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("driver presets: ") + e.what());
  }
  return out;
}

inline nlohmann::ordered_json scenario_to_json(const Scenario& sc) {
  nlohmann::ordered_json j;
  j["route"] = route_to_json(sc.route);
  auto leads = nlohmann::ordered_json::array();
  for (const auto& l : sc.lead_schedule) {
    auto prof = nlohmann::ordered_json::array();
    for (const auto& [t, v] : l.speed_profile) prof.push_back({t, v});
    leads.push_back({{"t_start", l.t_start}, {"t_end", l.t_end}, {"initial_gap", l.initial_gap}, {"speed_profile", prof}});
  }
  j["lead_schedule"] = std::move(leads);
  auto weather = nlohmann::ordered_json::array();
  for (const auto& w : sc.weather_phases) weather.push_back({{"t_start", w.t_start}, {"weather", std::string(to_string(w.weather))}});
  j["weather_phases"] = std::move(weather);
  auto inj = nlohmann::ordered_json::array();
  for (const auto& h : sc.hard_brake_injections) inj.push_back({{"t", h.t}, {"decel", h.decel}, {"duration", h.duration}});
  j["hard_brake_injections"] = std::move(inj);
  auto segs = nlohmann::ordered_json::array();
  for (const auto& s : sc.steer_noise_segments)
    segs.push_back({{"arc_start", s.arc_start}, {"arc_end", s.arc_end}, {"multiplier", s.multiplier}});
  j["steer_noise_segments"] = std::move(segs);
  j["duration"] = sc.duration;
  j["sample_rate"] = sc.sample_rate;
  if (sc.initial_speed) j["initial_speed"] = *sc.initial_speed;
  j["start_clock"] = format_rfc3339(sc.start_clock);
  j["trip_spacing_s"] = sc.trip_spacing_s;
  j["zone_speed_factor"] = sc.zone_speed_factor;
  return j;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
  try {
    Scenario sc;
    try {
      sc.route = route_from_json(j.at("route"));
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
    for (const auto& l : j.value("lead_schedule", nlohmann::json::array())) {
      LeadPhase p;
      p.t_start = l.at("t_start").get<double>();
      p.t_end = l.at("t_end").get<double>();
      p.initial_gap = l.at("initial_gap").get<double>();
      for (const auto& kv : l.at("speed_profile")) p.speed_profile.emplace_back(kv.at(0).get<double>(), kv.at(1).get<double>());
      sc.lead_schedule.push_back(std::move(p));
    }
    for (const auto& w : j.value("weather_phases", nlohmann::json::array())) {
      const auto weather = parse_weather(w.at("weather").get<std::string>());
      if (!weather) throw ConfigError("unknown weather in scenario");
      sc.weather_phases.push_back({w.at("t_start").get<double>(), *weather});
    }
    for (const auto& h : j.value("hard_brake_injections", nlohmann::json::array()))
      sc.hard_brake_injections.push_back({h.at("t").get<double>(), h.at("decel").get<double>(), h.at("duration").get<double>()});
    for (const auto& s : j.value("steer_noise_segments", nlohmann::json::array()))
      sc.steer_noise_segments.push_back({s.at("arc_start").get<double>(), s.at("arc_end").get<double>(), s.at("multiplier").get<double>()});
    sc.duration = j.at("duration").get<double>();
    sc.sample_rate = j.at("sample_rate").get<double>();
    if (j.contains("initial_speed")) sc.initial_speed = j.at("initial_speed").get<double>();
    if (j.contains("start_clock")) {
      try {
        sc.start_clock = parse_rfc3339(j.at("start_clock").get<std::string>());
      } catch (const InputError& e) {
        throw ConfigError(e.what());
      }
    }
    sc.trip_spacing_s = j.value("trip_spacing_s", sc.trip_spacing_s);
    sc.zone_speed_factor = j.value("zone_speed_factor", sc.zone_speed_factor);
    sc.validate();
    return sc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

inline nlohmann::ordered_json truth_to_json(const GroundTruthLog& g) {
  nlohmann::ordered_json j;
  j["trip_id"] = g.trip_id;
  j["seed"] = g.seed;
  j["reaction_latency"] = g.reaction_latency;
  auto zones = nlohmann::ordered_json::array();
  for (const auto& z : g.zones) {
    nlohmann::ordered_json e{{"zone_id", z.zone_id},
                             {"stimulus_time", z.stimulus_time},
                             {"response_time", z.response_time},
                             {"stimulus_sample", z.stimulus_sample}};
    e["response_sample"] = z.response_sample ? nlohmann::ordered_json(*z.response_sample) : nlohmann::ordered_json(nullptr);
    zones.push_back(std::move(e));
  }
  j["zones"] = std::move(zones);
  auto hb = nlohmann::ordered_json::array();
  for (const auto& h : g.hard_brakes) hb.push_back({{"t", h.t}, {"decel", h.decel}, {"duration", h.duration}});
  j["hard_brakes"] = std::move(hb);
  auto leads = nlohmann::ordered_json::array();
  for (const auto& l : g.lead_intervals) leads.push_back({{"t0", l.t0}, {"t1", l.t1}});
  j["lead_intervals"] = std::move(leads);
  auto gaps = nlohmann::ordered_json::array();
  for (const auto& v : g.lead_gap) gaps.push_back(v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr));
  j["lead_gap"] = std::move(gaps);
  return j;
}

}  // namespace drivescope
