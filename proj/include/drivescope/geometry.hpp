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

// Route geometry: planned-route polylines, cross-track projection, arc-length
// binning, turn detection and event-zone triggering.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "drivescope/error.hpp"
#include "drivescope/telemetry.hpp"

namespace drivescope {

inline constexpr double kPi = 3.14159265358979323846;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

// Heading in degrees clockwise from north (+y) of the direction a -> b.
inline double heading_of(Point2 a, Point2 b) {
  return wrap_heading_deg(std::atan2(b.x - a.x, b.y - a.y) * 180.0 / kPi);
}

class RoutePolyline {
 public:
  explicit RoutePolyline(std::vector<Point2> waypoints) : waypoints_(std::move(waypoints)) {
    if (waypoints_.size() < 2) throw std::invalid_argument("route polyline needs at least 2 waypoints");
    cum_length_.reserve(waypoints_.size());
    cum_length_.push_back(0.0);
    for (std::size_t i = 1; i < waypoints_.size(); ++i) {
      const double len = std::hypot(waypoints_[i].x - waypoints_[i - 1].x, waypoints_[i].y - waypoints_[i - 1].y);
      if (!(len > 0.0) || !std::isfinite(len))
        throw std::invalid_argument("route polyline has a zero-length or non-finite segment at vertex " +
                                    std::to_string(i));
      cum_length_.push_back(cum_length_.back() + len);
    }
  }

  const std::vector<Point2>& waypoints() const { return waypoints_; }
  const std::vector<double>& cum_length() const { return cum_length_; }
  double total_length() const { return cum_length_.back(); }
  std::size_t segment_count() const { return waypoints_.size() - 1; }

  // Segment containing arc coordinate s (clamped to the route).
  std::size_t segment_at(double s) const {
    if (s <= 0.0) return 0;
    auto it = std::upper_bound(cum_length_.begin(), cum_length_.end(), s);
    const auto idx = static_cast<std::size_t>(it - cum_length_.begin());
    return std::min(idx == 0 ? 0 : idx - 1, segment_count() - 1);
  }

  Point2 point_at(double s) const {
    const std::size_t i = segment_at(s);
    const double len = cum_length_[i + 1] - cum_length_[i];
    const double f = std::clamp((s - cum_length_[i]) / len, 0.0, 1.0);
    const auto& a = waypoints_[i];
    const auto& b = waypoints_[i + 1];
    return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
  }

  double heading_at(double s) const {
    const std::size_t i = segment_at(s);
    return heading_of(waypoints_[i], waypoints_[i + 1]);
  }

 private:
  std::vector<Point2> waypoints_;
  std::vector<double> cum_length_;
};

struct RouteProjection {
  double distance = 0.0;  // m, cross-track
  double arc = 0.0;       // m, arc coordinate of the nearest route point
  std::size_t segment = 0;
};

// Nearest point on the polyline; the first segment wins ties.
inline RouteProjection cross_track_distance(Point2 p, const RoutePolyline& route) {
  RouteProjection best{std::numeric_limits<double>::infinity(), 0.0, 0};
  const auto& w = route.waypoints();
  const auto& cum = route.cum_length();
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const double dx = w[i + 1].x - w[i].x, dy = w[i + 1].y - w[i].y;
    const double len2 = dx * dx + dy * dy;
    const double len = std::sqrt(len2);
    const double along = std::clamp(((p.x - w[i].x) * dx + (p.y - w[i].y) * dy) / len, 0.0, len);
    const double f = along / len;
    const double d = std::hypot(p.x - (w[i].x + f * dx), p.y - (w[i].y + f * dy));
    if (d < best.distance) best = {d, cum[i] + along, i};
  }
  return best;
}

struct RouteBin {
  std::size_t index = 0;
  double arc_start = 0.0;
  double arc_end = 0.0;
};

// Bins partitioning [0, total_length]; only the last bin may be shorter.
inline std::vector<RouteBin> make_route_bins(double total_length, double bin_size) {
  if (!(bin_size > 0.0)) throw std::invalid_argument("bin_size must be positive");
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(total_length / bin_size - 1e-9)));
  std::vector<RouteBin> bins(n);
  for (std::size_t i = 0; i < n; ++i) {
    bins[i] = {i, static_cast<double>(i) * bin_size, std::min(static_cast<double>(i + 1) * bin_size, total_length)};
  }
  bins.back().arc_end = total_length;
  return bins;
}

struct BinAssignment {
  std::vector<RouteBin> bins;
  std::vector<std::optional<std::size_t>> bin_of_sample;
  std::vector<double> arc;
  std::vector<double> distance;
  std::vector<bool> off_route;  // farther than the gate; left unassigned
};

inline constexpr double kDefaultGateDistance = 30.0;

// Assigns each sample to the bin holding the arc coordinate of its nearest
// route point. The final bin includes its upper end.
inline BinAssignment bin_by_arc_length(const Trip& trip, const RoutePolyline& route, double bin_size,
                                       double gate_distance = kDefaultGateDistance) {
  BinAssignment out;
  out.bins = make_route_bins(route.total_length(), bin_size);
  const std::size_t n = trip.samples.size();
  out.bin_of_sample.resize(n);
  out.arc.resize(n);
  out.distance.resize(n);
  out.off_route.assign(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = trip.samples[k];
    const auto proj = cross_track_distance({s.pos_x, s.pos_y}, route);
    out.arc[k] = proj.arc;
    out.distance[k] = proj.distance;
    if (proj.distance > gate_distance) {
      out.off_route[k] = true;
      continue;
    }
    auto idx = static_cast<std::size_t>(std::floor(proj.arc / bin_size));
    idx = std::min(idx, out.bins.size() - 1);
    // Guard floating point at bin boundaries so arc_start <= arc < arc_end holds.
    while (idx > 0 && proj.arc < out.bins[idx].arc_start) --idx;
    while (idx + 1 < out.bins.size() && proj.arc >= out.bins[idx].arc_end) ++idx;
    out.bin_of_sample[k] = idx;
  }
  return out;
}

enum class ZoneKind { intersection, curve, custom };

inline std::string_view to_string(ZoneKind k) {
  switch (k) {
    case ZoneKind::intersection: return "intersection";
    case ZoneKind::curve: return "curve";
    case ZoneKind::custom: return "custom";
  }
  return "custom";
}

inline std::optional<ZoneKind> parse_zone_kind(std::string_view s) {
  if (s == "intersection") return ZoneKind::intersection;
  if (s == "curve") return ZoneKind::curve;
  if (s == "custom") return ZoneKind::custom;
  return std::nullopt;
}

struct EventZone {
  std::string zone_id;
  ZoneKind kind = ZoneKind::intersection;
  double arc_center = 0.0;
  double trigger_radius = 0.0;
};

enum class ManeuverKind { turn_left, turn_right, intersection_approach, braking };

inline std::string_view to_string(ManeuverKind k) {
  switch (k) {
    case ManeuverKind::turn_left: return "turn_left";
    case ManeuverKind::turn_right: return "turn_right";
    case ManeuverKind::intersection_approach: return "intersection_approach";
    case ManeuverKind::braking: return "braking";
  }
  return "braking";
}

struct ManeuverEvent {
  std::size_t event_id = 0;
  ManeuverKind kind = ManeuverKind::braking;
  double t0 = 0.0;
  double t1 = 0.0;
  std::optional<std::string> zone_ref;
  std::optional<double> rt;  // s, filled by scoring
  std::optional<double> D;   // m, filled by scoring
};

// Sorts by (t0, t1, kind) and renumbers event ids from 0.
inline std::vector<ManeuverEvent> merge_events(std::vector<ManeuverEvent> a, const std::vector<ManeuverEvent>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::stable_sort(a.begin(), a.end(), [](const ManeuverEvent& x, const ManeuverEvent& y) {
    if (x.t0 != y.t0) return x.t0 < y.t0;
    if (x.t1 != y.t1) return x.t1 < y.t1;
    return static_cast<int>(x.kind) < static_cast<int>(y.kind);
  });
  for (std::size_t i = 0; i < a.size(); ++i) a[i].event_id = i;
  return a;
}

struct Route {
  RoutePolyline polyline;
  std::vector<EventZone> zones;
};

inline void validate_zone(const EventZone& z, const RoutePolyline& route) {
  if (!(z.trigger_radius > 0.0)) throw InputError("zone " + z.zone_id + ": trigger_radius must be positive");
  if (z.arc_center < 0.0 || z.arc_center > route.total_length())
    throw InputError("zone " + z.zone_id + ": arc_center outside the route");
}

inline Route route_from_json(const nlohmann::json& j) {
  try {
    std::vector<Point2> pts;
    for (const auto& w : j.at("waypoints")) {
      if (!w.is_array() || w.size() != 2) throw InputError("route waypoint must be [x, y]");
      pts.push_back({w[0].get<double>(), w[1].get<double>()});
    }
    std::optional<RoutePolyline> polyline;
    try {
      polyline.emplace(std::move(pts));
    } catch (const std::invalid_argument& e) {
      throw InputError(std::string("route: ") + e.what());
    }
    Route route{std::move(*polyline), {}};
    if (j.contains("zones")) {
      for (const auto& z : j.at("zones")) {
        EventZone zone;
        zone.zone_id = z.at("id").is_string() ? z.at("id").get<std::string>() : z.at("id").dump();
        auto kind = parse_zone_kind(z.at("kind").get<std::string>());
        if (!kind) throw InputError("zone " + zone.zone_id + ": unknown kind");
        zone.kind = *kind;
        zone.arc_center = z.at("arc_center").get<double>();
        zone.trigger_radius = z.at("trigger_radius").get<double>();
        validate_zone(zone, route.polyline);
        route.zones.push_back(std::move(zone));
      }
    }
    return route;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("route file: ") + e.what());
  }
}

inline nlohmann::ordered_json route_to_json(const Route& route) {
  nlohmann::ordered_json j;
  auto w = nlohmann::ordered_json::array();
  for (const auto& p : route.polyline.waypoints()) w.push_back({p.x, p.y});
  j["waypoints"] = std::move(w);
  auto zones = nlohmann::ordered_json::array();
  for (const auto& z : route.zones) {
    zones.push_back({{"id", z.zone_id},
                     {"kind", std::string(to_string(z.kind))},
                     {"arc_center", z.arc_center},
                     {"trigger_radius", z.trigger_radius}});
  }
  j["zones"] = std::move(zones);
  return j;
}

// Builds smooth planned routes from straights and constant-radius arcs.
// Positive arc angles turn clockwise (right).
class RouteBuilder {
 public:
  RouteBuilder(Point2 start, double heading_deg) : pos_(start), heading_(heading_deg) { pts_.push_back(start); }

  RouteBuilder& straight(double length, double step = 10.0) {
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / step)));
    const Point2 origin = pos_;
    const double h = heading_ * kPi / 180.0;
    for (std::size_t i = 1; i <= n; ++i) {
      const double d = length * static_cast<double>(i) / static_cast<double>(n);
      pts_.push_back({origin.x + d * std::sin(h), origin.y + d * std::cos(h)});
    }
    pos_ = pts_.back();
    return *this;
  }

  RouteBuilder& arc(double radius, double turn_deg, double step_deg = 5.0) {
    const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(turn_deg) / step_deg)));
    const double sign = turn_deg >= 0.0 ? 1.0 : -1.0;
    const double h0 = heading_ * kPi / 180.0;
    // Centre lies to the right (clockwise turn) or left of the current heading.
    const Point2 centre{pos_.x + sign * radius * std::cos(h0), pos_.y - sign * radius * std::sin(h0)};
    for (std::size_t i = 1; i <= n; ++i) {
      const double h = h0 + (turn_deg * kPi / 180.0) * static_cast<double>(i) / static_cast<double>(n);
      pts_.push_back({centre.x - sign * radius * std::cos(h), centre.y + sign * radius * std::sin(h)});
    }
    heading_ = wrap_heading_deg(heading_ + turn_deg);
    pos_ = pts_.back();
    return *this;
  }

  double length_so_far() const { return RoutePolyline(pts_).total_length(); }
  RoutePolyline build() const { return RoutePolyline(pts_); }

 private:
  Point2 pos_;
  double heading_;
  std::vector<Point2> pts_;
};

struct TurnDetectionConfig {
  double heading_threshold_deg = 60.0;
  double max_window_s = 15.0;
};

// A turn is a window of at most max_window in which the unwrapped heading
// changes by at least the threshold (positive = clockwise = right). Windows
// are only opened while the heading is still moving in that direction, and
// overlapping windows of the same sign merge into one event.
inline std::vector<ManeuverEvent> detect_turns(const Trip& trip, double heading_threshold_deg = 60.0,
                                               double max_window_s = 15.0) {
  if (!(heading_threshold_deg > 0.0)) throw std::invalid_argument("heading_threshold must be positive");
  const auto& s = trip.samples;
  const std::size_t n = s.size();
  std::vector<ManeuverEvent> events;
  if (n < 2) return events;
  std::vector<double> unwrapped(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) unwrapped[k] = unwrapped[k - 1] + angle_diff_deg(s[k - 1].heading, s[k].heading);

  struct Window {
    std::size_t a, b;
  };
  std::vector<Window> right, left;
  for (std::size_t k = 1; k < n; ++k) {
    const double step = unwrapped[k] - unwrapped[k - 1];
    if (step == 0.0) continue;
    const double sign = step > 0.0 ? 1.0 : -1.0;
    // Latest start j whose change up to k reaches the threshold.
    for (std::size_t jj = k; jj-- > 0;) {
      if (s[k].t - s[jj].t > max_window_s + 1e-9) break;
      if (sign * (unwrapped[k] - unwrapped[jj]) >= heading_threshold_deg) {
        (sign > 0.0 ? right : left).push_back({jj, k});
        break;
      }
    }
  }
  auto merge = [&](std::vector<Window> ws, ManeuverKind kind) {
    std::stable_sort(ws.begin(), ws.end(), [](const Window& x, const Window& y) { return x.a < y.a; });
    std::vector<Window> merged;
    for (const auto& w : ws) {
      if (!merged.empty() && w.a <= merged.back().b) merged.back().b = std::max(merged.back().b, w.b);
      else merged.push_back(w);
    }
    for (const auto& w : merged) events.push_back({0, kind, s[w.a].t, s[w.b].t, std::nullopt, std::nullopt, std::nullopt});
  };
  merge(right, ManeuverKind::turn_right);
  merge(left, ManeuverKind::turn_left);
  return merge_events(std::move(events), {});
}

// Per-sample arc coordinate along the route (nearest-point projection).
inline std::vector<double> arc_coordinates(const Trip& trip, const RoutePolyline& route) {
  std::vector<double> arc;
  arc.reserve(trip.samples.size());
  for (const auto& s : trip.samples) arc.push_back(cross_track_distance({s.pos_x, s.pos_y}, route).arc);
  return arc;
}

// One intersection_approach event per zone traversal: the window opens at the
// first sample whose arc coordinate is inside [centre - r, centre + r] and
// closes at the first sample outside again (or the last sample).
inline std::vector<ManeuverEvent> detect_event_zones(const Trip& trip, const std::vector<EventZone>& zones,
                                                     const RoutePolyline& route) {
  for (const auto& z : zones) {
    if (!(z.trigger_radius > 0.0)) throw std::invalid_argument("zone trigger_radius must be positive");
  }
  const auto arc = arc_coordinates(trip, route);
  const auto& s = trip.samples;
  std::vector<ManeuverEvent> events;
  for (const auto& z : zones) {
    const double lo = z.arc_center - z.trigger_radius, hi = z.arc_center + z.trigger_radius;
    std::optional<std::size_t> open;
    for (std::size_t k = 0; k < s.size(); ++k) {
      const bool inside = arc[k] >= lo && arc[k] <= hi;
      if (inside && !open) {
        open = k;
      } else if (!inside && open) {
        events.push_back({0, ManeuverKind::intersection_approach, s[*open].t, s[k].t, z.zone_id, {}, {}});
        open.reset();
      }
    }
    if (open && *open + 1 < s.size())
      events.push_back({0, ManeuverKind::intersection_approach, s[*open].t, s.back().t, z.zone_id, {}, {}});
  }
  return merge_events(std::move(events), {});
}

}  // namespace drivescope
