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

#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace drivescope;

namespace {

Trip path_trip(const std::vector<Point2>& pts, double rate = 1.0) {
  Trip trip;
  trip.meta = testutil::meta("path", rate);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    TelemetrySample s;
    s.t = static_cast<double>(k) / rate;
    s.pos_x = pts[k].x;
    s.pos_y = pts[k].y;
    s.speed = 5.0;
    trip.samples.push_back(s);
  }
  return trip;
}

Trip heading_trip(const std::vector<double>& headings, double rate = 10.0) {
  Trip trip;
  trip.meta = testutil::meta("heading", rate);
  for (std::size_t k = 0; k < headings.size(); ++k) {
    TelemetrySample s;
    s.t = static_cast<double>(k) / rate;
    s.heading = wrap_heading_deg(headings[k]);
    s.speed = 10.0;
    trip.samples.push_back(s);
  }
  return trip;
}

std::vector<Point2> random_polyline(std::mt19937_64& gen, std::size_t n) {
  std::uniform_real_distribution<double> step(5.0, 80.0), turn(-1.2, 1.2);
  std::vector<Point2> pts{{0.0, 0.0}};
  double h = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    h += turn(gen);
    const double len = step(gen);
    pts.push_back({pts.back().x + len * std::sin(h), pts.back().y + len * std::cos(h)});
  }
  return pts;
}

// Distance to the nearest of `count` points spaced uniformly by arc length.
double sampled_distance(Point2 p, const RoutePolyline& route, std::size_t count) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const double s = route.total_length() * static_cast<double>(i) / static_cast<double>(count - 1);
    const Point2 q = route.point_at(s);
    best = std::min(best, std::hypot(p.x - q.x, p.y - q.y));
  }
  return best;
}

}  // namespace

TEST(Polyline, CumulativeLengths) {
  const RoutePolyline r({{0, 0}, {3, 4}, {3, 10}});
  EXPECT_EQ(r.cum_length(), (std::vector<double>{0.0, 5.0, 11.0}));
  EXPECT_DOUBLE_EQ(r.total_length(), 11.0);
  EXPECT_EQ(r.point_at(8.0), (Point2{3.0, 7.0}));
  EXPECT_DOUBLE_EQ(r.heading_at(6.0), 0.0);
  EXPECT_THROW(RoutePolyline({{0, 0}}), std::invalid_argument);
  EXPECT_THROW(RoutePolyline({{0, 0}, {0, 0}}), std::invalid_argument);
}

TEST(CrossTrack, Examples) {
  const RoutePolyline seg({{0, 0}, {2, 0}});
  EXPECT_DOUBLE_EQ(cross_track_distance({1.3, 0.0}, seg).distance, 0.0);
  const auto foot = cross_track_distance({0.0, 1.0}, seg);
  EXPECT_DOUBLE_EQ(foot.distance, 1.0);
  EXPECT_DOUBLE_EQ(foot.arc, 0.0);
  const auto end = cross_track_distance({3.0, 1.0}, seg);
  EXPECT_NEAR(end.distance, std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(end.arc, 2.0);
}

TEST(CrossTrack, EndpointExampleAgreesWithDenseSearch) {
  const RoutePolyline seg({{0, 0}, {2, 0}});
  EXPECT_NEAR(sampled_distance({3.0, 1.0}, seg, 100001), std::sqrt(2.0), 1e-12);
}

TEST(CrossTrack, InvariantUnderRigidTransforms) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(-300.0, 300.0), ang(0.0, 2.0 * kPi);
  for (int rep = 0; rep < 200; ++rep) {
    const auto pts = random_polyline(gen, 12);
    const Point2 p{u(gen), u(gen)};
    const double th = ang(gen), tx = u(gen) * 100.0, ty = u(gen) * 100.0;
    auto xf = [&](Point2 q) {
      return Point2{std::cos(th) * q.x - std::sin(th) * q.y + tx, std::sin(th) * q.x + std::cos(th) * q.y + ty};
    };
    std::vector<Point2> moved;
    for (const auto& q : pts) moved.push_back(xf(q));
    const double d0 = cross_track_distance(p, RoutePolyline(pts)).distance;
    const double d1 = cross_track_distance(xf(p), RoutePolyline(moved)).distance;
    ASSERT_NEAR(d0, d1, 1e-9);
  }
}

TEST(CrossTrack, MatchesDenseSampling) {
  std::mt19937_64 gen(22);
  std::uniform_real_distribution<double> u(-200.0, 600.0);
  for (int rep = 0; rep < 50; ++rep) {
    const RoutePolyline route(random_polyline(gen, 15));
    const double spacing = route.total_length() / 9999.0;
    for (int q = 0; q < 10; ++q) {
      const Point2 p{u(gen), u(gen)};
      const double exact = cross_track_distance(p, route).distance;
      const double sampled = sampled_distance(p, route, 10000);
      ASSERT_LE(exact, sampled + 1e-9);
      ASSERT_LE(sampled - exact, spacing / 2.0 + 1e-9);
    }
  }
}

TEST(Bins, PartitionArithmetic) {
  const auto bins = make_route_bins(100.0, 10.0);
  ASSERT_EQ(bins.size(), 10u);
  for (std::size_t i = 0; i < bins.size(); ++i) {
    EXPECT_DOUBLE_EQ(bins[i].arc_start, 10.0 * static_cast<double>(i));
    EXPECT_DOUBLE_EQ(bins[i].arc_end, 10.0 * static_cast<double>(i + 1));
  }
  const auto ragged = make_route_bins(105.0, 10.0);
  ASSERT_EQ(ragged.size(), 11u);
  EXPECT_DOUBLE_EQ(ragged.back().arc_end - ragged.back().arc_start, 5.0);
}

TEST(Bins, StartSampleAndOffRouteGate) {
  const RoutePolyline route({{0, 0}, {0, 100}});
  const auto a = bin_by_arc_length(path_trip({{0, 0}, {50, 40}, {0, 100}}), route, 10.0, 30.0);
  EXPECT_EQ(a.bin_of_sample[0], 0u);
  EXPECT_FALSE(a.bin_of_sample[1]);
  EXPECT_TRUE(a.off_route[1]);
  EXPECT_DOUBLE_EQ(a.distance[1], 50.0);
  EXPECT_EQ(a.bin_of_sample[2], 9u);
}

TEST(Bins, AssignedArcLiesInsideItsBin) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> jitter(-20.0, 20.0);
  for (int rep = 0; rep < 30; ++rep) {
    const RoutePolyline route(random_polyline(gen, 20));
    std::vector<Point2> pts;
    for (int k = 0; k < 300; ++k) {
      const Point2 q = route.point_at(route.total_length() * k / 299.0);
      pts.push_back({q.x + jitter(gen), q.y + jitter(gen)});
    }
    const double bin_size = 7.0 + rep;
    const auto a = bin_by_arc_length(path_trip(pts), route, bin_size);
    double covered = 0.0;
    for (const auto& b : a.bins) covered += b.arc_end - b.arc_start;
    ASSERT_NEAR(covered, route.total_length(), 1e-9);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (!a.bin_of_sample[k]) {
        ASSERT_GT(a.distance[k], kDefaultGateDistance);
        continue;
      }
      const auto& b = a.bins[*a.bin_of_sample[k]];
      const bool last = *a.bin_of_sample[k] + 1 == a.bins.size();
      ASSERT_LE(b.arc_start, a.arc[k]);
      if (last) ASSERT_LE(a.arc[k], b.arc_end);
      else ASSERT_LT(a.arc[k], b.arc_end);
    }
  }
}

TEST(Turns, SingleRightRamp) {
  std::vector<double> h;
  for (int k = 0; k <= 50; ++k) h.push_back(90.0 * k / 50.0);
  const auto ev = detect_turns(heading_trip(h), 60.0, 15.0);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_EQ(ev[0].kind, ManeuverKind::turn_right);
  EXPECT_LT(ev[0].t0, ev[0].t1);
}

TEST(Turns, ConstantHeadingHasNone) {
  EXPECT_TRUE(detect_turns(heading_trip(std::vector<double>(100, 123.0))).empty());
}

TEST(Turns, RightThenLeft) {
  std::vector<double> h;
  for (int k = 0; k <= 50; ++k) h.push_back(350.0 + 90.0 * k / 50.0);
  for (int k = 1; k <= 50; ++k) h.push_back(80.0 - 90.0 * k / 50.0);
  const auto ev = detect_turns(heading_trip(h));
  ASSERT_EQ(ev.size(), 2u);
  EXPECT_EQ(ev[0].kind, ManeuverKind::turn_right);
  EXPECT_EQ(ev[1].kind, ManeuverKind::turn_left);
  EXPECT_LE(ev[0].t1, ev[1].t0);
}

TEST(Turns, SlowCurveIsNotATurn) {
  std::vector<double> h;
  for (int k = 0; k <= 600; ++k) h.push_back(90.0 * k / 600.0);  // 90 deg over 60 s
  EXPECT_TRUE(detect_turns(heading_trip(h), 60.0, 15.0).empty());
}

TEST(Turns, SameDirectionEventsDoNotOverlap) {
  std::mt19937_64 gen(24);
  std::normal_distribution<double> rate(0.0, 6.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> h{0.0};
    double drift = 0.0;
    for (int k = 0; k < 2000; ++k) {
      drift = 0.95 * drift + rate(gen);
      h.push_back(h.back() + drift * 0.1);
    }
    const auto ev = detect_turns(heading_trip(h));
    for (std::size_t i = 0; i < ev.size(); ++i) {
      ASSERT_LT(ev[i].t0, ev[i].t1);
      for (std::size_t j = i + 1; j < ev.size(); ++j) {
        if (ev[i].kind != ev[j].kind) continue;
        ASSERT_TRUE(ev[i].t1 < ev[j].t0 || ev[j].t1 < ev[i].t0);
      }
    }
  }
}

TEST(Zones, PassThroughMissAndReentry) {
  const RoutePolyline route({{0, 0}, {0, 200}});
  const std::vector<EventZone> zones{{"z", ZoneKind::intersection, 100.0, 10.0}};
  std::vector<Point2> through, miss, back_and_forth;
  for (int k = 0; k <= 40; ++k) through.push_back({0.0, 5.0 * k});
  for (int k = 0; k <= 16; ++k) miss.push_back({0.0, 5.0 * k});
  for (double y : {70.0, 85.0, 95.0, 105.0, 115.0, 105.0, 95.0, 85.0, 80.0})
    back_and_forth.push_back({0.0, y});

  const auto a = detect_event_zones(path_trip(through), zones, route);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].kind, ManeuverKind::intersection_approach);
  EXPECT_EQ(a[0].zone_ref, "z");
  EXPECT_DOUBLE_EQ(a[0].t0, 18.0);
  EXPECT_DOUBLE_EQ(a[0].t1, 23.0);

  EXPECT_TRUE(detect_event_zones(path_trip(miss), zones, route).empty());

  const auto c = detect_event_zones(path_trip(back_and_forth), zones, route);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_DOUBLE_EQ(c[0].t0, 2.0);
  EXPECT_DOUBLE_EQ(c[0].t1, 4.0);
  EXPECT_DOUBLE_EQ(c[1].t0, 5.0);
  EXPECT_DOUBLE_EQ(c[1].t1, 7.0);
}

TEST(Zones, EventsEndingAtTripEnd) {
  const RoutePolyline route({{0, 0}, {0, 200}});
  const std::vector<EventZone> zones{{"z", ZoneKind::curve, 190.0, 20.0}};
  std::vector<Point2> pts;
  for (int k = 0; k <= 20; ++k) pts.push_back({0.0, 10.0 * k});
  const auto ev = detect_event_zones(path_trip(pts), zones, route);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_DOUBLE_EQ(ev[0].t0, 17.0);
  EXPECT_DOUBLE_EQ(ev[0].t1, 20.0);
}

TEST(RouteFile, RoundTripAndValidation) {
  Route r{RouteBuilder({0, 0}, 0.0).straight(100).arc(30, 90).straight(50).build(),
          {{"a", ZoneKind::intersection, 40.0, 10.0}, {"b", ZoneKind::curve, 120.0, 15.0}}};
  const Route back = route_from_json(nlohmann::json::parse(route_to_json(r).dump()));
  EXPECT_EQ(back.polyline.waypoints(), r.polyline.waypoints());
  ASSERT_EQ(back.zones.size(), 2u);
  EXPECT_EQ(back.zones[1].kind, ZoneKind::curve);
  EXPECT_THROW(route_from_json(nlohmann::json::parse(R"({"waypoints": [[0,0]]})")), InputError);
  EXPECT_THROW(route_from_json(nlohmann::json::parse(
                   R"({"waypoints": [[0,0],[0,10]], "zones": [{"id":"z","kind":"intersection","arc_center":50,"trigger_radius":5}]})")),
               InputError);
}

TEST(RouteBuilder, ArcEndsAtExpectedHeadingAndLength) {
  const auto route = RouteBuilder({0, 0}, 0.0).straight(100).arc(50, 90, 1.0).build();
  const auto& w = route.waypoints();
  EXPECT_NEAR(w.back().x, 50.0, 1e-9);
  EXPECT_NEAR(w.back().y, 150.0, 1e-9);
  EXPECT_NEAR(route.heading_at(route.total_length() - 0.01), 89.5, 1e-6);
  EXPECT_NEAR(route.total_length(), 100.0 + 50.0 * kPi / 2.0, 0.01);
}
