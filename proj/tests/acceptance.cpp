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

// Acceptance run: one PASS/FAIL line per criterion; exit status 1 on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../tools/cli.hpp"
#include "drivescope/drivescope.hpp"

using namespace drivescope;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and limits.
constexpr double kOracleTol = 1e-9;
constexpr double kA1Seconds = 10.0;
constexpr double kA2Seconds = 30.0;
constexpr double kA3Seconds = 30.0;
constexpr double kRtPeriods = 1.5;
constexpr std::size_t kA3MinInside = 8;
constexpr double kEffectSize = 0.5;
constexpr double kMilesTol = 0.1;
constexpr double kImportanceRatio = 0.9;
constexpr double kOrthoTol = 1e-8;
constexpr double kRatioTol = 1e-9;
constexpr double kCovTol = 1e-8;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---------------------------------------------------------------- A1 oracle

struct OracleEvent {
  double s_time, s_fluent, s_react, s_route;
};

struct OracleScores {
  std::vector<double> s_stab;
  std::vector<OracleEvent> events;
};

double oracle_clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

double oracle_score(double value, double max) { return max > 0.0 ? oracle_clamp01(1.0 - value / max) : 1.0; }

double oracle_segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  const double dx = bx - ax, dy = by - ay;
  const double len2 = dx * dx + dy * dy;
  double u = len2 > 0.0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
  if (u < 0.0) u = 0.0;
  if (u > 1.0) u = 1.0;
  const double qx = ax + u * dx - px, qy = ay + u * dy - py;
  return std::sqrt(qx * qx + qy * qy);
}

OracleScores oracle(const Trip& trip, const std::vector<ManeuverEvent>& events, const std::vector<Point2>& route,
                    std::size_t w, double alpha) {
  const auto& s = trip.samples;
  const long n = static_cast<long>(s.size());
  const long before = static_cast<long>((w - 1) / 2);
  const long after = static_cast<long>(w) - 1 - before;

  std::vector<double> sigma(n);
  for (long k = 0; k < n; ++k) {
    double sum = 0.0, count = 0.0;
    for (long j = k - before; j <= k + after; ++j) {
      if (j < 0 || j >= n) continue;
      sum += s[j].steer;
      count += 1.0;
    }
    const double mean = sum / count;
    double ss = 0.0;
    for (long j = k - before; j <= k + after; ++j) {
      if (j < 0 || j >= n) continue;
      ss += (s[j].steer - mean) * (s[j].steer - mean);
    }
    sigma[k] = ss / count;
  }
  double sigma_max = 0.0;
  for (double v : sigma) sigma_max = std::max(sigma_max, v);

  double mt = 0.0, mb = 0.0, ms = 0.0;
  for (long k = 1; k < n; ++k) {
    mt = std::max(mt, std::fabs(s[k].throttle - s[k - 1].throttle));
    mb = std::max(mb, std::fabs(s[k].brake - s[k - 1].brake));
    ms = std::max(ms, std::fabs(s[k].steer - s[k - 1].steer));
  }
  auto part = [](double d, double m) { return m > 0.0 ? d / m : 0.0; };
  std::vector<double> f(n);
  for (long k = 0; k < n; ++k) {
    double sum = 0.0, steps = 0.0;
    for (long j = k - before + 1; j <= k + after; ++j) {
      if (j < 1 || j >= n) continue;
      sum += (part(std::fabs(s[j].throttle - s[j - 1].throttle), mt) + part(std::fabs(s[j].brake - s[j - 1].brake), mb) +
              part(std::fabs(s[j].steer - s[j - 1].steer), ms)) /
             3.0;
      steps += 1.0;
    }
    f[k] = steps > 0.0 ? sum / steps : 0.0;
  }

  OracleScores out;
  for (long k = 0; k < n; ++k) out.s_stab.push_back(oracle_score(sigma[k], sigma_max));

  std::vector<double> rts, fs_, ds;
  for (const auto& ev : events) {
    std::vector<long> in;
    for (long k = 0; k < n; ++k) {
      if (s[k].t >= ev.t0 - 1e-9 && s[k].t <= ev.t1 + 1e-9) in.push_back(k);
    }
    if (in.empty()) {
      long best = 0;
      const double mid = 0.5 * (ev.t0 + ev.t1);
      for (long k = 0; k < n; ++k) {
        if (std::fabs(s[k].t - mid) < std::fabs(s[best].t - mid)) best = k;
      }
      in.push_back(best);
    }
    double rt = ev.t1 - ev.t0;
    for (long k : in) {
      const bool steer = k > 0 && std::fabs(s[k].steer - s[k - 1].steer) >= 0.1;
      const bool thr = k > 0 && std::fabs(s[k].throttle - s[k - 1].throttle) >= 0.1;
      if (steer || thr || s[k].brake >= 0.05) {
        rt = std::max(0.0, s[k].t - ev.t0);
        break;
      }
    }
    double fsum = 0.0, dsum = 0.0;
    for (long k : in) {
      fsum += f[k];
      double best = INFINITY;
      for (std::size_t i = 0; i + 1 < route.size(); ++i) {
        best = std::min(best, oracle_segment_distance(s[k].pos_x, s[k].pos_y, route[i].x, route[i].y, route[i + 1].x,
                                                      route[i + 1].y));
      }
      dsum += best;
    }
    rts.push_back(rt);
    fs_.push_back(fsum / static_cast<double>(in.size()));
    ds.push_back(dsum / static_cast<double>(in.size()));
  }
  double rt_max = 0.0, f_max = 0.0, d_max = 0.0;
  for (std::size_t i = 0; i < rts.size(); ++i) {
    rt_max = std::max(rt_max, rts[i]);
    f_max = std::max(f_max, fs_[i]);
    d_max = std::max(d_max, ds[i]);
  }
  for (std::size_t i = 0; i < rts.size(); ++i) {
    OracleEvent e;
    e.s_time = oracle_score(rts[i], rt_max);
    e.s_fluent = oracle_score(fs_[i], f_max);
    e.s_react = alpha * e.s_time + (1.0 - alpha) * e.s_fluent;
    e.s_route = oracle_score(ds[i], d_max);
    out.events.push_back(e);
  }
  return out;
}

Outcome a1_oracle_equivalence() {
  Timer timer;
  std::mt19937_64 rng(20260101);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  Scenario sc = default_scenario();
  sc.duration = 300.0;
  sc.sample_rate = 10.0;
  const cli::RunConfig run_cfg;
  double worst = 0.0;
  std::size_t samples = 0, events = 0;
  Outcome o;
  for (int i = 0; i < 50; ++i) {
    DriverModel m;
    m.name = "r" + std::to_string(i);
    m.reaction_latency = uni(0.2, 2.0);
    m.preferred_speed = uni(9.0, 18.0);
    m.throttle_gain = uni(0.4, 1.0);
    m.brake_aggressiveness = uni(2.0, 5.0);
    m.steer_noise_sd = uni(0.005, 0.05);
    m.scan_amplitude = uni(10.0, 45.0);
    ScoringConfig cfg;
    cfg.window_w = 3 + 2 * static_cast<std::size_t>(rng() % 3);
    cfg.alpha = uni(0.0, 1.0);
    const auto g = generate_trip(m, sc, rng());
    const auto ev = cli::trip_events(g.trip, sc.route, run_cfg);
    const auto lib = score_trip(g.trip, ev, sc.route.polyline, cfg);
    const auto ref = oracle(g.trip, ev, sc.route.polyline.waypoints(), cfg.window_w, cfg.alpha);
    if (ref.s_stab.size() != lib.samples.s_stab.size() || ref.events.size() != lib.events.events.size()) {
      return {false, "size mismatch on trip " + std::to_string(i)};
    }
    for (std::size_t k = 0; k < ref.s_stab.size(); ++k) worst = std::max(worst, std::fabs(ref.s_stab[k] - lib.samples.s_stab[k]));
    for (std::size_t e = 0; e < ref.events.size(); ++e) {
      const auto& a = ref.events[e];
      const auto& b = lib.events.events[e];
      for (double d : {a.s_time - b.s_time, a.s_fluent - b.s_fluent, a.s_react - b.s_react, a.s_route - b.s_route})
        worst = std::max(worst, std::fabs(d));
    }
    samples += ref.s_stab.size();
    events += ref.events.size();
  }
  const double secs = timer.seconds();
  o.pass = worst <= kOracleTol && secs < kA1Seconds && events > 0;
  o.detail = "50 trips, " + std::to_string(samples) + " samples, " + std::to_string(events) +
             " events, max |diff| " + fmt("%.3g", worst) + " (tol 1e-9), " + fmt("%.2f", secs) + " s (limit 10 s)";
  return o;
}

// ---------------------------------------------------------------- A2

Outcome a2_reaction_monotonicity() {
  Timer timer;
  const Scenario sc = default_scenario();
  const double period = 1.0 / sc.sample_rate;
  const double latencies[] = {0.5, 1.0, 1.5};
  std::vector<GeneratedTrip> gen;
  for (double lat : latencies) {
    DriverModel m;
    m.name = "lat" + fmt("%.1f", lat);
    m.reaction_latency = lat;
    for (std::uint64_t j = 0; j < 20; ++j) gen.push_back(generate_trip(m, sc, 5000 + j));
  }
  std::vector<const Trip*> ptrs;
  std::vector<std::vector<ManeuverEvent>> events;
  for (const auto& g : gen) {
    ptrs.push_back(&g.trip);
    events.push_back(detect_event_zones(g.trip, sc.route.zones, sc.route.polyline));
  }
  ScoringConfig cfg;
  cfg.normalization = Normalization::pooled;
  const auto scores = score_trips(ptrs, events, sc.route.polyline, cfg);

  double mean_rt[3] = {0, 0, 0}, mean_react[3] = {0, 0, 0};
  std::size_t count[3] = {0, 0, 0};
  double worst_dev = 0.0;
  std::size_t unmatched = 0;
  for (std::size_t i = 0; i < gen.size(); ++i) {
    const std::size_t m = i / 20;
    for (const auto& e : scores[i].events.events) {
      const ZoneTruth* truth = nullptr;
      for (const auto& z : gen[i].truth.zones) {
        if (e.event.zone_ref && z.zone_id == *e.event.zone_ref) truth = &z;
      }
      if (!truth || e.no_response) {
        ++unmatched;
        continue;
      }
      worst_dev = std::max(worst_dev, std::fabs(e.rt - (truth->response_time - truth->stimulus_time)));
      mean_rt[m] += e.rt;
      mean_react[m] += e.s_react;
      ++count[m];
    }
    if (scores[i].events.events.size() != gen[i].truth.zones.size()) ++unmatched;
  }
  for (int m = 0; m < 3; ++m) {
    mean_rt[m] /= static_cast<double>(std::max<std::size_t>(count[m], 1));
    mean_react[m] /= static_cast<double>(std::max<std::size_t>(count[m], 1));
  }
  const double secs = timer.seconds();
  Outcome o;
  o.pass = unmatched == 0 && count[0] > 0 && mean_rt[0] < mean_rt[1] && mean_rt[1] < mean_rt[2] &&
           mean_react[0] > mean_react[1] && mean_react[1] > mean_react[2] && worst_dev <= kRtPeriods * period + 1e-9 &&
           secs < kA2Seconds;
  o.detail = "mean rt " + fmt("%.3f", mean_rt[0]) + " < " + fmt("%.3f", mean_rt[1]) + " < " + fmt("%.3f", mean_rt[2]) +
             " s, mean S_react " + fmt("%.4f", mean_react[0]) + " > " + fmt("%.4f", mean_react[1]) + " > " +
             fmt("%.4f", mean_react[2]) + ", max |rt - truth| " + fmt("%.3f", worst_dev) + " s (limit 0.15 s), " +
             std::to_string(unmatched) + " unmatched, " + fmt("%.2f", secs) + " s (limit 30 s)";
  return o;
}

// ---------------------------------------------------------------- A3

Outcome a3_divergence_localization() {
  Timer timer;
  Scenario base;
  base.route = Route{RouteBuilder({0.0, 0.0}, 0.0).straight(2000.0, 20.0).build(), {}};
  base.duration = 250.0;
  base.sample_rate = 10.0;
  base.weather_phases = {{0.0, Weather::clear}};
  Scenario noisy = base;
  noisy.steer_noise_segments = {{800.0, 1200.0, 3.0}};
  DriverModel m;
  m.name = "a";
  std::vector<GeneratedTrip> gen;
  for (std::uint64_t j = 0; j < 10; ++j) gen.push_back(generate_trip(m, base, mix_seed(11, 0, static_cast<std::uint32_t>(j))));
  m.name = "b";
  for (std::uint64_t j = 0; j < 10; ++j) gen.push_back(generate_trip(m, noisy, mix_seed(11, 1, static_cast<std::uint32_t>(j))));
  std::vector<const Trip*> ptrs;
  for (const auto& g : gen) ptrs.push_back(&g.trip);
  ScoringConfig cfg;
  cfg.normalization = Normalization::pooled;
  cfg.top_fraction = 0.10;
  const auto scores = score_trips(ptrs, std::vector<std::vector<ManeuverEvent>>(gen.size()), base.route.polyline, cfg);
  std::vector<ScoredTripView> a, b;
  for (std::size_t i = 0; i < gen.size(); ++i) (i < 10 ? a : b).push_back({&gen[i].trip, &scores[i].samples});
  const auto map = group_divergence_map(a, b, base.route.polyline, 20.0, cfg, ScoreSelector::stability);
  std::size_t maximal = 0, inside = 0;
  std::string flagged;
  for (std::size_t i = 0; i < map.bins.size(); ++i) {
    if (map.bins[i].flag != BinFlag::maximal) continue;
    ++maximal;
    if (i >= 40 && i <= 59) ++inside;
    flagged += (flagged.empty() ? "" : " ") + std::to_string(i);
  }
  const double secs = timer.seconds();
  Outcome o;
  o.pass = map.bins.size() == 100 && maximal == 10 && inside >= kA3MinInside && secs < kA3Seconds;
  o.detail = std::to_string(map.bins.size()) + " bins, " + std::to_string(inside) + " of " + std::to_string(maximal) +
             " maximal bins in [40, 59] (need >= 8): {" + flagged + "}, " + fmt("%.2f", secs) + " s (limit 30 s)";
  return o;
}

// ---------------------------------------------------------------- A4

Outcome a4_hard_brakes() {
  std::mt19937_64 rng(4242);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  Scenario sc;
  sc.route = Route{RouteBuilder({0.0, 0.0}, 0.0).straight(6000.0, 20.0).build(), {}};
  sc.duration = 300.0;
  sc.sample_rate = 10.0;
  const double period = 1.0 / sc.sample_rate;
  const HardBrakeConfig hb;
  std::size_t injected = 0, detected = 0, matched = 0;
  double worst_boundary = 0.0;
  for (int i = 0; i < 100; ++i) {
    Scenario s = sc;
    const int count = static_cast<int>(rng() % 6);
    for (int c = 0; c < count; ++c) {
      // Slots 50 s apart leave time to recover cruising speed.
      s.hard_brake_injections.push_back({20.0 + 50.0 * c + uni(0.0, 20.0), uni(-hb.threshold + 1.0, 6.0), uni(0.6, 2.0)});
    }
    DriverModel m;
    m.name = "hb";
    const auto g = generate_trip(m, s, 900 + static_cast<std::uint64_t>(i));
    const auto found = detect_hard_brakes(g.trip, hb);
    injected += s.hard_brake_injections.size();
    detected += found.size();
    for (const auto& inj : s.hard_brake_injections) {
      for (const auto& f : found) {
        const double d0 = std::fabs(f.t0 - inj.t), d1 = std::fabs(f.t1 - (inj.t + inj.duration));
        if (d0 <= period + 1e-9 && d1 <= period + 1e-9) {
          ++matched;
          worst_boundary = std::max({worst_boundary, d0, d1});
          break;
        }
      }
    }
  }
  const double recall = injected ? static_cast<double>(matched) / static_cast<double>(injected) : 1.0;
  const double precision = detected ? static_cast<double>(matched) / static_cast<double>(detected) : 1.0;
  Outcome o;
  o.pass = matched == injected && matched == detected && injected > 0;
  o.detail = std::to_string(injected) + " injected, " + std::to_string(detected) + " detected, recall " +
             fmt("%.3f", recall) + ", precision " + fmt("%.3f", precision) + ", max boundary error " +
             fmt("%.3f", worst_boundary) + " s (limit 1 sample = 0.1 s)";
  return o;
}

// ---------------------------------------------------------------- A5

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

Outcome a5_cohort_signature() {
  const auto gen = generate_cohort({senior_default(), young_default()}, default_scenario(), 20, 77);
  std::vector<double> thr[2], spd[2], daz[2];
  for (std::size_t i = 0; i < gen.size(); ++i) {
    const auto& t = gen[i].trip;
    const std::size_t c = i < 20 ? 0 : 1;
    std::vector<double> th, sp;
    for (const auto& s : t.samples) {
      th.push_back(s.throttle);
      sp.push_back(s.speed);
    }
    thr[c].push_back(mean_of(th));
    spd[c].push_back(mean_of(sp));
    daz[c].push_back(head_scan_stats(t).mean_abs_daz);
  }
  const double d_thr = cohens_d(thr[1], thr[0]).d;
  const double d_spd = cohens_d(spd[1], spd[0]).d;
  const double d_daz = cohens_d(daz[0], daz[1]).d;
  Outcome o;
  o.pass = d_thr > kEffectSize && d_spd > kEffectSize && d_daz > kEffectSize;
  o.detail = "20 vs 20 trips; d(young - senior) throttle " + fmt("%.2f", d_thr) + ", speed " + fmt("%.2f", d_spd) +
             "; d(senior - young) |d head_az| " + fmt("%.2f", d_daz) + " (each must exceed 0.5)";
  return o;
}

// ---------------------------------------------------------------- A6

Outcome a6_context_effect() {
  const Scenario sc = car_following_scenario();
  Outcome o;
  double min_speed_d = INFINITY, min_scan_d = INFINITY;
  for (const auto& m : {senior_default(), young_default()}) {
    const auto g = generate_trip(m, sc, 31);
    const auto segs = partition_context(g.trip);
    std::vector<double> speed, scan;
    for (const auto& s : g.trip.samples) {
      speed.push_back(s.speed);
      scan.push_back(std::fabs(s.head_az.value_or(0.0)));
    }
    const auto cs = compare_conditions(speed, segs, ContextField::lead);
    const auto ch = compare_conditions(scan, segs, ContextField::lead);
    const double ds = cs.effect_size.value_or(-INFINITY), dh = ch.effect_size.value_or(-INFINITY);
    min_speed_d = std::min(min_speed_d, ds);
    min_scan_d = std::min(min_scan_d, dh);
    o.detail += m.name + ": d(absent - present) speed " + fmt("%.2f", ds) + ", |head_az| " + fmt("%.2f", dh) + "; ";
  }
  o.pass = min_speed_d > kEffectSize && min_scan_d > kEffectSize;
  o.detail += "each must exceed 0.5";
  return o;
}

// ---------------------------------------------------------------- A7

Outcome a7_mobility() {
  const double speed = 5.0 * kMetersPerMile / 400.0;
  std::vector<Trip> trips;
  const auto start = parse_rfc3339("2025-03-03T12:00:00Z");
  for (int j = 0; j < 20; ++j) {
    Trip trip;
    trip.meta = {"m" + std::to_string(j), "mob", Cohort::unlabeled, start, 10.0};
    trip.meta.start_clock.utc += std::chrono::hours(24 * j);
    for (int k = 0; k <= 4000; ++k) {
      TelemetrySample s;
      s.t = k / 10.0;
      s.speed = speed;
      s.accel = 0.0;
      s.pos_y = speed * s.t;
      trip.samples.push_back(s);
    }
    trips.push_back(std::move(trip));
  }
  std::vector<const Trip*> ptrs;
  for (const auto& t : trips) ptrs.push_back(&t);
  const auto months = monthly_mobility(ptrs);
  Outcome o;
  if (months.size() != 1) return {false, std::to_string(months.size()) + " months produced, expected 1"};
  const auto& p = months[0];
  o.pass = std::fabs(p.miles_per_month - 100.0) <= kMilesTol && p.trips_per_month == 20 && p.night_trip_fraction == 0.0;
  o.detail = p.month + ": miles " + fmt("%.4f", p.miles_per_month) + " (100 +/- 0.1), trips " +
             std::to_string(p.trips_per_month) + ", night fraction " + fmt("%.3f", p.night_trip_fraction);
  return o;
}

// ---------------------------------------------------------------- A8

double oracle_bss_tss(const Eigen::MatrixXd& x, const std::vector<std::size_t>& labels, Eigen::Index col) {
  const auto n = x.rows();
  double mean = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) mean += x(i, col);
  mean /= static_cast<double>(n);
  double tss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) tss += (x(i, col) - mean) * (x(i, col) - mean);
  std::map<std::size_t, std::pair<double, double>> groups;  // sum, count
  for (Eigen::Index i = 0; i < n; ++i) {
    groups[labels[i]].first += x(i, col);
    groups[labels[i]].second += 1.0;
  }
  double bss = 0.0;
  for (const auto& [label, g] : groups) {
    const double gm = g.first / g.second;
    bss += g.second * (gm - mean) * (gm - mean);
  }
  return tss > 0.0 ? bss / tss : 0.0;
}

// 20 + 20 rows; "separating" has unit within-cluster sd and means 10 sd
// apart. The other column repeats the same values in both clusters, so it
// carries no cluster signal at all.
FeatureMatrix constructed_matrix(std::vector<std::size_t>& truth) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> z(0.0, 1.0);
  FeatureMatrix m;
  m.columns = {"other", "separating"};
  const int n = 40;
  m.values.resize(n, 2);
  double shared = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::size_t g = i % 2;
    truth.push_back(g);
    if (g == 0) shared = z(rng);
    m.rows.push_back({"d" + std::to_string(i), "2025-W10"});
    m.values(i, 0) = shared;
    m.values(i, 1) = z(rng) + (g ? 10.0 : 0.0);
  }
  return m;
}

Outcome a8_phenotype() {
  std::vector<std::size_t> truth;
  const auto m = constructed_matrix(truth);
  auto run = [&] {
    const auto st = standardize(m);
    const auto pca = pca_project(st.matrix, 2);
    const auto cl = kmeans_cluster(st.matrix, 2, 99);
    const auto imp = feature_importance(st.matrix, cl.labels);
    return std::make_tuple(st, cl, imp, phenotype_to_json(st, pca, cl, imp).dump());
  };
  const auto [st, cl, imp, text1] = run();
  const auto text2 = std::get<3>(run());
  bool partition = true;
  for (std::size_t i = 0; i < truth.size(); ++i) partition = partition && ((cl.labels[i] == cl.labels[0]) == (truth[i] == truth[0]));
  double worst = 0.0;
  for (const auto& e : imp.entries) worst = std::max(worst, std::fabs(e.ratio - oracle_bss_tss(st.matrix.values, cl.labels, static_cast<Eigen::Index>(e.column))));
  Outcome o;
  const auto& top = imp.entries.front();
  o.pass = partition && top.feature == "separating" && top.ratio > kImportanceRatio && text1 == text2 && worst <= kOracleTol;
  o.detail = std::string("partition ") + (partition ? "recovered" : "NOT recovered") + ", top feature " + top.feature +
             " ratio " + fmt("%.4f", top.ratio) + " (> 0.9), reruns " + (text1 == text2 ? "byte-identical" : "DIFFER") +
             ", max |ratio - BSS/TSS| " + fmt("%.3g", worst) + " (tol 1e-9)";
  return o;
}

// ---------------------------------------------------------------- A9

Outcome a9_linear_algebra() {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> z(0.0, 1.0);
  FeatureMatrix m;
  const int n = 60, p = 6;
  m.values.resize(n, p);
  for (int j = 0; j < p; ++j) m.columns.push_back("f" + std::to_string(j));
  for (int i = 0; i < n; ++i) {
    m.rows.push_back({"d" + std::to_string(i), "2025-W10"});
    const double a = z(rng), b = z(rng);
    for (int j = 0; j < p; ++j) m.values(i, j) = (j + 1) * a + (j % 2 ? b : -0.5 * b) + 0.3 * z(rng);
  }
  const auto pca = pca_project(m, static_cast<std::size_t>(p));

  double ortho = 0.0;
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      double dot = 0.0;
      for (int j = 0; j < p; ++j) dot += pca.components(j, a) * pca.components(j, b);
      ortho = std::max(ortho, std::fabs(dot - (a == b ? 1.0 : 0.0)));
    }
  }

  // Trace of the sample covariance, computed directly.
  double trace = 0.0;
  for (int j = 0; j < p; ++j) {
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += m.values(i, j);
    mean /= n;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) ss += (m.values(i, j) - mean) * (m.values(i, j) - mean);
    trace += ss / (n - 1);
  }
  bool nonincreasing = true;
  double ratio_err = 0.0;
  for (int c = 0; c < p; ++c) {
    if (c > 0 && pca.explained_variance_ratio[c] > pca.explained_variance_ratio[c - 1]) nonincreasing = false;
    ratio_err = std::max(ratio_err, std::fabs(pca.explained_variance_ratio[c] - pca.eigenvalues[c] / trace));
  }

  double offdiag = 0.0, eig_err = 0.0;
  for (int a = 0; a < p; ++a) {
    for (int b = a; b < p; ++b) {
      double ma = 0.0, mb = 0.0;
      for (int i = 0; i < n; ++i) {
        ma += pca.projections(i, a);
        mb += pca.projections(i, b);
      }
      ma /= n;
      mb /= n;
      double cov = 0.0;
      for (int i = 0; i < n; ++i) cov += (pca.projections(i, a) - ma) * (pca.projections(i, b) - mb);
      cov /= n - 1;
      if (a == b) eig_err = std::max(eig_err, std::fabs(cov - pca.eigenvalues[a]));
      else offdiag = std::max(offdiag, std::fabs(cov));
    }
  }
  Outcome o;
  o.pass = ortho <= kOrthoTol && nonincreasing && ratio_err <= kRatioTol && offdiag <= kCovTol && eig_err <= kCovTol;
  o.detail = "max |C^T C - I| " + fmt("%.3g", ortho) + " (1e-8), ratios " + (nonincreasing ? "nonincreasing" : "NOT monotone") +
             ", max |ratio - lambda/trace| " + fmt("%.3g", ratio_err) + " (1e-9), max off-diagonal covariance " +
             fmt("%.3g", offdiag) + " (1e-8), max |var - lambda| " + fmt("%.3g", eig_err);
  return o;
}

// ---------------------------------------------------------------- A10

std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = read_text_file(e.path());
  }
  return out;
}

int pipeline(const fs::path& root, std::string& log) {
  const fs::path data = fs::path(DRIVESCOPE_SOURCE_DIR) / "data";
  const auto s = [&](const fs::path& p) { return p.string(); };
  const std::vector<std::vector<std::string>> steps = {
      {"simulate", "--scenario", s(data / "scenario_default.json"), "--drivers", s(data / "drivers.json"),
       "--trips-per-model", "10", "--seed", "7", "--out", s(root / "sim")},
      {"score", "--trips", s(root / "sim" / "trips"), "--route", s(root / "sim" / "route.json"), "--out", s(root / "score")},
      {"divergence", "--group-a", s(root / "sim" / "trips" / "senior_default_*.csv"), "--group-b",
       s(root / "sim" / "trips" / "young_default_*.csv"), "--route", s(root / "sim" / "route.json"), "--out",
       s(root / "divergence")},
      {"features", "--trips", s(root / "sim" / "trips"), "--out", s(root / "features")},
      {"context", "--trip", s(root / "sim" / "trips" / "senior_default_t000.csv"), "--out", s(root / "context")},
      {"cluster", "--matrix", s(root / "features" / "feature_matrix.csv"), "--out", s(root / "cluster")},
      {"report", "--driver", "senior_default", "--trips", s(root / "sim" / "trips"), "--route",
       s(root / "sim" / "route.json"), "--rules", s(data / "rules.json"), "--out", s(root / "report")},
  };
  for (const auto& args : steps) {
    std::ostringstream out, err;
    const int code = cli::run_command(args, out, err);
    if (code != cli::kOk) {
      log = args[0] + " exited " + std::to_string(code) + ": " + err.str();
      return code;
    }
  }
  return 0;
}

Outcome a10_reproducibility() {
  const auto base = fs::temp_directory_path() / "drivescope_acceptance_a10";
  fs::remove_all(base);
  std::string log;
  if (pipeline(base / "run1", log) != 0 || pipeline(base / "run2", log) != 0) return {false, log};
  const auto t1 = tree_contents(base / "run1"), t2 = tree_contents(base / "run2");
  std::size_t manifests = 0;
  for (const auto& [rel, text] : t1) manifests += fs::path(rel).filename() == "manifest.json";
  Outcome o;
  o.pass = t1 == t2 && manifests == 7;
  std::string diff;
  if (t1 != t2) {
    for (const auto& [rel, text] : t1) {
      const auto it = t2.find(rel);
      if (it == t2.end() || it->second != text) {
        diff = ", first difference " + rel;
        break;
      }
    }
  }
  o.detail = "7 subcommands run twice, " + std::to_string(t1.size()) + " files, " + std::to_string(manifests) +
             " manifests, trees " + (t1 == t2 ? "byte-identical" : "DIFFER") + diff;
  fs::remove_all(base);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"A1", a1_oracle_equivalence},   {"A2", a2_reaction_monotonicity}, {"A3", a3_divergence_localization},
      {"A4", a4_hard_brakes},          {"A5", a5_cohort_signature},      {"A6", a6_context_effect},
      {"A7", a7_mobility},             {"A8", a8_phenotype},             {"A9", a9_linear_algebra},
      {"A10", a10_reproducibility},
  };
  int failures = 0;
  for (const auto& [id, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[PRIMARY] %s %s %s\n", id.c_str(), o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
