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

// Route-level safety scores.
//
//   S_stab(t)  = 1 - sigma_steer(t) / max_u sigma_steer(u)
//   S_react(i) = alpha * S_time(i) + (1 - alpha) * S_fluent(i)
//   S_route(i) = 1 - D_i / max_k D_k
//
// sigma_steer is the population variance of steering over a centered window,
// F_raw the windowed mean of max-normalized control differences, S_time and
// S_fluent are 1 - rt / rt_max and 1 - mean F_raw / f_max, D_i the mean (or
// max) cross-track distance over the event window. A zero normalizer yields
// a score of 1. Normalizers are per trip unless reference maxima are given.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "drivescope/error.hpp"
#include "drivescope/geometry.hpp"
#include "drivescope/number.hpp"
#include "drivescope/telemetry.hpp"

namespace drivescope {

struct ResponseThresholds {
  double steer_delta = 0.1;     // |delta steer| per sample
  double brake = 0.05;          // brake level
  double throttle_delta = 0.1;  // |delta throttle| per sample
};

enum class DeviationStat { mean, max };
enum class Normalization { trip, pooled };

struct CompositeWeights {
  double stab = 1.0 / 3.0;
  double react = 1.0 / 3.0;
  double route = 1.0 / 3.0;
};

struct ScoringConfig {
  std::size_t window_w = 5;
  double alpha = 0.5;
  ResponseThresholds response;
  DeviationStat deviation = DeviationStat::mean;
  CompositeWeights weights;
  double top_fraction = 0.10;
  std::size_t min_bin_samples = 3;
  Normalization normalization = Normalization::trip;

  void validate() const {
    if (window_w < 2) throw ConfigError("window_w must be >= 2");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
    if (!(weights.stab >= 0.0 && weights.react >= 0.0 && weights.route >= 0.0))
      throw ConfigError("composite weights must be nonnegative");
    if (std::abs(weights.stab + weights.react + weights.route - 1.0) > 1e-12)
      throw ConfigError("composite weights must sum to 1");
    if (!(top_fraction > 0.0 && top_fraction <= 1.0)) throw ConfigError("top_fraction must lie in (0, 1]");
    if (!(response.steer_delta > 0.0 && response.brake > 0.0 && response.throttle_delta > 0.0))
      throw ConfigError("response thresholds must be positive");
  }
};

// Externally supplied normalizers, e.g. maxima pooled over a comparison set.
struct ReferenceMaxima {
  std::optional<double> sigma_max;
  std::optional<double> f_max;
  std::optional<double> rt_max;
  std::optional<double> d_max;

  void include(const ReferenceMaxima& o) {
    auto upd = [](std::optional<double>& a, const std::optional<double>& b) {
      if (b) a = a ? std::max(*a, *b) : *b;
    };
    upd(sigma_max, o.sigma_max);
    upd(f_max, o.f_max);
    upd(rt_max, o.rt_max);
    upd(d_max, o.d_max);
  }
};

struct SampleScores {
  std::vector<double> t;
  std::vector<double> sigma_steer;
  std::vector<double> f_raw;
  std::vector<double> s_stab;
  std::vector<double> composite;
  std::vector<double> react_ctx;  // containing event's S_react, 1 outside events
  std::vector<double> route_ctx;  // containing event's S_route, 1 outside events
  double sigma_max = 0.0;
  double f_max = 0.0;
};

struct EventScore {
  ManeuverEvent event;  // rt and D filled
  bool no_response = false;
  double rt = 0.0;
  double f_mean = 0.0;
  double d = 0.0;
  double s_time = 1.0;
  double s_fluent = 1.0;
  double s_react = 1.0;
  double s_route = 1.0;
};

struct EventScores {
  std::vector<EventScore> events;
  double rt_max = 0.0;
  double f_max = 0.0;
  double d_max = 0.0;
};

namespace detail {

struct WindowBounds {
  std::size_t lo, hi;  // inclusive
};

inline WindowBounds centered_window(std::size_t k, std::size_t n, std::size_t w) {
  const std::size_t half_lo = (w - 1) / 2;
  const std::size_t half_hi = w - 1 - half_lo;
  return {k >= half_lo ? k - half_lo : 0, std::min(n - 1, k + half_hi)};
}

inline void require_window(const Trip& trip, const ScoringConfig& cfg) {
  if (trip.samples.size() < cfg.window_w)
    throw std::invalid_argument("trip " + trip.meta.trip_id + " is shorter than the scoring window");
}

inline double normalized_score(double value, double max) {
  if (!(max > 0.0)) return 1.0;
  return std::clamp(1.0 - value / max, 0.0, 1.0);
}

}  // namespace detail

// sigma_steer and S_stab. With sigma_max = 0 every S_stab is 1.
inline SampleScores stability_series(const Trip& trip, const ScoringConfig& cfg,
                                     std::optional<double> sigma_max_ref = std::nullopt) {
  detail::require_window(trip, cfg);
  const auto& s = trip.samples;
  const std::size_t n = s.size();
  SampleScores out;
  out.t.resize(n);
  out.sigma_steer.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.t[k] = s[k].t;
    const auto [lo, hi] = detail::centered_window(k, n, cfg.window_w);
    const double m = static_cast<double>(hi - lo + 1);
    double mean = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) mean += s[j].steer;
    mean /= m;
    double var = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) var += (s[j].steer - mean) * (s[j].steer - mean);
    out.sigma_steer[k] = var / m;
  }
  out.sigma_max = *std::max_element(out.sigma_steer.begin(), out.sigma_steer.end());
  const double norm = sigma_max_ref.value_or(out.sigma_max);
  out.s_stab.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.s_stab[k] = detail::normalized_score(out.sigma_steer[k], norm);
  return out;
}

// F_raw(t): mean over the steps inside the centered window of
// (|d throttle| + |d brake| + |d steer|) / 3, each channel's step magnitude
// divided by its trip maximum (0 when that maximum is 0).
inline std::vector<double> fluency_series(const Trip& trip, const ScoringConfig& cfg) {
  detail::require_window(trip, cfg);
  const auto& s = trip.samples;
  const std::size_t n = s.size();
  std::vector<double> dthr(n, 0.0), dbrk(n, 0.0), dstr(n, 0.0);
  double mthr = 0.0, mbrk = 0.0, mstr = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    dthr[k] = std::abs(s[k].throttle - s[k - 1].throttle);
    dbrk[k] = std::abs(s[k].brake - s[k - 1].brake);
    dstr[k] = std::abs(s[k].steer - s[k - 1].steer);
    mthr = std::max(mthr, dthr[k]);
    mbrk = std::max(mbrk, dbrk[k]);
    mstr = std::max(mstr, dstr[k]);
  }
  std::vector<double> step(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double a = mthr > 0.0 ? dthr[k] / mthr : 0.0;
    const double b = mbrk > 0.0 ? dbrk[k] / mbrk : 0.0;
    const double c = mstr > 0.0 ? dstr[k] / mstr : 0.0;
    step[k] = (a + b + c) / 3.0;
  }
  std::vector<double> f(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const auto [lo, hi] = detail::centered_window(k, n, cfg.window_w);
    double sum = 0.0;
    for (std::size_t j = lo + 1; j <= hi; ++j) sum += step[j];
    f[k] = sum / static_cast<double>(hi - lo);
  }
  return f;
}

inline SampleScores sample_scores(const Trip& trip, const ScoringConfig& cfg, const ReferenceMaxima& ref = {}) {
  auto out = stability_series(trip, cfg, ref.sigma_max);
  out.f_raw = fluency_series(trip, cfg);
  return out;
}

// Raw per-event measurements before normalization.
struct EventMeasurement {
  ManeuverEvent event;
  bool no_response = false;
  double rt = 0.0;
  double f_mean = 0.0;
  double d = 0.0;
};

inline std::vector<EventMeasurement> measure_events(const Trip& trip, const std::vector<ManeuverEvent>& events,
                                                    const RoutePolyline& route, const std::vector<double>& f_raw,
                                                    const ScoringConfig& cfg) {
  const auto& s = trip.samples;
  if (f_raw.size() != s.size()) throw std::invalid_argument("sample scores do not match the trip");
  constexpr double kEps = 1e-9;
  std::vector<EventMeasurement> out;
  out.reserve(events.size());
  for (const auto& ev : events) {
    if (!(ev.t0 < ev.t1)) throw std::invalid_argument("event window must satisfy t0 < t1");
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k].t >= ev.t0 - kEps && s[k].t <= ev.t1 + kEps) idx.push_back(k);
    }
    if (idx.empty()) {
      // Window falls between samples: use the sample nearest its midpoint.
      const double mid = 0.5 * (ev.t0 + ev.t1);
      std::size_t best = 0;
      for (std::size_t k = 1; k < s.size(); ++k) {
        if (std::abs(s[k].t - mid) < std::abs(s[best].t - mid)) best = k;
      }
      idx.push_back(best);
    }
    EventMeasurement m;
    m.event = ev;
    m.no_response = true;
    m.rt = ev.t1 - ev.t0;
    for (const std::size_t k : idx) {
      const double dsteer = k > 0 ? s[k].steer - s[k - 1].steer : 0.0;
      const double dthr = k > 0 ? s[k].throttle - s[k - 1].throttle : 0.0;
      if (std::abs(dsteer) >= cfg.response.steer_delta || s[k].brake >= cfg.response.brake ||
          std::abs(dthr) >= cfg.response.throttle_delta) {
        m.rt = std::max(0.0, s[k].t - ev.t0);
        m.no_response = false;
        break;
      }
    }
    double fsum = 0.0, dsum = 0.0, dmax = 0.0;
    for (const std::size_t k : idx) {
      fsum += f_raw[k];
      const double d = cross_track_distance({s[k].pos_x, s[k].pos_y}, route).distance;
      dsum += d;
      dmax = std::max(dmax, d);
    }
    m.f_mean = fsum / static_cast<double>(idx.size());
    m.d = cfg.deviation == DeviationStat::mean ? dsum / static_cast<double>(idx.size()) : dmax;
    m.event.rt = m.rt;
    m.event.D = m.d;
    out.push_back(std::move(m));
  }
  return out;
}

inline ReferenceMaxima maxima_of(const std::vector<EventMeasurement>& ms) {
  ReferenceMaxima r;
  for (const auto& m : ms) r.include({std::nullopt, m.f_mean, m.rt, m.d});
  return r;
}

inline EventScores normalize_events(const std::vector<EventMeasurement>& ms, const ScoringConfig& cfg,
                                    const ReferenceMaxima& ref = {}) {
  EventScores out;
  const auto own = maxima_of(ms);
  out.rt_max = ref.rt_max.value_or(own.rt_max.value_or(0.0));
  out.f_max = ref.f_max.value_or(own.f_max.value_or(0.0));
  out.d_max = ref.d_max.value_or(own.d_max.value_or(0.0));
  out.events.reserve(ms.size());
  for (const auto& m : ms) {
    EventScore e;
    e.event = m.event;
    e.no_response = m.no_response;
    e.rt = m.rt;
    e.f_mean = m.f_mean;
    e.d = m.d;
    e.s_time = detail::normalized_score(m.rt, out.rt_max);
    e.s_fluent = detail::normalized_score(m.f_mean, out.f_max);
    e.s_react = cfg.alpha * e.s_time + (1.0 - cfg.alpha) * e.s_fluent;
    e.s_route = detail::normalized_score(m.d, out.d_max);
    out.events.push_back(std::move(e));
  }
  return out;
}

inline EventScores score_events(const Trip& trip, const std::vector<ManeuverEvent>& events,
                                const RoutePolyline& route, const SampleScores& scores, const ScoringConfig& cfg,
                                const ReferenceMaxima& ref = {}) {
  return normalize_events(measure_events(trip, events, route, scores.f_raw, cfg), cfg, ref);
}

// composite(t) = w_stab S_stab + w_react S~_react + w_route S~_route where the
// S~ values come from the event windows containing t (worst one when several
// overlap) and are 1 outside every event.
inline SampleScores composite_series(SampleScores scores, const EventScores& events, const ScoringConfig& cfg) {
  const std::size_t n = scores.t.size();
  scores.react_ctx.assign(n, 1.0);
  scores.route_ctx.assign(n, 1.0);
  std::vector<bool> seen(n, false);
  constexpr double kEps = 1e-9;
  for (const auto& e : events.events) {
    for (std::size_t k = 0; k < n; ++k) {
      if (scores.t[k] < e.event.t0 - kEps || scores.t[k] > e.event.t1 + kEps) continue;
      scores.react_ctx[k] = seen[k] ? std::min(scores.react_ctx[k], e.s_react) : e.s_react;
      scores.route_ctx[k] = seen[k] ? std::min(scores.route_ctx[k], e.s_route) : e.s_route;
      seen[k] = true;
    }
  }
  scores.composite.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    scores.composite[k] =
        cfg.weights.stab * scores.s_stab[k] + cfg.weights.react * scores.react_ctx[k] + cfg.weights.route * scores.route_ctx[k];
  }
  scores.f_max = events.f_max;
  return scores;
}

struct TripScores {
  SampleScores samples;
  EventScores events;
};

// Normalizers a trip would use on its own.
inline ReferenceMaxima trip_maxima(const Trip& trip, const std::vector<ManeuverEvent>& events,
                                   const RoutePolyline& route, const ScoringConfig& cfg) {
  const auto st = stability_series(trip, cfg);
  auto r = maxima_of(measure_events(trip, events, route, fluency_series(trip, cfg), cfg));
  r.sigma_max = st.sigma_max;
  return r;
}

inline TripScores score_trip(const Trip& trip, const std::vector<ManeuverEvent>& events, const RoutePolyline& route,
                             const ScoringConfig& cfg, const ReferenceMaxima& ref = {}) {
  auto samples = sample_scores(trip, cfg, ref);
  auto ev = score_events(trip, events, route, samples, cfg, ref);
  samples = composite_series(std::move(samples), ev, cfg);
  return {std::move(samples), std::move(ev)};
}

// Scores a set of trips; with pooled normalization every trip shares the
// maxima taken over the whole set.
inline std::vector<TripScores> score_trips(const std::vector<const Trip*>& trips,
                                           const std::vector<std::vector<ManeuverEvent>>& events,
                                           const RoutePolyline& route, const ScoringConfig& cfg) {
  if (trips.size() != events.size()) throw std::invalid_argument("score_trips: one event list per trip required");
  ReferenceMaxima pooled;
  if (cfg.normalization == Normalization::pooled) {
    for (std::size_t i = 0; i < trips.size(); ++i) pooled.include(trip_maxima(*trips[i], events[i], route, cfg));
    // A pool without events leaves those normalizers to each trip (all 1s).
  }
  std::vector<TripScores> out;
  out.reserve(trips.size());
  for (std::size_t i = 0; i < trips.size(); ++i) out.push_back(score_trip(*trips[i], events[i], route, cfg, pooled));
  return out;
}

enum class ScoreSelector { composite, stability, reaction, route, fluency };

inline std::optional<ScoreSelector> parse_score_selector(std::string_view s) {
  if (s == "composite") return ScoreSelector::composite;
  if (s == "stability") return ScoreSelector::stability;
  if (s == "reaction") return ScoreSelector::reaction;
  if (s == "route") return ScoreSelector::route;
  if (s == "fluency") return ScoreSelector::fluency;
  return std::nullopt;
}

inline const std::vector<double>& selected_series(const SampleScores& s, ScoreSelector which) {
  switch (which) {
    case ScoreSelector::composite: return s.composite;
    case ScoreSelector::stability: return s.s_stab;
    case ScoreSelector::reaction: return s.react_ctx;
    case ScoreSelector::route: return s.route_ctx;
    case ScoreSelector::fluency: return s.f_raw;
  }
  return s.composite;
}

enum class BinFlag { maximal, baseline, insufficient_data };

inline std::string_view to_string(BinFlag f) {
  switch (f) {
    case BinFlag::maximal: return "maximal";
    case BinFlag::baseline: return "baseline";
    case BinFlag::insufficient_data: return "insufficient_data";
  }
  return "insufficient_data";
}

struct DivergenceBin {
  RouteBin bin;
  std::optional<double> mean_a;
  std::optional<double> mean_b;
  double divergence = 0.0;
  BinFlag flag = BinFlag::insufficient_data;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

struct DivergenceMap {
  std::vector<DivergenceBin> bins;

  std::size_t count(BinFlag f) const {
    return static_cast<std::size_t>(std::count_if(bins.begin(), bins.end(), [f](const auto& b) { return b.flag == f; }));
  }
};

struct ScoredTripView {
  const Trip* trip = nullptr;
  const SampleScores* scores = nullptr;
};

// Per-bin group means of the selected score; the top fraction of bins with
// sufficient data (by divergence, lower bin index first on ties) is flagged
// maximal.
inline DivergenceMap group_divergence_map(const std::vector<ScoredTripView>& group_a,
                                          const std::vector<ScoredTripView>& group_b, const RoutePolyline& route,
                                          double bin_size, const ScoringConfig& cfg,
                                          ScoreSelector which = ScoreSelector::composite,
                                          double gate_distance = kDefaultGateDistance) {
  if (group_a.empty() || group_b.empty()) throw std::invalid_argument("group_divergence_map: empty group");
  const auto bins = make_route_bins(route.total_length(), bin_size);
  struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
  };
  auto accumulate = [&](const std::vector<ScoredTripView>& group) {
    std::vector<Acc> acc(bins.size());
    for (const auto& v : group) {
      const auto& series = selected_series(*v.scores, which);
      if (series.size() != v.trip->samples.size())
        throw std::invalid_argument("selected score series missing or mismatched for trip " + v.trip->meta.trip_id);
      const auto assign = bin_by_arc_length(*v.trip, route, bin_size, gate_distance);
      for (std::size_t k = 0; k < series.size(); ++k) {
        if (!assign.bin_of_sample[k]) continue;
        auto& a = acc[*assign.bin_of_sample[k]];
        a.sum += series[k];
        ++a.n;
      }
    }
    return acc;
  };
  const auto acc_a = accumulate(group_a);
  const auto acc_b = accumulate(group_b);

  DivergenceMap map;
  map.bins.resize(bins.size());
  std::vector<std::size_t> sufficient;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    auto& b = map.bins[i];
    b.bin = bins[i];
    b.n_a = acc_a[i].n;
    b.n_b = acc_b[i].n;
    if (b.n_a > 0) b.mean_a = acc_a[i].sum / static_cast<double>(b.n_a);
    if (b.n_b > 0) b.mean_b = acc_b[i].sum / static_cast<double>(b.n_b);
    if (b.mean_a && b.mean_b) b.divergence = std::abs(*b.mean_a - *b.mean_b);
    if (b.n_a >= cfg.min_bin_samples && b.n_b >= cfg.min_bin_samples && b.n_a > 0 && b.n_b > 0) {
      b.flag = BinFlag::baseline;
      sufficient.push_back(i);
    }
  }
  std::stable_sort(sufficient.begin(), sufficient.end(), [&](std::size_t x, std::size_t y) {
    return map.bins[x].divergence > map.bins[y].divergence;
  });
  const auto top = static_cast<std::size_t>(
      std::ceil(cfg.top_fraction * static_cast<double>(sufficient.size()) - 1e-9));
  for (std::size_t r = 0; r < std::min(top, sufficient.size()); ++r) map.bins[sufficient[r]].flag = BinFlag::maximal;
  return map;
}

inline std::string sample_scores_csv(const SampleScores& s) {
  std::string out = "t,sigma_steer,f_raw,s_stab,composite\n";
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    out += format_number(s.t[k]) + ',' + format_number(s.sigma_steer[k]) + ',' +
           (k < s.f_raw.size() ? format_number(s.f_raw[k]) : std::string{}) + ',' + format_number(s.s_stab[k]) + ',' +
           (k < s.composite.size() ? format_number(s.composite[k]) : std::string{}) + '\n';
  }
  return out;
}

inline std::string event_scores_csv(const EventScores& e) {
  std::string out = "event_id,kind,t0,t1,rt,no_response,s_time,s_fluent,s_react,d,s_route\n";
  for (const auto& ev : e.events) {
    out += std::to_string(ev.event.event_id) + ',' + std::string(to_string(ev.event.kind)) + ',' +
           format_number(ev.event.t0) + ',' + format_number(ev.event.t1) + ',' + format_number(ev.rt) + ',' +
           (ev.no_response ? "1" : "0") + ',' + format_number(ev.s_time) + ',' + format_number(ev.s_fluent) + ',' +
           format_number(ev.s_react) + ',' + format_number(ev.d) + ',' + format_number(ev.s_route) + '\n';
  }
  return out;
}

inline std::string divergence_csv(const DivergenceMap& m) {
  std::string out = "bin,arc_start,arc_end,mean_a,mean_b,divergence,flag\n";
  for (const auto& b : m.bins) {
    out += std::to_string(b.bin.index) + ',' + format_number(b.bin.arc_start) + ',' + format_number(b.bin.arc_end) +
           ',' + format_number(b.mean_a) + ',' + format_number(b.mean_b) + ',' + format_number(b.divergence) + ',' +
           std::string(to_string(b.flag)) + '\n';
  }
  return out;
}

}  // namespace drivescope
