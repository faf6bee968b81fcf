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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>

#include "drivescope/telemetry.hpp"

namespace drivescope {

namespace detail {

inline double lerp_bounded(double a, double b, double f) {
  const double v = a + f * (b - a);
  return std::clamp(v, std::min(a, b), std::max(a, b));
}

template <typename T>
const std::optional<T>& nearest(const std::optional<T>& a, const std::optional<T>& b, double f) {
  return f <= 0.5 ? a : b;
}

}  // namespace detail

// Resamples onto the grid t0 + k / target_rate covering [t0, t_last].
// Continuous channels are linearly interpolated, heading along the shortest
// arc, optional and enum channels take the nearest neighbour (earlier on a tie).
// Grid points that coincide with an input timestamp (within 1e-9 s) copy that
// sample's channel values exactly.
inline Trip resample_uniform(const Trip& trip, double target_rate) {
  if (trip.samples.size() < 2) throw std::invalid_argument("resample_uniform: trip needs at least 2 samples");
  if (!(target_rate > 0.0) || !std::isfinite(target_rate))
    throw std::invalid_argument("resample_uniform: target_rate must be positive");
  constexpr double kCoincide = 1e-9;
  const auto& in = trip.samples;
  const double t0 = in.front().t;
  const double span = in.back().t - t0;
  const auto count = static_cast<std::size_t>(std::floor(span * target_rate + kCoincide)) + 1;
  if (count < 2) throw std::invalid_argument("resample_uniform: target grid has fewer than 2 points");

  Trip out;
  out.meta = trip.meta;
  out.meta.sample_rate = target_rate;
  out.samples.reserve(count);
  std::size_t j = 0;  // in[j].t <= t < in[j+1].t
  for (std::size_t k = 0; k < count; ++k) {
    const double t = t0 + static_cast<double>(k) / target_rate;
    while (j + 2 < in.size() && in[j + 1].t <= t + kCoincide) ++j;
    const auto& a = in[j];
    const auto& b = in[j + 1];
    TelemetrySample s;
    if (std::abs(t - a.t) <= kCoincide) {
      s = a;
    } else if (std::abs(t - b.t) <= kCoincide) {
      s = b;
    } else {
      const double f = std::clamp((t - a.t) / (b.t - a.t), 0.0, 1.0);
      s.steer = detail::lerp_bounded(a.steer, b.steer, f);
      s.throttle = detail::lerp_bounded(a.throttle, b.throttle, f);
      s.brake = detail::lerp_bounded(a.brake, b.brake, f);
      s.speed = detail::lerp_bounded(a.speed, b.speed, f);
      s.accel = (a.accel && b.accel) ? std::optional<double>(detail::lerp_bounded(*a.accel, *b.accel, f))
                                     : detail::nearest(a.accel, b.accel, f);
      s.pos_x = detail::lerp_bounded(a.pos_x, b.pos_x, f);
      s.pos_y = detail::lerp_bounded(a.pos_y, b.pos_y, f);
      s.heading = wrap_heading_deg(a.heading + f * angle_diff_deg(a.heading, b.heading));
      s.head_az = detail::nearest(a.head_az, b.head_az, f);
      s.head_el = detail::nearest(a.head_el, b.head_el, f);
      s.lead_gap = detail::nearest(a.lead_gap, b.lead_gap, f);
      s.weather = detail::nearest(a.weather, b.weather, f);
    }
    s.t = t;
    out.samples.push_back(s);
  }
  return out;
}

}  // namespace drivescope
