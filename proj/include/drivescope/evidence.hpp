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

// Rule-based evidence reports: each fired rule becomes a flag that cites the
// trips and time windows behind the observed metric.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "drivescope/error.hpp"
#include "drivescope/features.hpp"
#include "drivescope/number.hpp"
#include "drivescope/scoring.hpp"
#include "drivescope/telemetry.hpp"

namespace drivescope {

struct EvidenceWindow {
  std::string trip_id;
  double t0 = 0.0;
  double t1 = 0.0;
  double value = 0.0;  // the window's own contribution to the metric
};

struct MetricEvidence {
  double value = 0.0;
  std::vector<EvidenceWindow> windows;
};

using DriverMetrics = std::map<std::string, MetricEvidence>;

inline const std::vector<std::string>& known_metrics() {
  static const std::vector<std::string> names = {
      "mean_s_react", "mean_s_time",  "mean_s_fluent", "mean_s_route",          "mean_rt",
      "no_response_fraction", "mean_s_stab", "mean_composite", "mean_speed", "mean_throttle",
      "hard_brakes_per_trip", "mean_abs_head_daz", "night_trip_fraction"};
  return names;
}

enum class RuleOp { lt, gt, le, ge };

inline std::optional<RuleOp> parse_rule_op(std::string_view s) {
  if (s == "<") return RuleOp::lt;
  if (s == ">") return RuleOp::gt;
  if (s == "<=") return RuleOp::le;
  if (s == ">=") return RuleOp::ge;
  return std::nullopt;
}

inline std::string_view to_string(RuleOp op) {
  switch (op) {
    case RuleOp::lt: return "<";
    case RuleOp::gt: return ">";
    case RuleOp::le: return "<=";
    case RuleOp::ge: return ">=";
  }
  return "<";
}

inline bool rule_holds(RuleOp op, double observed, double threshold) {
  switch (op) {
    case RuleOp::lt: return observed < threshold;
    case RuleOp::gt: return observed > threshold;
    case RuleOp::le: return observed <= threshold;
    case RuleOp::ge: return observed >= threshold;
  }
  return false;
}

struct Rule {
  std::string name;
  std::string metric;
  RuleOp op = RuleOp::lt;
  double threshold = 0.0;
  std::string label;
  std::string text_template;
};

// Parses a rules file: a list of {metric, op, threshold, label, template}
// (optional "name"). Unknown metrics or operators are configuration errors.
inline std::vector<Rule> load_rules(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("rules file must be a JSON list");
  const auto& metrics = known_metrics();
  std::vector<Rule> rules;
  for (const auto& r : j) {
    try {
      Rule rule;
      rule.metric = r.at("metric").get<std::string>();
      if (std::find(metrics.begin(), metrics.end(), rule.metric) == metrics.end())
        throw ConfigError("rule references unknown metric '" + rule.metric + "'");
      const auto op = parse_rule_op(r.at("op").get<std::string>());
      if (!op) throw ConfigError("rule has unknown operator '" + r.at("op").get<std::string>() + "'");
      rule.op = *op;
      rule.threshold = r.at("threshold").get<double>();
      rule.label = r.at("label").get<std::string>();
      rule.text_template = r.value("template", std::string("{driver}: {label} ({metric} = {value} {op} {threshold})"));
      rule.name = r.value("name", rule.metric + " " + std::string(to_string(rule.op)) + " " + format_number(rule.threshold));
      for (const auto& [key, _] : r.items()) {
        if (key != "metric" && key != "op" && key != "threshold" && key != "label" && key != "template" && key != "name")
          throw ConfigError("rule has unknown key '" + key + "'");
      }
      rules.push_back(std::move(rule));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("malformed rule: ") + e.what());
    }
  }
  return rules;
}

struct TripEvidenceInput {
  const Trip* trip = nullptr;
  const TripScores* scores = nullptr;
};

struct EvidenceConfig {
  HardBrakeConfig brakes;
  ScanConfig scan;
  MobilityConfig mobility;
  std::size_t max_windows = 3;
};

// Metrics over a driver's trips, each with the windows it was computed from.
// Metrics without any supporting window are absent.
inline DriverMetrics driver_metrics(const std::vector<TripEvidenceInput>& trips, const EvidenceConfig& cfg = {}) {
  DriverMetrics out;
  auto finish_mean = [&](const std::string& name, MetricEvidence m, double num, double den) {
    if (m.windows.empty() || !(den > 0.0)) return;
    m.value = num / den;
    out.emplace(name, std::move(m));
  };

  struct EventMetric {
    const char* name;
    double (*get)(const EventScore&);
  };
  static const EventMetric event_metrics[] = {
      {"mean_s_react", [](const EventScore& e) { return e.s_react; }},
      {"mean_s_time", [](const EventScore& e) { return e.s_time; }},
      {"mean_s_fluent", [](const EventScore& e) { return e.s_fluent; }},
      {"mean_s_route", [](const EventScore& e) { return e.s_route; }},
      {"mean_rt", [](const EventScore& e) { return e.rt; }},
      {"no_response_fraction", [](const EventScore& e) { return e.no_response ? 1.0 : 0.0; }},
  };
  for (const auto& em : event_metrics) {
    MetricEvidence m;
    double sum = 0.0;
    for (const auto& t : trips) {
      for (const auto& e : t.scores->events.events) {
        const double v = em.get(e);
        sum += v;
        m.windows.push_back({t.trip->meta.trip_id, e.event.t0, e.event.t1, v});
      }
    }
    const auto n = static_cast<double>(m.windows.size());
    finish_mean(em.name, std::move(m), sum, n);
  }

  auto per_sample_mean = [&](const std::string& name, auto&& series_of) {
    MetricEvidence m;
    double sum = 0.0, count = 0.0;
    for (const auto& t : trips) {
      const std::vector<double> series = series_of(t);
      if (series.empty()) continue;
      double s = 0.0;
      for (double v : series) s += v;
      sum += s;
      count += static_cast<double>(series.size());
      m.windows.push_back({t.trip->meta.trip_id, t.trip->samples.front().t, t.trip->samples.back().t,
                           s / static_cast<double>(series.size())});
    }
    finish_mean(name, std::move(m), sum, count);
  };
  per_sample_mean("mean_s_stab", [](const TripEvidenceInput& t) { return t.scores->samples.s_stab; });
  per_sample_mean("mean_composite", [](const TripEvidenceInput& t) { return t.scores->samples.composite; });
  per_sample_mean("mean_speed", [](const TripEvidenceInput& t) { return channel(*t.trip, &TelemetrySample::speed); });
  per_sample_mean("mean_throttle",
                  [](const TripEvidenceInput& t) { return channel(*t.trip, &TelemetrySample::throttle); });

  {
    MetricEvidence m;
    double total = 0.0;
    for (const auto& t : trips) {
      std::vector<HardBrakeEvent> hb;
      try {
        hb = detect_hard_brakes(*t.trip, cfg.brakes);
      } catch (const MissingChannelError&) {
        continue;
      }
      total += static_cast<double>(hb.size());
      for (const auto& b : hb)
        m.windows.push_back({t.trip->meta.trip_id, b.t0, b.t1, static_cast<double>(hb.size())});
    }
    // No hard brakes still yields a valid rate of 0, evidenced by the trips themselves.
    if (m.windows.empty()) {
      for (const auto& t : trips) m.windows.push_back({t.trip->meta.trip_id, t.trip->samples.front().t, t.trip->samples.back().t, 0.0});
    }
    finish_mean("hard_brakes_per_trip", std::move(m), total, static_cast<double>(trips.size()));
  }
  {
    MetricEvidence m;
    double sum = 0.0;
    for (const auto& t : trips) {
      try {
        const double v = head_scan_stats(*t.trip, cfg.scan).mean_abs_daz;
        sum += v;
        m.windows.push_back({t.trip->meta.trip_id, t.trip->samples.front().t, t.trip->samples.back().t, v});
      } catch (const InputError&) {
      }
    }
    const auto n = static_cast<double>(m.windows.size());
    finish_mean("mean_abs_head_daz", std::move(m), sum, n);
  }
  {
    MetricEvidence m;
    double night = 0.0;
    for (const auto& t : trips) {
      const double v = is_night(t.trip->meta.start_clock, cfg.mobility) ? 1.0 : 0.0;
      night += v;
      m.windows.push_back({t.trip->meta.trip_id, t.trip->samples.front().t, t.trip->samples.back().t, v});
    }
    finish_mean("night_trip_fraction", std::move(m), night, static_cast<double>(trips.size()));
  }
  return out;
}

struct EvidenceFlag {
  std::string rule;
  std::string label;
  std::string metric;
  RuleOp op = RuleOp::lt;
  double threshold = 0.0;
  double observed = 0.0;
  std::vector<EvidenceWindow> evidence;
  std::string text;
};

struct EvidenceReport {
  std::string driver_id;
  std::vector<EvidenceFlag> flags;        // rule order
  std::vector<std::string> unavailable;   // rules whose metric had no data
  std::string summary;
};

namespace detail {

inline std::string fill_template(std::string text, const std::map<std::string, std::string>& vars) {
  for (const auto& [key, value] : vars) {
    const std::string token = "{" + key + "}";
    for (std::size_t pos = text.find(token); pos != std::string::npos; pos = text.find(token, pos + value.size()))
      text.replace(pos, token.size(), value);
  }
  return text;
}

}  // namespace detail

inline EvidenceReport evidence_report(const std::string& driver_id, const DriverMetrics& metrics,
                                      const std::vector<Rule>& rules, std::size_t max_windows = 3) {
  EvidenceReport report;
  report.driver_id = driver_id;
  for (const auto& rule : rules) {
    auto it = metrics.find(rule.metric);
    if (it == metrics.end() || it->second.windows.empty()) {
      report.unavailable.push_back(rule.name);
      continue;
    }
    const auto& m = it->second;
    if (!rule_holds(rule.op, m.value, rule.threshold)) continue;
    EvidenceFlag flag{rule.name, rule.label, rule.metric, rule.op, rule.threshold, m.value, m.windows, {}};
    const bool low_is_worse = rule.op == RuleOp::lt || rule.op == RuleOp::le;
    std::stable_sort(flag.evidence.begin(), flag.evidence.end(), [&](const EvidenceWindow& a, const EvidenceWindow& b) {
      return low_is_worse ? a.value < b.value : a.value > b.value;
    });
    flag.evidence.resize(std::min(flag.evidence.size(), std::max<std::size_t>(1, max_windows)));
    std::string windows;
    for (const auto& w : flag.evidence) {
      if (!windows.empty()) windows += "; ";
      windows += w.trip_id + " [" + format_fixed(w.t0, 1) + ", " + format_fixed(w.t1, 1) + "] s";
    }
    flag.text = detail::fill_template(rule.text_template, {{"driver", driver_id},
                                                           {"label", rule.label},
                                                           {"metric", rule.metric},
                                                           {"value", format_fixed(m.value)},
                                                           {"op", std::string(to_string(rule.op))},
                                                           {"threshold", format_fixed(rule.threshold)},
                                                           {"windows", windows}});
    report.flags.push_back(std::move(flag));
  }
  if (report.flags.empty()) {
    report.summary = driver_id + ": no rule fired.\n";
  } else {
    for (const auto& f : report.flags) {
      report.summary += f.text + '\n';
      for (const auto& w : f.evidence) {
        report.summary += "  - " + w.trip_id + " [" + format_fixed(w.t0, 1) + ", " + format_fixed(w.t1, 1) +
                          "] s: " + format_fixed(w.value) + '\n';
      }
    }
  }
  return report;
}

inline nlohmann::ordered_json evidence_report_json(const EvidenceReport& r) {
  nlohmann::ordered_json j;
  j["driver_id"] = r.driver_id;
  auto flags = nlohmann::ordered_json::array();
  for (const auto& f : r.flags) {
    auto ev = nlohmann::ordered_json::array();
    for (const auto& w : f.evidence) ev.push_back({{"trip_id", w.trip_id}, {"t0", w.t0}, {"t1", w.t1}, {"value", w.value}});
    flags.push_back({{"rule", f.rule},
                     {"label", f.label},
                     {"metric", f.metric},
                     {"op", std::string(to_string(f.op))},
                     {"threshold", f.threshold},
                     {"observed", f.observed},
                     {"evidence", std::move(ev)},
                     {"text", f.text}});
  }
  j["flags"] = std::move(flags);
  j["unavailable"] = r.unavailable;
  j["summary"] = r.summary;
  return j;
}

}  // namespace drivescope
