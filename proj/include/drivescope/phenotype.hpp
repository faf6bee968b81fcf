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

// Unsupervised phenotyping: feature matrices, standardization, PCA, seeded
// k-means and between/total sum-of-squares feature importance.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "drivescope/error.hpp"
#include "drivescope/features.hpp"
#include "drivescope/ingest.hpp"
#include "drivescope/number.hpp"
#include "drivescope/rng.hpp"

namespace drivescope {

struct RowKey {
  std::string driver_id;
  std::string period;
  friend auto operator<=>(const RowKey&, const RowKey&) = default;
};

// Metrics available for one (driver, period); absent metrics are missing.
struct PeriodRecord {
  RowKey key;
  std::map<std::string, double> metrics;
};

struct FeatureMatrix {
  std::vector<RowKey> rows;
  std::vector<std::string> columns;
  Eigen::MatrixXd values;  // rows x columns
  std::vector<RowKey> dropped_rows;

  Eigen::Index row_count() const { return values.rows(); }
  Eigen::Index column_count() const { return values.cols(); }
};

inline std::vector<PeriodRecord> to_period_records(const std::vector<WeeklyProfile>& weeks) {
  std::vector<PeriodRecord> out;
  for (const auto& w : weeks) {
    out.push_back({{w.driver_id, w.key()},
                   {{"mean_speed", w.mean_speed},
                    {"hard_brake_count", static_cast<double>(w.hard_brake_count)},
                    {"trip_count", static_cast<double>(w.trip_count)},
                    {"total_miles", w.total_miles}}});
  }
  return out;
}

inline std::vector<PeriodRecord> to_period_records(const std::vector<MobilityProfile>& months) {
  std::vector<PeriodRecord> out;
  for (const auto& m : months) {
    out.push_back({{m.driver_id, m.month},
                   {{"miles_per_month", m.miles_per_month},
                    {"trips_per_month", static_cast<double>(m.trips_per_month)},
                    {"night_trip_count", static_cast<double>(m.night_trip_count)},
                    {"night_trip_fraction", m.night_trip_fraction},
                    {"short_trip_ratio", m.short_trip_ratio},
                    {"right_left_ratio", m.right_left_ratio},
                    {"driving_days", static_cast<double>(m.driving_days)}}});
  }
  return out;
}

// Joins record sets on (driver, period); later sets win on metric clashes.
inline std::vector<PeriodRecord> join_period_records(const std::vector<std::vector<PeriodRecord>>& sets) {
  std::map<RowKey, std::map<std::string, double>> joined;
  for (const auto& set : sets) {
    for (const auto& r : set) {
      auto& m = joined[r.key];
      for (const auto& [name, v] : r.metrics) m[name] = v;
    }
  }
  std::vector<PeriodRecord> out;
  for (auto& [key, m] : joined) out.push_back({key, std::move(m)});
  return out;
}

// One row per (driver, period) in key order, columns in the given order. Rows
// lacking any selected feature are dropped and listed.
inline FeatureMatrix build_feature_matrix(const std::vector<PeriodRecord>& records,
                                          const std::vector<std::string>& features) {
  if (features.empty()) throw ConfigError("feature spec is empty");
  std::set<std::string> unique(features.begin(), features.end());
  if (unique.size() != features.size()) throw ConfigError("feature names must be unique");
  std::map<RowKey, const PeriodRecord*> by_key;
  for (const auto& r : records) {
    if (!by_key.emplace(r.key, &r).second)
      throw std::invalid_argument("duplicate feature row " + r.key.driver_id + "/" + r.key.period);
  }
  FeatureMatrix m;
  m.columns = features;
  std::vector<std::vector<double>> kept;
  for (const auto& [key, rec] : by_key) {
    std::vector<double> row;
    row.reserve(features.size());
    bool complete = true;
    for (const auto& f : features) {
      auto it = rec->metrics.find(f);
      if (it == rec->metrics.end() || !std::isfinite(it->second)) {
        complete = false;
        break;
      }
      row.push_back(it->second);
    }
    if (complete) {
      m.rows.push_back(key);
      kept.push_back(std::move(row));
    } else {
      m.dropped_rows.push_back(key);
    }
  }
  if (kept.empty()) throw InputError("feature matrix is empty: no row has every selected feature");
  m.values.resize(static_cast<Eigen::Index>(kept.size()), static_cast<Eigen::Index>(features.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) {
    for (std::size_t j = 0; j < features.size(); ++j)
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = kept[i][j];
  }
  return m;
}

struct Standardization {
  FeatureMatrix matrix;  // z-scored kept columns
  std::vector<double> mean;
  std::vector<double> sd;  // population
  std::vector<std::string> dropped_columns;
};

// Population z-scores per column; (near) zero-variance columns are dropped.
inline Standardization standardize(const FeatureMatrix& m) {
  const Eigen::Index n = m.values.rows();
  if (n < 2) throw std::invalid_argument("standardize needs at least 2 rows");
  Standardization out;
  out.matrix.rows = m.rows;
  out.matrix.dropped_rows = m.dropped_rows;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
    double mean = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) mean += m.values(i, j);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) ss += (m.values(i, j) - mean) * (m.values(i, j) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
      out.dropped_columns.push_back(m.columns[static_cast<std::size_t>(j)]);
      continue;
    }
    keep.push_back(j);
    out.mean.push_back(mean);
    out.sd.push_back(sd);
    out.matrix.columns.push_back(m.columns[static_cast<std::size_t>(j)]);
  }
  if (keep.empty()) throw InputError("every feature column has zero variance");
  out.matrix.values.resize(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    for (Eigen::Index i = 0; i < n; ++i)
      out.matrix.values(i, static_cast<Eigen::Index>(c)) = (m.values(i, keep[c]) - out.mean[c]) / out.sd[c];
  }
  return out;
}

struct PcaResult {
  std::vector<std::string> columns;
  Eigen::MatrixXd components;   // columns x n_components, orthonormal columns
  Eigen::MatrixXd projections;  // rows x n_components
  std::vector<double> eigenvalues;  // all, descending
  std::vector<double> explained_variance_ratio;  // n_components
  double total_variance = 0.0;
  std::vector<std::string> dropped_columns;
};

// Eigendecomposition of the sample covariance. Each component's sign is fixed
// so its largest-magnitude coefficient (first on ties) is nonnegative.
inline PcaResult pca_project(const FeatureMatrix& m, std::size_t n_components) {
  const Eigen::Index n = m.values.rows();
  PcaResult out;
  std::vector<Eigen::Index> keep;
  Eigen::RowVectorXd means = Eigen::RowVectorXd::Zero(m.values.cols());
  for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
    double mean = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) mean += m.values(i, j);
    mean /= static_cast<double>(std::max<Eigen::Index>(n, 1));
    means(j) = mean;
    double ss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) ss += (m.values(i, j) - mean) * (m.values(i, j) - mean);
    if (ss > 0.0) {
      keep.push_back(j);
      out.columns.push_back(m.columns[static_cast<std::size_t>(j)]);
    } else {
      out.dropped_columns.push_back(m.columns[static_cast<std::size_t>(j)]);
    }
  }
  const auto p = static_cast<Eigen::Index>(keep.size());
  if (n_components < 1 || n < 2 || static_cast<Eigen::Index>(n_components) > std::min(n - 1, p))
    throw std::invalid_argument("pca_project: n_components must lie in [1, min(rows - 1, columns)]");

  Eigen::MatrixXd centered(n, p);
  for (Eigen::Index c = 0; c < p; ++c) {
    for (Eigen::Index i = 0; i < n; ++i) centered(i, c) = m.values(i, keep[static_cast<std::size_t>(c)]) - means(keep[static_cast<std::size_t>(c)]);
  }
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw std::runtime_error("pca_project: eigendecomposition failed");

  out.total_variance = cov.trace();
  const auto nc = static_cast<Eigen::Index>(n_components);
  out.components.resize(p, nc);
  for (Eigen::Index r = 0; r < p; ++r) out.eigenvalues.push_back(std::max(0.0, solver.eigenvalues()(p - 1 - r)));
  for (Eigen::Index c = 0; c < nc; ++c) {
    Eigen::VectorXd v = solver.eigenvectors().col(p - 1 - c);
    Eigen::Index arg = 0;
    for (Eigen::Index r = 1; r < p; ++r) {
      if (std::abs(v(r)) > std::abs(v(arg))) arg = r;
    }
    if (v(arg) < 0.0) v = -v;
    out.components.col(c) = v;
    out.explained_variance_ratio.push_back(out.total_variance > 0.0
                                               ? std::clamp(out.eigenvalues[static_cast<std::size_t>(c)] / out.total_variance, 0.0, 1.0)
                                               : 0.0);
  }
  out.projections = centered * out.components;
  return out;
}

struct ClusterResult {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> labels;
  Eigen::MatrixXd centroids;  // k x columns
  double inertia = 0.0;
  std::size_t iterations = 0;
  std::vector<double> inertia_history;  // one entry per Lloyd update, plus the final assignment
  std::size_t n_init = 1;
  std::size_t best_restart = 0;
};

namespace detail {

inline double sq_dist(const Eigen::MatrixXd& x, Eigen::Index i, const Eigen::MatrixXd& c, Eigen::Index j) {
  double d = 0.0;
  for (Eigen::Index f = 0; f < x.cols(); ++f) {
    const double diff = x(i, f) - c(j, f);
    d += diff * diff;
  }
  return d;
}

inline std::vector<std::size_t> nearest_centroids(const Eigen::MatrixXd& x, const Eigen::MatrixXd& c) {
  std::vector<std::size_t> labels(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Eigen::Index best = 0;
    double best_d = sq_dist(x, i, c, 0);
    for (Eigen::Index j = 1; j < c.rows(); ++j) {
      const double d = sq_dist(x, i, c, j);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    labels[static_cast<std::size_t>(i)] = static_cast<std::size_t>(best);
  }
  return labels;
}

// Moves the point farthest from its centroid into each empty cluster.
inline void repair_empty_clusters(const Eigen::MatrixXd& x, Eigen::MatrixXd& c, std::vector<std::size_t>& labels) {
  const auto k = static_cast<std::size_t>(c.rows());
  for (std::size_t e = 0; e < k; ++e) {
    std::vector<std::size_t> sizes(k, 0);
    for (auto l : labels) ++sizes[l];
    if (sizes[e] > 0) continue;
    std::optional<std::size_t> far;
    double far_d = -1.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (sizes[labels[i]] < 2) continue;
      const double d = sq_dist(x, static_cast<Eigen::Index>(i), c, static_cast<Eigen::Index>(labels[i]));
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    if (!far) return;
    labels[*far] = e;
    c.row(static_cast<Eigen::Index>(e)) = x.row(static_cast<Eigen::Index>(*far));
  }
}

inline Eigen::MatrixXd cluster_means(const Eigen::MatrixXd& x, const std::vector<std::size_t>& labels,
                                     const Eigen::MatrixXd& previous) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(previous.rows(), x.cols());
  std::vector<std::size_t> n(static_cast<std::size_t>(previous.rows()), 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (Eigen::Index f = 0; f < x.cols(); ++f) c(static_cast<Eigen::Index>(labels[i]), f) += x(static_cast<Eigen::Index>(i), f);
    ++n[labels[i]];
  }
  for (Eigen::Index j = 0; j < c.rows(); ++j) {
    if (n[static_cast<std::size_t>(j)] == 0) c.row(j) = previous.row(j);
    else c.row(j) /= static_cast<double>(n[static_cast<std::size_t>(j)]);
  }
  return c;
}

inline double inertia_of(const Eigen::MatrixXd& x, const Eigen::MatrixXd& c, const std::vector<std::size_t>& labels) {
  double s = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) s += sq_dist(x, static_cast<Eigen::Index>(i), c, static_cast<Eigen::Index>(labels[i]));
  return s;
}

// One k-means++ seeding followed by Lloyd iterations until the relative
// inertia improvement drops below rel_tol, labels stop changing, or max_iter
// is reached. Final labels are the nearest reported centroid.
inline ClusterResult kmeans_single(const Eigen::MatrixXd& x, std::size_t k, std::uint64_t run_seed,
                                   std::size_t max_iter, double rel_tol) {
  const auto n = static_cast<std::size_t>(x.rows());
  Rng rng(run_seed);
  Eigen::MatrixXd c(static_cast<Eigen::Index>(k), x.cols());
  std::vector<bool> chosen(n, false);
  std::size_t first = rng.index(n);
  c.row(0) = x.row(static_cast<Eigen::Index>(first));
  chosen[first] = true;
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = detail::sq_dist(x, static_cast<Eigen::Index>(i), c, 0);
  for (std::size_t j = 1; j < k; ++j) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += d2[i];
    std::size_t pick = n;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double cum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        cum += d2[i];
        pick = i;
        if (cum > r) break;
      }
    } else {
      for (std::size_t i = 0; i < n && pick == n; ++i) {
        if (!chosen[i]) pick = i;
      }
    }
    chosen[pick] = true;
    c.row(static_cast<Eigen::Index>(j)) = x.row(static_cast<Eigen::Index>(pick));
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], detail::sq_dist(x, static_cast<Eigen::Index>(i), c, static_cast<Eigen::Index>(j)));
  }

  ClusterResult out;
  out.k = k;
  auto labels = detail::nearest_centroids(x, c);
  detail::repair_empty_clusters(x, c, labels);
  for (std::size_t it = 0; it < max_iter; ++it) {
    c = detail::cluster_means(x, labels, c);
    const double inertia = detail::inertia_of(x, c, labels);
    ++out.iterations;
    const bool has_prev = !out.inertia_history.empty();
    const double prev = has_prev ? out.inertia_history.back() : 0.0;
    out.inertia_history.push_back(inertia);
    auto next = detail::nearest_centroids(x, c);
    detail::repair_empty_clusters(x, c, next);
    const bool stable = next == labels;
    const bool small_gain = has_prev && (prev <= 0.0 || (prev - inertia) / prev < rel_tol);
    labels = std::move(next);
    if (stable || small_gain || inertia == 0.0) break;
  }
  out.labels = detail::nearest_centroids(x, c);
  out.centroids = c;
  out.inertia = detail::inertia_of(x, c, out.labels);
  out.inertia_history.push_back(out.inertia);
  return out;
}

}  // namespace detail

// n_init seeded restarts (restart r draws from Rng(mix_seed(seed, 0, r)));
// the lowest final inertia wins, the earliest restart on ties.
inline ClusterResult kmeans_cluster(const Eigen::MatrixXd& x, std::size_t k, std::uint64_t seed,
                                    std::size_t max_iter = 300, double rel_tol = 1e-6, std::size_t n_init = 10) {
  const auto n = static_cast<std::size_t>(x.rows());
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (k > n) throw std::invalid_argument("kmeans: k exceeds the number of rows");
  if (n_init < 1) throw std::invalid_argument("kmeans: n_init must be >= 1");
  ClusterResult best;
  for (std::size_t r = 0; r < n_init; ++r) {
    auto run = detail::kmeans_single(x, k, mix_seed(seed, 0, static_cast<std::uint32_t>(r)), max_iter, rel_tol);
    if (r == 0 || run.inertia < best.inertia) {
      best = std::move(run);
      best.best_restart = r;
    }
  }
  best.seed = seed;
  best.n_init = n_init;
  return best;
}

inline ClusterResult kmeans_cluster(const FeatureMatrix& m, std::size_t k, std::uint64_t seed,
                                    std::size_t max_iter = 300, double rel_tol = 1e-6, std::size_t n_init = 10) {
  return kmeans_cluster(m.values, k, seed, max_iter, rel_tol, n_init);
}

struct ImportanceEntry {
  std::string feature;
  std::size_t column = 0;
  double ratio = 0.0;  // between-cluster SS / total SS
};

struct ImportanceRanking {
  std::vector<ImportanceEntry> entries;  // descending ratio, column index on ties
};

inline ImportanceRanking feature_importance(const FeatureMatrix& m, const std::vector<std::size_t>& labels) {
  const Eigen::Index n = m.values.rows();
  if (static_cast<Eigen::Index>(labels.size()) != n) throw std::invalid_argument("one label per row required");
  std::map<std::size_t, std::size_t> cluster_index;
  for (auto l : labels) cluster_index.emplace(l, cluster_index.size());
  if (cluster_index.size() < 2) throw std::invalid_argument("feature_importance needs at least 2 clusters");
  ImportanceRanking out;
  for (Eigen::Index j = 0; j < m.values.cols(); ++j) {
    double mean = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) mean += m.values(i, j);
    mean /= static_cast<double>(n);
    std::vector<double> sum(cluster_index.size(), 0.0);
    std::vector<std::size_t> cnt(cluster_index.size(), 0);
    double tss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto g = cluster_index.at(labels[static_cast<std::size_t>(i)]);
      sum[g] += m.values(i, j);
      ++cnt[g];
      tss += (m.values(i, j) - mean) * (m.values(i, j) - mean);
    }
    double bss = 0.0;
    for (std::size_t g = 0; g < sum.size(); ++g) {
      const double mg = sum[g] / static_cast<double>(cnt[g]);
      bss += static_cast<double>(cnt[g]) * (mg - mean) * (mg - mean);
    }
    const double ratio = tss > 0.0 ? std::clamp(bss / tss, 0.0, 1.0) : 0.0;
    out.entries.push_back({m.columns[static_cast<std::size_t>(j)], static_cast<std::size_t>(j), ratio});
  }
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const ImportanceEntry& a, const ImportanceEntry& b) { return a.ratio > b.ratio; });
  return out;
}

// Post-hoc purity against optional per-row annotations (never used for
// fitting): sum over clusters of the majority annotation count divided by
// the number of annotated rows.
inline std::optional<double> cluster_purity(const std::vector<std::size_t>& labels,
                                            const std::vector<std::optional<std::string>>& annotations) {
  if (labels.size() != annotations.size()) throw std::invalid_argument("one annotation slot per row required");
  std::map<std::size_t, std::map<std::string, std::size_t>> counts;
  std::size_t annotated = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!annotations[i]) continue;
    ++counts[labels[i]][*annotations[i]];
    ++annotated;
  }
  if (annotated == 0) return std::nullopt;
  std::size_t majority = 0;
  for (const auto& [label, by_name] : counts) {
    std::size_t best = 0;
    for (const auto& [name, c] : by_name) best = std::max(best, c);
    majority += best;
  }
  return static_cast<double>(majority) / static_cast<double>(annotated);
}

inline std::string feature_matrix_csv(const FeatureMatrix& m) {
  std::string out = "driver_id,period";
  for (const auto& c : m.columns) out += ',' + c;
  out += '\n';
  for (Eigen::Index i = 0; i < m.values.rows(); ++i) {
    out += m.rows[static_cast<std::size_t>(i)].driver_id + ',' + m.rows[static_cast<std::size_t>(i)].period;
    for (Eigen::Index j = 0; j < m.values.cols(); ++j) out += ',' + format_number(m.values(i, j));
    out += '\n';
  }
  return out;
}

inline FeatureMatrix read_feature_matrix_csv(std::istream& in) {
  const RecordTable table = read_csv(in);
  if (table.header.size() < 3 || table.header[0] != "driver_id" || table.header[1] != "period")
    throw InputError("feature matrix header must start with driver_id,period and name at least one feature");
  std::vector<PeriodRecord> records;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    PeriodRecord rec{{row[0].value_or(""), row[1].value_or("")}, {}};
    for (std::size_t c = 2; c < row.size(); ++c) {
      if (!row[c]) continue;
      auto v = parse_number(*row[c]);
      if (!v) throw InputError("feature matrix row " + std::to_string(r + 1) + ": bad number '" + *row[c] + "'");
      rec.metrics[table.header[c]] = *v;
    }
    records.push_back(std::move(rec));
  }
  return build_feature_matrix(records, {table.header.begin() + 2, table.header.end()});
}

inline nlohmann::ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
  auto a = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(std::move(row));
  }
  return a;
}

inline nlohmann::ordered_json phenotype_to_json(const Standardization& st, const PcaResult& pca,
                                                const ClusterResult& cl, const ImportanceRanking& imp) {
  nlohmann::ordered_json j;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : st.matrix.rows) rows.push_back({{"driver_id", r.driver_id}, {"period", r.period}});
  j["rows"] = std::move(rows);
  j["columns"] = st.matrix.columns;
  j["dropped_columns"] = st.dropped_columns;
  auto dropped = nlohmann::ordered_json::array();
  for (const auto& r : st.matrix.dropped_rows) dropped.push_back({{"driver_id", r.driver_id}, {"period", r.period}});
  j["dropped_rows"] = std::move(dropped);
  j["standardization"] = {{"mean", st.mean}, {"sd", st.sd}};
  j["pca"] = {{"components", matrix_to_json(pca.components.transpose())},
              {"eigenvalues", pca.eigenvalues},
              {"explained_variance_ratio", pca.explained_variance_ratio},
              {"projections", matrix_to_json(pca.projections)}};
  j["kmeans"] = {{"k", cl.k},
                 {"seed", cl.seed},
                 {"n_init", cl.n_init},
                 {"best_restart", cl.best_restart},
                 {"labels", cl.labels},
                 {"centroids", matrix_to_json(cl.centroids)},
                 {"inertia", cl.inertia},
                 {"iterations", cl.iterations},
                 {"inertia_history", cl.inertia_history}};
  auto ranked = nlohmann::ordered_json::array();
  for (const auto& e : imp.entries) ranked.push_back({{"feature", e.feature}, {"ratio", e.ratio}});
  j["importance"] = std::move(ranked);
  return j;
}

}  // namespace drivescope
