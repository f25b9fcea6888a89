// Copyright 2026 The icncache Authors.
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

#include "icn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "icn/error.hpp"

namespace icn {

namespace {

void require_records(std::span<const HitRecord> log, const char* metric) {
  if (log.empty()) throw Error(errc::kEmptyLog, std::string(metric) + " of an empty log is undefined");
}

}  // namespace

HitRates hit_and_byte_hit_rate(std::span<const HitRecord> log) {
  require_records(log, "hit rate");
  std::size_t hits = 0;
  double hit_bytes = 0.0;
  double all_bytes = 0.0;
  for (const auto& r : log) {
    all_bytes += static_cast<double>(r.size);
    if (r.outcome == Outcome::kCacheHit) {
      ++hits;
      hit_bytes += static_cast<double>(r.size);
    }
  }
  return {static_cast<double>(hits) / static_cast<double>(log.size()), hit_bytes / all_bytes};
}

double costly_miss_byte_rate(std::span<const HitRecord> log) {
  require_records(log, "costly miss byte rate");
  double costly = 0.0;
  double all_bytes = 0.0;
  for (const auto& r : log) {
    all_bytes += static_cast<double>(r.size);
    if (r.outcome == Outcome::kServerHit && r.server_external) costly += static_cast<double>(r.size);
  }
  return costly / all_bytes;
}

std::string MissCost::describe() const {
  if (is_actual()) return "actual";
  std::ostringstream out;
  out << *hops;
  return out.str();
}

double average_hops(std::span<const HitRecord> log, MissCost miss_cost) {
  require_records(log, "average hops");
  if (miss_cost.hops && !(*miss_cost.hops >= 0.0)) {
    throw Error(errc::kInvalidArgument, "miss cost must be non-negative");
  }
  double total = 0.0;
  for (const auto& r : log) {
    if (r.outcome == Outcome::kCacheHit) {
      total += r.delivery_hops;
    } else {
      total += miss_cost.hops.value_or(static_cast<double>(r.origin_hops));
    }
  }
  return total / static_cast<double>(log.size());
}

std::uint64_t footprint(std::span<const HitRecord> log) {
  std::uint64_t total = 0;
  for (const auto& r : log) total += r.size * static_cast<std::uint64_t>(r.delivery_hops);
  return total;
}

double footprint_reduction(double x, const BaselineFootprint& baseline) {
  if (!(baseline.x_theta > 0.0)) {
    throw Error(errc::kZeroBaseline, "footprint baseline must be positive");
  }
  return 1.0 - x / baseline.x_theta;
}

AffineMap rebase_map(double y_beta) {
  if (!(y_beta < 1.0)) {
    throw Error(errc::kDegenerateBaseline,
                "baseline strategy has no footprint left (reduction >= 1); cannot rebase");
  }
  const double a = 1.0 / (1.0 - y_beta);
  return {a, 1.0 - a};
}

std::vector<double> rebase(std::span<const double> y_values, double y_beta) {
  rebase_map(y_beta);  // validates
  // a*y + b == (y - y_beta) / (1 - y_beta); this form keeps the sign of the
  // difference exact, so the new baseline lands on 0 and no pair swaps.
  const double scale = 1.0 - y_beta;
  std::vector<double> out;
  out.reserve(y_values.size());
  for (double y : y_values) out.push_back((y - y_beta) / scale);
  return out;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(errc::kInvalidArgument, "pearson needs equal-length vectors");
  if (x.size() < 2) throw Error(errc::kUndefinedCorrelation, "correlation needs at least two points");
  auto constant = [](std::span<const double> v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo == *hi;
  };
  if (constant(x) || constant(y)) {
    throw Error(errc::kUndefinedCorrelation, "zero variance; correlation is undefined");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw Error(errc::kUndefinedCorrelation, "zero variance; correlation is undefined");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double coupling_factor(std::span<const CacheSnapshot> snapshots, const CentralityTable& centrality,
                       MassMode mode) {
  if (snapshots.empty()) throw Error(errc::kInvalidArgument, "coupling factor needs a snapshot");
  std::map<NodeId, double> mass;
  for (const auto& snap : snapshots) {
    for (const auto& node : snap.nodes) {
      if (centrality.at(node.node) <= 0.0) continue;
      double held = 0.0;
      for (const auto& item : node.items) {
        held += mode == MassMode::kWeight ? item.weight : item.weight * static_cast<double>(item.size);
      }
      mass[node.node] += held;
    }
  }
  if (mass.size() < 2) {
    throw Error(errc::kUndefinedCorrelation, "coupling factor needs at least two transit caches");
  }
  std::vector<double> m;
  std::vector<double> b;
  for (const auto& [node, total] : mass) {
    m.push_back(total / static_cast<double>(snapshots.size()));
    b.push_back(centrality.at(node));
  }
  return pearson(m, b);
}

MetricsReport compute_report(const EventLog& log, const BaselineFootprint& baseline,
                             const CentralityTable& centrality, MissCost miss_cost, MassMode mass) {
  MetricsReport report;
  const auto rates = hit_and_byte_hit_rate(log.records);
  report.hit_rate = rates.hit_rate;
  report.byte_hit_rate = rates.byte_hit_rate;
  report.costly_miss_byte_rate = costly_miss_byte_rate(log.records);
  report.miss_cost = miss_cost;
  report.avg_hops = average_hops(log.records, miss_cost);
  report.footprint = footprint(log.records);
  report.footprint_reduction = footprint_reduction(static_cast<double>(report.footprint), baseline);
  try {
    report.coupling_factor = coupling_factor(log.snapshots, centrality, mass);
  } catch (const Error& e) {
    if (e.code() != errc::kUndefinedCorrelation) throw;
  }
  return report;
}

}  // namespace icn
