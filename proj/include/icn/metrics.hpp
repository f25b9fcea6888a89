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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "icn/simulator.hpp"
#include "icn/topology.hpp"

namespace icn {

struct HitRates {
  double hit_rate = 0.0;
  double byte_hit_rate = 0.0;
};

/// The whole network of caches counted as one aggregate cache.
HitRates hit_and_byte_hit_rate(std::span<const HitRecord> log);

/// Bytes fetched from external origin servers over all requested bytes.
/// Misses served by in-network (internal) servers cost nothing here.
double costly_miss_byte_rate(std::span<const HitRecord> log);

/// Hop count charged to a miss: a fixed value or the recorded origin distance.
struct MissCost {
  std::optional<double> hops;  // nullopt = actual origin_hops

  static MissCost actual() { return {}; }
  static MissCost fixed(double h) { return {h}; }
  bool is_actual() const noexcept { return !hops.has_value(); }
  std::string describe() const;
};

double average_hops(std::span<const HitRecord> log, MissCost miss_cost);

/// Sum of size * delivery_hops (bytes x hops). Empty log gives 0.
std::uint64_t footprint(std::span<const HitRecord> log);

/// Footprint of the caching-disabled run over the same stream.
struct BaselineFootprint {
  double x_theta = 0.0;
};

/// 1 - x / x_theta.
double footprint_reduction(double x, const BaselineFootprint& baseline);

/// y' = a*y + b, moving the zero of footprint reduction onto another strategy.
struct AffineMap {
  double a = 1.0;
  double b = 0.0;

  double operator()(double y) const { return a * y + b; }
  AffineMap inverse() const { return {1.0 / a, -b / a}; }
};

/// Map that re-expresses reductions relative to a strategy whose reduction
/// against no caching is y_beta: a = 1/(1 - y_beta), b = 1 - a.
/// Throws `degenerate_baseline` unless y_beta < 1.
AffineMap rebase_map(double y_beta);

std::vector<double> rebase(std::span<const double> y_values, double y_beta);

enum class MassMode { kWeightTimesSize, kWeight };

/// Pearson correlation of x and y. Throws `undefined_correlation` when
/// either vector is constant or shorter than 2.
double pearson(std::span<const double> x, std::span<const double> y);

/// Pearson correlation, across caching routers, between the popularity mass
/// each router holds (averaged over snapshots) and its betweenness. Routers
/// with zero betweenness never sit inside a shortest path, cannot receive
/// copies, and are left out.
double coupling_factor(std::span<const CacheSnapshot> snapshots, const CentralityTable& centrality,
                       MassMode mode = MassMode::kWeightTimesSize);

struct MetricsReport {
  double hit_rate = 0.0;
  double byte_hit_rate = 0.0;
  double costly_miss_byte_rate = 0.0;
  double avg_hops = 0.0;
  MissCost miss_cost;
  std::uint64_t footprint = 0;
  double footprint_reduction = 0.0;
  /// nullopt when the correlation is undefined (e.g. caching disabled).
  std::optional<double> coupling_factor;
};

MetricsReport compute_report(const EventLog& log, const BaselineFootprint& baseline,
                             const CentralityTable& centrality, MissCost miss_cost = {},
                             MassMode mass = MassMode::kWeightTimesSize);

}  // namespace icn
