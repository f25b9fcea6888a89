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
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "icn/cache.hpp"
#include "icn/roles.hpp"
#include "icn/topology.hpp"
#include "icn/workload.hpp"

namespace icn {

struct SimConfig {
  std::shared_ptr<const Graph> graph;
  RoleAssignment roles;  // origin must be filled
  Catalog catalog;
  std::shared_ptr<const RequestStream> stream;
  StrategyConfig strategy;
  /// Per caching router; 0 disables caching (the footprint baseline).
  std::uint64_t cache_capacity_bytes = 0;
  double warmup_fraction = 0.25;
  /// Replayed with `seed`; must match how the stream was sampled.
  std::optional<AgingSchedule> aging;
  std::uint64_t seed = 0;
  /// Cache snapshots taken over the measured part of the stream.
  std::size_t epochs = 10;
  /// Computed from the graph when null.
  std::shared_ptr<const CentralityTable> centrality;
  /// Registry-vs-stores audit every N requests; 0 disables.
  std::size_t audit_interval = 4096;

  /// Throws on inconsistent ids, unreachable client/origin pairs, or bad
  /// parameters.
  void validate() const;
};

enum class Outcome { kCacheHit, kServerHit };

struct HitRecord {
  std::uint64_t seq = 0;
  NodeId client = 0;
  ObjectId object = 0;
  std::uint64_t size = 0;
  Outcome outcome = Outcome::kServerHit;
  NodeId serving_node = 0;
  /// Hops the data travelled to the client, detours included.
  int delivery_hops = 0;
  /// Hops from the client to the object's origin server.
  int origin_hops = 0;
  bool server_external = false;

  bool operator==(const HitRecord&) const = default;
};

struct SnapshotItem {
  ObjectId object = 0;
  std::uint64_t size = 0;
  double weight = 0.0;

  bool operator==(const SnapshotItem&) const = default;
};

struct NodeSnapshot {
  NodeId node = 0;
  std::vector<SnapshotItem> items;  // least recently used first

  bool operator==(const NodeSnapshot&) const = default;
};

/// Contents of every caching router at one instant.
struct CacheSnapshot {
  std::uint64_t requests_processed = 0;
  std::vector<NodeSnapshot> nodes;

  bool operator==(const CacheSnapshot&) const = default;
};

struct EventLog {
  std::vector<HitRecord> records;           // measured requests only
  std::vector<std::uint64_t> served_bytes;  // per node, measured requests only
  std::vector<CacheSnapshot> snapshots;
  std::vector<NodeId> caching_nodes;
  std::size_t warmup_requests = 0;

  bool operator==(const EventLog&) const = default;
};

/// Number of requests recorded after warmup: floor((1 - w) * n).
std::size_t measured_count(std::size_t stream_size, double warmup_fraction);

/// One simulation run. Owns every cache and the copy registry.
class Simulation {
 public:
  explicit Simulation(SimConfig config);

  /// Serves one request, places copies, and returns its outcome.
  HitRecord step(const Request& request);

  /// Processes the whole configured stream.
  EventLog run();

  CacheSnapshot snapshot() const;

  /// Throws `internal_error` when the registry disagrees with the stores or
  /// a store exceeds its capacity.
  void audit() const;

  const CopyRegistry& registry() const noexcept { return registry_; }
  std::span<const CacheStore> stores() const noexcept { return stores_; }
  const std::vector<NodeId>& caching_nodes() const noexcept { return caching_nodes_; }
  const CoreEdgeSplit& core_split() const noexcept { return split_; }
  const CentralityTable& centrality() const noexcept { return *centrality_; }
  const Catalog& current_catalog() const noexcept { return catalog_; }

 private:
  const std::vector<NodeId>& path(NodeId from, NodeId to);
  void place(ObjectId object, std::uint64_t size, const std::vector<NodeId>& delivery);

  SimConfig config_;
  std::shared_ptr<const CentralityTable> centrality_;
  Catalog catalog_;
  std::vector<bool> caching_;
  std::vector<NodeId> caching_nodes_;
  std::vector<CacheStore> stores_;
  CopyRegistry registry_;
  CoreEdgeSplit split_;
  HopDistances hops_;
  std::unordered_map<std::uint64_t, std::vector<NodeId>> paths_;
  Rng rng_;
  std::uint64_t processed_ = 0;
};

/// Runs the configured stream end to end.
EventLog run(const SimConfig& config);

CacheSnapshot snapshot_caches(const Simulation& sim);

}  // namespace icn
