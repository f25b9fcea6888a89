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
#include <limits>
#include <list>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "icn/random.hpp"
#include "icn/topology.hpp"
#include "icn/workload.hpp"

namespace icn {

struct CachedItem {
  ObjectId object = 0;
  std::uint64_t size = 0;

  bool operator==(const CachedItem&) const = default;
};

struct InsertResult {
  bool inserted = false;
  bool too_large = false;
  std::vector<ObjectId> evicted;  // in eviction order
};

/// Byte-bounded LRU content store.
class CacheStore {
 public:
  explicit CacheStore(std::uint64_t capacity_bytes = 0) : capacity_(capacity_bytes) {}

  /// Hit refreshes recency; a miss leaves the store untouched.
  bool access(ObjectId object);
  bool contains(ObjectId object) const { return index_.count(object) != 0; }

  /// Evicts least-recently-used entries until `size` fits, then inserts as
  /// most recent. Objects larger than the capacity are refused.
  InsertResult insert(ObjectId object, std::uint64_t size);

  std::uint64_t capacity() const noexcept { return capacity_; }
  std::uint64_t used() const noexcept { return used_; }
  std::size_t count() const noexcept { return order_.size(); }

  /// Least recently used first.
  std::vector<CachedItem> contents() const;

  bool invariant_holds() const;

 private:
  std::uint64_t capacity_;
  std::uint64_t used_ = 0;
  std::list<CachedItem> order_;  // front = most recent
  std::unordered_map<ObjectId, std::list<CachedItem>::iterator> index_;
};

enum class Placement { kLce, kCachedbit, kEdgeOnly, kCoreOnly };

std::string to_string(Placement p);
Placement parse_placement(const std::string& name);

inline constexpr std::uint32_t kUnlimitedRadius = std::numeric_limits<std::uint32_t>::max();

struct StrategyConfig {
  Placement placement = Placement::kLce;
  /// Betweenness quantile separating edge from core routers.
  double core_quantile = 0.5;
  std::uint32_t search_radius = 0;
  /// nullopt = unlimited copies.
  std::optional<std::uint32_t> copy_limit;

  void validate() const;
};

/// Global object -> holder bookkeeping, visible to placement and scoped
/// search only. Origin servers are never registered.
class CopyRegistry {
 public:
  void add(ObjectId object, NodeId node);
  void remove(ObjectId object, NodeId node);
  const std::set<NodeId>& holders(ObjectId object) const;
  std::size_t copies(ObjectId object) const { return holders(object).size(); }
  bool holds(ObjectId object, NodeId node) const { return holders(object).count(node) != 0; }

  const std::map<ObjectId, std::set<NodeId>>& entries() const noexcept { return entries_; }
  bool operator==(const CopyRegistry& other) const { return entries_ == other.entries_; }

 private:
  std::map<ObjectId, std::set<NodeId>> entries_;
};

/// Rebuilds a registry from the stores (index = NodeId).
CopyRegistry registry_from_stores(std::span<const CacheStore> stores);

/// Betweenness threshold splitting routers into edge (below) and core (at or
/// above). Only routers that can appear inside a shortest path (betweenness
/// > 0) count, and the quantile is taken over their distinct betweenness
/// values, i.e. over the tiers of equal centrality.
struct CoreEdgeSplit {
  double threshold = 0.0;

  bool is_core(double centrality) const { return centrality >= threshold; }
};

CoreEdgeSplit split_core_edge(const CentralityTable& centrality, std::span<const NodeId> routers,
                              double quantile);

/// Chooses where a delivered object is cached. `path_routers` lists the
/// caching routers on the delivery path, ordered from the serving node toward
/// the client, excluding the serving node and both endpoints. The result
/// keeps that order.
std::vector<NodeId> decide_placement(const StrategyConfig& strategy,
                                     std::span<const NodeId> path_routers, ObjectId object,
                                     const CentralityTable& centrality, const CoreEdgeSplit& split,
                                     const CopyRegistry& registry, Rng& rng);

struct Holder {
  NodeId node = 0;
  int distance = 0;

  bool operator==(const Holder&) const = default;
};

/// Nearest registered holder of `object` within `radius` hops of `from`
/// (lowest id on ties); radius 0 inspects `from` alone.
std::optional<Holder> scoped_search(const Graph& g, NodeId from, ObjectId object,
                                    std::uint32_t radius, const CopyRegistry& registry);

/// Same contract, answered from a precomputed hop table.
std::optional<Holder> scoped_search(HopDistances& hops, NodeId from, ObjectId object,
                                    std::uint32_t radius, const CopyRegistry& registry);

}  // namespace icn
