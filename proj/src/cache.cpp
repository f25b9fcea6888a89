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

#include "icn/cache.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "icn/error.hpp"

namespace icn {

bool CacheStore::access(ObjectId object) {
  auto it = index_.find(object);
  if (it == index_.end()) return false;
  order_.splice(order_.begin(), order_, it->second);
  return true;
}

InsertResult CacheStore::insert(ObjectId object, std::uint64_t size) {
  InsertResult result;
  if (size > capacity_) {
    result.too_large = true;
    return result;
  }
  if (access(object)) return result;
  while (used_ + size > capacity_) {
    const CachedItem victim = order_.back();
    order_.pop_back();
    index_.erase(victim.object);
    used_ -= victim.size;
    result.evicted.push_back(victim.object);
  }
  order_.push_front({object, size});
  index_[object] = order_.begin();
  used_ += size;
  result.inserted = true;
  return result;
}

std::vector<CachedItem> CacheStore::contents() const { return {order_.rbegin(), order_.rend()}; }

bool CacheStore::invariant_holds() const {
  std::uint64_t sum = 0;
  for (const auto& item : order_) sum += item.size;
  return sum == used_ && used_ <= capacity_ && index_.size() == order_.size();
}

std::string to_string(Placement p) {
  switch (p) {
    case Placement::kLce:
      return "LCE";
    case Placement::kCachedbit:
      return "Cachedbit";
    case Placement::kEdgeOnly:
      return "EdgeOnly";
    case Placement::kCoreOnly:
      return "CoreOnly";
  }
  return "?";
}

Placement parse_placement(const std::string& name) {
  std::string lower;
  for (char c : name) {
    if (c == '_' || c == '-') continue;
    lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (lower == "lce") return Placement::kLce;
  if (lower == "cachedbit") return Placement::kCachedbit;
  if (lower == "edgeonly" || lower == "edge") return Placement::kEdgeOnly;
  if (lower == "coreonly" || lower == "core") return Placement::kCoreOnly;
  throw Error(errc::kConfig, "unknown placement strategy '" + name + "'");
}

void StrategyConfig::validate() const {
  if (!(core_quantile > 0.0 && core_quantile < 1.0)) {
    throw Error(errc::kInvalidArgument, "core_quantile must lie in (0, 1)");
  }
  if (copy_limit && *copy_limit < 1) throw Error(errc::kInvalidArgument, "copy_limit must be >= 1");
}

namespace {
const std::set<NodeId> kNoHolders;
}

void CopyRegistry::add(ObjectId object, NodeId node) { entries_[object].insert(node); }

void CopyRegistry::remove(ObjectId object, NodeId node) {
  auto it = entries_.find(object);
  if (it == entries_.end()) return;
  it->second.erase(node);
  if (it->second.empty()) entries_.erase(it);
}

const std::set<NodeId>& CopyRegistry::holders(ObjectId object) const {
  auto it = entries_.find(object);
  return it == entries_.end() ? kNoHolders : it->second;
}

CopyRegistry registry_from_stores(std::span<const CacheStore> stores) {
  CopyRegistry registry;
  for (std::size_t v = 0; v < stores.size(); ++v) {
    for (const auto& item : stores[v].contents()) registry.add(item.object, static_cast<NodeId>(v));
  }
  return registry;
}

CoreEdgeSplit split_core_edge(const CentralityTable& centrality, std::span<const NodeId> routers,
                              double quantile) {
  std::vector<double> tiers;
  for (NodeId v : routers) {
    if (centrality.at(v) > 0.0) tiers.push_back(centrality.at(v));
  }
  std::sort(tiers.begin(), tiers.end());
  tiers.erase(std::unique(tiers.begin(), tiers.end()), tiers.end());
  if (tiers.empty()) return {0.0};
  // Linear interpolation between order statistics.
  const double pos = quantile * static_cast<double>(tiers.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, tiers.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return {tiers[lo] + frac * (tiers[hi] - tiers[lo])};
}

std::vector<NodeId> decide_placement(const StrategyConfig& strategy,
                                     std::span<const NodeId> path_routers, ObjectId object,
                                     const CentralityTable& centrality, const CoreEdgeSplit& split,
                                     const CopyRegistry& registry, Rng& rng) {
  std::vector<NodeId> chosen;
  if (path_routers.empty()) return chosen;
  switch (strategy.placement) {
    case Placement::kLce:
      chosen.assign(path_routers.begin(), path_routers.end());
      break;
    case Placement::kCachedbit:
      chosen.push_back(path_routers[rng.below(path_routers.size())]);
      break;
    case Placement::kEdgeOnly:
      for (NodeId v : path_routers) {
        if (!split.is_core(centrality.at(v))) chosen.push_back(v);
      }
      break;
    case Placement::kCoreOnly:
      for (NodeId v : path_routers) {
        if (split.is_core(centrality.at(v))) chosen.push_back(v);
      }
      break;
  }
  std::erase_if(chosen, [&](NodeId v) { return registry.holds(object, v); });
  if (strategy.copy_limit) {
    const std::size_t have = registry.copies(object);
    const std::size_t room = have >= *strategy.copy_limit ? 0 : *strategy.copy_limit - have;
    // Candidates nearest the client sit at the back; drop from the front.
    if (chosen.size() > room) chosen.erase(chosen.begin(), chosen.end() - static_cast<std::ptrdiff_t>(room));
  }
  return chosen;
}

std::optional<Holder> scoped_search(const Graph& g, NodeId from, ObjectId object,
                                    std::uint32_t radius, const CopyRegistry& registry) {
  const auto& holders = registry.holders(object);
  if (holders.empty()) return std::nullopt;
  if (holders.count(from)) return Holder{from, 0};
  std::vector<int> dist(g.node_count(), kUnreachable);
  std::vector<NodeId> layer{from};
  dist.at(from) = 0;
  for (std::uint32_t depth = 1; depth <= radius && !layer.empty(); ++depth) {
    std::vector<NodeId> next;
    for (NodeId v : layer) {
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] == kUnreachable) {
          dist[w] = static_cast<int>(depth);
          next.push_back(w);
        }
      }
    }
    std::optional<NodeId> best;
    for (NodeId w : next) {
      if (holders.count(w) && (!best || w < *best)) best = w;
    }
    if (best) return Holder{*best, static_cast<int>(depth)};
    layer = std::move(next);
  }
  return std::nullopt;
}

std::optional<Holder> scoped_search(HopDistances& hops, NodeId from, ObjectId object,
                                    std::uint32_t radius, const CopyRegistry& registry) {
  const auto& holders = registry.holders(object);
  if (holders.empty()) return std::nullopt;
  const auto& row = hops.from(from);
  std::optional<Holder> best;
  for (NodeId h : holders) {  // ascending, so strict < keeps the lowest id
    const int d = row.at(h);
    if (d == kUnreachable || static_cast<std::uint64_t>(d) > radius) continue;
    if (!best || d < best->distance) best = Holder{h, d};
  }
  return best;
}

}  // namespace icn
