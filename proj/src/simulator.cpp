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

#include "icn/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "icn/error.hpp"

namespace icn {

void SimConfig::validate() const {
  if (!graph) throw Error(errc::kConfig, "simulation needs a graph");
  if (!stream) throw Error(errc::kConfig, "simulation needs a request stream");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) {
    throw Error(errc::kInvalidArgument, "warmup_fraction must lie in [0, 1)");
  }
  if (epochs < 1) throw Error(errc::kInvalidArgument, "epochs must be >= 1");
  strategy.validate();
  if (aging) aging->validate();
  catalog.validate();
  roles.validate(*graph);
  if (roles.origin.size() != catalog.size()) {
    throw Error(errc::kConfig, "every object needs an origin server");
  }
  if (centrality && centrality->size() != graph->node_count()) {
    throw Error(errc::kConfig, "centrality table does not match the graph");
  }
  const auto& label = graph->component_labels();
  for (NodeId c : roles.clients) {
    for (NodeId s : roles.servers) {
      if (label[c] != label[s]) {
        throw Error(errc::kDisconnected, "client " + std::to_string(c) + " cannot reach server " +
                                             std::to_string(s));
      }
    }
  }
  for (const auto& r : *stream) {
    if (!roles.is_client(r.client)) {
      throw Error(errc::kConfig, "request " + std::to_string(r.seq) + " comes from a non-client node");
    }
    if (r.object >= catalog.size()) {
      throw Error(errc::kConfig, "request " + std::to_string(r.seq) + " names an unknown object");
    }
  }
}

std::size_t measured_count(std::size_t stream_size, double warmup_fraction) {
  return static_cast<std::size_t>(
      std::floor((1.0 - warmup_fraction) * static_cast<double>(stream_size) + 1e-9));
}

namespace {

std::shared_ptr<const CentralityTable> centrality_for(const SimConfig& config) {
  config.validate();
  if (config.centrality) return config.centrality;
  return std::make_shared<const CentralityTable>(betweenness_by_component(*config.graph));
}

}  // namespace

Simulation::Simulation(SimConfig config)
    : config_(std::move(config)),
      centrality_(centrality_for(config_)),
      catalog_(config_.catalog),
      hops_(*config_.graph),
      rng_(derive_seed(config_.seed, 0x91ace)) {
  const std::size_t n = config_.graph->node_count();
  caching_.assign(n, false);
  stores_.reserve(n);
  for (NodeId v = 0; v < n; ++v) {
    const bool cache = !config_.roles.is_client(v) && !config_.roles.is_server(v);
    caching_[v] = cache;
    if (cache) caching_nodes_.push_back(v);
    stores_.emplace_back(cache ? config_.cache_capacity_bytes : 0);
  }
  split_ = split_core_edge(*centrality_, caching_nodes_, config_.strategy.core_quantile);
}

const std::vector<NodeId>& Simulation::path(NodeId from, NodeId to) {
  const std::uint64_t key = (static_cast<std::uint64_t>(from) << 32) | to;
  auto it = paths_.find(key);
  if (it == paths_.end()) it = paths_.emplace(key, shortest_path(*config_.graph, from, to)).first;
  return it->second;
}

HitRecord Simulation::step(const Request& request) {
  const auto& entry = catalog_.at(request.object);
  const NodeId origin = config_.roles.origin.at(request.object);
  // Copy: path() may rehash while the detour is looked up below.
  const std::vector<NodeId> route = path(request.client, origin);
  const std::uint32_t radius = config_.strategy.search_radius;

  HitRecord rec;
  rec.seq = request.seq;
  rec.client = request.client;
  rec.object = request.object;
  rec.size = entry.size;
  rec.origin_hops = static_cast<int>(route.size()) - 1;

  // Delivery path, serving node first, client last.
  std::vector<NodeId> delivery;
  for (std::size_t j = 1; j + 1 < route.size(); ++j) {
    const NodeId router = route[j];
    if (!caching_[router]) continue;
    if (stores_[router].access(request.object)) {
      rec.outcome = Outcome::kCacheHit;
      rec.serving_node = router;
      rec.delivery_hops = static_cast<int>(j);
      delivery.assign(route.rend() - static_cast<std::ptrdiff_t>(j) - 1, route.rend());
      break;
    }
    if (radius == 0) continue;
    if (auto holder = scoped_search(hops_, router, request.object, radius, registry_)) {
      stores_[holder->node].access(request.object);
      rec.outcome = Outcome::kCacheHit;
      rec.serving_node = holder->node;
      rec.delivery_hops = static_cast<int>(j) + holder->distance;
      delivery = path(holder->node, router);
      delivery.insert(delivery.end(), route.rend() - static_cast<std::ptrdiff_t>(j), route.rend());
      break;
    }
  }
  if (delivery.empty()) {
    rec.outcome = Outcome::kServerHit;
    rec.serving_node = origin;
    rec.delivery_hops = rec.origin_hops;
    rec.server_external = config_.roles.is_external(origin);
    delivery.assign(route.rbegin(), route.rend());
  }

  place(request.object, entry.size, delivery);
  ++processed_;

#ifndef NDEBUG
  for (NodeId v : delivery) {
    if (!stores_[v].invariant_holds()) throw Error(errc::kInternal, "cache capacity invariant broken");
  }
#endif
  if (config_.audit_interval != 0 && processed_ % config_.audit_interval == 0) audit();
  return rec;
}

void Simulation::place(ObjectId object, std::uint64_t size, const std::vector<NodeId>& delivery) {
  if (config_.cache_capacity_bytes == 0 || delivery.size() < 3) return;
  std::vector<NodeId> candidates;
  for (std::size_t i = 1; i + 1 < delivery.size(); ++i) {
    const NodeId v = delivery[i];
    if (caching_[v] && !registry_.holds(object, v)) candidates.push_back(v);
  }
  const auto chosen = decide_placement(config_.strategy, candidates, object, *centrality_, split_,
                                       registry_, rng_);
  for (NodeId v : chosen) {
    auto result = stores_[v].insert(object, size);
    for (ObjectId gone : result.evicted) registry_.remove(gone, v);
    if (result.inserted) registry_.add(object, v);
  }
}

CacheSnapshot Simulation::snapshot() const {
  CacheSnapshot snap;
  snap.requests_processed = processed_;
  snap.nodes.reserve(caching_nodes_.size());
  for (NodeId v : caching_nodes_) {
    NodeSnapshot node{v, {}};
    for (const auto& item : stores_[v].contents()) {
      node.items.push_back({item.object, item.size, catalog_.at(item.object).weight});
    }
    snap.nodes.push_back(std::move(node));
  }
  return snap;
}

void Simulation::audit() const {
  for (const auto& store : stores_) {
    if (!store.invariant_holds()) throw Error(errc::kInternal, "cache capacity invariant broken");
  }
  if (!(registry_from_stores(stores_) == registry_)) {
    throw Error(errc::kInternal, "copy registry diverged from cache contents");
  }
  if (config_.strategy.copy_limit) {
    for (const auto& [object, holders] : registry_.entries()) {
      if (holders.size() > *config_.strategy.copy_limit) {
        throw Error(errc::kInternal, "copy limit exceeded for object " + std::to_string(object));
      }
    }
  }
}

EventLog Simulation::run() {
  const auto& stream = *config_.stream;
  const std::size_t total = stream.size();
  const std::size_t measured = measured_count(total, config_.warmup_fraction);
  const std::size_t warmup = total - measured;

  // Snapshot after request counts warmup + ceil(k * measured / epochs).
  std::vector<std::size_t> marks;
  for (std::size_t k = 1; k <= config_.epochs; ++k) {
    marks.push_back(warmup + (k * measured + config_.epochs - 1) / config_.epochs);
  }
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

  EventLog log;
  log.caching_nodes = caching_nodes_;
  log.warmup_requests = warmup;
  log.served_bytes.assign(config_.graph->node_count(), 0);
  log.records.reserve(measured);

  std::size_t next_mark = 0;
  while (next_mark < marks.size() && marks[next_mark] <= processed_) ++next_mark;
  for (std::size_t i = 0; i < total; ++i) {
    if (config_.aging && i > 0 && i % config_.aging->interval == 0) {
      catalog_ = apply_aging(catalog_, *config_.aging, i / config_.aging->interval, config_.seed);
    }
    HitRecord rec = step(stream[i]);
    if (i >= warmup) {
      log.served_bytes[rec.serving_node] += rec.size;
      log.records.push_back(rec);
    }
    while (next_mark < marks.size() && marks[next_mark] <= processed_) {
      log.snapshots.push_back(snapshot());
      ++next_mark;
    }
  }
  if (log.snapshots.empty()) log.snapshots.push_back(snapshot());
  return log;
}

EventLog run(const SimConfig& config) {
  Simulation sim(config);
  return sim.run();
}

CacheSnapshot snapshot_caches(const Simulation& sim) { return sim.snapshot(); }

}  // namespace icn
