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

#include "icn/roles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "icn/error.hpp"
#include "icn/random.hpp"

namespace icn {

bool RoleAssignment::is_client(NodeId v) const {
  return std::binary_search(clients.begin(), clients.end(), v);
}

bool RoleAssignment::is_server(NodeId v) const { return server_external.count(v) != 0; }

bool RoleAssignment::is_external(NodeId server) const {
  auto it = server_external.find(server);
  return it != server_external.end() && it->second;
}

void RoleAssignment::validate(const Graph& g) const {
  const auto n = g.node_count();
  if (!std::is_sorted(clients.begin(), clients.end()) ||
      std::adjacent_find(clients.begin(), clients.end()) != clients.end()) {
    throw Error(errc::kInvalidArgument, "client list must be strictly ascending");
  }
  if (client_weight.size() != clients.size()) {
    throw Error(errc::kInvalidArgument, "client weight count mismatch");
  }
  for (NodeId c : clients) {
    if (c >= n) throw Error(errc::kInvalidArgument, "client " + std::to_string(c) + " not in graph");
  }
  for (double w : client_weight) {
    if (!(w > 0.0)) throw Error(errc::kInvalidArgument, "client weights must be positive");
  }
  if (server_external.size() != servers.size()) {
    throw Error(errc::kInvalidArgument, "duplicate or unclassified server");
  }
  for (NodeId s : servers) {
    if (s >= n) throw Error(errc::kInvalidArgument, "server " + std::to_string(s) + " not in graph");
    if (is_client(s)) {
      throw Error(errc::kInvalidArgument, "node " + std::to_string(s) + " is both client and server");
    }
  }
  for (NodeId o : origin) {
    if (!is_server(o)) throw Error(errc::kInvalidArgument, "object origin is not a server");
  }
}

std::size_t default_server_count(std::size_t node_count) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.05 * static_cast<double>(node_count))));
}

double gravity_weight(const Graph& g, NodeId v) {
  if (auto w = g.weight_override(v)) return *w;
  return static_cast<double>(g.degree(v));
}

double median_degree(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n == 0) return 0.0;
  std::vector<std::size_t> deg(n);
  for (NodeId v = 0; v < n; ++v) deg[v] = g.degree(v);
  std::sort(deg.begin(), deg.end());
  if (n % 2 == 1) return static_cast<double>(deg[n / 2]);
  return 0.5 * static_cast<double>(deg[n / 2 - 1] + deg[n / 2]);
}

namespace {

std::vector<NodeId> pick_servers(const Graph& g, std::size_t count) {
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
  order.resize(count);
  return order;
}

}  // namespace

RoleAssignment assign_roles(const Graph& g, const RoleOptions& options, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  if (options.n_servers > n) {
    throw Error(errc::kInvalidArgument, "n_servers (" + std::to_string(options.n_servers) +
                                            ") exceeds node count (" + std::to_string(n) + ")");
  }
  if (!(options.client_fraction >= 0.0 && options.client_fraction <= 1.0)) {
    throw Error(errc::kInvalidArgument, "client_fraction must lie in [0, 1]");
  }
  if (options.internal_servers > options.n_servers) {
    throw Error(errc::kInvalidArgument, "internal_servers exceeds n_servers");
  }

  auto servers = pick_servers(g, options.n_servers);
  std::vector<bool> is_server(n, false);
  for (NodeId s : servers) is_server[s] = true;

  const double threshold = options.edge_degree_threshold.value_or(median_degree(g));
  std::vector<NodeId> eligible;
  for (NodeId v = 0; v < n; ++v) {
    if (!is_server[v] && static_cast<double>(g.degree(v)) <= threshold) eligible.push_back(v);
  }
  if (eligible.empty()) throw Error(errc::kNoEdgeRouters, "no eligible edge routers for clients");

  const auto want = static_cast<std::size_t>(
      std::llround(options.client_fraction * static_cast<double>(eligible.size())));

  // Sequential weighted draws without replacement.
  std::vector<double> weight(eligible.size());
  for (std::size_t i = 0; i < eligible.size(); ++i) weight[i] = gravity_weight(g, eligible[i]);
  Rng rng(seed);
  std::vector<NodeId> clients;
  clients.reserve(want);
  std::vector<bool> taken(eligible.size(), false);
  for (std::size_t round = 0; round < want; ++round) {
    double total = 0.0;
    for (std::size_t i = 0; i < eligible.size(); ++i) {
      if (!taken[i]) total += weight[i];
    }
    double target = rng.uniform() * total;
    std::size_t pick = eligible.size();
    for (std::size_t i = 0; i < eligible.size(); ++i) {
      if (taken[i]) continue;
      pick = i;
      if (target < weight[i]) break;
      target -= weight[i];
    }
    taken[pick] = true;
    clients.push_back(eligible[pick]);
  }
  std::sort(clients.begin(), clients.end());
  return make_roles(g, std::move(clients), std::move(servers), options.internal_servers);
}

RoleAssignment make_roles(const Graph& g, std::vector<NodeId> clients, std::vector<NodeId> servers,
                          std::size_t internal_servers) {
  RoleAssignment roles;
  std::sort(clients.begin(), clients.end());
  roles.clients = std::move(clients);
  for (NodeId c : roles.clients) {
    if (c >= g.node_count()) throw Error(errc::kInvalidArgument, "client outside graph");
    roles.client_weight.push_back(gravity_weight(g, c));
  }
  roles.servers = std::move(servers);
  for (std::size_t i = 0; i < roles.servers.size(); ++i) {
    roles.server_external[roles.servers[i]] = i >= internal_servers;
  }
  roles.validate(g);
  return roles;
}

}  // namespace icn
