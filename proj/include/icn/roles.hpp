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
#include <map>
#include <optional>
#include <vector>

#include "icn/topology.hpp"

namespace icn {

using ObjectId = std::uint32_t;

struct RoleOptions {
  std::size_t n_servers = 1;
  /// Fraction of eligible edge routers that become clients.
  double client_fraction = 0.25;
  /// Nodes with degree <= threshold are edge routers; median degree if unset.
  std::optional<double> edge_degree_threshold;
  /// The highest-ranked servers are treated as in-network (no transit cost)
  /// content sources; the rest are external.
  std::size_t internal_servers = 0;
};

/// Which nodes act as clients and servers, and where each object originates.
/// Nodes that are neither are caching routers.
struct RoleAssignment {
  std::vector<NodeId> clients;        // ascending
  std::vector<double> client_weight;  // gravity weight, parallel to `clients`
  std::vector<NodeId> servers;        // highest degree first
  std::map<NodeId, bool> server_external;
  std::vector<NodeId> origin;         // indexed by ObjectId

  bool is_client(NodeId v) const;
  bool is_server(NodeId v) const;
  bool is_external(NodeId server) const;

  /// Throws `invalid_argument` if any invariant is broken for this graph.
  void validate(const Graph& g) const;
};

/// max(1, round(0.05 * n)).
std::size_t default_server_count(std::size_t node_count);

/// Node-level gravity weight: the override from the topology file or degree.
double gravity_weight(const Graph& g, NodeId v);

double median_degree(const Graph& g);

/// Servers are the n_servers highest-degree nodes (lowest id on ties); clients
/// are drawn without replacement from the remaining edge routers with
/// probability proportional to gravity weight. `origin` is left empty until
/// objects are known (see assign_origins).
RoleAssignment assign_roles(const Graph& g, const RoleOptions& options, std::uint64_t seed);

/// Builds an assignment from explicit node lists. Client weights come from
/// gravity_weight; the first `internal_servers` servers are internal.
RoleAssignment make_roles(const Graph& g, std::vector<NodeId> clients, std::vector<NodeId> servers,
                          std::size_t internal_servers = 0);

}  // namespace icn
