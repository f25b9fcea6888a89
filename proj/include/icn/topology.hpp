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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace icn {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Undirected, unweighted router graph with dense node ids 0..n-1.
///
/// Adjacency lists are kept sorted so every traversal that breaks ties by
/// lowest NodeId can simply take the first candidate. A disconnected graph is
/// accepted and carries a warning; operations that need a path between two
/// components raise `disconnected_graph` or `unreachable`.
class Graph {
 public:
  Graph() = default;

  /// Edges may be given in any order and orientation; duplicates collapse.
  /// Throws `invalid_argument` on self-loops or ids >= node_count.
  Graph(std::size_t node_count, std::span<const Edge> edges);

  std::size_t node_count() const noexcept { return adjacency_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Edges as (low, high) pairs in lexicographic order.
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const NodeId> neighbors(NodeId v) const { return adjacency_.at(v); }
  std::size_t degree(NodeId v) const { return adjacency_.at(v).size(); }
  bool has_edge(NodeId a, NodeId b) const;

  std::size_t component_count() const noexcept { return component_count_; }
  bool connected() const noexcept { return component_count_ <= 1; }
  /// Component label per node; labels are numbered by lowest member id.
  const std::vector<std::uint32_t>& component_labels() const noexcept { return component_; }
  /// Throws `disconnected_graph` listing the members of every component.
  void require_connected() const;

  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// Node id as it appeared in the source file (identity for generated graphs).
  std::uint64_t source_id(NodeId v) const { return source_ids_.empty() ? v : source_ids_.at(v); }
  void set_source_ids(std::vector<std::uint64_t> ids);

  /// Gravity-weight override from `node <id> weight <w>` lines.
  std::optional<double> weight_override(NodeId v) const;
  void set_weight_override(NodeId v, double weight);

 private:
  void compute_components();

  std::vector<std::vector<NodeId>> adjacency_;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> component_;
  std::size_t component_count_ = 0;
  std::vector<std::string> warnings_;
  std::vector<std::uint64_t> source_ids_;
  std::vector<std::optional<double>> weights_;
};

/// Parses the edge-list format: one `a b` pair per line, `#` comments, blank
/// lines, and optional `node <id> weight <w>` lines. Ids are compacted to
/// 0..n-1 in first-appearance order.
Graph load_topology(std::string_view text);
Graph load_topology_file(const std::filesystem::path& path);

/// Preferential attachment from a complete seed graph on m+1 nodes.
Graph generate_ba(std::size_t n, std::size_t m, std::uint64_t seed);

/// Complete `branching`-ary tree with `depth` levels below the root, numbered
/// breadth-first (root 0).
Graph make_tree(std::size_t branching, std::size_t depth);
Graph make_path(std::size_t n);
/// Node 0 is the hub.
Graph make_star(std::size_t n);
Graph make_cycle(std::size_t n);

inline constexpr int kUnreachable = -1;

/// Hop distance from `source` to every node, kUnreachable where no path.
std::vector<int> bfs_distances(const Graph& g, NodeId source);

/// BFS shortest path a..b inclusive. Walking back from b, the lowest-id
/// predecessor one hop closer to a is taken at every step.
std::vector<NodeId> shortest_path(const Graph& g, NodeId a, NodeId b);

/// Lazily filled all-pairs hop table. Not thread-safe; one per simulation.
class HopDistances {
 public:
  explicit HopDistances(const Graph& g) : graph_(&g), rows_(g.node_count()) {}

  const std::vector<int>& from(NodeId source);
  int between(NodeId a, NodeId b) { return from(a).at(b); }

 private:
  const Graph* graph_;
  std::vector<std::vector<int>> rows_;
};

/// Unnormalized betweenness: for every unordered pair {s,t} with s != t != v,
/// the fraction of shortest s-t paths that pass through v.
struct CentralityTable {
  std::vector<double> values;

  double at(NodeId v) const { return values.at(v); }
  std::size_t size() const noexcept { return values.size(); }
};

/// Throws `disconnected_graph` naming the components.
CentralityTable betweenness(const Graph& g);

/// Same accumulation, with pairs in different components contributing nothing.
CentralityTable betweenness_by_component(const Graph& g);

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Least-squares line through log10(k), log10(P[degree >= k]) for the degrees
/// k in [k_min, k_max] that occur in the graph.
PowerLawFit fit_degree_ccdf(const Graph& g, std::size_t k_min, std::size_t k_max);

}  // namespace icn
