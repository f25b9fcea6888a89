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

#include "icn/topology.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "icn/error.hpp"
#include "icn/random.hpp"

namespace icn {

Graph::Graph(std::size_t node_count, std::span<const Edge> edges) : adjacency_(node_count) {
  edges_.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a >= node_count || b >= node_count) {
      throw Error(errc::kInvalidArgument, "edge (" + std::to_string(a) + "," + std::to_string(b) +
                                              ") references a node outside 0.." +
                                              std::to_string(node_count));
    }
    if (a == b) throw Error(errc::kInvalidArgument, "self-loop at node " + std::to_string(a));
    edges_.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (auto [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
  compute_components();
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  const auto& list = adjacency_.at(a);
  return std::binary_search(list.begin(), list.end(), b);
}

void Graph::compute_components() {
  const std::uint32_t unset = UINT32_MAX;
  component_.assign(node_count(), unset);
  component_count_ = 0;
  std::vector<NodeId> stack;
  for (NodeId root = 0; root < node_count(); ++root) {
    if (component_[root] != unset) continue;
    const auto label = static_cast<std::uint32_t>(component_count_++);
    component_[root] = label;
    stack.push_back(root);
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (NodeId w : adjacency_[v]) {
        if (component_[w] == unset) {
          component_[w] = label;
          stack.push_back(w);
        }
      }
    }
  }
  warnings_.clear();
  if (component_count_ > 1) {
    warnings_.push_back("graph is disconnected: " + std::to_string(component_count_) +
                        " components");
  }
}

void Graph::require_connected() const {
  if (connected()) return;
  std::vector<std::vector<NodeId>> members(component_count_);
  for (NodeId v = 0; v < node_count(); ++v) members[component_[v]].push_back(v);
  std::ostringstream msg;
  msg << "graph is disconnected (" << component_count_ << " components):";
  for (const auto& comp : members) {
    msg << " {";
    const std::size_t shown = std::min<std::size_t>(comp.size(), 8);
    for (std::size_t i = 0; i < shown; ++i) msg << (i ? "," : "") << comp[i];
    if (comp.size() > shown) msg << ",... (" << comp.size() << " nodes)";
    msg << "}";
  }
  throw Error(errc::kDisconnected, msg.str());
}

void Graph::set_source_ids(std::vector<std::uint64_t> ids) {
  if (ids.size() != node_count()) throw Error(errc::kInvalidArgument, "source id count mismatch");
  source_ids_ = std::move(ids);
}

std::optional<double> Graph::weight_override(NodeId v) const {
  if (weights_.empty()) return std::nullopt;
  return weights_.at(v);
}

void Graph::set_weight_override(NodeId v, double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw Error(errc::kInvalidArgument, "node weight must be positive and finite");
  }
  if (weights_.empty()) weights_.resize(node_count());
  weights_.at(v) = weight;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size();
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw Error(errc::kParse, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Graph load_topology(std::string_view text) {
  std::unordered_map<std::uint64_t, NodeId> compact;
  std::vector<std::uint64_t> source_ids;
  std::vector<Edge> edges;
  std::vector<std::pair<NodeId, double>> weights;

  auto intern = [&](std::uint64_t raw) {
    auto [it, inserted] = compact.try_emplace(raw, static_cast<NodeId>(source_ids.size()));
    if (inserted) source_ids.push_back(raw);
    return it->second;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = split_ws(line);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (tokens[0] == "node") {
      std::uint64_t raw = 0;
      double w = 0.0;
      if (tokens.size() != 4 || tokens[2] != "weight" || !parse_number(tokens[1], raw) ||
          !parse_number(tokens[3], w)) {
        parse_fail(line_no, "expected `node <id> weight <w>`");
      }
      if (!(w > 0.0) || !std::isfinite(w)) parse_fail(line_no, "node weight must be positive");
      weights.emplace_back(intern(raw), w);
    } else {
      std::uint64_t a = 0;
      std::uint64_t b = 0;
      if (tokens.size() != 2 || !parse_number(tokens[0], a) || !parse_number(tokens[1], b)) {
        parse_fail(line_no, "expected two non-negative integer node ids");
      }
      if (a == b) throw Error(errc::kParse, "self-loop at line " + std::to_string(line_no));
      NodeId ca = intern(a);
      NodeId cb = intern(b);
      edges.emplace_back(ca, cb);
    }
    if (end == text.size()) break;
  }

  Graph g(source_ids.size(), edges);
  g.set_source_ids(std::move(source_ids));
  for (auto [v, w] : weights) g.set_weight_override(v, w);
  return g;
}

Graph load_topology_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::kIo, "cannot open topology file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_topology(buf.str());
}

Graph generate_ba(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (m < 1) throw Error(errc::kInvalidArgument, "BA model needs m >= 1");
  if (n <= m) {
    throw Error(errc::kInvalidArgument,
                "BA model needs n >= m+1 (n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");
  }
  std::vector<Edge> edges;
  edges.reserve(m * (m + 1) / 2 + m * (n - m - 1));
  // Each edge contributes both endpoints, so a uniform pick from this list
  // is a degree-proportional pick of a node.
  std::vector<NodeId> endpoints;
  endpoints.reserve(2 * edges.capacity());
  for (NodeId a = 0; a <= m; ++a) {
    for (NodeId b = a + 1; b <= m; ++b) {
      edges.emplace_back(a, b);
      endpoints.push_back(a);
      endpoints.push_back(b);
    }
  }
  Rng rng(seed);
  std::vector<NodeId> targets;
  targets.reserve(m);
  for (auto v = static_cast<NodeId>(m + 1); v < n; ++v) {
    targets.clear();
    while (targets.size() < m) {
      NodeId t = endpoints[rng.below(endpoints.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return Graph(n, edges);
}

Graph make_tree(std::size_t branching, std::size_t depth) {
  if (branching < 1) throw Error(errc::kInvalidArgument, "tree branching must be >= 1");
  std::size_t n = 1;
  std::size_t level = 1;
  for (std::size_t d = 0; d < depth; ++d) {
    level *= branching;
    n += level;
  }
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) edges.emplace_back(static_cast<NodeId>((v - 1) / branching), v);
  return Graph(n, edges);
}

Graph make_path(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) edges.emplace_back(v - 1, v);
  return Graph(n, edges);
}

Graph make_star(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId v = 1; v < n; ++v) edges.emplace_back(0, v);
  return Graph(n, edges);
}

Graph make_cycle(std::size_t n) {
  if (n < 3) throw Error(errc::kInvalidArgument, "cycle needs at least 3 nodes");
  std::vector<Edge> edges;
  for (NodeId v = 0; v < n; ++v) edges.emplace_back(v, static_cast<NodeId>((v + 1) % n));
  return Graph(n, edges);
}

std::vector<int> bfs_distances(const Graph& g, NodeId source) {
  std::vector<int> dist(g.node_count(), kUnreachable);
  std::queue<NodeId> frontier;
  dist.at(source) = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    NodeId v = frontier.front();
    frontier.pop();
    for (NodeId w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        frontier.push(w);
      }
    }
  }
  return dist;
}

std::vector<NodeId> shortest_path(const Graph& g, NodeId a, NodeId b) {
  if (a >= g.node_count() || b >= g.node_count()) {
    throw Error(errc::kInvalidArgument, "shortest_path endpoint outside the graph");
  }
  const auto dist = bfs_distances(g, a);
  if (dist[b] == kUnreachable) {
    throw Error(errc::kUnreachable,
                "no path between " + std::to_string(a) + " and " + std::to_string(b));
  }
  std::vector<NodeId> path(static_cast<std::size_t>(dist[b]) + 1);
  NodeId v = b;
  for (int d = dist[b]; d >= 0; --d) {
    path[static_cast<std::size_t>(d)] = v;
    if (d == 0) break;
    for (NodeId w : g.neighbors(v)) {
      if (dist[w] == d - 1) {
        v = w;
        break;
      }
    }
  }
  return path;
}

const std::vector<int>& HopDistances::from(NodeId source) {
  auto& row = rows_.at(source);
  if (row.empty()) row = bfs_distances(*graph_, source);
  return row;
}

CentralityTable betweenness(const Graph& g) {
  g.require_connected();
  return betweenness_by_component(g);
}

CentralityTable betweenness_by_component(const Graph& g) {
  const std::size_t n = g.node_count();
  CentralityTable table{std::vector<double>(n, 0.0)};
  std::vector<NodeId> order;
  std::vector<double> sigma(n);
  std::vector<int> dist(n);
  std::vector<double> delta(n);
  order.reserve(n);
  for (NodeId s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(delta.begin(), delta.end(), 0.0);
    order.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    order.push_back(s);
    for (std::size_t head = 0; head < order.size(); ++head) {
      NodeId v = order[head];
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    // Predecessors are recovered from the distance labels instead of stored.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      NodeId w = *it;
      for (NodeId v : g.neighbors(w)) {
        if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) table.values[w] += delta[w];
    }
  }
  // Each unordered pair was counted from both endpoints.
  for (double& value : table.values) value /= 2.0;
  return table;
}

PowerLawFit fit_degree_ccdf(const Graph& g, std::size_t k_min, std::size_t k_max) {
  const std::size_t n = g.node_count();
  if (n == 0) throw Error(errc::kInvalidArgument, "empty graph");
  std::size_t max_degree = 0;
  for (NodeId v = 0; v < n; ++v) max_degree = std::max(max_degree, g.degree(v));
  std::vector<std::size_t> count(max_degree + 2, 0);
  for (NodeId v = 0; v < n; ++v) ++count[g.degree(v)];
  // at_least[k] = #nodes with degree >= k
  std::vector<std::size_t> at_least(max_degree + 2, 0);
  for (std::size_t k = max_degree + 1; k-- > 0;) at_least[k] = at_least[k + 1] + count[k];

  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = std::max<std::size_t>(k_min, 1); k <= std::min(k_max, max_degree); ++k) {
    if (count[k] == 0) continue;
    xs.push_back(std::log10(static_cast<double>(k)));
    ys.push_back(std::log10(static_cast<double>(at_least[k]) / static_cast<double>(n)));
  }
  PowerLawFit fit;
  fit.points = xs.size();
  if (xs.size() < 2) throw Error(errc::kInvalidArgument, "not enough degree classes to fit");
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace icn
