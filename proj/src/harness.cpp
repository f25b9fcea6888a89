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

#include "icn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "icn/io.hpp"
#include "icn/simulator.hpp"

namespace icn {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

/// JSON object reader that remembers which keys were consumed so leftovers
/// (typos) can be rejected.
class Section {
 public:
  Section(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) fail("must be an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!obj_.contains(key)) fail("missing required key '" + key + "'");
    return obj_.at(key);
  }

  void skip(const std::string& key) { seen_.insert(key); }

  template <typename T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    return as<T>(key);
  }

  template <typename T>
  std::optional<T> opt(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    return as<T>(key);
  }

  template <typename T>
  T req(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) fail("missing required key '" + key + "'");
    return as<T>(key);
  }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key())) fail("unknown key '" + item.key() + "'");
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(errc::kConfig, where_ + ": " + what);
  }

 private:
  template <typename T>
  T as(const std::string& key) const {
    const json& v = obj_.at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail("'" + key + "' must be a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      const bool negative = v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0;
      if (!v.is_number_integer() || (std::is_unsigned_v<T> && negative)) {
        fail("'" + key + "' must be a non-negative integer");
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) fail("'" + key + "' must be a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail("'" + key + "' must be a string");
    }
    return v.get<T>();
  }

  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

std::uint32_t parse_unbounded(const json& v, const std::string& where, bool allow_null,
                              std::uint32_t unlimited) {
  if (v.is_null() && allow_null) return unlimited;
  if (v.is_string() && (v == "inf" || v == "unlimited")) return unlimited;
  if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0)) {
    return v.get<std::uint32_t>();
  }
  throw Error(errc::kConfig, where + ": expected a non-negative integer or \"inf\"");
}

json unbounded_json(std::uint64_t value, std::uint64_t unlimited) {
  if (value == unlimited) return "inf";
  return value;
}

StrategyConfig parse_strategy_config(Section& s, const std::string& where) {
  StrategyConfig c;
  c.placement = parse_placement(s.req<std::string>("placement"));
  c.core_quantile = s.get<double>("core_quantile", 0.5);
  if (s.has("search_radius")) {
    c.search_radius = parse_unbounded(s.raw("search_radius"), where + ".search_radius", false,
                                      kUnlimitedRadius);
  } else {
    s.skip("search_radius");
  }
  if (s.has("copy_limit")) {
    const auto k = parse_unbounded(s.raw("copy_limit"), where + ".copy_limit", true, 0);
    if (k != 0) c.copy_limit = k;
    if (k == 0 && s.raw("copy_limit").is_number()) {
      throw Error(errc::kConfig, where + ".copy_limit must be >= 1");
    }
  } else {
    s.skip("copy_limit");
  }
  return c;
}

ordered_json strategy_json(const StrategyConfig& c) {
  ordered_json j;
  j["placement"] = to_string(c.placement);
  j["core_quantile"] = c.core_quantile;
  j["search_radius"] = unbounded_json(c.search_radius, kUnlimitedRadius);
  j["copy_limit"] = c.copy_limit ? json(*c.copy_limit) : json("inf");
  return j;
}

std::vector<NodeId> node_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw Error(errc::kConfig, where + " must be an array of node ids");
  std::vector<NodeId> out;
  for (const auto& item : v) {
    if (!item.is_number_unsigned() && !(item.is_number_integer() && item.get<long long>() >= 0)) {
      throw Error(errc::kConfig, where + " must contain non-negative integers");
    }
    out.push_back(item.get<NodeId>());
  }
  return out;
}

TopologySource parse_topology_section(Section& top, const std::filesystem::path& base_dir) {
  TopologySource out;
  Section t(top.raw("topology"), "topology");
  const auto kind = t.req<std::string>("kind");
  if (kind == "file") {
    out.kind = TopologySource::Kind::kFile;
    std::filesystem::path p = t.req<std::string>("path");
    out.path = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  } else if (kind == "ba") {
    out.kind = TopologySource::Kind::kBa;
    out.n = t.req<std::size_t>("n");
    out.m = t.req<std::size_t>("m");
    out.seed = t.opt<std::uint64_t>("seed");
  } else if (kind == "tree") {
    out.kind = TopologySource::Kind::kTree;
    out.branching = t.get<std::size_t>("branching", 2);
    out.depth = t.req<std::size_t>("depth");
  } else if (kind == "edges") {
    out.kind = TopologySource::Kind::kEdges;
    out.text = t.req<std::string>("text");
  } else {
    t.fail("unknown kind '" + kind + "' (file, ba, tree, edges)");
  }
  t.finish();
  return out;
}

RoleParams parse_roles_section(Section& top) {
  RoleParams out;
  if (top.has("roles")) {
    Section r(top.raw("roles"), "roles");
    out.n_servers = r.opt<std::size_t>("n_servers");
    out.client_fraction = r.get<double>("client_fraction", 0.25);
    out.edge_degree_threshold = r.opt<double>("edge_degree_threshold");
    out.internal_servers = r.get<std::size_t>("internal_servers", 0);
    if (r.has("clients")) out.clients = node_list(r.raw("clients"), "roles.clients");
    if (r.has("servers")) out.servers = node_list(r.raw("servers"), "roles.servers");
    r.skip("clients");
    r.skip("servers");
    r.finish();
  } else {
    top.skip("roles");
  }
  return out;
}

WorkloadParams parse_workload_section(Section& top) {
  WorkloadParams out;
  Section w(top.raw("workload"), "workload");
  out.n_objects = w.req<std::size_t>("objects");
  out.n_requests = w.req<std::size_t>("requests");
  {
    Section p(w.raw("popularity"), "workload.popularity");
    const auto model = p.req<std::string>("model");
    if (model == "zipf") {
      out.popularity = PopularityModel::zipf(p.req<double>("s"));
    } else if (model == "weibull") {
      out.popularity =
          PopularityModel::weibull(p.req<double>("shape"), p.req<double>("scale"));
    } else {
      p.fail("unknown model '" + model + "' (zipf, weibull)");
    }
    p.finish();
  }
  if (w.has("size")) {
    Section z(w.raw("size"), "workload.size");
    const auto model = z.req<std::string>("model");
    if (model == "fixed") {
      out.size = SizeModel::fixed(z.req<std::uint64_t>("bytes"));
    } else if (model == "uniform") {
      out.size = SizeModel::uniform(z.req<std::uint64_t>("min"), z.req<std::uint64_t>("max"));
    } else {
      z.fail("unknown model '" + model + "' (fixed, uniform)");
    }
    z.finish();
  } else {
    w.skip("size");
  }
  if (w.has("aging")) {
    Section a(w.raw("aging"), "workload.aging");
    AgingSchedule sched;
    sched.interval = a.req<std::uint64_t>("interval");
    sched.fraction = a.req<double>("fraction");
    a.finish();
    out.aging = sched;
  } else {
    w.skip("aging");
  }
  w.finish();
  return out;
}

}  // namespace

void ExperimentSpec::validate() const {
  if (repetitions < 1) throw Error(errc::kConfig, "repetitions must be >= 1");
  if (strategies.empty()) throw Error(errc::kConfig, "at least one strategy is required");
  std::set<std::string> names{kBaselineName};
  for (const auto& s : strategies) {
    if (s.name.empty()) throw Error(errc::kConfig, "strategy names must be non-empty");
    if (!names.insert(s.name).second) {
      throw Error(errc::kConfig, "duplicate or reserved strategy name '" + s.name + "'");
    }
    s.config.validate();
  }
  if (!(confidence > 0.0 && confidence < 1.0)) throw Error(errc::kConfig, "confidence must lie in (0, 1)");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) {
    throw Error(errc::kConfig, "warmup_fraction must lie in [0, 1)");
  }
  if (epochs < 1) throw Error(errc::kConfig, "epochs must be >= 1");
  if (cache.capacity_bytes.has_value() == cache.capacity_fraction.has_value()) {
    throw Error(errc::kConfig, "give exactly one of cache.capacity_bytes or cache.capacity_fraction");
  }
  if (cache.capacity_fraction && !(*cache.capacity_fraction >= 0.0)) {
    throw Error(errc::kConfig, "capacity_fraction must be non-negative");
  }
  if (roles.clients.has_value() != roles.servers.has_value()) {
    throw Error(errc::kConfig, "roles.clients and roles.servers must be given together");
  }
  workload.popularity.validate();
  workload.size.validate();
  if (workload.aging) workload.aging->validate();
  if (workload.n_objects < 1) throw Error(errc::kConfig, "workload needs at least one object");
  if (threads < 1) throw Error(errc::kConfig, "threads must be >= 1");
}

ExperimentSpec parse_experiment_spec(const json& doc, const std::filesystem::path& base_dir) {
  Section top(doc, "spec");
  const int version = top.req<int>("schema_version");
  if (version != kSpecSchemaVersion) {
    top.fail("unsupported schema_version " + std::to_string(version));
  }
  ExperimentSpec spec;

  spec.topology = parse_topology_section(top, base_dir);
  spec.roles = parse_roles_section(top);
  spec.workload = parse_workload_section(top);

  {
    Section c(top.raw("cache"), "cache");
    spec.cache.capacity_bytes = c.opt<std::uint64_t>("capacity_bytes");
    spec.cache.capacity_fraction = c.opt<double>("capacity_fraction");
    c.finish();
  }

  {
    const json& list = top.raw("strategies");
    if (!list.is_array()) throw Error(errc::kConfig, "strategies must be an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = "strategies[" + std::to_string(i) + "]";
      Section s(list[i], where);
      NamedStrategy ns;
      ns.name = s.req<std::string>("name");
      ns.config = parse_strategy_config(s, where);
      s.finish();
      spec.strategies.push_back(std::move(ns));
    }
  }

  spec.repetitions = top.get<std::size_t>("repetitions", 1);
  spec.base_seed = top.get<std::uint64_t>("base_seed", 0);
  spec.confidence = top.get<double>("confidence", 0.95);
  spec.warmup_fraction = top.get<double>("warmup_fraction", 0.25);
  spec.epochs = top.get<std::size_t>("epochs", 10);
  if (top.has("miss_cost")) {
    const json& mc = top.raw("miss_cost");
    if (mc.is_string() && mc == "actual") {
      spec.miss_cost = MissCost::actual();
    } else if (mc.is_number() && mc.get<double>() >= 0.0) {
      spec.miss_cost = MissCost::fixed(mc.get<double>());
    } else {
      top.fail("miss_cost must be \"actual\" or a non-negative number");
    }
  } else {
    top.skip("miss_cost");
  }
  const auto mass = top.get<std::string>("popularity_mass", "weight_size");
  if (mass == "weight_size") {
    spec.mass = MassMode::kWeightTimesSize;
  } else if (mass == "weight") {
    spec.mass = MassMode::kWeight;
  } else {
    top.fail("popularity_mass must be \"weight_size\" or \"weight\"");
  }
  if (auto out = top.opt<std::string>("output_dir")) {
    std::filesystem::path p = *out;
    spec.output_dir = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  }
  spec.threads = top.get<std::size_t>("threads", 1);
  spec.write_event_logs = top.get<bool>("write_event_logs", false);
  spec.write_snapshots = top.get<bool>("write_snapshots", false);
  top.finish();
  spec.validate();
  return spec;
}

namespace {

json read_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(errc::kIo, "cannot open " + file.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(errc::kParse, file.string() + ": " + e.what());
  }
}

}  // namespace

ExperimentSpec load_experiment_spec(const std::filesystem::path& file) {
  return parse_experiment_spec(read_json_file(file), file.parent_path());
}

WorkloadJob parse_workload_job(const json& doc, const std::filesystem::path& base_dir) {
  Section top(doc, "workload params");
  const int version = top.req<int>("schema_version");
  if (version != kSpecSchemaVersion) {
    top.fail("unsupported schema_version " + std::to_string(version));
  }
  WorkloadJob job;
  job.topology = parse_topology_section(top, base_dir);
  job.roles = parse_roles_section(top);
  job.workload = parse_workload_section(top);
  job.seed = top.get<std::uint64_t>("seed", 0);
  if (auto out = top.opt<std::string>("output_dir")) {
    std::filesystem::path p = *out;
    job.output_dir = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  }
  top.finish();
  if (job.roles.clients.has_value() != job.roles.servers.has_value()) {
    throw Error(errc::kConfig, "roles.clients and roles.servers must be given together");
  }
  return job;
}

WorkloadJob load_workload_job(const std::filesystem::path& file) {
  return parse_workload_job(read_json_file(file), file.parent_path());
}

namespace {
RoleAssignment roles_for(const RoleParams& params, const Graph& g, std::uint64_t seed);
}  // namespace

GeneratedWorkload generate_workload(const WorkloadJob& job) {
  GeneratedWorkload out;
  out.graph = std::make_shared<const Graph>(build_topology(job.topology, job.seed));
  out.catalog = build_catalog(job.workload.n_objects, job.workload.popularity, job.workload.size, job.seed);
  out.roles = roles_for(job.roles, *out.graph, job.seed);
  assign_origins(out.roles, out.catalog);
  out.stream = job.workload.aging
                   ? sample_requests(out.catalog, out.roles, job.workload.n_requests, job.seed,
                                     *job.workload.aging)
                   : sample_requests(out.catalog, out.roles, job.workload.n_requests, job.seed);
  if (!job.output_dir.empty()) {
    std::filesystem::create_directories(job.output_dir);
    std::ofstream catalog(job.output_dir / "catalog.csv", std::ios::binary);
    write_catalog_csv(catalog, out.catalog);
    std::ofstream trace(job.output_dir / "trace.csv", std::ios::binary);
    write_trace_csv(trace, out.stream);
    ordered_json roles;
    roles["clients"] = out.roles.clients;
    roles["client_weight"] = out.roles.client_weight;
    roles["servers"] = out.roles.servers;
    ordered_json external = ordered_json::array();
    for (NodeId s : out.roles.servers) external.push_back(out.roles.is_external(s));
    roles["server_external"] = external;
    roles["origin"] = out.roles.origin;
    std::ofstream r(job.output_dir / "roles.json", std::ios::binary);
    r << roles.dump(2) << '\n';
  }
  return out;
}

Graph build_topology(const TopologySource& source, std::uint64_t default_seed) {
  switch (source.kind) {
    case TopologySource::Kind::kFile:
      return load_topology_file(source.path);
    case TopologySource::Kind::kBa:
      return generate_ba(source.n, source.m, source.seed.value_or(default_seed));
    case TopologySource::Kind::kTree:
      return make_tree(source.branching, source.depth);
    case TopologySource::Kind::kEdges:
      return load_topology(source.text);
  }
  throw Error(errc::kInternal, "unhandled topology kind");
}

namespace {

RoleOptions role_options_for(const RoleParams& params, const Graph& g) {
  RoleOptions options;
  options.n_servers = params.n_servers.value_or(default_server_count(g.node_count()));
  options.client_fraction = params.client_fraction;
  options.edge_degree_threshold = params.edge_degree_threshold;
  options.internal_servers = params.internal_servers;
  return options;
}

RoleAssignment roles_for(const RoleParams& params, const Graph& g, std::uint64_t seed) {
  if (params.clients) return make_roles(g, *params.clients, *params.servers, params.internal_servers);
  return assign_roles(g, role_options_for(params, g), derive_seed(seed, 0x701e5));
}

struct Prepared {
  std::shared_ptr<const Graph> graph;
  std::shared_ptr<const CentralityTable> centrality;
  Catalog catalog;
  std::uint64_t capacity_bytes = 0;
  RoleOptions role_options;
};

Prepared prepare(const ExperimentSpec& spec) {
  Prepared p;
  p.graph = std::make_shared<const Graph>(build_topology(spec.topology, spec.base_seed));
  p.graph->require_connected();
  p.centrality = std::make_shared<const CentralityTable>(betweenness(*p.graph));
  p.catalog = build_catalog(spec.workload.n_objects, spec.workload.popularity, spec.workload.size,
                            spec.base_seed);
  if (spec.cache.capacity_bytes) {
    p.capacity_bytes = *spec.cache.capacity_bytes;
  } else {
    p.capacity_bytes = static_cast<std::uint64_t>(
        std::floor(*spec.cache.capacity_fraction * static_cast<double>(p.catalog.total_bytes()) + 1e-9));
  }
  p.role_options = role_options_for(spec.roles, *p.graph);
  return p;
}

ordered_json resolved_config_impl(const ExperimentSpec& spec, const Prepared& p) {
  ordered_json j;
  j["schema_version"] = kSpecSchemaVersion;
  ordered_json topo;
  switch (spec.topology.kind) {
    case TopologySource::Kind::kFile:
      topo["kind"] = "file";
      topo["path"] = spec.topology.path.generic_string();
      break;
    case TopologySource::Kind::kBa:
      topo["kind"] = "ba";
      topo["n"] = spec.topology.n;
      topo["m"] = spec.topology.m;
      topo["seed"] = spec.topology.seed.value_or(spec.base_seed);
      break;
    case TopologySource::Kind::kTree:
      topo["kind"] = "tree";
      topo["branching"] = spec.topology.branching;
      topo["depth"] = spec.topology.depth;
      break;
    case TopologySource::Kind::kEdges:
      topo["kind"] = "edges";
      topo["text"] = spec.topology.text;
      break;
  }
  topo["nodes"] = p.graph->node_count();
  topo["edges"] = p.graph->edge_count();
  j["topology"] = topo;

  ordered_json roles;
  roles["n_servers"] = p.role_options.n_servers;
  roles["client_fraction"] = p.role_options.client_fraction;
  roles["edge_degree_threshold"] =
      p.role_options.edge_degree_threshold.value_or(median_degree(*p.graph));
  roles["edge_degree_threshold_source"] = spec.roles.edge_degree_threshold ? "config" : "median_degree";
  roles["internal_servers"] = p.role_options.internal_servers;
  roles["gravity_weight"] = "degree_or_override";
  if (spec.roles.clients) {
    roles["clients"] = *spec.roles.clients;
    roles["servers"] = *spec.roles.servers;
  } else {
    roles["clients"] = nullptr;
    roles["servers"] = nullptr;
  }
  j["roles"] = roles;

  ordered_json w;
  w["objects"] = spec.workload.n_objects;
  w["requests"] = spec.workload.n_requests;
  ordered_json pop;
  if (spec.workload.popularity.kind == PopularityModel::Kind::kZipf) {
    pop["model"] = "zipf";
    pop["s"] = spec.workload.popularity.zipf_s;
  } else {
    pop["model"] = "weibull";
    pop["shape"] = spec.workload.popularity.weibull_shape;
    pop["scale"] = spec.workload.popularity.weibull_scale;
  }
  w["popularity"] = pop;
  ordered_json size;
  if (spec.workload.size.kind == SizeModel::Kind::kFixed) {
    size["model"] = "fixed";
    size["bytes"] = spec.workload.size.min_bytes;
  } else {
    size["model"] = "uniform";
    size["min"] = spec.workload.size.min_bytes;
    size["max"] = spec.workload.size.max_bytes;
  }
  w["size"] = size;
  if (spec.workload.aging) {
    w["aging"] = {{"interval", spec.workload.aging->interval}, {"fraction", spec.workload.aging->fraction}};
  } else {
    w["aging"] = nullptr;
  }
  w["catalog_bytes"] = p.catalog.total_bytes();
  j["workload"] = w;

  ordered_json cache;
  cache["capacity_bytes"] = p.capacity_bytes;
  if (spec.cache.capacity_fraction) {
    cache["capacity_fraction"] = *spec.cache.capacity_fraction;
  } else {
    cache["capacity_fraction"] = nullptr;
  }
  cache["replacement"] = "LRU";
  j["cache"] = cache;

  ordered_json strategies = ordered_json::array();
  for (const auto& s : spec.strategies) {
    ordered_json e;
    e["name"] = s.name;
    const ordered_json cfg = strategy_json(s.config);
    for (const auto& [k, v] : cfg.items()) e[k] = v;
    strategies.push_back(e);
  }
  j["strategies"] = strategies;
  j["repetitions"] = spec.repetitions;
  j["base_seed"] = spec.base_seed;
  j["confidence"] = spec.confidence;
  j["warmup_fraction"] = spec.warmup_fraction;
  j["epochs"] = spec.epochs;
  if (spec.miss_cost.is_actual()) {
    j["miss_cost"] = "actual";
  } else {
    j["miss_cost"] = *spec.miss_cost.hops;
  }
  j["popularity_mass"] = spec.mass == MassMode::kWeight ? "weight" : "weight_size";
  j["output_dir"] = spec.output_dir.empty() ? json(nullptr) : json(spec.output_dir.generic_string());
  j["threads"] = spec.threads;
  j["write_event_logs"] = spec.write_event_logs;
  j["write_snapshots"] = spec.write_snapshots;
  return j;
}

}  // namespace

ordered_json resolved_config(const ExperimentSpec& spec) {
  spec.validate();
  return resolved_config_impl(spec, prepare(spec));
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{"hit_rate", "bhr", "costly_miss_byte_rate", "avg_hops",
                                              "footprint", "fpr", "cpf"};
  return names;
}

std::optional<double> metric_value(const MetricsReport& report, const std::string& name) {
  if (name == "hit_rate") return report.hit_rate;
  if (name == "bhr") return report.byte_hit_rate;
  if (name == "costly_miss_byte_rate") return report.costly_miss_byte_rate;
  if (name == "avg_hops") return report.avg_hops;
  if (name == "footprint") return static_cast<double>(report.footprint);
  if (name == "fpr") return report.footprint_reduction;
  if (name == "cpf") return report.coupling_factor;
  throw Error(errc::kInvalidArgument, "unknown metric '" + name + "'");
}

double student_t_critical(double confidence, std::size_t dof) {
  if (dof < 1) throw Error(errc::kInvalidArgument, "Student-t needs at least one degree of freedom");
  boost::math::students_t_distribution<double> dist(static_cast<double>(dof));
  return boost::math::quantile(dist, 0.5 + confidence / 2.0);
}

MetricSummary summarize(const std::vector<std::optional<double>>& values, double confidence) {
  MetricSummary s;
  s.values = values;
  std::vector<double> defined;
  for (const auto& v : values) {
    if (v) defined.push_back(*v);
  }
  if (defined.empty()) return s;
  const double n = static_cast<double>(defined.size());
  double sum = 0.0;
  for (double v : defined) sum += v;
  auto [lo, hi] = std::minmax_element(defined.begin(), defined.end());
  const double mean = std::clamp(sum / n, *lo, *hi);
  s.mean = mean;
  if (defined.size() >= 2) {
    double ss = 0.0;
    for (double v : defined) ss += (v - mean) * (v - mean);
    s.stddev = std::sqrt(ss / (n - 1.0));
    s.ci_half_width = student_t_critical(confidence, defined.size() - 1) * *s.stddev / std::sqrt(n);
  }
  return s;
}

const MetricSummary& StrategyAggregate::metric(const std::string& name) const {
  for (const auto& [key, summary] : metrics) {
    if (key == name) return summary;
  }
  throw Error(errc::kInvalidArgument, "strategy '" + this->name + "' has no metric '" + name + "'");
}

const StrategyAggregate& AggregateReport::strategy(const std::string& name) const {
  for (const auto& s : strategies) {
    if (s.name == name) return s;
  }
  throw Error(errc::kInvalidArgument, "no strategy named '" + name + "'");
}

namespace {

std::vector<RunResult> run_repetition(const ExperimentSpec& spec, const Prepared& p, std::size_t rep,
                                      std::mutex& write_mutex) {
  const std::uint64_t seed = spec.base_seed + rep;
  try {
    RoleAssignment roles = roles_for(spec.roles, *p.graph, seed);
    assign_origins(roles, p.catalog);
    auto stream = std::make_shared<const RequestStream>(
        spec.workload.aging
            ? sample_requests(p.catalog, roles, spec.workload.n_requests, seed, *spec.workload.aging)
            : sample_requests(p.catalog, roles, spec.workload.n_requests, seed));

    SimConfig base;
    base.graph = p.graph;
    base.roles = roles;
    base.catalog = p.catalog;
    base.stream = stream;
    base.cache_capacity_bytes = 0;
    base.warmup_fraction = spec.warmup_fraction;
    base.aging = spec.workload.aging;
    base.seed = seed;
    base.epochs = spec.epochs;
    base.centrality = p.centrality;

    auto dump = [&](const std::string& name, const EventLog& log) {
      if (spec.output_dir.empty() || (!spec.write_event_logs && !spec.write_snapshots)) return;
      std::lock_guard<std::mutex> lock(write_mutex);
      const auto stem = "rep" + std::to_string(rep) + "_" + name;
      if (spec.write_event_logs) {
        std::ofstream out(spec.output_dir / ("events_" + stem + ".csv"), std::ios::binary);
        write_event_log_csv(out, log.records);
      }
      if (spec.write_snapshots) {
        for (std::size_t e = 0; e < log.snapshots.size(); ++e) {
          std::ofstream out(spec.output_dir / ("snapshot_" + stem + "_epoch" + std::to_string(e) + ".csv"),
                            std::ios::binary);
          write_snapshot_csv(out, log.snapshots[e]);
        }
      }
    };

    std::vector<RunResult> results;
    const EventLog baseline_log = run(base);
    const BaselineFootprint baseline{static_cast<double>(footprint(baseline_log.records))};
    results.push_back({rep, seed, kBaselineName, std::nullopt,
                       compute_report(baseline_log, baseline, *p.centrality, spec.miss_cost, spec.mass)});
    dump(kBaselineName, baseline_log);

    for (const auto& strategy : spec.strategies) {
      SimConfig cfg = base;
      cfg.strategy = strategy.config;
      cfg.cache_capacity_bytes = p.capacity_bytes;
      const EventLog log = run(cfg);
      results.push_back({rep, seed, strategy.name, strategy.config,
                         compute_report(log, baseline, *p.centrality, spec.miss_cost, spec.mass)});
      dump(strategy.name, log);
    }
    return results;
  } catch (const ExperimentFailure&) {
    throw;
  } catch (const Error& e) {
    throw ExperimentFailure(e, seed);
  } catch (const std::exception& e) {
    throw ExperimentFailure(Error(errc::kInternal, e.what()), seed);
  }
}

AggregateReport aggregate(const ExperimentSpec& spec, const std::vector<RunResult>& runs) {
  AggregateReport report;
  report.repetitions = spec.repetitions;
  report.confidence = spec.confidence;
  report.base_seed = spec.base_seed;
  report.metric_names = metric_names();
  std::vector<std::pair<std::string, std::optional<StrategyConfig>>> order{{kBaselineName, std::nullopt}};
  for (const auto& s : spec.strategies) order.emplace_back(s.name, s.config);
  for (const auto& [name, config] : order) {
    StrategyAggregate agg;
    agg.name = name;
    agg.config = config;
    for (const auto& metric : report.metric_names) {
      std::vector<std::optional<double>> values;
      for (const auto& r : runs) {
        if (r.strategy == name) values.push_back(metric_value(r.metrics, metric));
      }
      agg.metrics.emplace_back(metric, summarize(values, spec.confidence));
    }
    report.strategies.push_back(std::move(agg));
  }
  return report;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const Prepared p = prepare(spec);
  if (!spec.output_dir.empty()) std::filesystem::create_directories(spec.output_dir);

  std::vector<std::vector<RunResult>> per_rep(spec.repetitions);
  std::vector<std::exception_ptr> failures(spec.repetitions);
  std::mutex write_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t rep = next++; rep < spec.repetitions; rep = next++) {
      try {
        per_rep[rep] = run_repetition(spec, p, rep, write_mutex);
      } catch (...) {
        failures[rep] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(spec.threads, spec.repetitions);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  ExperimentResult result;
  for (auto& rep : per_rep) {
    for (auto& r : rep) result.runs.push_back(std::move(r));
  }
  result.aggregate = aggregate(spec, result.runs);
  if (!spec.output_dir.empty()) {
    std::ofstream cfg(spec.output_dir / "resolved_config.json", std::ios::binary);
    cfg << resolved_config_impl(spec, p).dump(2) << '\n';
    write_experiment_outputs(spec, result);
  }
  return result;
}

namespace {

std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

std::string runs_csv(const std::vector<RunResult>& runs) {
  std::ostringstream out;
  out << "run_id,strategy,r,k,hit_rate,bhr,costly_miss_byte_rate,avg_hops,footprint,fpr,cpf\n";
  for (const auto& r : runs) {
    out << r.repetition << ',' << r.strategy << ',';
    if (r.config) {
      out << (r.config->search_radius == kUnlimitedRadius ? std::string("inf")
                                                          : std::to_string(r.config->search_radius))
          << ',' << (r.config->copy_limit ? std::to_string(*r.config->copy_limit) : std::string("inf"));
    } else {
      out << "-,-";
    }
    const auto& m = r.metrics;
    out << ',' << format_double(m.hit_rate) << ',' << format_double(m.byte_hit_rate) << ','
        << format_double(m.costly_miss_byte_rate) << ',' << format_double(m.avg_hops) << ','
        << m.footprint << ',' << format_double(m.footprint_reduction) << ','
        << optional_field(m.coupling_factor) << '\n';
  }
  return out.str();
}

namespace {

ordered_json optional_json(const std::optional<double>& v, const char* missing) {
  if (v) return *v;
  if (missing == nullptr) return nullptr;
  return missing;
}

std::optional<double> optional_from_json(const json& v) {
  if (v.is_number()) return v.get<double>();
  return std::nullopt;
}

}  // namespace

ordered_json to_json(const AggregateReport& report) {
  ordered_json j;
  j["schema_version"] = kSpecSchemaVersion;
  j["repetitions"] = report.repetitions;
  j["confidence"] = report.confidence;
  j["base_seed"] = report.base_seed;
  j["metrics"] = report.metric_names;
  ordered_json strategies = ordered_json::array();
  for (const auto& s : report.strategies) {
    ordered_json e;
    e["name"] = s.name;
    e["config"] = s.config ? strategy_json(*s.config) : ordered_json(nullptr);
    ordered_json metrics;
    for (const auto& [name, summary] : s.metrics) {
      ordered_json m;
      m["mean"] = optional_json(summary.mean, nullptr);
      m["std"] = optional_json(summary.stddev, "n/a");
      m["ci_half_width"] = optional_json(summary.ci_half_width, "n/a");
      ordered_json values = ordered_json::array();
      for (const auto& v : summary.values) values.push_back(optional_json(v, nullptr));
      m["values"] = values;
      metrics[name] = m;
    }
    e["metrics"] = metrics;
    strategies.push_back(e);
  }
  j["strategies"] = strategies;
  return j;
}

AggregateReport aggregate_from_json(const json& doc) {
  try {
    AggregateReport report;
    report.repetitions = doc.at("repetitions").get<std::size_t>();
    report.confidence = doc.at("confidence").get<double>();
    report.base_seed = doc.at("base_seed").get<std::uint64_t>();
    report.metric_names = doc.at("metrics").get<std::vector<std::string>>();
    for (const auto& e : doc.at("strategies")) {
      StrategyAggregate agg;
      agg.name = e.at("name").get<std::string>();
      if (!e.at("config").is_null()) {
        Section c(e.at("config"), "config of " + agg.name);
        agg.config = parse_strategy_config(c, agg.name);
        c.finish();
      }
      for (const auto& name : report.metric_names) {
        const auto& m = e.at("metrics").at(name);
        MetricSummary s;
        s.mean = optional_from_json(m.at("mean"));
        s.stddev = optional_from_json(m.at("std"));
        s.ci_half_width = optional_from_json(m.at("ci_half_width"));
        for (const auto& v : m.at("values")) s.values.push_back(optional_from_json(v));
        agg.metrics.emplace_back(name, std::move(s));
      }
      report.strategies.push_back(std::move(agg));
    }
    return report;
  } catch (const json::exception& e) {
    throw Error(errc::kParse, std::string("malformed aggregate report: ") + e.what());
  }
}

std::string figure_csv(const AggregateReport& report, const std::string& metric) {
  std::ostringstream out;
  out << "strategy,mean,ci\n";
  for (const auto& s : report.strategies) {
    const auto& m = s.metric(metric);
    out << s.name << ',' << optional_field(m.mean) << ','
        << (m.ci_half_width ? format_double(*m.ci_half_width) : std::string("n/a")) << '\n';
  }
  return out.str();
}

void write_experiment_outputs(const ExperimentSpec& spec, const ExperimentResult& result) {
  if (spec.output_dir.empty()) return;
  std::filesystem::create_directories(spec.output_dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream out(spec.output_dir / name, std::ios::binary);
    if (!out) throw Error(errc::kIo, "cannot write " + (spec.output_dir / name).string());
    out << text;
  };
  write("runs.csv", runs_csv(result.runs));
  write("aggregate.json", to_json(result.aggregate).dump(2) + "\n");
  for (const auto& metric : result.aggregate.metric_names) {
    write("figure_" + metric + ".csv", figure_csv(result.aggregate, metric));
  }
}

Direction metric_direction(const std::string& metric) {
  if (metric == "hit_rate" || metric == "bhr" || metric == "fpr") return Direction::kHigherBetter;
  if (metric == "costly_miss_byte_rate" || metric == "avg_hops" || metric == "footprint") {
    return Direction::kLowerBetter;
  }
  return Direction::kUnordered;
}

const MetricRanking& ComparisonTable::ranking(const std::string& metric) const {
  for (const auto& r : rankings) {
    if (r.metric == metric) return r;
  }
  throw Error(errc::kInvalidArgument, "no ranking for metric '" + metric + "'");
}

bool ComparisonTable::significant(const std::string& metric, const std::string& a,
                                  const std::string& b) const {
  for (const auto& [x, y] : ranking(metric).overlapping) {
    if ((x == a && y == b) || (x == b && y == a)) return false;
  }
  return true;
}

namespace {

ComparisonTable rank_strategies(const std::vector<std::string>& metrics,
                                const std::vector<const StrategyAggregate*>& strategies,
                                const std::vector<std::string>& names) {
  for (const char* needed : {"bhr", "fpr"}) {
    if (std::find(metrics.begin(), metrics.end(), needed) == metrics.end()) {
      throw Error(errc::kMetricMismatch, std::string("comparison requires both bhr and fpr; missing ") + needed);
    }
  }
  ComparisonTable table;
  for (const auto& metric : metrics) {
    MetricRanking ranking;
    ranking.metric = metric;
    ranking.direction = metric_direction(metric);
    for (std::size_t i = 0; i < strategies.size(); ++i) {
      const auto& m = strategies[i]->metric(metric);
      ranking.order.push_back({names[i], m.mean, m.ci_half_width});
    }
    const bool descending = ranking.direction != Direction::kLowerBetter;
    std::stable_sort(ranking.order.begin(), ranking.order.end(), [&](const RankEntry& a, const RankEntry& b) {
      if (!a.mean || !b.mean) return a.mean.has_value() && !b.mean.has_value();
      return descending ? *a.mean > *b.mean : *a.mean < *b.mean;
    });
    for (std::size_t i = 0; i < ranking.order.size(); ++i) {
      for (std::size_t j = i + 1; j < ranking.order.size(); ++j) {
        const auto& a = ranking.order[i];
        const auto& b = ranking.order[j];
        const bool comparable = a.mean && b.mean && a.ci_half_width && b.ci_half_width;
        if (!comparable || std::abs(*a.mean - *b.mean) <= *a.ci_half_width + *b.ci_half_width) {
          ranking.overlapping.emplace_back(a.strategy, b.strategy);
        }
      }
    }
    table.rankings.push_back(std::move(ranking));
  }
  return table;
}

}  // namespace

ComparisonTable compare(const AggregateReport& report) {
  std::vector<const StrategyAggregate*> strategies;
  std::vector<std::string> names;
  for (const auto& s : report.strategies) {
    strategies.push_back(&s);
    names.push_back(s.name);
  }
  return rank_strategies(report.metric_names, strategies, names);
}

ComparisonTable compare(const AggregateReport& a, const AggregateReport& b) {
  if (a.metric_names != b.metric_names) {
    throw Error(errc::kMetricMismatch, "reports carry different metric sets");
  }
  std::set<std::string> in_a;
  std::set<std::string> in_b;
  for (const auto& s : a.strategies) in_a.insert(s.name);
  for (const auto& s : b.strategies) in_b.insert(s.name);
  std::vector<const StrategyAggregate*> strategies;
  std::vector<std::string> names;
  for (const auto& s : a.strategies) {
    strategies.push_back(&s);
    names.push_back(in_b.count(s.name) ? "A:" + s.name : s.name);
  }
  for (const auto& s : b.strategies) {
    strategies.push_back(&s);
    names.push_back(in_a.count(s.name) ? "B:" + s.name : s.name);
  }
  return rank_strategies(a.metric_names, strategies, names);
}

namespace {

std::string mean_ci(const RankEntry& e) {
  std::ostringstream out;
  out << std::setprecision(6);
  if (!e.mean) return "undefined";
  out << *e.mean;
  if (e.ci_half_width) {
    out << " +/- " << *e.ci_half_width;
  } else {
    out << " (ci n/a)";
  }
  return out.str();
}

const char* direction_label(Direction d) {
  switch (d) {
    case Direction::kHigherBetter:
      return "higher is better";
    case Direction::kLowerBetter:
      return "lower is better";
    case Direction::kUnordered:
      return "descending, no preferred direction";
  }
  return "";
}

}  // namespace

std::string render_comparison(const ComparisonTable& table) {
  std::ostringstream out;
  const auto& bhr = table.ranking("bhr");
  const auto& fpr = table.ranking("fpr");
  auto rank_of = [](const MetricRanking& r, const std::string& name) -> std::pair<std::size_t, const RankEntry*> {
    for (std::size_t i = 0; i < r.order.size(); ++i) {
      if (r.order[i].strategy == name) return {i + 1, &r.order[i]};
    }
    return {0, nullptr};
  };
  out << "byte hit rate and footprint reduction\n";
  out << std::left << std::setw(20) << "strategy" << std::setw(34) << "bhr" << std::setw(6) << "rank"
      << std::setw(34) << "fpr" << "rank\n";
  for (const auto& entry : fpr.order) {
    auto [br, be] = rank_of(bhr, entry.strategy);
    auto [fr, fe] = rank_of(fpr, entry.strategy);
    out << std::setw(20) << entry.strategy << std::setw(34) << mean_ci(*be) << std::setw(6) << br
        << std::setw(34) << mean_ci(*fe) << fr << '\n';
  }
  for (const auto& r : table.rankings) {
    out << '\n' << r.metric << " (" << direction_label(r.direction) << ")\n";
    for (std::size_t i = 0; i < r.order.size(); ++i) {
      out << "  " << (i + 1) << ". " << std::setw(20) << r.order[i].strategy << mean_ci(r.order[i]) << '\n';
    }
    if (r.overlapping.empty()) {
      out << "  all pairwise differences significant\n";
    } else {
      out << "  overlapping intervals (not significant):";
      for (const auto& [a, b] : r.overlapping) out << ' ' << a << '~' << b;
      out << '\n';
    }
  }
  return out.str();
}

ordered_json to_json(const ComparisonTable& table) {
  ordered_json rankings = ordered_json::array();
  for (const auto& r : table.rankings) {
    ordered_json e;
    e["metric"] = r.metric;
    e["direction"] = r.direction == Direction::kHigherBetter  ? "higher"
                     : r.direction == Direction::kLowerBetter ? "lower"
                                                              : "none";
    ordered_json order = ordered_json::array();
    for (const auto& entry : r.order) {
      order.push_back({{"strategy", entry.strategy},
                       {"mean", optional_json(entry.mean, nullptr)},
                       {"ci_half_width", optional_json(entry.ci_half_width, "n/a")}});
    }
    e["ranking"] = order;
    ordered_json overlap = ordered_json::array();
    for (const auto& [a, b] : r.overlapping) overlap.push_back({a, b});
    e["overlapping"] = overlap;
    rankings.push_back(e);
  }

  // BHR and FPR per strategy in one record, in BHR rank order.
  ordered_json paired = ordered_json::array();
  const auto& bhr = table.ranking("bhr");
  const auto& fpr = table.ranking("fpr");
  for (std::size_t i = 0; i < bhr.order.size(); ++i) {
    const auto& b = bhr.order[i];
    ordered_json e;
    e["strategy"] = b.strategy;
    e["bhr"] = optional_json(b.mean, nullptr);
    e["bhr_ci"] = optional_json(b.ci_half_width, "n/a");
    e["bhr_rank"] = i + 1;
    for (std::size_t k = 0; k < fpr.order.size(); ++k) {
      if (fpr.order[k].strategy != b.strategy) continue;
      e["fpr"] = optional_json(fpr.order[k].mean, nullptr);
      e["fpr_ci"] = optional_json(fpr.order[k].ci_half_width, "n/a");
      e["fpr_rank"] = k + 1;
    }
    paired.push_back(e);
  }

  ordered_json j;
  j["bhr_fpr"] = paired;
  j["rankings"] = rankings;
  return j;
}

}  // namespace icn
