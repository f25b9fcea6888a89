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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "icn/cache.hpp"
#include "icn/error.hpp"
#include "icn/metrics.hpp"
#include "icn/roles.hpp"
#include "icn/topology.hpp"
#include "icn/workload.hpp"

namespace icn {

inline constexpr int kSpecSchemaVersion = 1;

struct TopologySource {
  enum class Kind { kFile, kBa, kTree, kEdges };

  Kind kind = Kind::kTree;
  std::filesystem::path path;  // kFile
  std::string text;            // kEdges
  std::size_t n = 0;           // kBa
  std::size_t m = 0;           // kBa
  std::optional<std::uint64_t> seed;  // kBa; base_seed when unset
  std::size_t branching = 2;   // kTree
  std::size_t depth = 0;       // kTree
};

struct RoleParams {
  std::optional<std::size_t> n_servers;  // default_server_count(n) when unset
  double client_fraction = 0.25;
  std::optional<double> edge_degree_threshold;
  std::size_t internal_servers = 0;
  /// Fixed placement; both or neither. Disables per-repetition redraws.
  std::optional<std::vector<NodeId>> clients;
  std::optional<std::vector<NodeId>> servers;
};

struct WorkloadParams {
  std::size_t n_objects = 1000;
  PopularityModel popularity = PopularityModel::zipf(0.8);
  SizeModel size = SizeModel::fixed(1000);
  std::size_t n_requests = 100000;
  std::optional<AgingSchedule> aging;
};

struct CacheParams {
  std::optional<std::uint64_t> capacity_bytes;
  /// Per-node capacity as a fraction of total catalog bytes.
  std::optional<double> capacity_fraction;
};

struct NamedStrategy {
  std::string name;
  StrategyConfig config;
};

struct ExperimentSpec {
  TopologySource topology;
  RoleParams roles;
  WorkloadParams workload;
  CacheParams cache;
  std::vector<NamedStrategy> strategies;
  std::size_t repetitions = 1;
  std::uint64_t base_seed = 0;
  double confidence = 0.95;
  double warmup_fraction = 0.25;
  std::size_t epochs = 10;
  MissCost miss_cost;
  MassMode mass = MassMode::kWeightTimesSize;
  std::filesystem::path output_dir;  // empty = no files
  std::size_t threads = 1;
  bool write_event_logs = false;
  bool write_snapshots = false;

  void validate() const;
};

/// Parses the versioned JSON experiment document. Relative file paths are
/// resolved against `base_dir`. Unknown keys are rejected.
ExperimentSpec parse_experiment_spec(const nlohmann::json& doc,
                                     const std::filesystem::path& base_dir = {});
ExperimentSpec load_experiment_spec(const std::filesystem::path& file);

Graph build_topology(const TopologySource& source, std::uint64_t default_seed);

/// Parameters for `gen-workload`: topology, roles and workload sections of
/// the experiment document plus a seed.
struct WorkloadJob {
  TopologySource topology;
  RoleParams roles;
  WorkloadParams workload;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;
};

WorkloadJob parse_workload_job(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
WorkloadJob load_workload_job(const std::filesystem::path& file);

struct GeneratedWorkload {
  std::shared_ptr<const Graph> graph;
  RoleAssignment roles;
  Catalog catalog;
  RequestStream stream;
};

/// Writes catalog.csv, trace.csv and roles.json when output_dir is set.
GeneratedWorkload generate_workload(const WorkloadJob& job);

/// Every parameter with its default made explicit.
nlohmann::ordered_json resolved_config(const ExperimentSpec& spec);

inline constexpr const char* kBaselineName = "none";

/// Metric column names, in report order.
const std::vector<std::string>& metric_names();

struct RunResult {
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  std::string strategy;
  std::optional<StrategyConfig> config;  // nullopt for the baseline
  MetricsReport metrics;
};

std::optional<double> metric_value(const MetricsReport& report, const std::string& name);

/// Mean, sample standard deviation and Student-t half-width. Values that are
/// undefined for a run (nullopt) are kept in `values` but skipped in the
/// statistics.
struct MetricSummary {
  std::optional<double> mean;
  std::optional<double> stddev;
  std::optional<double> ci_half_width;
  std::vector<std::optional<double>> values;
};

MetricSummary summarize(const std::vector<std::optional<double>>& values, double confidence);

/// Student-t quantile used for the half-width: t_{(1+c)/2, dof}.
double student_t_critical(double confidence, std::size_t dof);

struct StrategyAggregate {
  std::string name;
  std::optional<StrategyConfig> config;
  std::vector<std::pair<std::string, MetricSummary>> metrics;

  const MetricSummary& metric(const std::string& name) const;
};

struct AggregateReport {
  std::size_t repetitions = 0;
  double confidence = 0.95;
  std::uint64_t base_seed = 0;
  std::vector<std::string> metric_names;
  std::vector<StrategyAggregate> strategies;

  const StrategyAggregate& strategy(const std::string& name) const;
};

struct ExperimentResult {
  std::vector<RunResult> runs;  // ordered by repetition, then baseline, then spec order
  AggregateReport aggregate;
};

/// Thrown when a repetition fails; carries the seed needed to reproduce it.
class ExperimentFailure : public Error {
 public:
  ExperimentFailure(const Error& cause, std::uint64_t seed)
      : Error(cause.code(), std::string(cause.what()) + " (seed " + std::to_string(seed) + ")"),
        seed_(seed) {}
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
};

/// Runs the caching-disabled baseline and every strategy on each
/// repetition's stream, aggregates, and writes output files when
/// spec.output_dir is set.
ExperimentResult run_experiment(const ExperimentSpec& spec);

void write_experiment_outputs(const ExperimentSpec& spec, const ExperimentResult& result);

std::string runs_csv(const std::vector<RunResult>& runs);
nlohmann::ordered_json to_json(const AggregateReport& report);
AggregateReport aggregate_from_json(const nlohmann::json& doc);
std::string figure_csv(const AggregateReport& report, const std::string& metric);

struct RankEntry {
  std::string strategy;
  std::optional<double> mean;
  std::optional<double> ci_half_width;
};

enum class Direction { kHigherBetter, kLowerBetter, kUnordered };

/// Preferred direction for each metric; coupling factor has none and is
/// listed in descending order.
Direction metric_direction(const std::string& metric);

struct MetricRanking {
  std::string metric;
  Direction direction = Direction::kHigherBetter;
  std::vector<RankEntry> order;  // best first
  /// Pairs whose intervals overlap (or have no interval): not significant.
  std::vector<std::pair<std::string, std::string>> overlapping;
};

struct ComparisonTable {
  std::vector<MetricRanking> rankings;

  const MetricRanking& ranking(const std::string& metric) const;
  bool significant(const std::string& metric, const std::string& a, const std::string& b) const;
};

ComparisonTable compare(const AggregateReport& report);
/// Strategies of both reports side by side; names present in both get
/// `A:`/`B:` prefixes. Throws `metric_mismatch` when metric sets differ.
ComparisonTable compare(const AggregateReport& a, const AggregateReport& b);

/// Plain-text table; byte hit rate and footprint reduction always appear
/// together in the first block.
std::string render_comparison(const ComparisonTable& table);
nlohmann::ordered_json to_json(const ComparisonTable& table);

}  // namespace icn
