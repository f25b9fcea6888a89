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

// icnsim: command-line front end for the cache-network simulator.
//
//   icnsim run <spec.json>
//   icnsim compare <reportA> [<reportB>]
//   icnsim topo-stats <edgelist>
//   icnsim gen-workload <params.json>
//
// Failures exit nonzero and print {"error": {...}} on stderr.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "icn/error.hpp"
#include "icn/harness.hpp"
#include "icn/io.hpp"
#include "icn/roles.hpp"
#include "icn/topology.hpp"

namespace {

using nlohmann::ordered_json;

icn::AggregateReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw icn::Error(icn::errc::kIo, "cannot open report " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw icn::Error(icn::errc::kParse, path + ": " + e.what());
  }
  return icn::aggregate_from_json(doc);
}

int cmd_run(const std::string& spec_path, const std::string& output_override,
            std::size_t threads, bool quiet) {
  auto spec = icn::load_experiment_spec(spec_path);
  if (!output_override.empty()) spec.output_dir = output_override;
  if (threads > 0) spec.threads = threads;
  const auto result = icn::run_experiment(spec);
  if (!quiet) std::cout << icn::render_comparison(icn::compare(result.aggregate));
  return 0;
}

int cmd_compare(const std::string& a, const std::string& b, bool as_json) {
  const auto report_a = load_report(a);
  const auto table = b.empty() ? icn::compare(report_a) : icn::compare(report_a, load_report(b));
  if (as_json) {
    std::cout << icn::to_json(table).dump(2) << '\n';
  } else {
    std::cout << icn::render_comparison(table);
  }
  return 0;
}

int cmd_topo_stats(const std::string& path, const std::string& centrality_out,
                   const std::string& adjacency_out, std::size_t fit_min, std::size_t fit_max) {
  const auto g = icn::load_topology_file(path);
  ordered_json summary;
  summary["nodes"] = g.node_count();
  summary["edges"] = g.edge_count();
  summary["components"] = g.component_count();
  summary["warnings"] = g.warnings();
  std::size_t max_degree = 0;
  for (icn::NodeId v = 0; v < g.node_count(); ++v) max_degree = std::max(max_degree, g.degree(v));
  summary["median_degree"] = icn::median_degree(g);
  summary["max_degree"] = max_degree;
  try {
    const auto fit = icn::fit_degree_ccdf(g, fit_min, fit_max);
    summary["degree_ccdf_fit"] = {{"k_min", fit_min}, {"k_max", fit_max}, {"slope", fit.slope},
                                  {"r_squared", fit.r_squared}, {"points", fit.points}};
  } catch (const icn::Error&) {
    summary["degree_ccdf_fit"] = nullptr;
  }
  if (!centrality_out.empty()) {
    const auto table = icn::betweenness(g);
    std::ofstream out(centrality_out, std::ios::binary);
    if (!out) throw icn::Error(icn::errc::kIo, "cannot write " + centrality_out);
    icn::write_centrality_csv(out, g, table);
  }
  if (!adjacency_out.empty()) {
    std::ofstream out(adjacency_out, std::ios::binary);
    if (!out) throw icn::Error(icn::errc::kIo, "cannot write " + adjacency_out);
    icn::write_adjacency_csv(out, g);
  }
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int cmd_gen_workload(const std::string& params_path, const std::string& output_override) {
  auto job = icn::load_workload_job(params_path);
  if (!output_override.empty()) job.output_dir = output_override;
  if (job.output_dir.empty()) {
    throw icn::Error(icn::errc::kConfig, "gen-workload needs output_dir (in params or --output-dir)");
  }
  const auto generated = icn::generate_workload(job);
  ordered_json summary;
  summary["objects"] = generated.catalog.size();
  summary["requests"] = generated.stream.size();
  summary["clients"] = generated.roles.clients.size();
  summary["servers"] = generated.roles.servers;
  summary["output_dir"] = job.output_dir.generic_string();
  std::cout << summary.dump(2) << '\n';
  return 0;
}

void print_error(const std::string& code, const std::string& message,
                 const std::optional<std::uint64_t>& seed = std::nullopt) {
  ordered_json err;
  err["code"] = code;
  err["message"] = message;
  if (seed) err["seed"] = *seed;
  std::cerr << ordered_json{{"error", err}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic simulator and metrics for networks of ICN caches"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string output_dir;
  std::size_t threads = 0;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run an experiment spec and write reports");
  run->add_option("spec", spec_path, "Experiment spec (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output-dir", output_dir, "Override output_dir from the experiment file");
  run->add_option("-j,--threads", threads, "Repetitions run in parallel");
  run->add_flag("-q,--quiet", quiet, "Do not print the comparison table");

  std::string report_a;
  std::string report_b;
  bool as_json = false;
  auto* compare = app.add_subcommand("compare", "Rank strategies from one or two aggregate reports");
  compare->add_option("reportA", report_a, "aggregate.json")->required()->check(CLI::ExistingFile);
  compare->add_option("reportB", report_b, "second aggregate.json")->check(CLI::ExistingFile);
  compare->add_flag("--json", as_json, "Emit the ranking table as JSON");

  std::string edge_list;
  std::string centrality_out;
  std::string adjacency_out;
  std::size_t fit_min = 3;
  std::size_t fit_max = 50;
  auto* topo = app.add_subcommand("topo-stats", "Summarize a topology; optionally dump CSVs");
  topo->add_option("edgelist", edge_list, "Edge-list file")->required()->check(CLI::ExistingFile);
  topo->add_option("--centrality", centrality_out, "Write node,degree,betweenness CSV here");
  topo->add_option("--adjacency", adjacency_out, "Write source,target CSV here");
  topo->add_option("--fit-min", fit_min, "Smallest degree in the CCDF fit");
  topo->add_option("--fit-max", fit_max, "Largest degree in the CCDF fit");

  std::string params_path;
  std::string workload_out;
  auto* gen = app.add_subcommand("gen-workload", "Write catalog.csv, trace.csv and roles.json");
  gen->add_option("params", params_path, "Workload params (JSON)")->required()->check(CLI::ExistingFile);
  gen->add_option("-o,--output-dir", workload_out, "Override output_dir from the params");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("usage_error", e.what());
    return 2;
  }

  try {
    if (*run) return cmd_run(spec_path, output_dir, threads, quiet);
    if (*compare) return cmd_compare(report_a, report_b, as_json);
    if (*topo) return cmd_topo_stats(edge_list, centrality_out, adjacency_out, fit_min, fit_max);
    if (*gen) return cmd_gen_workload(params_path, workload_out);
  } catch (const icn::ExperimentFailure& e) {
    print_error(e.code(), e.what(), e.seed());
    return 1;
  } catch (const icn::Error& e) {
    print_error(e.code(), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error(icn::errc::kInternal, e.what());
    return 1;
  }
  return 1;
}
