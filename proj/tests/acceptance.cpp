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


// Acceptance checks, one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "icn/harness.hpp"
#include "icn/metrics.hpp"
#include "icn/simulator.hpp"
#include "support/oracles.hpp"

using namespace icn;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

// Ranks of values, strict order only; ties share a rank.
std::vector<std::size_t> order_of(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  return idx;
}

bool same_strict_order(const std::vector<double>& a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) {
      if ((a[i] < a[j]) != (b[i] < b[j])) return false;
    }
  }
  return true;
}

json tree_spec() {
  return json::parse(R"({
    "schema_version": 1,
    "topology": {"kind": "tree", "branching": 2, "depth": 4},
    "workload": {
      "objects": 500,
      "requests": 100000,
      "popularity": {"model": "zipf", "s": 0.8},
      "size": {"model": "fixed", "bytes": 1000}
    },
    "cache": {"capacity_fraction": 0.02},
    "strategies": [
      {"name": "lce", "placement": "lce"},
      {"name": "cachedbit", "placement": "cachedbit"},
      {"name": "edge", "placement": "edge_only"},
      {"name": "core", "placement": "core_only"}
    ],
    "repetitions": 10,
    "base_seed": 1,
    "miss_cost": "actual"
  })");
}

// Criterion 1.
Verdict baseline_invariance() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20260101);
  // Baselines span seven decades; strategy footprints lie within 1e-2..1e1
  // of the baseline, i.e. reductions between -9 and 0.99.
  std::uniform_real_distribution<double> decade(0.0, 7.0);
  std::uniform_real_distribution<double> ratio(-2.0, 1.0);
  // Deviation is measured on the scale of the value: rebasing multiplies
  // rounding in y by x_theta / x_beta, so absolute error grows with it.
  double worst = 0.0;
  auto deviation = [](double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); };
  std::size_t triples = 0;
  for (; triples < 1000; ++triples) {
    const double x_theta = std::pow(10.0, decade(rng));
    const double x_alpha = x_theta * std::pow(10.0, ratio(rng));
    const double x_beta = x_theta * std::pow(10.0, ratio(rng));
    const std::vector<double> ys{footprint_reduction(x_alpha, {x_theta}), footprint_reduction(x_beta, {x_theta}), 0.0};
    const auto r = rebase(ys, ys[1]);
    const std::vector<double> direct{1.0 - x_alpha / x_beta, 0.0, 1.0 - x_theta / x_beta};
    for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, deviation(r[i], direct[i]));
    v.require(same_strict_order(ys, r), "triple ranking changed");
  }

  auto spec = parse_experiment_spec(json::parse(R"({
    "schema_version": 1,
    "topology": {"kind": "tree", "branching": 2, "depth": 3},
    "workload": {"objects": 60, "requests": 1500, "popularity": {"model": "zipf", "s": 0.9},
                 "size": {"model": "uniform", "min": 100, "max": 900}},
    "cache": {"capacity_fraction": 0.05},
    "strategies": [
      {"name": "lce", "placement": "lce"},
      {"name": "cachedbit", "placement": "cachedbit"},
      {"name": "edge", "placement": "edge_only"},
      {"name": "core", "placement": "core_only"},
      {"name": "cachedbit_r2", "placement": "cachedbit", "search_radius": 2},
      {"name": "lce_k1", "placement": "lce", "copy_limit": 1}
    ],
    "repetitions": 20,
    "base_seed": 77
  })"));
  const auto result = run_experiment(spec);
  std::map<std::size_t, std::vector<const RunResult*>> sets;
  for (const auto& run : result.runs) sets[run.repetition].push_back(&run);
  for (const auto& [rep, runs] : sets) {
    std::vector<double> x;
    std::vector<double> y;
    double x_theta = 0.0;
    for (const auto* run : runs) {
      if (run->strategy == kBaselineName) x_theta = static_cast<double>(run->metrics.footprint);
    }
    for (const auto* run : runs) {
      x.push_back(static_cast<double>(run->metrics.footprint));
      y.push_back(run->metrics.footprint_reduction);
      v.require(run->metrics.footprint_reduction == footprint_reduction(x.back(), {x_theta}), "stored fpr differs");
    }
    for (std::size_t b = 0; b < runs.size(); ++b) {
      if (x[b] <= 0.0) continue;
      const auto r = rebase(y, y[b]);
      v.require(r[b] == 0.0, "rebased baseline not zero");
      for (std::size_t i = 0; i < runs.size(); ++i) worst = std::max(worst, deviation(r[i], 1.0 - x[i] / x[b]));
      v.require(same_strict_order(y, r), "strategy ranking changed");
      v.require(order_of(y) == order_of(r), "argsort changed");
    }
  }
  const double secs = seconds_since(t0);
  v.require(worst <= 1e-12, "max deviation " + fmt(worst));
  v.require(secs < 1.0, "took " + fmt(secs) + " s");
  if (v.pass) {
    v.detail = std::to_string(triples) + " triples, " + std::to_string(sets.size()) +
               " strategy sets, max scaled |rebase - direct| = " + fmt(worst) + ", " + fmt(secs) + " s";
  }
  return v;
}

// Criterion 2.
Verdict footprint_identity() {
  Verdict v;
  const auto edges = oracle::six_node_tree();
  const auto graph = std::make_shared<const Graph>(6, edges);
  auto roles = make_roles(*graph, {3, 4, 5}, {0});
  const auto catalog = build_catalog(25, PopularityModel::zipf(0.8), SizeModel::uniform(10, 1000), 5);
  assign_origins(roles, catalog);
  SimConfig c;
  c.graph = graph;
  c.roles = roles;
  c.catalog = catalog;
  c.stream = std::make_shared<const RequestStream>(sample_requests(catalog, roles, 5000, 5));
  c.cache_capacity_bytes = 0;
  c.warmup_fraction = 0.25;
  const auto log = run(c);
  const auto d = oracle::floyd_warshall(6, edges);
  std::uint64_t expected = 0;
  for (std::size_t i = log.warmup_requests; i < c.stream->size(); ++i) {
    const auto& r = (*c.stream)[i];
    expected += catalog.entries[r.object].size * static_cast<std::uint64_t>(d[r.client][roles.origin[r.object]]);
  }
  const std::uint64_t got = footprint(log.records);
  const double fpr = footprint_reduction(static_cast<double>(got), {static_cast<double>(got)});
  v.require(got == expected, "footprint " + std::to_string(got) + " != " + std::to_string(expected));
  v.require(fpr == 0.0, "self reduction " + fmt(fpr));
  if (v.pass) v.detail = "footprint " + std::to_string(got) + " == oracle, fpr 0";
  return v;
}

// Criterion 3. Path C(0) - R1(1) - R2(2) - S(3), LCE, capacity 350 B.
// Objects A (100 B) and B (300 B); requests A A B A B.
//   1 A: server, 3 hops; R1,R2 = {A}
//   2 A: hit at R1, 1 hop
//   3 B: server, 3 hops; A evicted, R1,R2 = {B}
//   4 A: server, 3 hops; B evicted, R1,R2 = {A}
//   5 B: server, 3 hops
// hits 1/5, bytes 100/900, hops 13/5, footprint 2500 vs baseline 2700.
Verdict hand_trace() {
  Verdict v;
  const auto graph = std::make_shared<const Graph>(make_path(4));
  auto roles = make_roles(*graph, {0}, {3});
  Catalog catalog;
  catalog.model = PopularityModel::zipf(1.0);
  catalog.entries = {{0, 100, 1.0}, {1, 300, 0.5}};
  assign_origins(roles, catalog);
  const RequestStream stream{{0, 0, 0}, {1, 0, 0}, {2, 0, 1}, {3, 0, 0}, {4, 0, 1}};
  SimConfig c;
  c.graph = graph;
  c.roles = roles;
  c.catalog = catalog;
  c.stream = std::make_shared<const RequestStream>(stream);
  c.cache_capacity_bytes = 350;
  c.warmup_fraction = 0.0;
  const auto log = run(c);
  c.cache_capacity_bytes = 0;
  const auto base = run(c);
  const auto rates = hit_and_byte_hit_rate(log.records);
  const double hops = average_hops(log.records, MissCost::actual());
  const auto fp = footprint(log.records);
  const auto x_theta = footprint(base.records);
  const double fpr = footprint_reduction(static_cast<double>(fp), {static_cast<double>(x_theta)});
  v.require(rates.hit_rate == 1.0 / 5.0, "hit_rate " + fmt(rates.hit_rate));
  v.require(rates.byte_hit_rate == 100.0 / 900.0, "bhr " + fmt(rates.byte_hit_rate));
  v.require(hops == 13.0 / 5.0, "avg_hops " + fmt(hops));
  v.require(fp == 2500, "footprint " + std::to_string(fp));
  v.require(x_theta == 2700, "baseline " + std::to_string(x_theta));
  v.require(fpr == 1.0 - 2500.0 / 2700.0, "fpr " + fmt(fpr));
  v.require(average_hops(log.records, MissCost::fixed(10)) == (10.0 + 1 + 10 + 10 + 10) / 5.0, "fixed miss cost");
  if (v.pass) v.detail = "hit 0.2, bhr 1/9, hops 2.6, footprint 2500, fpr 2/27";
  return v;
}

// Criterion 4.
Verdict betweenness_oracle() {
  Verdict v;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(4242);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 8);
    const double p = std::uniform_real_distribution<double>(0.0, 0.8)(rng);
    const auto edges = oracle::random_connected_edges(n, p, rng);
    const auto got = betweenness(Graph(n, edges));
    const auto want = oracle::brute_betweenness(n, edges);
    for (std::size_t i = 0; i < n; ++i) {
      const double rel = std::abs(got.values[i] - want[i].value()) / std::max(1.0, want[i].value());
      worst = std::max(worst, rel);
    }
  }
  const double secs = seconds_since(t0);
  v.require(worst <= 1e-12, "relative deviation " + fmt(worst));
  v.require(secs < 10.0, "took " + fmt(secs) + " s");
  if (v.pass) v.detail = "200 graphs, max relative deviation " + fmt(worst) + ", " + fmt(secs) + " s";
  return v;
}

struct TreeExperiment {
  AggregateReport report;
  double seconds = 0.0;
};

const TreeExperiment& tree_experiment() {
  static const TreeExperiment cached = [] {
    const auto t0 = Clock::now();
    TreeExperiment t;
    t.report = run_experiment(parse_experiment_spec(tree_spec())).aggregate;
    t.seconds = seconds_since(t0);
    return t;
  }();
  return cached;
}

double mean_of(const AggregateReport& r, const std::string& s, const std::string& m) {
  return r.strategy(s).metric(m).mean.value_or(std::nan(""));
}

double ci_of(const AggregateReport& r, const std::string& s, const std::string& m) {
  return r.strategy(s).metric(m).ci_half_width.value_or(std::nan(""));
}

// Criterion 5.
Verdict tradeoff_direction() {
  Verdict v;
  const auto& t = tree_experiment();
  const auto& r = t.report;
  const double ef = mean_of(r, "edge", "fpr");
  const double cf = mean_of(r, "core", "fpr");
  const double eb = mean_of(r, "edge", "bhr");
  const double cb = mean_of(r, "core", "bhr");
  v.require(ef > cf, "edge fpr not above core");
  v.require(eb < cb, "edge bhr not below core");
  v.require(ef - ci_of(r, "edge", "fpr") > cf + ci_of(r, "core", "fpr"), "fpr intervals overlap");
  v.require(eb + ci_of(r, "edge", "bhr") < cb - ci_of(r, "core", "bhr"), "bhr intervals overlap");
  const auto table = compare(r);
  v.require(table.significant("fpr", "edge", "core") && table.significant("bhr", "edge", "core"),
            "compare() flags overlap");
  v.require(t.seconds < 60.0, "took " + fmt(t.seconds) + " s");
  if (v.pass) {
    v.detail = "fpr edge " + fmt(ef) + " > core " + fmt(cf) + ", bhr edge " + fmt(eb) + " < core " + fmt(cb) +
               ", disjoint 95% CIs, " + fmt(t.seconds) + " s";
  }
  return v;
}

// Criterion 6.
Verdict coupling_sign() {
  Verdict v;
  const auto& r = tree_experiment().report;
  const double core = mean_of(r, "core", "cpf");
  const double edge = mean_of(r, "edge", "cpf");
  v.require(core > 0.3, "core cpf " + fmt(core));
  v.require(edge < -0.3, "edge cpf " + fmt(edge));
  if (v.pass) v.detail = "cpf core " + fmt(core) + ", edge " + fmt(edge);
  return v;
}

// Criterion 7.
Verdict radius_monotonicity() {
  Verdict v;
  auto doc = tree_spec();
  doc["strategies"] = json::array();
  for (int r = 0; r <= 3; ++r) {
    doc["strategies"].push_back({{"name", "r" + std::to_string(r)}, {"placement", "cachedbit"}, {"search_radius", r}});
  }
  const auto report = run_experiment(parse_experiment_spec(doc)).aggregate;
  std::string trail;
  double prev = -1.0;
  for (int r = 0; r <= 3; ++r) {
    const double bhr = mean_of(report, "r" + std::to_string(r), "bhr");
    v.require(bhr >= prev, "bhr drops at r=" + std::to_string(r));
    prev = bhr;
    trail += (r ? " <= " : "") + fmt(bhr);
  }
  if (v.pass) v.detail = "bhr " + trail;
  return v;
}

// Criterion 8.
Verdict hops_discrimination() {
  Verdict v;
  const auto& r = tree_experiment().report;
  auto spread = [&](const std::string& metric) {
    std::vector<double> xs;
    for (const auto& s : r.strategies) {
      if (s.name != kBaselineName) xs.push_back(*s.metric(metric).mean);
    }
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    return (*hi - *lo) / mean;
  };
  const double hops = spread("avg_hops");
  const double fpr = spread("fpr");
  v.require(hops < fpr, "avg_hops spread " + fmt(hops) + " >= fpr spread " + fmt(fpr));
  if (v.pass) v.detail = "relative spread avg_hops " + fmt(hops) + " < fpr " + fmt(fpr);
  return v;
}

// Criterion 9.
Verdict workload_fidelity() {
  Verdict v;
  const auto catalog = build_catalog(100, PopularityModel::zipf(1.0), SizeModel::fixed(1), 0);
  const Graph star = make_star(4);
  auto roles = make_roles(star, {1, 2, 3}, {0});
  assign_origins(roles, catalog);
  const std::size_t n = 100000;
  const auto stream = sample_requests(catalog, roles, n, 9);
  std::vector<std::uint64_t> counts(100, 0);
  for (const auto& r : stream) ++counts[r.object];
  const double stat = oracle::chi_square_statistic(counts, catalog.probabilities(), n);
  const double crit = oracle::chi_square_critical(0.01, 99);
  v.require(stat < crit, "chi-square " + fmt(stat) + " >= " + fmt(crit));
  const auto fit = fit_degree_ccdf(generate_ba(2000, 2, 2000), 3, 50);
  v.require(fit.r_squared > 0.9, "BA R^2 " + fmt(fit.r_squared));
  v.require(fit.slope < 0.0, "BA slope " + fmt(fit.slope));
  if (v.pass) {
    v.detail = "chi-square " + fmt(stat) + " < " + fmt(crit) + "; BA ccdf slope " + fmt(fit.slope) + ", R^2 " +
               fmt(fit.r_squared);
  }
  return v;
}

std::map<std::string, std::string> read_tree(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[entry.path().filename().string()] = s.str();
  }
  return files;
}

// Criterion 10.
Verdict determinism() {
  Verdict v;
  auto doc = tree_spec();
  doc["workload"]["requests"] = 20000;
  doc["workload"]["aging"] = {{"interval", 5000}, {"fraction", 0.2}};
  doc["repetitions"] = 3;
  doc["write_event_logs"] = true;
  doc["write_snapshots"] = true;
  const auto root = std::filesystem::temp_directory_path() / "icncache_acceptance";
  std::filesystem::remove_all(root);
  std::vector<std::map<std::string, std::string>> outputs;
  for (int i = 0; i < 3; ++i) {
    std::filesystem::remove_all(root);
    auto spec = parse_experiment_spec(doc);
    spec.output_dir = root;
    spec.threads = i == 2 ? 3 : 1;
    run_experiment(spec);
    outputs.push_back(read_tree(spec.output_dir));
  }
  std::filesystem::remove_all(root);
  v.require(outputs[0].size() > 10, "too few output files");
  v.require(outputs[0] == outputs[1], "rerun differs");
  auto threaded = outputs[2];
  auto serial = outputs[0];
  threaded.erase("resolved_config.json");
  serial.erase("resolved_config.json");
  v.require(serial == threaded, "threaded run differs");
  if (v.pass) v.detail = std::to_string(outputs[0].size()) + " files byte-identical on rerun; results identical with 3 threads";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"baseline invariance of rebasing", baseline_invariance},
      {"footprint identity on the six-node fixture", footprint_identity},
      {"hand-traced metric oracles", hand_trace},
      {"betweenness against brute force", betweenness_oracle},
      {"EdgeOnly vs CoreOnly tradeoff direction", tradeoff_direction},
      {"coupling factor sign", coupling_sign},
      {"search radius monotonicity", radius_monotonicity},
      {"average hops discriminates less than FPR", hops_discrimination},
      {"workload fidelity", workload_fidelity},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s criterion %zu (%s): %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
