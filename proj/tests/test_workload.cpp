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


#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "icn/error.hpp"
#include "icn/io.hpp"
#include "icn/roles.hpp"
#include "icn/workload.hpp"
#include "support/oracles.hpp"

using namespace icn;

namespace {

RoleAssignment star_roles(std::size_t n_objects) {
  static const Graph g = make_star(5);
  auto roles = make_roles(g, {1, 2, 3}, {0});
  roles.origin.assign(n_objects, 0);
  return roles;
}

std::vector<double> weights_of(const Catalog& c) {
  std::vector<double> w;
  for (const auto& e : c.entries) w.push_back(e.weight);
  return w;
}

}  // namespace

TEST_CASE("zipf catalog of three objects") {
  const auto c = build_catalog(3, PopularityModel::zipf(1.0), SizeModel::fixed(10), 1);
  CHECK(weights_of(c) == std::vector<double>{1.0, 0.5, 1.0 / 3.0});
  const auto p = c.probabilities();
  CHECK(p[0] == doctest::Approx(6.0 / 11.0).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(3.0 / 11.0).epsilon(1e-15));
  CHECK(p[2] == doctest::Approx(2.0 / 11.0).epsilon(1e-15));
}

TEST_CASE("single-object catalogs have probability one") {
  for (const auto& model : {PopularityModel::zipf(0.7), PopularityModel::weibull(0.5, 10.0)}) {
    const auto c = build_catalog(1, model, SizeModel::fixed(1), 0);
    CHECK(c.probabilities() == std::vector<double>{1.0});
  }
}

TEST_CASE("head mass of a 10k zipf(0.8) catalog matches direct summation") {
  const auto c = build_catalog(10000, PopularityModel::zipf(0.8), SizeModel::fixed(1), 3);
  double head = 0.0;
  double total = 0.0;
  for (int i = 1; i <= 10000; ++i) {
    const double w = std::pow(static_cast<double>(i), -0.8);
    total += w;
    if (i <= 100) head += w;
  }
  const auto p = c.probabilities();
  const double got = std::accumulate(p.begin(), p.begin() + 100, 0.0);
  CHECK(got == doctest::Approx(head / total).epsilon(1e-12));
  CHECK(got == doctest::Approx(0.3000).epsilon(1e-3));
}

TEST_CASE("probabilities sum to one and zipf is monotone") {
  for (double s : {0.2, 0.8, 1.0, 1.7}) {
    const auto c = build_catalog(2000, PopularityModel::zipf(s), SizeModel::fixed(1), 0);
    const auto p = c.probabilities();
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c.entries[i - 1].weight > c.entries[i].weight);
  }
  for (auto [k, lambda] : {std::pair{0.5, 20.0}, {1.0, 50.0}, {2.0, 100.0}}) {
    const auto c = build_catalog(500, PopularityModel::weibull(k, lambda), SizeModel::fixed(1), 0);
    const auto p = c.probabilities();
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& e : c.entries) CHECK(e.weight > 0.0);
  }
}

TEST_CASE("weibull weights are proportional to the density at integer ranks") {
  const double k = 1.5;
  const double lambda = 30.0;
  const auto c = build_catalog(100, PopularityModel::weibull(k, lambda), SizeModel::fixed(1), 0);
  auto pdf = [&](double x) { return (k / lambda) * std::pow(x / lambda, k - 1) * std::exp(-std::pow(x / lambda, k)); };
  for (std::size_t i = 1; i < 100; ++i) {
    const double want = pdf(static_cast<double>(i + 1)) / pdf(1.0);
    const double got = c.entries[i].weight / c.entries[0].weight;
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("catalog parameter validation") {
  CHECK_THROWS_AS(build_catalog(0, PopularityModel::zipf(1.0), SizeModel::fixed(1), 0), Error);
  CHECK_THROWS_AS(build_catalog(5, PopularityModel::zipf(0.0), SizeModel::fixed(1), 0), Error);
  CHECK_THROWS_AS(build_catalog(5, PopularityModel::weibull(-1.0, 2.0), SizeModel::fixed(1), 0), Error);
  CHECK_THROWS_AS(build_catalog(5, PopularityModel::weibull(1.0, 0.0), SizeModel::fixed(1), 0), Error);
  CHECK_THROWS_AS(build_catalog(5, PopularityModel::zipf(1.0), SizeModel::fixed(0), 0), Error);
  CHECK_THROWS_AS(build_catalog(5, PopularityModel::zipf(1.0), SizeModel::uniform(9, 3), 0), Error);
}

TEST_CASE("uniform sizes stay in range and follow the seed") {
  const auto a = build_catalog(300, PopularityModel::zipf(1.0), SizeModel::uniform(100, 200), 9);
  const auto b = build_catalog(300, PopularityModel::zipf(1.0), SizeModel::uniform(100, 200), 9);
  std::set<std::uint64_t> distinct;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.entries[i].size >= 100);
    CHECK(a.entries[i].size <= 200);
    CHECK(a.entries[i].size == b.entries[i].size);
    distinct.insert(a.entries[i].size);
  }
  CHECK(distinct.size() > 50);
}

TEST_CASE("sample_requests edge cases") {
  const auto c = build_catalog(1, PopularityModel::zipf(1.0), SizeModel::fixed(1), 0);
  auto roles = star_roles(1);
  CHECK(sample_requests(c, roles, 0, 1).empty());
  roles.clients = {2};
  roles.client_weight = {1.0};
  const auto s = sample_requests(c, roles, 50, 1);
  REQUIRE(s.size() == 50);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].seq == i);
    CHECK(s[i].client == 2);
    CHECK(s[i].object == 0);
  }
  roles.clients.clear();
  roles.client_weight.clear();
  try {
    sample_requests(c, roles, 5, 1);
    FAIL("expected no_clients");
  } catch (const Error& e) {
    CHECK(std::string(e.code()) == errc::kNoClients);
  }
}

TEST_CASE("object frequencies pass chi-square goodness of fit") {
  const auto c = build_catalog(100, PopularityModel::zipf(1.0), SizeModel::fixed(1), 0);
  const auto roles = star_roles(100);
  const std::size_t n = 100000;
  const auto stream = sample_requests(c, roles, n, 12345);
  std::vector<std::uint64_t> counts(100, 0);
  for (const auto& r : stream) ++counts[r.object];
  const double stat = oracle::chi_square_statistic(counts, c.probabilities(), n);
  CHECK(stat < oracle::chi_square_critical(0.01, 99));
}

TEST_CASE("client frequencies follow gravity weight") {
  const Graph g = load_topology("0 1\n0 2\n0 3\n2 3\nnode 1 weight 6\n");
  auto roles = make_roles(g, {1, 2, 3}, {0});
  const auto c = build_catalog(4, PopularityModel::zipf(1.0), SizeModel::fixed(1), 0);
  roles.origin.assign(4, 0);
  const std::size_t n = 60000;
  const auto stream = sample_requests(c, roles, n, 7);
  std::vector<std::uint64_t> counts(3, 0);
  for (const auto& r : stream) ++counts[r.client - 1];
  const std::vector<double> p{6.0 / 10.0, 2.0 / 10.0, 2.0 / 10.0};
  CHECK(oracle::chi_square_statistic(counts, p, n) < oracle::chi_square_critical(0.01, 2));
}

TEST_CASE("identical seeds replay identical streams") {
  const auto c = build_catalog(50, PopularityModel::zipf(0.9), SizeModel::fixed(1), 0);
  const auto roles = star_roles(50);
  CHECK(sample_requests(c, roles, 5000, 77) == sample_requests(c, roles, 5000, 77));
  CHECK(sample_requests(c, roles, 5000, 77) != sample_requests(c, roles, 5000, 78));
  const AgingSchedule aging{500, 0.2};
  CHECK(sample_requests(c, roles, 5000, 77, aging) == sample_requests(c, roles, 5000, 77, aging));
}

TEST_CASE("aging with f = 0 is the identity") {
  const auto c = build_catalog(100, PopularityModel::zipf(1.0), SizeModel::fixed(1), 0);
  const auto aged = apply_aging(c, AgingSchedule{10, 0.0}, 3, 4);
  CHECK(weights_of(aged) == weights_of(c));
}

TEST_CASE("aging changes exactly a fraction f of the objects") {
  const auto c = build_catalog(1000, PopularityModel::zipf(0.8), SizeModel::fixed(1), 0);
  for (std::uint64_t epoch = 1; epoch <= 5; ++epoch) {
    const auto aged = apply_aging(c, AgingSchedule{10, 0.1}, epoch, 99);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < c.size(); ++i) changed += aged.entries[i].weight != c.entries[i].weight;
    CHECK(changed == 100);
  }
}

TEST_CASE("aging conserves weights and ids") {
  const auto c = build_catalog(777, PopularityModel::zipf(1.1), SizeModel::uniform(1, 50), 2);
  for (double f : {0.0, 0.05, 0.5, 1.0}) {
    const auto aged = apply_aging(c, AgingSchedule{1, f}, 2, 8);
    auto a = weights_of(c);
    auto b = weights_of(aged);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
    for (std::size_t i = 0; i < c.size(); ++i) {
      CHECK(aged.entries[i].id == c.entries[i].id);
      CHECK(aged.entries[i].size == c.entries[i].size);
    }
  }
  const auto full = apply_aging(c, AgingSchedule{1, 1.0}, 1, 8);
  std::size_t moved = 0;
  for (std::size_t i = 0; i < c.size(); ++i) moved += full.entries[i].weight != c.entries[i].weight;
  CHECK(moved == 776);
}

TEST_CASE("aging inside the stream shifts popularity") {
  const auto c = build_catalog(200, PopularityModel::zipf(1.2), SizeModel::fixed(1), 0);
  const auto roles = star_roles(200);
  const auto stream = sample_requests(c, roles, 20000, 5, AgingSchedule{10000, 1.0});
  std::size_t early = 0;
  std::size_t late = 0;
  for (const auto& r : stream) {
    if (r.object == 0) (r.seq < 10000 ? early : late) += 1;
  }
  CHECK(early > 1000);
  CHECK(late < early / 4);
}

TEST_CASE("origins are assigned round-robin by popularity") {
  const Graph g = make_star(6);
  auto roles = make_roles(g, {4, 5}, {0, 1, 2});
  auto c = build_catalog(7, PopularityModel::zipf(1.0), SizeModel::fixed(1), 0);
  std::swap(c.entries[0].weight, c.entries[6].weight);
  assign_origins(roles, c);
  CHECK(roles.origin == std::vector<NodeId>{0, 1, 2, 0, 1, 2, 0});
}

TEST_CASE("trace and catalog CSV round trip") {
  const auto c = build_catalog(20, PopularityModel::zipf(0.75), SizeModel::uniform(10, 90), 4);
  const auto stream = sample_requests(c, star_roles(20), 100, 3);
  std::stringstream trace;
  write_trace_csv(trace, stream);
  CHECK(trace.str().rfind("seq,client,object\n", 0) == 0);
  CHECK(read_trace_csv(trace) == stream);
  std::stringstream cat;
  write_catalog_csv(cat, c);
  CHECK(cat.str().rfind("object,size,weight\n", 0) == 0);
  const auto back = read_catalog_csv(cat);
  REQUIRE(back.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(back.entries[i].size == c.entries[i].size);
    CHECK(back.entries[i].weight == c.entries[i].weight);
  }
  std::stringstream bad("seq,client,object\n0,1,2\n2,1,2\n");
  CHECK_THROWS_AS(read_trace_csv(bad), Error);
}
