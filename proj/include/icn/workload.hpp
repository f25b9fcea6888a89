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
#include <string>
#include <vector>

#include "icn/roles.hpp"

namespace icn {

struct PopularityModel {
  enum class Kind { kZipf, kWeibull };

  Kind kind = Kind::kZipf;
  double zipf_s = 1.0;
  double weibull_shape = 1.0;
  double weibull_scale = 1.0;

  static PopularityModel zipf(double s) { return {Kind::kZipf, s, 0.0, 0.0}; }
  static PopularityModel weibull(double shape, double scale) {
    return {Kind::kWeibull, 0.0, shape, scale};
  }
  void validate() const;
  std::string describe() const;
};

struct SizeModel {
  enum class Kind { kFixed, kUniform };

  Kind kind = Kind::kFixed;
  std::uint64_t min_bytes = 1;
  std::uint64_t max_bytes = 1;

  static SizeModel fixed(std::uint64_t bytes) { return {Kind::kFixed, bytes, bytes}; }
  static SizeModel uniform(std::uint64_t lo, std::uint64_t hi) { return {Kind::kUniform, lo, hi}; }
  void validate() const;
};

struct CatalogEntry {
  ObjectId id = 0;
  std::uint64_t size = 0;
  double weight = 0.0;
};

/// Content objects indexed by ObjectId (entries[i].id == i). Weights are
/// relative; sampling normalizes them.
struct Catalog {
  std::vector<CatalogEntry> entries;
  PopularityModel model;

  std::size_t size() const noexcept { return entries.size(); }
  const CatalogEntry& at(ObjectId id) const { return entries.at(id); }
  double total_weight() const;
  std::uint64_t total_bytes() const;
  std::vector<double> probabilities() const;
  void validate() const;
};

/// Zipf: rank i (1-based) gets i^-s. Weibull: the density at integer rank i,
/// rescaled so the largest weight is 1. Object i has rank i+1.
Catalog build_catalog(std::size_t n_objects, const PopularityModel& model, const SizeModel& sizes,
                      std::uint64_t seed);

struct Request {
  std::uint64_t seq = 0;
  NodeId client = 0;
  ObjectId object = 0;

  bool operator==(const Request&) const = default;
};

using RequestStream = std::vector<Request>;

/// Every `interval` requests, a fraction of objects trade popularity ranks.
struct AgingSchedule {
  std::uint64_t interval = 1;
  double fraction = 0.0;

  void validate() const;
};

/// Clients drawn proportional to gravity weight, objects proportional to
/// catalog weight, independently per request.
RequestStream sample_requests(const Catalog& catalog, const RoleAssignment& roles,
                              std::size_t n_requests, std::uint64_t seed);

/// As above, with the catalog aged at every epoch boundary exactly as
/// the simulator replays it for the same seed.
RequestStream sample_requests(const Catalog& catalog, const RoleAssignment& roles,
                              std::size_t n_requests, std::uint64_t seed,
                              const AgingSchedule& aging);

/// Picks 2*floor(f*n/2) distinct objects uniformly and swaps weights pairwise,
/// so exactly that many objects change rank. Sizes and ids are untouched.
Catalog apply_aging(const Catalog& catalog, const AgingSchedule& schedule, std::uint64_t epoch,
                    std::uint64_t seed);

/// Servers take objects round-robin in order of descending weight.
void assign_origins(RoleAssignment& roles, const Catalog& catalog);

/// Cumulative-weight sampler; draws are a binary search on u * total.
class WeightedSampler {
 public:
  explicit WeightedSampler(const std::vector<double>& weights);
  template <typename RngT>
  std::size_t draw(RngT& rng) const {
    return locate(rng.uniform() * total_);
  }
  std::size_t locate(double target) const;

 private:
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

}  // namespace icn
