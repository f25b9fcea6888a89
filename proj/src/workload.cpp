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

#include "icn/workload.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "icn/error.hpp"
#include "icn/random.hpp"

namespace icn {

void PopularityModel::validate() const {
  switch (kind) {
    case Kind::kZipf:
      if (!(zipf_s > 0.0) || !std::isfinite(zipf_s)) {
        throw Error(errc::kInvalidArgument, "Zipf exponent must be positive");
      }
      break;
    case Kind::kWeibull:
      if (!(weibull_shape > 0.0) || !(weibull_scale > 0.0) || !std::isfinite(weibull_shape) ||
          !std::isfinite(weibull_scale)) {
        throw Error(errc::kInvalidArgument, "Weibull shape and scale must be positive");
      }
      break;
  }
}

std::string PopularityModel::describe() const {
  std::ostringstream out;
  if (kind == Kind::kZipf) {
    out << "zipf(s=" << zipf_s << ")";
  } else {
    out << "weibull(k=" << weibull_shape << ",lambda=" << weibull_scale << ")";
  }
  return out.str();
}

void SizeModel::validate() const {
  if (min_bytes == 0) throw Error(errc::kInvalidArgument, "object sizes must be positive");
  if (max_bytes < min_bytes) throw Error(errc::kInvalidArgument, "size range is empty");
}

double Catalog::total_weight() const {
  double total = 0.0;
  for (const auto& e : entries) total += e.weight;
  return total;
}

std::uint64_t Catalog::total_bytes() const {
  std::uint64_t total = 0;
  for (const auto& e : entries) total += e.size;
  return total;
}

std::vector<double> Catalog::probabilities() const {
  const double total = total_weight();
  std::vector<double> p(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) p[i] = entries[i].weight / total;
  return p;
}

void Catalog::validate() const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].id != i) throw Error(errc::kInvalidArgument, "catalog ids must be 0..n-1 in order");
    if (!(entries[i].weight > 0.0) || !std::isfinite(entries[i].weight)) {
      throw Error(errc::kInvalidArgument, "catalog weights must be positive and finite");
    }
    if (entries[i].size == 0) throw Error(errc::kInvalidArgument, "object sizes must be positive");
  }
}

Catalog build_catalog(std::size_t n_objects, const PopularityModel& model, const SizeModel& sizes,
                      std::uint64_t seed) {
  if (n_objects == 0) throw Error(errc::kInvalidArgument, "catalog needs at least one object");
  model.validate();
  sizes.validate();

  Catalog catalog;
  catalog.model = model;
  catalog.entries.resize(n_objects);

  if (model.kind == PopularityModel::Kind::kZipf) {
    for (std::size_t i = 0; i < n_objects; ++i) {
      catalog.entries[i].weight = std::pow(static_cast<double>(i + 1), -model.zipf_s);
    }
  } else {
    // log f(x) = log(k/l) + (k-1) log(x/l) - (x/l)^k, shifted by the max so
    // deep tails survive the exponentiation.
    const double k = model.weibull_shape;
    const double l = model.weibull_scale;
    std::vector<double> log_pdf(n_objects);
    for (std::size_t i = 0; i < n_objects; ++i) {
      const double x = static_cast<double>(i + 1) / l;
      log_pdf[i] = std::log(k / l) + (k - 1.0) * std::log(x) - std::pow(x, k);
    }
    const double peak = *std::max_element(log_pdf.begin(), log_pdf.end());
    for (std::size_t i = 0; i < n_objects; ++i) {
      catalog.entries[i].weight = std::exp(log_pdf[i] - peak);
      if (!(catalog.entries[i].weight > 0.0)) {
        throw Error(errc::kInvalidArgument,
                    "Weibull weight underflows at rank " + std::to_string(i + 1) +
                        "; increase the scale or shrink the catalog");
      }
    }
  }

  Rng rng(derive_seed(seed, 0x512e));
  for (std::size_t i = 0; i < n_objects; ++i) {
    auto& e = catalog.entries[i];
    e.id = static_cast<ObjectId>(i);
    if (sizes.kind == SizeModel::Kind::kFixed) {
      e.size = sizes.min_bytes;
    } else {
      e.size = sizes.min_bytes + rng.below(sizes.max_bytes - sizes.min_bytes + 1);
    }
  }
  return catalog;
}

void AgingSchedule::validate() const {
  if (interval < 1) throw Error(errc::kInvalidArgument, "aging interval must be >= 1");
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error(errc::kInvalidArgument, "aging fraction must lie in [0, 1]");
  }
}

WeightedSampler::WeightedSampler(const std::vector<double>& weights) : cumulative_(weights.size()) {
  double running = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    running += weights[i];
    cumulative_[i] = running;
  }
  total_ = running;
}

std::size_t WeightedSampler::locate(double target) const {
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  if (it == cumulative_.end()) --it;
  return static_cast<std::size_t>(it - cumulative_.begin());
}

namespace {

std::vector<double> weights_of(const Catalog& catalog) {
  std::vector<double> w(catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i) w[i] = catalog.entries[i].weight;
  return w;
}

RequestStream sample_impl(const Catalog& catalog, const RoleAssignment& roles, std::size_t n_requests,
                          std::uint64_t seed, const AgingSchedule* aging) {
  if (roles.clients.empty()) throw Error(errc::kNoClients, "cannot sample requests: no clients");
  catalog.validate();
  RequestStream stream;
  stream.reserve(n_requests);
  if (n_requests == 0) return stream;

  Rng client_rng(derive_seed(seed, 1));
  Rng object_rng(derive_seed(seed, 2));
  WeightedSampler clients(roles.client_weight);
  Catalog current = catalog;
  WeightedSampler objects(weights_of(current));

  for (std::size_t i = 0; i < n_requests; ++i) {
    if (aging != nullptr && i > 0 && i % aging->interval == 0) {
      current = apply_aging(current, *aging, i / aging->interval, seed);
      objects = WeightedSampler(weights_of(current));
    }
    Request r;
    r.seq = i;
    r.client = roles.clients[clients.draw(client_rng)];
    r.object = static_cast<ObjectId>(objects.draw(object_rng));
    stream.push_back(r);
  }
  return stream;
}

}  // namespace

RequestStream sample_requests(const Catalog& catalog, const RoleAssignment& roles,
                              std::size_t n_requests, std::uint64_t seed) {
  return sample_impl(catalog, roles, n_requests, seed, nullptr);
}

RequestStream sample_requests(const Catalog& catalog, const RoleAssignment& roles,
                              std::size_t n_requests, std::uint64_t seed,
                              const AgingSchedule& aging) {
  aging.validate();
  return sample_impl(catalog, roles, n_requests, seed, &aging);
}

Catalog apply_aging(const Catalog& catalog, const AgingSchedule& schedule, std::uint64_t epoch,
                    std::uint64_t seed) {
  schedule.validate();
  Catalog aged = catalog;
  const std::size_t n = catalog.size();
  const auto swaps = static_cast<std::size_t>(
      std::floor(schedule.fraction * static_cast<double>(n) / 2.0 + 1e-9));
  if (swaps == 0) return aged;

  // Partial Fisher-Yates: the first 2*swaps slots become a uniform sample
  // in uniform order; consecutive slots are paired.
  Rng rng(derive_seed(seed, 0xa9e0000000ULL + epoch));
  std::vector<ObjectId> ids(n);
  std::iota(ids.begin(), ids.end(), ObjectId{0});
  for (std::size_t i = 0; i < 2 * swaps; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(ids[i], ids[j]);
  }
  for (std::size_t p = 0; p < swaps; ++p) {
    std::swap(aged.entries[ids[2 * p]].weight, aged.entries[ids[2 * p + 1]].weight);
  }
  return aged;
}

void assign_origins(RoleAssignment& roles, const Catalog& catalog) {
  if (roles.servers.empty()) throw Error(errc::kInvalidArgument, "no servers to host objects");
  std::vector<ObjectId> order(catalog.size());
  std::iota(order.begin(), order.end(), ObjectId{0});
  std::stable_sort(order.begin(), order.end(), [&](ObjectId a, ObjectId b) {
    return catalog.entries[a].weight > catalog.entries[b].weight;
  });
  roles.origin.assign(catalog.size(), 0);
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    roles.origin[order[rank]] = roles.servers[rank % roles.servers.size()];
  }
}

}  // namespace icn
