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

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "icn/metrics.hpp"
#include "icn/simulator.hpp"
#include "icn/topology.hpp"
#include "icn/workload.hpp"

namespace icn {

/// Shortest text that reads back to the same double.
std::string format_double(double value);

/// `node,degree,betweenness`, node ids as they appeared in the source file.
void write_centrality_csv(std::ostream& out, const Graph& g, const CentralityTable& centrality);
/// `source,target`, one line per undirected edge.
void write_adjacency_csv(std::ostream& out, const Graph& g);

/// `seq,client,object`
void write_trace_csv(std::ostream& out, const RequestStream& stream);
RequestStream read_trace_csv(std::istream& in);

/// `object,size,weight`
void write_catalog_csv(std::ostream& out, const Catalog& catalog);
Catalog read_catalog_csv(std::istream& in);

/// `seq,client,object,size,outcome,serving_node,delivery_hops,origin_hops,external`
void write_event_log_csv(std::ostream& out, std::span<const HitRecord> records);

/// `node,object,size`
void write_snapshot_csv(std::ostream& out, const CacheSnapshot& snapshot);

nlohmann::ordered_json to_json(const MetricsReport& report);

}  // namespace icn
