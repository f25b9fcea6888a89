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

#include "icn/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <vector>

#include "icn/error.hpp"

namespace icn {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error(errc::kInternal, "double formatting failed");
  return {buf, ptr};
}

void write_centrality_csv(std::ostream& out, const Graph& g, const CentralityTable& centrality) {
  out << "node,degree,betweenness\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << g.source_id(v) << ',' << g.degree(v) << ',' << format_double(centrality.at(v)) << '\n';
  }
}

void write_adjacency_csv(std::ostream& out, const Graph& g) {
  out << "source,target\n";
  for (auto [a, b] : g.edges()) out << g.source_id(a) << ',' << g.source_id(b) << '\n';
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

template <typename T>
T field_as(const std::string& text, std::size_t line_no) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(errc::kParse, "line " + std::to_string(line_no) + ": bad field '" + text + "'");
  }
  return value;
}

/// Reads rows after checking the header; calls `row` with the split fields.
template <typename Fn>
void read_rows(std::istream& in, const std::string& header, std::size_t width, Fn&& row) {
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != split_csv_line(header)) {
    throw Error(errc::kParse, "line 1: expected header '" + header + "'");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (fields.size() != width) {
      throw Error(errc::kParse, "line " + std::to_string(line_no) + ": expected " +
                                    std::to_string(width) + " fields");
    }
    row(fields, line_no);
  }
}

}  // namespace

void write_trace_csv(std::ostream& out, const RequestStream& stream) {
  out << "seq,client,object\n";
  for (const auto& r : stream) out << r.seq << ',' << r.client << ',' << r.object << '\n';
}

RequestStream read_trace_csv(std::istream& in) {
  RequestStream stream;
  read_rows(in, "seq,client,object", 3, [&](const std::vector<std::string>& f, std::size_t line_no) {
    Request r;
    r.seq = field_as<std::uint64_t>(f[0], line_no);
    r.client = field_as<NodeId>(f[1], line_no);
    r.object = field_as<ObjectId>(f[2], line_no);
    if (r.seq != stream.size()) {
      throw Error(errc::kParse, "line " + std::to_string(line_no) + ": seq must count up from 0");
    }
    stream.push_back(r);
  });
  return stream;
}

void write_catalog_csv(std::ostream& out, const Catalog& catalog) {
  out << "object,size,weight\n";
  for (const auto& e : catalog.entries) {
    out << e.id << ',' << e.size << ',' << format_double(e.weight) << '\n';
  }
}

Catalog read_catalog_csv(std::istream& in) {
  Catalog catalog;
  read_rows(in, "object,size,weight", 3, [&](const std::vector<std::string>& f, std::size_t line_no) {
    CatalogEntry e;
    e.id = field_as<ObjectId>(f[0], line_no);
    e.size = field_as<std::uint64_t>(f[1], line_no);
    e.weight = field_as<double>(f[2], line_no);
    catalog.entries.push_back(e);
  });
  catalog.validate();
  return catalog;
}

void write_event_log_csv(std::ostream& out, std::span<const HitRecord> records) {
  out << "seq,client,object,size,outcome,serving_node,delivery_hops,origin_hops,external\n";
  for (const auto& r : records) {
    out << r.seq << ',' << r.client << ',' << r.object << ',' << r.size << ','
        << (r.outcome == Outcome::kCacheHit ? "cache_hit" : "server_hit") << ',' << r.serving_node
        << ',' << r.delivery_hops << ',' << r.origin_hops << ',' << (r.server_external ? 1 : 0)
        << '\n';
  }
}

void write_snapshot_csv(std::ostream& out, const CacheSnapshot& snapshot) {
  out << "node,object,size\n";
  for (const auto& node : snapshot.nodes) {
    for (const auto& item : node.items) out << node.node << ',' << item.object << ',' << item.size << '\n';
  }
}

nlohmann::ordered_json to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["hit_rate"] = report.hit_rate;
  j["byte_hit_rate"] = report.byte_hit_rate;
  j["costly_miss_byte_rate"] = report.costly_miss_byte_rate;
  j["avg_hops"] = report.avg_hops;
  j["miss_cost"] = report.miss_cost.describe();
  j["footprint"] = report.footprint;
  j["footprint_reduction"] = report.footprint_reduction;
  if (report.coupling_factor) {
    j["coupling_factor"] = *report.coupling_factor;
  } else {
    j["coupling_factor"] = nullptr;
  }
  return j;
}

}  // namespace icn
