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

#include <stdexcept>
#include <string>
#include <utility>

namespace icn {

// Every failure surfaced by the library carries a stable machine-readable
// code alongside the human message; the CLI prints both as JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

namespace errc {
inline constexpr const char* kParse = "parse_error";
inline constexpr const char* kInvalidArgument = "invalid_argument";
inline constexpr const char* kDisconnected = "disconnected_graph";
inline constexpr const char* kUnreachable = "unreachable";
inline constexpr const char* kEmptyLog = "empty_log";
inline constexpr const char* kNoClients = "no_clients";
inline constexpr const char* kNoEdgeRouters = "no_edge_routers";
inline constexpr const char* kZeroBaseline = "zero_baseline";
inline constexpr const char* kDegenerateBaseline = "degenerate_baseline";
inline constexpr const char* kUndefinedCorrelation = "undefined_correlation";
inline constexpr const char* kMetricMismatch = "metric_mismatch";
inline constexpr const char* kConfig = "config_error";
inline constexpr const char* kIo = "io_error";
inline constexpr const char* kInternal = "internal_error";
}  // namespace errc

}  // namespace icn
