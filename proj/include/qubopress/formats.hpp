// Copyright 2026 The qubopress Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.
#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "qubopress/compress.hpp"
#include "qubopress/descriptor.hpp"
#include "qubopress/solver.hpp"

namespace qubopress {

// Plan file: {"layers": [{"id": n, "prune": [0, 1, ...], "bits_removed": r}]}
nlohmann::json plan_to_json(const CompressionPlan& plan);
CompressionPlan plan_from_json(const nlohmann::json& doc, const ModelDescriptor& descriptor);

// Index sidecar written next to a qubo file. It carries the full descriptor
// so a solution can be decoded and scored without the original manifest.
nlohmann::json index_sidecar(const ModelDescriptor& descriptor);
ModelDescriptor descriptor_from_sidecar(const nlohmann::json& doc);

/// Bit 0 first.
std::string to_bitstring(std::span<const std::uint8_t> x);
Assignment from_bitstring(const std::string& bits);

/// One line: {"energy": e, "x": "0101..."}
std::string solution_json_line(const Solution& solution);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

}  // namespace qubopress
