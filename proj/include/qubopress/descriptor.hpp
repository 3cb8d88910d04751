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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qubopress {

enum class Granularity { Filter, Channel };

std::string_view to_string(Granularity g);
Granularity parse_granularity(std::string_view text);

/// Raw weights of one layer, row-major over [out, in, kh, kw]. Linear layers
/// use [out, in, 1, 1].
struct WeightTensor {
    int layer_id = 0;
    std::array<std::size_t, 4> shape{};
    std::vector<float> data;

    std::size_t size() const { return shape[0] * shape[1] * shape[2] * shape[3]; }
    std::size_t out_channels() const { return shape[0]; }
    std::size_t in_channels() const { return shape[1]; }
    std::size_t kernel_size() const { return shape[2] * shape[3]; }
};

struct GroupStats {
    int layer_id = 0;
    int group_id = 0;
    std::size_t count = 0;
    double l1_norm = 0.0;
    double max_abs = 0.0;

    double mean_magnitude() const { return l1_norm / static_cast<double>(count); }
};

struct LayerDescriptor {
    int id = 0;
    std::vector<GroupStats> groups;
    int q_bits = 0;

    std::size_t weight_count() const;
    double max_abs() const;
};

/// Group structure and statistics of a whole network. Every coefficient
/// family of the QUBO is a function of this object alone.
struct ModelDescriptor {
    int b_max = 8;
    Granularity granularity = Granularity::Filter;
    std::vector<LayerDescriptor> layers;

    /// S: total weight bits at full precision.
    std::uint64_t total_bits() const;
    std::size_t num_groups() const;
    std::size_t num_quant_bits() const;
    std::size_t problem_size() const { return num_groups() + num_quant_bits(); }
};

/// Number of code bits for the bits-removed integer of a layer. The largest
/// code, 2^q - 1, never exceeds b_max - 1, so every layer keeps at least one bit.
int quant_bits_for(int b_max);

std::vector<WeightTensor> ingest_model(const std::filesystem::path& manifest);

/// Filter granularity gives one group per output channel, channel granularity
/// one group per (output, input) channel pair. Groups are ordered by output
/// channel, then input channel.
std::vector<GroupStats> compute_group_stats(const WeightTensor& tensor, Granularity granularity);

ModelDescriptor build_descriptor(std::span<const WeightTensor> tensors,
                                 Granularity granularity, int b_max);

/// Loads either a weight manifest or a stats-only manifest. b_max defaults to
/// the manifest's own value.
ModelDescriptor load_descriptor(const std::filesystem::path& manifest,
                                Granularity granularity,
                                std::optional<int> b_max = std::nullopt);

/// Throws InputError if any descriptor invariant is violated.
void validate(const ModelDescriptor& descriptor);

}  // namespace qubopress
