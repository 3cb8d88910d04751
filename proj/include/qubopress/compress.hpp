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

#include <cstdint>
#include <span>
#include <vector>

#include "qubopress/descriptor.hpp"
#include "qubopress/qubo.hpp"

namespace qubopress {

struct LayerPlan {
    int layer_id = 0;
    std::vector<std::uint8_t> prune;  // one mask bit per group, 1 = pruned
    int bits_removed = 0;
};

struct CompressionPlan {
    int b_max = 8;
    std::vector<LayerPlan> layers;

    int bit_width(std::size_t layer) const { return b_max - layers.at(layer).bits_removed; }

    /// No pruning, full precision.
    static CompressionPlan identity(const ModelDescriptor& descriptor);
};

/// Throws InputError if the plan does not fit the descriptor's layout or a
/// bit width falls outside [1, b_max].
void validate(const CompressionPlan& plan, const ModelDescriptor& descriptor);

CompressionPlan decode_solution(std::span<const std::uint8_t> x, const VariableIndex& index,
                                const ModelDescriptor& descriptor);
Assignment encode_plan(const CompressionPlan& plan, const VariableIndex& index);

/// Fixed-range step size: the layer's largest magnitude spread over 2^bits
/// levels, so the step doubles with every bit removed.
double fixed_range_step(double max_abs, int bit_width);

/// clamp(round_half_even(w / step), -2^bits, 2^bits - 1) * step
double quantize(double w, double step, int bit_width);

/// Zeroes pruned groups and quantizes the rest of each layer.
std::vector<WeightTensor> apply_compression(std::span<const WeightTensor> tensors,
                                            const CompressionPlan& plan,
                                            const ModelDescriptor& descriptor);

/// Compression rate relative to the b_max-bit model, summed per layer.
double reduction_rate(const ModelDescriptor& descriptor, const CompressionPlan& plan);
/// Same, against a 32-bit floating point baseline.
double reduction_rate_fp32(const ModelDescriptor& descriptor, const CompressionPlan& plan);
/// Sum of mean magnitudes of the pruned groups, per layer.
std::vector<double> weight_magnitude(const ModelDescriptor& descriptor, const CompressionPlan& plan);

struct Measurement {
    std::vector<double> weight_magnitude;
    std::vector<double> rmse;  // over unpruned weights; 0 if a layer is fully pruned
    std::vector<double> step;
    double reduction = 0.0;
    double reduction_fp32 = 0.0;
};

Measurement measure(std::span<const WeightTensor> tensors, const CompressionPlan& plan,
                    const ModelDescriptor& descriptor);

}  // namespace qubopress
