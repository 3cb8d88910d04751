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
#include "qubopress/compress.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qubopress/error.hpp"

namespace qubopress {

namespace {

std::size_t group_length(const WeightTensor& t, Granularity g) {
    return g == Granularity::Filter ? t.in_channels() * t.kernel_size() : t.kernel_size();
}

}  // namespace

CompressionPlan CompressionPlan::identity(const ModelDescriptor& descriptor) {
    CompressionPlan plan;
    plan.b_max = descriptor.b_max;
    for (const auto& layer : descriptor.layers)
        plan.layers.push_back({layer.id, std::vector<std::uint8_t>(layer.groups.size(), 0), 0});
    return plan;
}

void validate(const CompressionPlan& plan, const ModelDescriptor& descriptor) {
    if (plan.b_max != descriptor.b_max) throw InputError("plan and descriptor disagree on b_max");
    if (plan.layers.size() != descriptor.layers.size())
        throw InputError("plan has " + std::to_string(plan.layers.size()) + " layers, descriptor has " +
                         std::to_string(descriptor.layers.size()));
    for (std::size_t n = 0; n < plan.layers.size(); ++n) {
        const auto& lp = plan.layers[n];
        const auto& ld = descriptor.layers[n];
        if (lp.layer_id != ld.id) throw InputError("plan layer " + std::to_string(n) + " has the wrong id");
        if (lp.prune.size() != ld.groups.size())
            throw InputError("plan layer " + std::to_string(n) + " has the wrong number of groups");
        for (auto p : lp.prune)
            if (p > 1) throw InputError("prune mask entries must be 0 or 1");
        if (lp.bits_removed < 0 || lp.bits_removed > plan.b_max - 1)
            throw InputError("plan layer " + std::to_string(n) + " leaves a bit width outside [1, b_max]");
        if (lp.bits_removed > (1 << ld.q_bits) - 1)
            throw InputError("plan layer " + std::to_string(n) + " removes more bits than its code can express");
    }
}

CompressionPlan decode_solution(std::span<const std::uint8_t> x, const VariableIndex& index,
                                const ModelDescriptor& descriptor) {
    if (x.size() != index.size()) throw InputError("assignment length does not match the variable index");
    if (index.num_layers() != descriptor.layers.size())
        throw InputError("variable index does not match the descriptor");
    CompressionPlan plan;
    plan.b_max = descriptor.b_max;
    for (std::size_t n = 0; n < index.num_layers(); ++n) {
        LayerPlan lp;
        lp.layer_id = descriptor.layers[n].id;
        lp.prune.resize(index.num_groups(n));
        for (std::size_t i = 0; i < lp.prune.size(); ++i) lp.prune[i] = x[index.prune(n, i)] ? 1 : 0;
        for (std::size_t k = 0; k < index.num_bits(n); ++k)
            if (x[index.quant(n, k)]) lp.bits_removed += 1 << k;
        if (lp.bits_removed > descriptor.b_max - 1)
            throw InputError("decoded layer " + std::to_string(n) + " removes " + std::to_string(lp.bits_removed) +
                             " of " + std::to_string(descriptor.b_max) + " bits; index map is corrupt");
        plan.layers.push_back(std::move(lp));
    }
    return plan;
}

Assignment encode_plan(const CompressionPlan& plan, const VariableIndex& index) {
    if (plan.layers.size() != index.num_layers()) throw InputError("plan does not match the variable index");
    Assignment x(index.size(), 0);
    for (std::size_t n = 0; n < plan.layers.size(); ++n) {
        const auto& lp = plan.layers[n];
        if (lp.prune.size() != index.num_groups(n)) throw InputError("plan does not match the variable index");
        for (std::size_t i = 0; i < lp.prune.size(); ++i) x[index.prune(n, i)] = lp.prune[i] ? 1 : 0;
        const std::size_t k_bits = index.num_bits(n);
        if (lp.bits_removed < 0 || lp.bits_removed >= (1 << k_bits))
            throw InputError("bits removed does not fit the layer's code");
        for (std::size_t k = 0; k < k_bits; ++k) x[index.quant(n, k)] = (lp.bits_removed >> k) & 1;
    }
    return x;
}

double fixed_range_step(double max_abs, int bit_width) {
    return std::ldexp(max_abs, -bit_width);
}

double quantize(double w, double step, int bit_width) {
    if (step <= 0.0) return 0.0;
    const double lo = -std::ldexp(1.0, bit_width);
    const double hi = std::ldexp(1.0, bit_width) - 1.0;
    // nearbyint follows the default rounding mode: to nearest, ties to even.
    const double level = std::clamp(std::nearbyint(w / step), lo, hi);
    return level * step;
}

std::vector<WeightTensor> apply_compression(std::span<const WeightTensor> tensors,
                                            const CompressionPlan& plan,
                                            const ModelDescriptor& descriptor) {
    validate(plan, descriptor);
    if (tensors.size() != descriptor.layers.size()) throw InputError("tensor count does not match the plan");
    std::vector<WeightTensor> out(tensors.begin(), tensors.end());
    for (std::size_t n = 0; n < out.size(); ++n) {
        auto& t = out[n];
        const auto& lp = plan.layers[n];
        const std::size_t len = group_length(t, descriptor.granularity);
        if (t.data.size() != t.size() || t.size() != len * lp.prune.size())
            throw InputError("tensor " + std::to_string(n) + " does not match the plan's group layout");
        const int bits = plan.bit_width(n);
        const double step = fixed_range_step(descriptor.layers[n].max_abs(), bits);
        for (std::size_t g = 0; g < lp.prune.size(); ++g) {
            for (std::size_t k = g * len; k < (g + 1) * len; ++k) {
                t.data[k] = lp.prune[g] ? 0.0f
                                        : static_cast<float>(quantize(static_cast<double>(t.data[k]), step, bits));
            }
        }
    }
    return out;
}

double reduction_rate(const ModelDescriptor& descriptor, const CompressionPlan& plan) {
    validate(plan, descriptor);
    const auto total = static_cast<double>(descriptor.total_bits());
    double r = 0.0;
    for (std::size_t n = 0; n < plan.layers.size(); ++n) {
        const int b_n = plan.bit_width(n);
        double eliminated = 0.0;
        for (std::size_t i = 0; i < plan.layers[n].prune.size(); ++i) {
            const auto count = static_cast<double>(descriptor.layers[n].groups[i].count);
            eliminated += count * descriptor.b_max - count * b_n * (1 - plan.layers[n].prune[i]);
        }
        r += eliminated / total;
    }
    return r;
}

double reduction_rate_fp32(const ModelDescriptor& descriptor, const CompressionPlan& plan) {
    validate(plan, descriptor);
    double kept_bits = 0.0;
    double weights = 0.0;
    for (std::size_t n = 0; n < plan.layers.size(); ++n) {
        const int b_n = plan.bit_width(n);
        for (std::size_t i = 0; i < plan.layers[n].prune.size(); ++i) {
            const auto count = static_cast<double>(descriptor.layers[n].groups[i].count);
            weights += count;
            if (!plan.layers[n].prune[i]) kept_bits += count * b_n;
        }
    }
    return 1.0 - kept_bits / (32.0 * weights);
}

std::vector<double> weight_magnitude(const ModelDescriptor& descriptor, const CompressionPlan& plan) {
    validate(plan, descriptor);
    std::vector<double> wm(plan.layers.size(), 0.0);
    for (std::size_t n = 0; n < plan.layers.size(); ++n)
        for (std::size_t i = 0; i < plan.layers[n].prune.size(); ++i)
            if (plan.layers[n].prune[i]) wm[n] += descriptor.layers[n].groups[i].mean_magnitude();
    return wm;
}

Measurement measure(std::span<const WeightTensor> tensors, const CompressionPlan& plan,
                    const ModelDescriptor& descriptor) {
    Measurement m;
    m.weight_magnitude = weight_magnitude(descriptor, plan);
    m.reduction = reduction_rate(descriptor, plan);
    m.reduction_fp32 = reduction_rate_fp32(descriptor, plan);
    const auto compressed = apply_compression(tensors, plan, descriptor);
    for (std::size_t n = 0; n < tensors.size(); ++n) {
        const auto& lp = plan.layers[n];
        const std::size_t len = group_length(tensors[n], descriptor.granularity);
        m.step.push_back(fixed_range_step(descriptor.layers[n].max_abs(), plan.bit_width(n)));
        double sq = 0.0;
        std::size_t kept = 0;
        for (std::size_t g = 0; g < lp.prune.size(); ++g) {
            if (lp.prune[g]) continue;
            for (std::size_t k = g * len; k < (g + 1) * len; ++k) {
                const double err = static_cast<double>(compressed[n].data[k]) - tensors[n].data[k];
                sq += err * err;
            }
            kept += len;
        }
        m.rmse.push_back(kept ? std::sqrt(sq / static_cast<double>(kept)) : 0.0);
    }
    return m;
}

}  // namespace qubopress
