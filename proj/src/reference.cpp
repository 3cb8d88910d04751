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
#include "qubopress/reference.hpp"

#include <vector>

#include "qubopress/error.hpp"

namespace qubopress::reference {

double pruning_loss(const ModelDescriptor& descriptor, const CompressionPlan& plan) {
    double loss = 0.0;
    for (std::size_t n = 0; n < plan.layers.size(); ++n) {
        double wm = 0.0;
        for (std::size_t i = 0; i < plan.layers[n].prune.size(); ++i) {
            const auto& g = descriptor.layers[n].groups[i];
            wm += g.l1_norm / static_cast<double>(g.count) * plan.layers[n].prune[i];
        }
        loss += wm * wm;
    }
    return loss;
}

double quantization_loss(const CompressionPlan& plan) {
    double loss = 0.0;
    for (const auto& lp : plan.layers) loss += static_cast<double>(lp.bits_removed) * lp.bits_removed;
    return loss;
}

double reduction(const ModelDescriptor& descriptor, const CompressionPlan& plan) {
    double size = 0.0;
    for (const auto& layer : descriptor.layers)
        for (const auto& g : layer.groups) size += static_cast<double>(g.count) * descriptor.b_max;
    double r = 0.0;
    for (std::size_t n = 0; n < plan.layers.size(); ++n) {
        const double b_n = descriptor.b_max - plan.layers[n].bits_removed;
        double cr = 0.0;
        for (std::size_t i = 0; i < plan.layers[n].prune.size(); ++i) {
            const auto count = static_cast<double>(descriptor.layers[n].groups[i].count);
            cr += count * descriptor.b_max - count * b_n * (1.0 - plan.layers[n].prune[i]);
        }
        r += cr / size;
    }
    return r;
}

double hamiltonian(const ModelDescriptor& descriptor, const CompressionPlan& plan, const Hyperparameters& hp) {
    return pruning_loss(descriptor, plan) + hp.beta * quantization_loss(plan) -
           hp.gamma * reduction(descriptor, plan);
}

double dense_energy(const QuboMatrix& qubo, std::span<const std::uint8_t> x) {
    const std::size_t n = qubo.dim();
    if (x.size() != n) throw InputError("assignment length does not match the qubo dimension");
    std::vector<double> dense(n * n, 0.0);
    for (const auto& e : qubo.entries()) dense[e.row * n + e.col] += e.value;
    double energy = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < n; ++c) row += dense[r * n + c] * x[c];
        energy += x[r] * row;
    }
    return energy;
}

}  // namespace qubopress::reference
