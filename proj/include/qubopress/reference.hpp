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

#include "qubopress/compress.hpp"
#include "qubopress/descriptor.hpp"
#include "qubopress/qubo.hpp"

// Direct evaluations of the objective straight from group statistics, with
// no coefficient matrices involved. Used to cross-check assembled QUBOs.
namespace qubopress::reference {

/// Sum over layers of the squared pruned weight magnitude.
double pruning_loss(const ModelDescriptor& descriptor, const CompressionPlan& plan);
/// Sum over layers of the squared number of removed bits.
double quantization_loss(const CompressionPlan& plan);
/// Per-layer bits eliminated over total bits, summed.
double reduction(const ModelDescriptor& descriptor, const CompressionPlan& plan);
/// L_p + beta L_q - gamma R.
double hamiltonian(const ModelDescriptor& descriptor, const CompressionPlan& plan,
                   const Hyperparameters& hp);

/// x^T U x through a dense copy of U.
double dense_energy(const QuboMatrix& qubo, std::span<const std::uint8_t> x);

}  // namespace qubopress::reference
