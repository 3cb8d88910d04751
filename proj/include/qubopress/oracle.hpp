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

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "qubopress/compress.hpp"
#include "qubopress/descriptor.hpp"

namespace qubopress {

/// Maps a compression plan to a test accuracy in [0, 1].
class AccuracyOracle {
 public:
    virtual ~AccuracyOracle() = default;
    virtual double evaluate(const CompressionPlan& plan) = 0;
};

struct SurrogateParams {
    double base_accuracy = 0.99;
    double prune_penalty = 0.3;
    double quant_penalty = 0.2;
};

/// Deterministic stand-in: accuracy falls linearly with the pruned magnitude
/// and with the removed bits, and by a further 1.0 once any layer is pruned
/// away entirely. Result clamped to [0, 1].
class SurrogateOracle : public AccuracyOracle {
 public:
    explicit SurrogateOracle(ModelDescriptor descriptor, SurrogateParams params = {});
    double evaluate(const CompressionPlan& plan) override;

 private:
    ModelDescriptor descriptor_;
    SurrogateParams params_;
    double max_magnitude_ = 0.0;
    double max_bits_removed_ = 0.0;
};

inline constexpr const char* kOracleSeedEnv = "QUBOPRESS_ORACLE_SEED";

/// Runs `<command> <plan-path>` through /bin/sh and reads one decimal
/// accuracy from its standard output.
class ExternalOracle : public AccuracyOracle {
 public:
    ExternalOracle(std::string command, std::chrono::seconds timeout = std::chrono::seconds(3600),
                   std::optional<std::uint64_t> seed = std::nullopt);
    double evaluate(const CompressionPlan& plan) override;

 private:
    std::string command_;
    std::chrono::seconds timeout_;
    std::optional<std::uint64_t> seed_;
};

/// Calls the oracle and rejects anything outside [0, 1] with OracleError.
double evaluate_accuracy(const CompressionPlan& plan, AccuracyOracle& oracle);

/// Parses the oracle's standard output: a single decimal, surrounding
/// whitespace allowed.
double parse_accuracy(const std::string& text);

}  // namespace qubopress
