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
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <optional>
#include <utility>
#include <vector>

#include "qubopress/compress.hpp"
#include "qubopress/oracle.hpp"
#include "qubopress/qubo.hpp"
#include "qubopress/solver.hpp"

namespace qubopress {

enum class SolverKind { Anneal, Exact };

struct SearchConfig {
    double acc_threshold = 0.97;
    int n_bin = 5;
    int n_iter = 5;
    /// Unset: drawn log-uniformly from gamma_init_range using seed.
    std::optional<double> gamma_init;
    std::pair<double, double> gamma_init_range{1e-3, 1.0};
    std::uint64_t seed = 0;
    SolverKind solver = SolverKind::Anneal;
    AnnealConfig anneal;
    int bracket_cap = 32;

    void validate() const;
};

struct TraceRow {
    double beta = 0.0;
    double gamma = 0.0;
    double energy = 0.0;
    double reduction = 0.0;
    double accuracy = 0.0;
};

struct Checkpoint {
    double reduction = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double accuracy = 0.0;
    CompressionPlan plan;
};

struct SearchState {
    double beta = 0.0;
    double gamma = 0.0;
    std::optional<Checkpoint> best;
    std::vector<TraceRow> trace;
};

/// Thrown when the search stops early; carries everything evaluated so far.
class SearchAborted : public std::runtime_error {
 public:
    SearchAborted(const std::string& what, SearchState partial, bool oracle_failure)
        : std::runtime_error(what), partial_(std::move(partial)), oracle_failure_(oracle_failure) {}
    const SearchState& partial() const { return partial_; }
    bool oracle_failure() const { return oracle_failure_; }

 private:
    SearchState partial_;
    bool oracle_failure_;
};

/// Sum of |A| over the full symmetric matrices divided by the same for B.
double init_beta(const QuboCoefficients& coeffs);

struct AqcResult {
    Solution solution;
    CompressionPlan plan;
    double reduction = 0.0;
};

/// Assembles U for (beta, gamma), minimizes it and decodes the best state.
AqcResult aqc_step(const Hyperparameters& hp, const QuboCoefficients& coeffs,
                   const ModelDescriptor& descriptor, const VariableIndex& index,
                   SolverKind solver, const AnnealConfig& anneal);

using FeasibilityFn = std::function<bool(double)>;

/// Doubles gamma until infeasible; returns the first infeasible value.
double find_upper_gamma(double gamma, const FeasibilityFn& feasible, int cap = 32);
/// Halves gamma until feasible; returns the first feasible value.
double find_lower_gamma(double gamma, const FeasibilityFn& feasible, int cap = 32);

/// n_bin midpoint probes; feasible moves the lower bound up. Returns the lower bound.
double bin_search_max(double lower, double upper, int n_bin, const FeasibilityFn& feasible);
/// n_bin midpoint probes; feasible moves the upper bound down. Returns the upper bound.
double bin_search_min(double lower, double upper, int n_bin, const FeasibilityFn& feasible);

/// Alternating gamma/beta search for the most compressed plan whose accuracy
/// stays at or above the threshold. Every oracle call is traced and
/// checkpointed.
class HyperparameterSearch {
 public:
    HyperparameterSearch(ModelDescriptor descriptor, AccuracyOracle& oracle, SearchConfig config);

    SearchState run();

    /// One aqc + acc evaluation, recorded in the trace. Returns whether the
    /// accuracy met the threshold.
    bool probe(double beta, double gamma);

    const SearchState& state() const { return state_; }
    const QuboCoefficients& coefficients() const { return coeffs_; }
    double initial_beta() const { return init_beta(coeffs_); }

 private:
    ModelDescriptor descriptor_;
    AccuracyOracle& oracle_;
    SearchConfig config_;
    QuboCoefficients coeffs_;
    VariableIndex index_;
    SearchState state_;
};

SearchState hyperparameter_search(const SearchConfig& config, const ModelDescriptor& descriptor,
                                  AccuracyOracle& oracle);

struct SweepRow {
    double beta = 0.0;
    double gamma = 0.0;
    double energy = 0.0;
    double reduction = 0.0;
    std::optional<double> accuracy;  // empty when the oracle failed
};

/// Every (beta, gamma) in grid order, beta outer. Oracle failures leave the
/// accuracy empty.
std::vector<SweepRow> grid_sweep(const ModelDescriptor& descriptor, std::span<const double> betas,
                                 std::span<const double> gammas, AccuracyOracle& oracle,
                                 SolverKind solver, const AnnealConfig& anneal);

}  // namespace qubopress
