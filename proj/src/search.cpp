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
#include "qubopress/search.hpp"

#include <cmath>
#include <random>
#include <string>

#include "qubopress/error.hpp"

namespace qubopress {

void SearchConfig::validate() const {
    if (!(acc_threshold >= 0.0 && acc_threshold <= 1.0)) throw InputError("accuracy threshold must lie in [0, 1]");
    if (n_bin < 1 || n_iter < 1) throw InputError("n_bin and n_iter must be at least 1");
    if (bracket_cap < 1) throw InputError("bracket cap must be at least 1");
    if (gamma_init && !(std::isfinite(*gamma_init) && *gamma_init > 0)) throw InputError("initial gamma must be positive");
    if (!(gamma_init_range.first > 0 && gamma_init_range.second >= gamma_init_range.first))
        throw InputError("gamma init range must be positive and ordered");
    anneal.validate();
}

double init_beta(const QuboCoefficients& coeffs) {
    double a = 0.0;
    double b = 0.0;
    for (const auto& layer : coeffs.layers) {
        for (double v : layer.a.values()) a += std::abs(v);
        for (double v : layer.b.values()) b += std::abs(v);
    }
    if (b == 0.0) throw InputError("quantization coefficients are all zero");
    return a / b;
}

AqcResult aqc_step(const Hyperparameters& hp, const QuboCoefficients& coeffs, const ModelDescriptor& descriptor,
                   const VariableIndex& index, SolverKind solver, const AnnealConfig& anneal_config) {
    const QuboMatrix qubo = assemble_qubo(coeffs, hp, index);
    Solution best = solver == SolverKind::Exact ? brute_force_solve(qubo) : best_of(anneal(qubo, anneal_config));
    CompressionPlan plan = decode_solution(best.x, index, descriptor);
    const double r = reduction_from_coefficients(coeffs, index, best.x);
    return {std::move(best), std::move(plan), r};
}

double find_upper_gamma(double gamma, const FeasibilityFn& feasible, int cap) {
    for (int round = 0; round < cap; ++round) {
        gamma *= 2.0;
        if (!feasible(gamma)) return gamma;
    }
    throw NoThresholdCrossing("accuracy never fell below the threshold after " + std::to_string(cap) +
                              " doublings of gamma");
}

double find_lower_gamma(double gamma, const FeasibilityFn& feasible, int cap) {
    for (int round = 0; round < cap; ++round) {
        gamma /= 2.0;
        if (feasible(gamma)) return gamma;
    }
    throw NoThresholdCrossing("accuracy never reached the threshold after " + std::to_string(cap) +
                              " halvings of gamma");
}

double bin_search_max(double lower, double upper, int n_bin, const FeasibilityFn& feasible) {
    for (int i = 0; i < n_bin; ++i) {
        const double mid = lower + (upper - lower) / 2.0;
        if (feasible(mid))
            lower = mid;
        else
            upper = mid;
    }
    return lower;
}

double bin_search_min(double lower, double upper, int n_bin, const FeasibilityFn& feasible) {
    for (int i = 0; i < n_bin; ++i) {
        const double mid = lower + (upper - lower) / 2.0;
        if (feasible(mid))
            upper = mid;
        else
            lower = mid;
    }
    return upper;
}

HyperparameterSearch::HyperparameterSearch(ModelDescriptor descriptor, AccuracyOracle& oracle, SearchConfig config)
    : descriptor_(std::move(descriptor)), oracle_(oracle), config_(std::move(config)) {
    config_.validate();
    coeffs_ = build_coefficients(descriptor_);
    index_ = VariableIndex(descriptor_);
}

bool HyperparameterSearch::probe(double beta, double gamma) {
    const auto step = aqc_step({beta, gamma}, coeffs_, descriptor_, index_, config_.solver, config_.anneal);
    const double a = evaluate_accuracy(step.plan, oracle_);
    state_.trace.push_back({beta, gamma, step.solution.energy, step.reduction, a});
    const bool ok = a >= config_.acc_threshold;
    if (ok && (!state_.best || step.reduction > state_.best->reduction))
        state_.best = Checkpoint{step.reduction, beta, gamma, a, step.plan};
    return ok;
}

SearchState HyperparameterSearch::run() {
    state_ = SearchState{};
    state_.beta = init_beta(coeffs_);
    if (config_.gamma_init) {
        state_.gamma = *config_.gamma_init;
    } else {
        std::seed_seq seq{static_cast<std::uint32_t>(config_.seed), static_cast<std::uint32_t>(config_.seed >> 32)};
        std::mt19937_64 rng(seq);
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        const double lo = std::log(config_.gamma_init_range.first);
        const double hi = std::log(config_.gamma_init_range.second);
        state_.gamma = std::exp(lo + u * (hi - lo));
    }

    auto at_beta = [this](double beta) { return [this, beta](double g) { return probe(beta, g); }; };
    try {
        bool feasible = probe(state_.beta, state_.gamma);
        for (int iter = 0; iter < config_.n_iter; ++iter) {
            double lower = state_.gamma;
            double upper = state_.gamma;
            if (feasible)
                upper = find_upper_gamma(state_.gamma, at_beta(state_.beta), config_.bracket_cap);
            else
                lower = find_lower_gamma(state_.gamma, at_beta(state_.beta), config_.bracket_cap);
            state_.gamma = bin_search_max(lower, upper, config_.n_bin, at_beta(state_.beta));
            const double gamma = state_.gamma;
            state_.beta = bin_search_min(0.0, 2.0 * state_.beta, config_.n_bin,
                                         [this, gamma](double b) { return probe(b, gamma); });
            feasible = probe(state_.beta, state_.gamma);
        }
    } catch (const OracleError& e) {
        throw SearchAborted(e.what(), state_, true);
    } catch (const NoThresholdCrossing& e) {
        throw SearchAborted(e.what(), state_, false);
    }
    return state_;
}

SearchState hyperparameter_search(const SearchConfig& config, const ModelDescriptor& descriptor,
                                  AccuracyOracle& oracle) {
    HyperparameterSearch search(descriptor, oracle, config);
    return search.run();
}

std::vector<SweepRow> grid_sweep(const ModelDescriptor& descriptor, std::span<const double> betas,
                                 std::span<const double> gammas, AccuracyOracle& oracle, SolverKind solver,
                                 const AnnealConfig& anneal_config) {
    if (betas.empty() || gammas.empty()) throw InputError("sweep grids must be non-empty");
    const auto coeffs = build_coefficients(descriptor);
    const VariableIndex index(descriptor);
    std::vector<SweepRow> rows;
    rows.reserve(betas.size() * gammas.size());
    for (double beta : betas) {
        for (double gamma : gammas) {
            const auto step = aqc_step({beta, gamma}, coeffs, descriptor, index, solver, anneal_config);
            SweepRow row{beta, gamma, step.solution.energy, step.reduction, std::nullopt};
            try {
                row.accuracy = evaluate_accuracy(step.plan, oracle);
            } catch (const OracleError&) {
                row.accuracy.reset();
            }
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace qubopress
