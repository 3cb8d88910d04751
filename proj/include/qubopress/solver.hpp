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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qubopress/qubo.hpp"

namespace qubopress {

struct Solution {
    Assignment x;
    double energy = 0.0;

    /// Evaluates the energy from scratch.
    static Solution from_assignment(const QuboMatrix& qubo, Assignment x);
};

/// Orders assignments by their value as an unsigned integer with variable 0
/// as the least significant bit.
bool assignment_less(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

/// Energy first, then assignment_less.
bool solution_less(const Solution& a, const Solution& b);

/// Geometric temperature ladder. Non-positive temperatures select the
/// defaults derived from the matrix: t_hot = 10 max|U|, t_cold = 1e-3 min|U|
/// over nonzero entries.
struct TemperatureLadder {
    double t_hot = 0.0;
    double t_cold = 0.0;
    int rungs = 16;
};

struct AnnealConfig {
    int replicas = 32;
    std::uint64_t sweeps = 10'000;
    TemperatureLadder ladder;
    std::uint64_t exchange_interval = 1;
    std::uint64_t seed = 0;
    /// Worker threads; 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
    /// When nonzero, the incrementally tracked energy of every chain is
    /// compared against a full evaluation every this many sweeps.
    std::uint64_t check_interval = 0;

    void validate() const;
};

inline constexpr std::size_t kBruteForceMaxDim = 26;

/// Exact minimum by Gray-code enumeration. Throws InputError above
/// kBruteForceMaxDim variables.
Solution brute_force_solve(const QuboMatrix& qubo);

/// Temperatures from hottest to coldest.
std::vector<double> temperature_schedule(const QuboMatrix& qubo, const TemperatureLadder& ladder);

/// One solution per replica, sorted by solution_less. Each replica runs
/// parallel tempering over the ladder and reports the lowest-energy state
/// any of its chains visited. Output depends only on (qubo, config).
std::vector<Solution> anneal(const QuboMatrix& qubo, const AnnealConfig& config);

const Solution& best_of(std::span<const Solution> solutions);

}  // namespace qubopress
