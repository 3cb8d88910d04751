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
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "qubopress/compress.hpp"
#include "qubopress/descriptor.hpp"
#include "qubopress/qubo.hpp"

// Test-only helpers: fixture paths, random instances, and a naive
// enumeration minimizer that shares no code with the library solvers.
namespace qubopress::testing {

inline std::filesystem::path data_dir() { return QUBOPRESS_DATA_DIR; }
inline std::filesystem::path model_manifest(const char* name) { return data_dir() / "models" / name / "manifest.json"; }

inline WeightTensor random_tensor(std::mt19937_64& rng, int layer_id, std::array<std::size_t, 4> shape,
                                  double scale = 1.0) {
    std::normal_distribution<float> normal(0.0f, static_cast<float>(scale));
    WeightTensor t;
    t.layer_id = layer_id;
    t.shape = shape;
    t.data.resize(t.size());
    for (auto& w : t.data) w = normal(rng);
    return t;
}

/// Random multi-layer descriptor with the given groups per layer.
inline ModelDescriptor random_descriptor(std::mt19937_64& rng, std::span<const std::size_t> groups_per_layer,
                                         int b_max = 8) {
    std::vector<WeightTensor> tensors;
    std::uniform_int_distribution<std::size_t> fan_in(1, 6);
    std::uniform_real_distribution<double> scale(0.05, 1.0);
    for (std::size_t n = 0; n < groups_per_layer.size(); ++n)
        tensors.push_back(random_tensor(rng, static_cast<int>(n), {groups_per_layer[n], fan_in(rng), 3, 3}, scale(rng)));
    return build_descriptor(tensors, Granularity::Filter, b_max);
}

inline Assignment random_assignment(std::mt19937_64& rng, std::size_t n) {
    Assignment x(n);
    for (auto& v : x) v = static_cast<std::uint8_t>(rng() & 1);
    return x;
}

/// Dense random upper-triangular QUBO, entries uniform in [-1, 1].
inline QuboMatrix random_dense_qubo(std::mt19937_64& rng, std::size_t dim) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<QuboEntry> entries;
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = r; c < dim; ++c) entries.push_back({r, c, u(rng)});
    return QuboMatrix(dim, std::move(entries));
}

struct NaiveMinimum {
    double energy;
    std::uint64_t state;
};

/// Evaluates every state from scratch through a dense matrix.
inline NaiveMinimum naive_minimum(const QuboMatrix& qubo) {
    const std::size_t n = qubo.dim();
    std::vector<double> dense(n * n, 0.0);
    for (const auto& e : qubo.entries()) dense[e.row * n + e.col] += e.value;
    NaiveMinimum best{0.0, 0};
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
        double e = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            if (!((s >> r) & 1)) continue;
            for (std::size_t c = r; c < n; ++c)
                if ((s >> c) & 1) e += dense[r * n + c];
        }
        if (e < best.energy) best = {e, s};
    }
    return best;
}

inline std::uint64_t as_integer(std::span<const std::uint8_t> x) {
    std::uint64_t v = 0;
    for (std::size_t k = 0; k < x.size(); ++k)
        if (x[k]) v |= std::uint64_t{1} << k;
    return v;
}

inline double relative_error(double got, double want, double scale) {
    return std::abs(got - want) / std::max(scale, 1e-300);
}

}  // namespace qubopress::testing
