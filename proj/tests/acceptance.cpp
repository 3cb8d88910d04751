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
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "qubopress/compress.hpp"
#include "qubopress/descriptor.hpp"
#include "qubopress/error.hpp"
#include "qubopress/qubo.hpp"
#include "qubopress/reference.hpp"
#include "qubopress/search.hpp"
#include "qubopress/solver.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;
using namespace qubopress;
using qubopress::testing::model_manifest;

namespace {

// Pinned tolerances.
constexpr double kEnergyRelTol = 1e-9;
constexpr double kReductionRelTol = 1e-12;
constexpr double kSolverEnergyTol = 1e-9;
constexpr int kSolverRequiredHits = 95;
constexpr double kRmseTol = 0.05;
constexpr int kSearchBinSteps = 5;

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// 1
Outcome problem_sizes() {
    const auto t0 = Clock::now();
    struct Case {
        const char* model;
        Granularity g;
        std::size_t want;
    };
    const Case cases[] = {{"lenet5", Granularity::Filter, 28},
                          {"lenet5", Granularity::Channel, 108},
                          {"gtsr_cnn", Granularity::Filter, 233},
                          {"resnet9", Granularity::Filter, 2264},
                          {"vgg16", Granularity::Filter, 4263}};
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        const auto got = load_descriptor(model_manifest(c.model), c.g).problem_size();
        ok &= got == c.want;
        detail += std::string(c.model) + "/" + std::string(to_string(c.g)) + "=" + std::to_string(got) + " ";
    }
    const double t = seconds_since(t0);
    ok &= t < 1.0;
    return {ok, detail + fmt("in %.3fs", t)};
}

// 2
Outcome energy_identity() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2002);
    std::vector<ModelDescriptor> descriptors{load_descriptor(model_manifest("toy"), Granularity::Filter),
                                             load_descriptor(model_manifest("lenet5"), Granularity::Filter),
                                             load_descriptor(model_manifest("lenet5"), Granularity::Channel),
                                             load_descriptor(model_manifest("gtsr_cnn"), Granularity::Filter)};
    std::uniform_real_distribution<double> log_u(-3.0, 1.0);
    double worst = 0.0;
    for (const auto& d : descriptors) {
        const VariableIndex index(d);
        const auto coeffs = build_coefficients(d);
        for (int h = 0; h < 5; ++h) {
            const Hyperparameters hp{std::pow(10.0, log_u(rng)), std::pow(10.0, log_u(rng))};
            const auto u = assemble_qubo(coeffs, hp, index);
            for (int s = 0; s < 1000; ++s) {
                const auto x = qubopress::testing::random_assignment(rng, index.size());
                const auto plan = decode_solution(x, index, d);
                const double lp = reference::pruning_loss(d, plan);
                const double lq = reference::quantization_loss(plan);
                const double r = reference::reduction(d, plan);
                const double want = lp + hp.beta * lq - hp.gamma * r;
                const double scale = lp + hp.beta * lq + hp.gamma * r;
                worst = std::max(worst, qubopress::testing::relative_error(evaluate_energy(u, x), want, scale));
            }
        }
    }
    const double t = seconds_since(t0);
    return {worst <= kEnergyRelTol && t < 30.0,
            std::to_string(descriptors.size()) + " descriptors x 5 hp x 1000 x, worst rel " + fmt("%.2e", worst) +
                fmt(" in %.1fs", t)};
}

// 3
Outcome reduction_equivalence() {
    std::mt19937_64 rng(3003);
    struct Fixture {
        std::vector<WeightTensor> tensors;
        ModelDescriptor d;
    };
    std::vector<Fixture> fixtures;
    const auto lenet = ingest_model(model_manifest("lenet5"));
    fixtures.push_back({lenet, build_descriptor(lenet, Granularity::Filter, 8)});
    fixtures.push_back({lenet, build_descriptor(lenet, Granularity::Channel, 8)});
    std::vector<WeightTensor> random{qubopress::testing::random_tensor(rng, 0, {5, 3, 3, 3}),
                                     qubopress::testing::random_tensor(rng, 1, {7, 5, 1, 1}),
                                     qubopress::testing::random_tensor(rng, 2, {4, 7, 3, 3})};
    fixtures.push_back({random, build_descriptor(random, Granularity::Filter, 16)});

    double worst = 0.0;
    for (const auto& f : fixtures) {
        const VariableIndex index(f.d);
        const auto coeffs = build_coefficients(f.d);
        for (int k = 0; k < 500; ++k) {
            Assignment x;
            CompressionPlan plan;
            for (;;) {
                x = qubopress::testing::random_assignment(rng, index.size());
                try {
                    plan = decode_solution(x, index, f.d);
                    break;
                } catch (const InputError&) {
                }
            }
            const double measured = measure(f.tensors, plan, f.d).reduction;
            const double form = reduction_from_coefficients(coeffs, index, x);
            const double scale = std::max(std::abs(measured), std::abs(form));
            if (scale > 0.0) worst = std::max(worst, std::abs(measured - form) / scale);
        }
    }
    return {worst <= kReductionRelTol, "3 descriptors x 500 plans, worst rel " + fmt("%.2e", worst)};
}

// 4
Outcome solver_equivalence() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(4004);
    std::uniform_int_distribution<std::size_t> dim(2, 16);
    int hits = 0;
    for (int i = 0; i < 100; ++i) {
        const auto u = qubopress::testing::random_dense_qubo(rng, dim(rng));
        const auto exact = brute_force_solve(u);
        AnnealConfig c;  // 32 replicas, 10^4 sweeps, default ladder
        c.seed = static_cast<std::uint64_t>(i);
        const auto& best = best_of(anneal(u, c));
        if (best.energy <= exact.energy + kSolverEnergyTol * std::max(1.0, std::abs(exact.energy))) ++hits;
    }
    const double t = seconds_since(t0);
    return {hits >= kSolverRequiredHits && t < 300.0, std::to_string(hits) + "/100 optimal" + fmt(" in %.1fs", t)};
}

// 5
Outcome three_variable_enumeration() {
    // dyadic values keep every sum exact
    std::mt19937_64 rng(5005);
    std::uniform_int_distribution<int> k(-64, 64);
    bool ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        const double u11 = k(rng) / 8.0, u22 = k(rng) / 8.0, u33 = k(rng) / 8.0;
        const double u12 = k(rng) / 8.0, u13 = k(rng) / 8.0, u23 = k(rng) / 8.0;
        const QuboMatrix u(3, {{0, 0, u11}, {1, 1, u22}, {2, 2, u33}, {0, 1, u12}, {0, 2, u13}, {1, 2, u23}});
        const double closed[8] = {u11 + u22 + u33 + u12 + u13 + u23, u11, u22, u33, u11 + u22 + u12,
                                  u11 + u33 + u13, u22 + u33 + u23, 0.0};
        const Assignment states[8] = {{1, 1, 1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1},
                                      {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {0, 0, 0}};
        for (int h = 0; h < 8; ++h) ok &= evaluate_energy(u, states[h]) == closed[h];
    }
    return {ok, "50 instances x 8 states"};
}

// 6
Outcome rmse_law() {
    std::mt19937_64 rng(6006);
    std::uniform_real_distribution<float> w(-1.0f, 1.0f);
    std::vector<WeightTensor> t{{0, {1, 100000, 1, 1}, std::vector<float>(100000)}};
    for (auto& v : t[0].data) v = w(rng);
    const auto d = build_descriptor(t, Granularity::Filter, 8);
    bool ok = true;
    std::string detail;
    for (int b : {4, 6, 8}) {
        auto plan = CompressionPlan::identity(d);
        plan.layers[0].bits_removed = 8 - b;
        const auto m = measure(t, plan, d);
        const double dev = std::abs(m.rmse[0] / (m.step[0] / std::sqrt(12.0)) - 1.0);
        ok &= dev <= kRmseTol;
        detail += "b=" + std::to_string(b) + fmt(" dev %.2f%% ", 100 * dev);
    }
    bool doubling = true;
    double previous = 0.0;
    for (int r = 0; r <= 7; ++r) {
        auto plan = CompressionPlan::identity(d);
        plan.layers[0].bits_removed = r;
        const double s = measure(t, plan, d).step[0];
        if (r) doubling &= s == 2.0 * previous;
        previous = s;
    }
    return {ok && doubling, detail + (doubling ? "step doubles exactly" : "step does not double")};
}

// 7
Outcome binary_search_resolution() {
    std::mt19937_64 rng(7007);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const double lower = 100.0 * u(rng) - 50.0;
        const double upper = lower + 0.1 + 100.0 * u(rng);
        const double threshold = lower + (upper - lower) * u(rng);
        const double width = (upper - lower) / std::ldexp(1.0, kSearchBinSteps);
        const double mx = bin_search_max(lower, upper, kSearchBinSteps, [&](double x) { return x <= threshold; });
        const double mn = bin_search_min(lower, upper, kSearchBinSteps, [&](double x) { return x >= threshold; });
        ok &= mx <= threshold && threshold - mx <= width && mn >= threshold && mn - threshold <= width;
        worst = std::max({worst, (threshold - mx) / width, (mn - threshold) / width});
    }
    return {ok, "20 thresholds, worst gap " + fmt("%.3f", worst) + " of a step"};
}

// 8
Outcome search_optimality() {
    const auto t0 = Clock::now();
    const auto d = load_descriptor(model_manifest("toy"), Granularity::Filter);
    const double beta0 = init_beta(build_coefficients(d));
    std::vector<double> betas, gammas;
    for (int i = 0; i <= 10; ++i) betas.push_back(2.0 * beta0 * i / 10.0);
    for (int i = 0; i <= 10; ++i) gammas.push_back(std::pow(10.0, -3.0 + 0.5 * i));

    bool ok = d.problem_size() <= 20;
    std::string detail;
    for (double threshold : {0.9, 0.8}) {
        SurrogateOracle oracle(d);
        SearchConfig config;
        config.acc_threshold = threshold;
        config.n_bin = kSearchBinSteps;
        config.solver = SolverKind::Exact;
        config.seed = 8008;
        const auto state = hyperparameter_search(config, d, oracle);
        const auto rows = grid_sweep(d, betas, gammas, oracle, SolverKind::Exact, {});
        double grid_best = 0.0;
        for (const auto& row : rows)
            if (row.accuracy && *row.accuracy >= threshold) grid_best = std::max(grid_best, row.reduction);
        const double allowed = grid_best * (1.0 - std::ldexp(1.0, -kSearchBinSteps));
        const bool pass = state.best && state.best->accuracy >= threshold && state.best->reduction >= allowed;
        ok &= pass;
        detail += fmt("a_th %.2f: ", threshold) + fmt("search R %.4f", state.best ? state.best->reduction : -1.0) +
                  fmt(" grid R %.4f; ", grid_best);
    }
    const double t = seconds_since(t0);
    return {ok && t < 120.0, detail + fmt("in %.1fs", t)};
}

// 9
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

Outcome cli_determinism() {
    const fs::path dir = fs::temp_directory_path() / ("qubopress-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string tool = QUBOPRESS_TOOL;
    const std::string lenet = model_manifest("lenet5").string();
    auto sh = [&](const std::string& cmd) { return std::system((cmd + " > /dev/null 2>&1").c_str()); };

    bool ok = sh(tool + " build " + lenet + " --gamma 0.5 --out " + (dir / "m.qubo").string()) == 0;
    for (const char* tag : {"a", "b"}) {
        const std::string t = tag;
        ok &= sh(tool + " solve " + (dir / "m.qubo").string() + " --seed 9 --sweeps 2000 --out " +
                 (dir / ("solve_" + t + ".jsonl")).string() + " --plan-out " +
                 (dir / ("plan_" + t + ".json")).string() + " --run-manifest " +
                 (dir / ("solve_" + t + ".run.json")).string()) == 0;
        ok &= sh(tool + " search " + lenet + " --surrogate --seed 9 --sweeps 200 --n-iter 2 --acc-threshold 0.9 --out " +
                 (dir / ("search_" + t + ".json")).string() + " --run-manifest " +
                 (dir / ("search_" + t + ".run.json")).string()) == 0;
    }
    int identical = 0;
    for (const char* stem : {"solve_%s.jsonl", "plan_%s.json", "search_%s.json", "solve_%s.run.json",
                             "search_%s.run.json"}) {
        char a[64], b[64];
        std::snprintf(a, sizeof a, stem, "a");
        std::snprintf(b, sizeof b, stem, "b");
        const auto x = slurp(dir / a);
        const bool same = !x.empty() && x == slurp(dir / b);
        identical += same;
        ok &= same;
    }
    fs::remove_all(dir);
    return {ok, std::to_string(identical) + "/5 output files byte-identical"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"problem-size reproduction", problem_sizes},
        {"energy identity", energy_identity},
        {"reduction coefficient equivalence", reduction_equivalence},
        {"annealer matches brute force", solver_equivalence},
        {"three-variable enumeration", three_variable_enumeration},
        {"quantization RMSE law", rmse_law},
        {"binary-search resolution", binary_search_resolution},
        {"search vs grid optimum", search_optimality},
        {"CLI determinism", cli_determinism},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << k + 1 << "] " << criteria[k].first << ": " << o.detail
                  << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed ? 1 : 0;
}
