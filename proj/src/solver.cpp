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
#include "qubopress/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "qubopress/error.hpp"

namespace qubopress {

namespace {

struct Neighbor {
    std::uint32_t var;
    double weight;
};

// Symmetric view of U: diagonal plus, for every variable, the off-diagonal
// couplings to all other variables.
struct Adjacency {
    std::vector<double> diag;
    std::vector<std::size_t> start;
    std::vector<Neighbor> neighbors;
    double abs_sum = 0.0;

    explicit Adjacency(const QuboMatrix& qubo) : diag(qubo.dim(), 0.0), start(qubo.dim() + 1, 0) {
        for (const auto& e : qubo.entries()) {
            abs_sum += std::abs(e.value);
            if (e.row == e.col) {
                diag[e.row] += e.value;
            } else {
                ++start[e.row + 1];
                ++start[e.col + 1];
            }
        }
        for (std::size_t i = 0; i < qubo.dim(); ++i) start[i + 1] += start[i];
        neighbors.resize(start.back());
        std::vector<std::size_t> fill(start.begin(), start.end() - 1);
        for (const auto& e : qubo.entries()) {
            if (e.row == e.col) continue;
            neighbors[fill[e.row]++] = {static_cast<std::uint32_t>(e.col), e.value};
            neighbors[fill[e.col]++] = {static_cast<std::uint32_t>(e.row), e.value};
        }
    }

    std::size_t dim() const { return diag.size(); }
};

// State plus local fields: flipping variable i changes the energy by
// (x_i ? -field_i : field_i).
struct Chain {
    Assignment x;
    std::vector<double> field;
    double energy = 0.0;

    explicit Chain(const Adjacency& adj) : x(adj.dim(), 0), field(adj.diag) {}

    double delta(std::size_t i) const { return x[i] ? -field[i] : field[i]; }

    void flip(const Adjacency& adj, std::size_t i, double d) {
        const double sign = x[i] ? -1.0 : 1.0;
        x[i] ^= 1;
        energy += d;
        for (std::size_t k = adj.start[i]; k < adj.start[i + 1]; ++k)
            field[adj.neighbors[k].var] += sign * adj.neighbors[k].weight;
    }
};

double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::mt19937_64 replica_rng(std::uint64_t seed, std::uint64_t replica) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(replica), static_cast<std::uint32_t>(replica >> 32)};
    return std::mt19937_64(seq);
}

void check_chain(const QuboMatrix& qubo, const Adjacency& adj, const Chain& chain) {
    const double exact = evaluate_energy(qubo, chain.x);
    const double scale = std::max({std::abs(exact), adj.abs_sum, 1e-300});
    if (std::abs(chain.energy - exact) > 1e-9 * scale)
        throw std::logic_error("incremental energy drifted: tracked " + std::to_string(chain.energy) +
                               ", evaluated " + std::to_string(exact));
}

Solution run_replica(const QuboMatrix& qubo, const Adjacency& adj, std::span<const double> temps,
                     const AnnealConfig& config, std::uint64_t replica) {
    const std::size_t n = adj.dim();
    auto rng = replica_rng(config.seed, replica);
    const std::size_t rungs = temps.size();
    std::vector<double> inv_temp(rungs);
    for (std::size_t r = 0; r < rungs; ++r) inv_temp[r] = 1.0 / temps[r];

    std::vector<Chain> chains(rungs, Chain(adj));
    for (auto& c : chains) {
        for (std::size_t i = 0; i < n; ++i)
            if (rng() >> 63) c.flip(adj, i, c.delta(i));
    }
    // at_rung[r]: chain currently sitting at temperature r.
    std::vector<std::size_t> at_rung(rungs);
    for (std::size_t r = 0; r < rungs; ++r) at_rung[r] = r;

    Assignment best_x(n, 0);
    double best_e = 0.0;  // the all-zero state
    for (const auto& c : chains) {
        if (c.energy < best_e) {
            best_e = c.energy;
            best_x = c.x;
        }
    }

    for (std::uint64_t sweep = 1; sweep <= config.sweeps; ++sweep) {
        for (std::size_t r = 0; r < rungs; ++r) {
            Chain& c = chains[at_rung[r]];
            const double b = inv_temp[r];
            for (std::size_t i = 0; i < n; ++i) {
                const double d = c.delta(i);
                if (d > 0.0) {
                    const double arg = b * d;
                    if (arg > 40.0 || unit_uniform(rng) >= std::exp(-arg)) continue;
                }
                c.flip(adj, i, d);
                if (c.energy < best_e) {
                    best_e = c.energy;
                    best_x = c.x;
                }
            }
        }
        if (rungs > 1 && sweep % config.exchange_interval == 0) {
            for (std::size_t r = 0; r + 1 < rungs; ++r) {
                const double e_hot = chains[at_rung[r]].energy;
                const double e_cold = chains[at_rung[r + 1]].energy;
                const double arg = (inv_temp[r] - inv_temp[r + 1]) * (e_hot - e_cold);
                if (arg >= 0.0 || unit_uniform(rng) < std::exp(arg)) std::swap(at_rung[r], at_rung[r + 1]);
            }
        }
        if (config.check_interval != 0 && sweep % config.check_interval == 0)
            for (const auto& c : chains) check_chain(qubo, adj, c);
    }
    return Solution::from_assignment(qubo, std::move(best_x));
}

}  // namespace

Solution Solution::from_assignment(const QuboMatrix& qubo, Assignment x) {
    const double e = evaluate_energy(qubo, x);
    return Solution{std::move(x), e};
}

bool assignment_less(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    const std::size_t n = std::max(a.size(), b.size());
    for (std::size_t k = n; k-- > 0;) {
        const std::uint8_t va = k < a.size() ? a[k] : 0;
        const std::uint8_t vb = k < b.size() ? b[k] : 0;
        if (va != vb) return va < vb;
    }
    return false;
}

bool solution_less(const Solution& a, const Solution& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return assignment_less(a.x, b.x);
}

void AnnealConfig::validate() const {
    if (replicas < 1) throw InputError("replicas must be at least 1");
    if (sweeps < 1) throw InputError("sweeps must be at least 1");
    if (ladder.rungs < 1) throw InputError("temperature ladder needs at least one rung");
    if (exchange_interval < 1) throw InputError("exchange interval must be at least 1");
    if (ladder.t_hot > 0 && ladder.t_cold > 0 && !(ladder.t_hot > ladder.t_cold))
        throw InputError("t_hot must exceed t_cold");
}

std::vector<double> temperature_schedule(const QuboMatrix& qubo, const TemperatureLadder& ladder) {
    const double max_abs = qubo.max_abs_entry();
    const double min_abs = qubo.min_abs_nonzero_entry();
    double hot = ladder.t_hot > 0 ? ladder.t_hot : (max_abs > 0 ? 10.0 * max_abs : 1.0);
    double cold = ladder.t_cold > 0 ? ladder.t_cold : (min_abs > 0 ? 1e-3 * min_abs : 1e-3);
    if (!(hot > cold) || !(cold > 0)) throw InputError("temperature ladder needs t_hot > t_cold > 0");
    const auto rungs = static_cast<std::size_t>(std::max(ladder.rungs, 1));
    std::vector<double> temps(rungs);
    if (rungs == 1) {
        temps[0] = cold;
        return temps;
    }
    const double ratio = cold / hot;
    for (std::size_t r = 0; r < rungs; ++r)
        temps[r] = hot * std::pow(ratio, static_cast<double>(r) / static_cast<double>(rungs - 1));
    temps.back() = cold;
    return temps;
}

Solution brute_force_solve(const QuboMatrix& qubo) {
    const std::size_t n = qubo.dim();
    if (n > kBruteForceMaxDim)
        throw InputError("brute force limited to " + std::to_string(kBruteForceMaxDim) + " variables, got " +
                         std::to_string(n));
    const Adjacency adj(qubo);
    Chain chain(adj);
    Solution best{Assignment(n, 0), 0.0};
    // Incremental energies steer the walk; anything within tolerance of the
    // incumbent is re-evaluated exactly before comparing.
    const double tol = 1e-9 * std::max(adj.abs_sum, 1e-300);
    const std::uint64_t states = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < states; ++k) {
        const auto i = static_cast<std::size_t>(std::countr_zero(k));
        chain.flip(adj, i, chain.delta(i));
        if (chain.energy > best.energy + tol) continue;
        const double exact = evaluate_energy(qubo, chain.x);
        chain.energy = exact;
        if (exact < best.energy || (exact == best.energy && assignment_less(chain.x, best.x))) {
            best.x = chain.x;
            best.energy = exact;
        }
    }
    return best;
}

std::vector<Solution> anneal(const QuboMatrix& qubo, const AnnealConfig& config) {
    config.validate();
    const Adjacency adj(qubo);
    const auto temps = temperature_schedule(qubo, config.ladder);
    const auto replicas = static_cast<std::size_t>(config.replicas);
    std::vector<Solution> out(replicas);

    unsigned threads = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, replicas));
    if (threads <= 1) {
        for (std::size_t r = 0; r < replicas; ++r) out[r] = run_replica(qubo, adj, temps, config, r);
    } else {
        std::vector<std::exception_ptr> errors(threads);
        {
            std::vector<std::jthread> workers;
            for (unsigned w = 0; w < threads; ++w) {
                workers.emplace_back([&, w] {
                    try {
                        for (std::size_t r = w; r < replicas; r += threads)
                            out[r] = run_replica(qubo, adj, temps, config, r);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    std::sort(out.begin(), out.end(), solution_less);
    return out;
}

const Solution& best_of(std::span<const Solution> solutions) {
    if (solutions.empty()) throw InputError("best_of needs at least one solution");
    return *std::min_element(solutions.begin(), solutions.end(), solution_less);
}

}  // namespace qubopress
