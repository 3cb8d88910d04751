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
#include "qubopress/qubo.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "qubopress/error.hpp"
#include "qubopress/formats.hpp"

namespace qubopress {

void Hyperparameters::validate() const {
    if (!std::isfinite(beta) || !std::isfinite(gamma) || beta < 0 || gamma < 0)
        throw InputError("beta and gamma must be finite and non-negative");
}

VariableIndex::VariableIndex(const ModelDescriptor& descriptor) {
    const std::size_t n_layers = descriptor.layers.size();
    prune_offset_.resize(n_layers);
    quant_offset_.resize(n_layers);
    group_count_.resize(n_layers);
    bit_count_.resize(n_layers);
    for (std::size_t n = 0; n < n_layers; ++n) {
        const auto& layer = descriptor.layers[n];
        prune_offset_[n] = variables_.size();
        group_count_[n] = layer.groups.size();
        for (std::size_t i = 0; i < layer.groups.size(); ++i)
            variables_.push_back({VarKind::Prune, n, i});
    }
    for (std::size_t n = 0; n < n_layers; ++n) {
        const auto& layer = descriptor.layers[n];
        quant_offset_[n] = variables_.size();
        bit_count_[n] = static_cast<std::size_t>(layer.q_bits);
        for (std::size_t k = 0; k < bit_count_[n]; ++k) variables_.push_back({VarKind::Quant, n, k});
    }
}

std::vector<DenseMatrix> build_pruning_coeffs(const ModelDescriptor& descriptor) {
    std::vector<DenseMatrix> out;
    out.reserve(descriptor.layers.size());
    for (const auto& layer : descriptor.layers) {
        const std::size_t g = layer.groups.size();
        DenseMatrix a(g, g);
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = 0; j < g; ++j)
                a(i, j) = layer.groups[i].mean_magnitude() * layer.groups[j].mean_magnitude();
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<DenseMatrix> build_quant_coeffs(const ModelDescriptor& descriptor) {
    std::vector<DenseMatrix> out;
    out.reserve(descriptor.layers.size());
    for (const auto& layer : descriptor.layers) {
        const auto k = static_cast<std::size_t>(layer.q_bits);
        DenseMatrix b(k, k);
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t c = 0; c < k; ++c) b(r, c) = std::ldexp(1.0, static_cast<int>(r + c));
        out.push_back(std::move(b));
    }
    return out;
}

ReductionCoefficients build_reduction_coeffs(const ModelDescriptor& descriptor) {
    const auto total = static_cast<double>(descriptor.total_bits());
    ReductionCoefficients out;
    for (const auto& layer : descriptor.layers) {
        const std::size_t g = layer.groups.size();
        const auto k = static_cast<std::size_t>(layer.q_bits);
        const auto layer_weights = static_cast<double>(layer.weight_count());
        std::vector<double> d(g);
        std::vector<double> e(k);
        DenseMatrix f(g, k);
        for (std::size_t i = 0; i < g; ++i) {
            const auto count = static_cast<double>(layer.groups[i].count);
            d[i] = count * descriptor.b_max / total;
            for (std::size_t b = 0; b < k; ++b) f(i, b) = std::ldexp(count, static_cast<int>(b)) / total;
        }
        for (std::size_t b = 0; b < k; ++b) e[b] = std::ldexp(layer_weights, static_cast<int>(b)) / total;
        out.d.push_back(std::move(d));
        out.e.push_back(std::move(e));
        out.f.push_back(std::move(f));
    }
    return out;
}

QuboCoefficients build_coefficients(const ModelDescriptor& descriptor) {
    validate(descriptor);
    auto a = build_pruning_coeffs(descriptor);
    auto b = build_quant_coeffs(descriptor);
    auto r = build_reduction_coeffs(descriptor);
    QuboCoefficients coeffs;
    for (std::size_t n = 0; n < descriptor.layers.size(); ++n) {
        coeffs.layers.push_back({std::move(a[n]), std::move(b[n]), std::move(r.d[n]),
                                 std::move(r.e[n]), std::move(r.f[n])});
    }
    return coeffs;
}

namespace {

void check_shapes(const QuboCoefficients& coeffs, const VariableIndex& index) {
    if (coeffs.layers.size() != index.num_layers())
        throw InputError("coefficients and variable index disagree on the layer count");
    for (std::size_t n = 0; n < coeffs.layers.size(); ++n) {
        const auto& c = coeffs.layers[n];
        const std::size_t g = index.num_groups(n);
        const std::size_t k = index.num_bits(n);
        if (c.a.rows() != g || c.a.cols() != g || c.d.size() != g || c.f.rows() != g ||
            c.b.rows() != k || c.b.cols() != k || c.e.size() != k || c.f.cols() != k)
            throw InputError("inconsistent coefficient shapes in layer " + std::to_string(n));
    }
}

}  // namespace

double reduction_from_coefficients(const QuboCoefficients& coeffs, const VariableIndex& index,
                                   std::span<const std::uint8_t> x) {
    check_shapes(coeffs, index);
    if (x.size() != index.size()) throw InputError("assignment length does not match the variable index");
    double r = 0.0;
    for (std::size_t n = 0; n < coeffs.layers.size(); ++n) {
        const auto& c = coeffs.layers[n];
        for (std::size_t i = 0; i < c.d.size(); ++i) {
            if (!x[index.prune(n, i)]) continue;
            r += c.d[i];
            for (std::size_t k = 0; k < c.e.size(); ++k)
                if (x[index.quant(n, k)]) r -= c.f(i, k);
        }
        for (std::size_t k = 0; k < c.e.size(); ++k)
            if (x[index.quant(n, k)]) r += c.e[k];
    }
    return r;
}

QuboMatrix::QuboMatrix(std::size_t dim, std::vector<QuboEntry> entries, VariableIndex index)
    : dim_(dim), index_(std::move(index)) {
    if (!index_.empty() && index_.size() != dim_)
        throw InputError("variable index size does not match the matrix dimension");
    for (const auto& e : entries) {
        if (e.row >= dim_ || e.col >= dim_) throw InputError("qubo entry out of range");
        if (e.row > e.col) throw InputError("qubo entry below the diagonal");
        if (!std::isfinite(e.value)) throw InputError("qubo entry is not finite");
    }
    std::stable_sort(entries.begin(), entries.end(), [](const QuboEntry& a, const QuboEntry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (const auto& e : entries) {
        if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col)
            entries_.back().value += e.value;
        else
            entries_.push_back(e);
    }
}

double QuboMatrix::max_abs_entry() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, std::abs(e.value));
    return m;
}

double QuboMatrix::min_abs_nonzero_entry() const {
    double m = 0.0;
    for (const auto& e : entries_) {
        const double a = std::abs(e.value);
        if (a > 0 && (m == 0.0 || a < m)) m = a;
    }
    return m;
}

QuboMatrix assemble_qubo(const QuboCoefficients& coeffs, const Hyperparameters& hp,
                         const VariableIndex& index) {
    hp.validate();
    check_shapes(coeffs, index);
    std::vector<QuboEntry> entries;
    auto emit = [&](std::size_t r, std::size_t c, double v) {
        if (std::abs(v) >= kDropThreshold) entries.push_back({r, c, v});
    };
    // Pruning rows precede all code-bit rows, so this loop emits in (row, col) order.
    for (std::size_t n = 0; n < coeffs.layers.size(); ++n) {
        const auto& c = coeffs.layers[n];
        const std::size_t g = c.d.size();
        const std::size_t k = c.e.size();
        for (std::size_t i = 0; i < g; ++i) {
            emit(index.prune(n, i), index.prune(n, i), c.a(i, i) - hp.gamma * c.d[i]);
            for (std::size_t j = i + 1; j < g; ++j)
                emit(index.prune(n, i), index.prune(n, j), c.a(i, j) + c.a(j, i));
            for (std::size_t b = 0; b < k; ++b)
                emit(index.prune(n, i), index.quant(n, b), hp.gamma * c.f(i, b));
        }
    }
    for (std::size_t n = 0; n < coeffs.layers.size(); ++n) {
        const auto& c = coeffs.layers[n];
        const std::size_t k = c.e.size();
        for (std::size_t b = 0; b < k; ++b) {
            emit(index.quant(n, b), index.quant(n, b), hp.beta * c.b(b, b) - hp.gamma * c.e[b]);
            for (std::size_t l = b + 1; l < k; ++l)
                emit(index.quant(n, b), index.quant(n, l), hp.beta * (c.b(b, l) + c.b(l, b)));
        }
    }
    return QuboMatrix(index.size(), std::move(entries), index);
}

double evaluate_energy(const QuboMatrix& qubo, std::span<const std::uint8_t> x) {
    if (x.size() != qubo.dim()) throw InputError("assignment length does not match the qubo dimension");
    double energy = 0.0;
    for (const auto& e : qubo.entries())
        if (x[e.row] && x[e.col]) energy += e.value;
    return energy;
}

void write_qubo_text(std::ostream& out, const QuboMatrix& qubo) {
    out << "dim " << qubo.dim() << '\n';
    for (const auto& e : qubo.entries()) out << e.row << ' ' << e.col << ' ' << format_double(e.value) << '\n';
}

QuboMatrix read_qubo_text(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t dim = 0;
    bool have_dim = false;
    std::vector<QuboEntry> entries;
    auto fail = [&](const std::string& why) {
        throw InputError("qubo line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        if (!have_dim) {
            std::string key;
            if (!(ls >> key >> dim) || key != "dim") fail("expected 'dim N'");
            have_dim = true;
            continue;
        }
        std::string r, c, v;
        if (!(ls >> r >> c >> v)) fail("expected 'row col value'");
        QuboEntry e;
        auto parse = [&](const std::string& s, auto& dst) {
            const auto res = std::from_chars(s.data(), s.data() + s.size(), dst);
            if (res.ec != std::errc() || res.ptr != s.data() + s.size()) fail("cannot parse '" + s + "'");
        };
        parse(r, e.row);
        parse(c, e.col);
        parse(v, e.value);
        if (e.row >= dim || e.col >= dim) fail("index out of range");
        if (e.row > e.col) fail("entry below the diagonal");
        entries.push_back(e);
    }
    if (!have_dim) throw InputError("qubo file is empty");
    return QuboMatrix(dim, std::move(entries));
}

}  // namespace qubopress
