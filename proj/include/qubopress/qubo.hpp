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
#include <iosfwd>
#include <span>
#include <vector>

#include "qubopress/descriptor.hpp"

namespace qubopress {

/// A binary vector; each element is 0 or 1.
using Assignment = std::vector<std::uint8_t>;

/// Small dense row-major matrix used for the per-layer coefficient blocks.
class DenseMatrix {
 public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<const double> values() const { return data_; }

 private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct Hyperparameters {
    double beta = 0.0;   // weight of the quantization loss
    double gamma = 0.0;  // weight of the compression reward

    void validate() const;
};

enum class VarKind : std::uint8_t { Prune, Quant };

/// What a flat QUBO variable stands for: pruning mask of group `index` or
/// bit `index` of the bits-removed code, both within layer position `layer`.
struct Variable {
    VarKind kind = VarKind::Prune;
    std::size_t layer = 0;
    std::size_t index = 0;

    friend bool operator==(const Variable&, const Variable&) = default;
};

/// Bijection between flat indices and (kind, layer, group|bit). All pruning
/// variables come first in (layer, group) order, followed by the code bits
/// of each layer, least significant first.
class VariableIndex {
 public:
    VariableIndex() = default;
    explicit VariableIndex(const ModelDescriptor& descriptor);

    std::size_t size() const { return variables_.size(); }
    bool empty() const { return variables_.empty(); }
    const Variable& at(std::size_t flat) const { return variables_.at(flat); }
    std::span<const Variable> variables() const { return variables_; }

    std::size_t num_layers() const { return prune_offset_.size(); }
    std::size_t num_groups(std::size_t layer) const { return group_count_.at(layer); }
    std::size_t num_bits(std::size_t layer) const { return bit_count_.at(layer); }
    std::size_t prune(std::size_t layer, std::size_t group) const { return prune_offset_.at(layer) + group; }
    std::size_t quant(std::size_t layer, std::size_t bit) const { return quant_offset_.at(layer) + bit; }

 private:
    std::vector<Variable> variables_;
    std::vector<std::size_t> prune_offset_;
    std::vector<std::size_t> quant_offset_;
    std::vector<std::size_t> group_count_;
    std::vector<std::size_t> bit_count_;
};

/// Coefficient blocks of one layer.
struct LayerCoefficients {
    DenseMatrix a;  // groups x groups, pruning loss
    DenseMatrix b;  // bits x bits, quantization loss
    std::vector<double> d;  // per group, reduction from pruning
    std::vector<double> e;  // per bit, reduction from quantization
    DenseMatrix f;  // groups x bits, overlap between the two
};

struct QuboCoefficients {
    std::vector<LayerCoefficients> layers;
};

struct ReductionCoefficients {
    std::vector<std::vector<double>> d;
    std::vector<std::vector<double>> e;
    std::vector<DenseMatrix> f;
};

std::vector<DenseMatrix> build_pruning_coeffs(const ModelDescriptor& descriptor);
std::vector<DenseMatrix> build_quant_coeffs(const ModelDescriptor& descriptor);
ReductionCoefficients build_reduction_coeffs(const ModelDescriptor& descriptor);
QuboCoefficients build_coefficients(const ModelDescriptor& descriptor);

/// Compression rate R of an assignment, evaluated from the D/E/F families.
double reduction_from_coefficients(const QuboCoefficients& coeffs, const VariableIndex& index,
                                   std::span<const std::uint8_t> x);

struct QuboEntry {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;

    friend bool operator==(const QuboEntry&, const QuboEntry&) = default;
};

/// Upper-triangular sparse QUBO matrix, entries sorted by (row, col).
class QuboMatrix {
 public:
    QuboMatrix() = default;
    /// Entries may come in any order; duplicates are summed. Throws
    /// InputError on out-of-range or lower-triangular entries.
    QuboMatrix(std::size_t dim, std::vector<QuboEntry> entries, VariableIndex index = {});

    std::size_t dim() const { return dim_; }
    std::span<const QuboEntry> entries() const { return entries_; }
    const VariableIndex& index() const { return index_; }
    bool has_index() const { return !index_.empty(); }

    double max_abs_entry() const;
    double min_abs_nonzero_entry() const;

 private:
    std::size_t dim_ = 0;
    std::vector<QuboEntry> entries_;
    VariableIndex index_;
};

/// Entries with magnitude below this are dropped during assembly.
inline constexpr double kDropThreshold = 1e-15;

QuboMatrix assemble_qubo(const QuboCoefficients& coeffs, const Hyperparameters& hp,
                         const VariableIndex& index);

/// x^T U x.
double evaluate_energy(const QuboMatrix& qubo, std::span<const std::uint8_t> x);

void write_qubo_text(std::ostream& out, const QuboMatrix& qubo);
QuboMatrix read_qubo_text(std::istream& in);

}  // namespace qubopress
