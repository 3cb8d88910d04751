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
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qubopress/compress.hpp"
#include "qubopress/descriptor.hpp"
#include "qubopress/error.hpp"
#include "qubopress/oracle.hpp"
#include "qubopress/qubo.hpp"
#include "qubopress/search.hpp"
#include "qubopress/solver.hpp"

namespace py = pybind11;
using namespace qubopress;

namespace {

// Lets a Python callable act as the accuracy oracle.
class PyOracle : public AccuracyOracle {
 public:
    explicit PyOracle(std::function<double(const CompressionPlan&)> fn) : fn_(std::move(fn)) {}
    double evaluate(const CompressionPlan& plan) override {
        py::gil_scoped_acquire gil;
        return fn_(plan);
    }

 private:
    std::function<double(const CompressionPlan&)> fn_;
};

QuboMatrix build_qubo(const ModelDescriptor& d, double beta, double gamma) {
    return assemble_qubo(build_coefficients(d), {beta, gamma}, VariableIndex(d));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "QUBO formulation of joint pruning and quantization";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<OracleError>(m, "OracleError", PyExc_RuntimeError);
    py::register_exception<NoThresholdCrossing>(m, "NoThresholdCrossing", PyExc_RuntimeError);

    py::enum_<Granularity>(m, "Granularity")
        .value("FILTER", Granularity::Filter)
        .value("CHANNEL", Granularity::Channel);

    py::class_<GroupStats>(m, "GroupStats")
        .def_readonly("count", &GroupStats::count)
        .def_readonly("l1_norm", &GroupStats::l1_norm)
        .def_readonly("max_abs", &GroupStats::max_abs)
        .def_property_readonly("mean_magnitude", &GroupStats::mean_magnitude);

    py::class_<LayerDescriptor>(m, "LayerDescriptor")
        .def_readonly("id", &LayerDescriptor::id)
        .def_readonly("groups", &LayerDescriptor::groups)
        .def_readonly("q_bits", &LayerDescriptor::q_bits);

    py::class_<ModelDescriptor>(m, "ModelDescriptor")
        .def_readonly("b_max", &ModelDescriptor::b_max)
        .def_readonly("granularity", &ModelDescriptor::granularity)
        .def_readonly("layers", &ModelDescriptor::layers)
        .def_property_readonly("total_bits", &ModelDescriptor::total_bits)
        .def_property_readonly("num_groups", &ModelDescriptor::num_groups)
        .def_property_readonly("problem_size", &ModelDescriptor::problem_size);

    m.def("load_descriptor", &load_descriptor, py::arg("manifest"), py::arg("granularity") = Granularity::Filter,
          py::arg("b_max") = std::nullopt);

    py::class_<QuboMatrix>(m, "QuboMatrix")
        .def_property_readonly("dim", &QuboMatrix::dim)
        .def_property_readonly("entries",
                               [](const QuboMatrix& q) {
                                   std::vector<std::tuple<std::size_t, std::size_t, double>> out;
                                   for (const auto& e : q.entries()) out.emplace_back(e.row, e.col, e.value);
                                   return out;
                               })
        .def("energy", [](const QuboMatrix& q, const Assignment& x) { return evaluate_energy(q, x); });

    m.def("init_beta", [](const ModelDescriptor& d) { return init_beta(build_coefficients(d)); });
    m.def("build_qubo", &build_qubo, py::arg("descriptor"), py::arg("beta"), py::arg("gamma"));

    py::class_<Solution>(m, "Solution")
        .def_readonly("x", &Solution::x)
        .def_readonly("energy", &Solution::energy);

    m.def("brute_force_solve", &brute_force_solve, py::call_guard<py::gil_scoped_release>());
    m.def(
        "anneal",
        [](const QuboMatrix& q, int replicas, std::uint64_t sweeps, std::uint64_t seed) {
            AnnealConfig c;
            c.replicas = replicas;
            c.sweeps = sweeps;
            c.seed = seed;
            return anneal(q, c);
        },
        py::arg("qubo"), py::arg("replicas") = 32, py::arg("sweeps") = 10000, py::arg("seed") = 0,
        py::call_guard<py::gil_scoped_release>());

    py::class_<LayerPlan>(m, "LayerPlan")
        .def_readonly("layer_id", &LayerPlan::layer_id)
        .def_readonly("prune", &LayerPlan::prune)
        .def_readonly("bits_removed", &LayerPlan::bits_removed);

    py::class_<CompressionPlan>(m, "CompressionPlan")
        .def_readonly("b_max", &CompressionPlan::b_max)
        .def_readonly("layers", &CompressionPlan::layers)
        .def("bit_width", &CompressionPlan::bit_width);

    m.def("decode_solution", [](const Assignment& x, const ModelDescriptor& d) {
        return decode_solution(x, VariableIndex(d), d);
    });
    m.def("reduction_rate", &reduction_rate);
    m.def("surrogate_accuracy",
          [](const ModelDescriptor& d, const CompressionPlan& plan) { return SurrogateOracle(d).evaluate(plan); });

    py::class_<TraceRow>(m, "TraceRow")
        .def_readonly("beta", &TraceRow::beta)
        .def_readonly("gamma", &TraceRow::gamma)
        .def_readonly("energy", &TraceRow::energy)
        .def_readonly("reduction", &TraceRow::reduction)
        .def_readonly("accuracy", &TraceRow::accuracy);

    py::class_<Checkpoint>(m, "Checkpoint")
        .def_readonly("reduction", &Checkpoint::reduction)
        .def_readonly("beta", &Checkpoint::beta)
        .def_readonly("gamma", &Checkpoint::gamma)
        .def_readonly("accuracy", &Checkpoint::accuracy)
        .def_readonly("plan", &Checkpoint::plan);

    py::class_<SearchState>(m, "SearchState")
        .def_readonly("beta", &SearchState::beta)
        .def_readonly("gamma", &SearchState::gamma)
        .def_readonly("best", &SearchState::best)
        .def_readonly("trace", &SearchState::trace);

    m.def(
        "search",
        [](const ModelDescriptor& d, std::optional<std::function<double(const CompressionPlan&)>> oracle,
           double acc_threshold, int n_bin, int n_iter, std::optional<double> gamma_init, std::uint64_t seed,
           bool exact, std::uint64_t sweeps) {
            SearchConfig c;
            c.acc_threshold = acc_threshold;
            c.n_bin = n_bin;
            c.n_iter = n_iter;
            c.gamma_init = gamma_init;
            c.seed = seed;
            c.solver = exact ? SolverKind::Exact : SolverKind::Anneal;
            c.anneal.sweeps = sweeps;
            c.anneal.seed = seed;
            py::gil_scoped_release release;
            if (oracle) {
                PyOracle o(*oracle);
                return hyperparameter_search(c, d, o);
            }
            SurrogateOracle o(d);
            return hyperparameter_search(c, d, o);
        },
        py::arg("descriptor"), py::arg("oracle") = std::nullopt, py::arg("acc_threshold") = 0.97,
        py::arg("n_bin") = 5, py::arg("n_iter") = 5, py::arg("gamma_init") = std::nullopt, py::arg("seed") = 0,
        py::arg("exact") = false, py::arg("sweeps") = 10000);
}
