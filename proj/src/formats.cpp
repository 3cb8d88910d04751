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
#include "qubopress/formats.hpp"

#include <array>
#include <charconv>
#include <string>

#include "qubopress/error.hpp"
#include "qubopress/qubo.hpp"

namespace qubopress {

using nlohmann::json;

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

json plan_to_json(const CompressionPlan& plan) {
    json layers = json::array();
    for (const auto& lp : plan.layers) {
        json prune = json::array();
        for (auto p : lp.prune) prune.push_back(static_cast<int>(p));
        layers.push_back({{"id", lp.layer_id}, {"prune", std::move(prune)}, {"bits_removed", lp.bits_removed}});
    }
    return {{"layers", std::move(layers)}};
}

CompressionPlan plan_from_json(const json& doc, const ModelDescriptor& descriptor) {
    CompressionPlan plan;
    plan.b_max = descriptor.b_max;
    try {
        for (const auto& layer : doc.at("layers")) {
            LayerPlan lp;
            lp.layer_id = layer.at("id").get<int>();
            for (const auto& p : layer.at("prune")) lp.prune.push_back(static_cast<std::uint8_t>(p.get<int>()));
            lp.bits_removed = layer.at("bits_removed").get<int>();
            plan.layers.push_back(std::move(lp));
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed plan: ") + e.what());
    }
    validate(plan, descriptor);
    return plan;
}

json index_sidecar(const ModelDescriptor& descriptor) {
    json layers = json::array();
    for (const auto& layer : descriptor.layers) {
        json groups = json::array();
        for (const auto& g : layer.groups)
            groups.push_back({{"count", g.count}, {"l1_norm", g.l1_norm}, {"max_abs", g.max_abs}});
        layers.push_back({{"id", layer.id}, {"q_bits", layer.q_bits}, {"groups", std::move(groups)}});
    }
    const VariableIndex index(descriptor);
    json variables = json::array();
    for (std::size_t k = 0; k < index.size(); ++k) {
        const auto& v = index.at(k);
        if (v.kind == VarKind::Prune)
            variables.push_back({{"index", k}, {"kind", "P"}, {"layer", v.layer}, {"group", v.index}});
        else
            variables.push_back({{"index", k}, {"kind", "Q"}, {"layer", v.layer}, {"bit", v.index}});
    }
    return {{"dim", index.size()},
            {"b_max", descriptor.b_max},
            {"granularity", std::string(to_string(descriptor.granularity))},
            {"total_bits", descriptor.total_bits()},
            {"layers", std::move(layers)},
            {"variables", std::move(variables)}};
}

ModelDescriptor descriptor_from_sidecar(const json& doc) {
    ModelDescriptor d;
    try {
        d.b_max = doc.at("b_max").get<int>();
        d.granularity = parse_granularity(doc.at("granularity").get<std::string>());
        for (const auto& layer : doc.at("layers")) {
            LayerDescriptor ld;
            ld.id = layer.at("id").get<int>();
            ld.q_bits = layer.at("q_bits").get<int>();
            int gid = 0;
            for (const auto& g : layer.at("groups")) {
                ld.groups.push_back({ld.id, gid++, g.at("count").get<std::size_t>(), g.at("l1_norm").get<double>(),
                                     g.at("max_abs").get<double>()});
            }
            d.layers.push_back(std::move(ld));
        }
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed index sidecar: ") + e.what());
    }
    validate(d);
    const VariableIndex index(d);
    const auto& vars = doc.at("variables");
    if (doc.at("dim").get<std::size_t>() != index.size() || vars.size() != index.size())
        throw InputError("index sidecar dimension does not match its layers");
    for (std::size_t k = 0; k < index.size(); ++k) {
        const auto& v = vars[k];
        const auto& expect = index.at(k);
        const bool prune = v.at("kind").get<std::string>() == "P";
        const auto pos = v.at(prune ? "group" : "bit").get<std::size_t>();
        if (v.at("index").get<std::size_t>() != k || prune != (expect.kind == VarKind::Prune) ||
            v.at("layer").get<std::size_t>() != expect.layer || pos != expect.index)
            throw InputError("index sidecar variable " + std::to_string(k) + " is out of order");
    }
    return d;
}

std::string to_bitstring(std::span<const std::uint8_t> x) {
    std::string s(x.size(), '0');
    for (std::size_t k = 0; k < x.size(); ++k)
        if (x[k]) s[k] = '1';
    return s;
}

Assignment from_bitstring(const std::string& bits) {
    Assignment x(bits.size(), 0);
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k] != '0' && bits[k] != '1') throw InputError("bitstring may only contain 0 and 1");
        x[k] = bits[k] == '1';
    }
    return x;
}

std::string solution_json_line(const Solution& solution) {
    return "{\"energy\": " + format_double(solution.energy) + ", \"x\": \"" + to_bitstring(solution.x) + "\"}";
}

}  // namespace qubopress
