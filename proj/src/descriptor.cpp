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
#include "qubopress/descriptor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "qubopress/error.hpp"

namespace qubopress {

namespace {

using nlohmann::json;

std::string layer_tag(std::size_t position, int id) {
    std::ostringstream os;
    os << "layer " << position << " (id " << id << ")";
    return os.str();
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open manifest: " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError("malformed manifest " + path.string() + ": " + e.what());
    }
}

std::array<std::size_t, 4> read_shape(const json& layer, const std::string& tag) {
    if (!layer.contains("shape") || !layer["shape"].is_array() || layer["shape"].size() != 4)
        throw InputError(tag + ": shape must be [out, in, kh, kw]");
    std::array<std::size_t, 4> shape{};
    for (std::size_t d = 0; d < 4; ++d) {
        const auto& v = layer["shape"][d];
        if (!v.is_number_integer() || v.get<long long>() < 1)
            throw InputError(tag + ": shape dimensions must be positive integers");
        shape[d] = v.get<std::size_t>();
    }
    return shape;
}

int read_b_max(const json& doc) {
    if (!doc.contains("b_max") || !doc["b_max"].is_number_integer())
        throw InputError("manifest: missing integer b_max");
    return doc["b_max"].get<int>();
}

// Blob is raw little-endian float32.
std::vector<float> read_blob(const std::filesystem::path& path, std::size_t expected,
                             const std::string& tag) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(tag + ": cannot open weight blob " + path.string());
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() != expected * sizeof(float)) {
        std::ostringstream os;
        os << tag << ": size mismatch, blob has " << bytes.size() << " bytes, shape needs "
           << expected * sizeof(float);
        throw InputError(os.str());
    }
    std::vector<float> data(expected);
    for (std::size_t k = 0; k < expected; ++k) {
        std::uint32_t raw = 0;
        for (int b = 3; b >= 0; --b)
            raw = (raw << 8) | static_cast<unsigned char>(bytes[k * 4 + static_cast<std::size_t>(b)]);
        data[k] = std::bit_cast<float>(raw);
        if (!std::isfinite(data[k])) {
            std::ostringstream os;
            os << tag << ": non-finite weight at offset " << k;
            throw InputError(os.str());
        }
    }
    return data;
}

std::size_t group_size(const std::array<std::size_t, 4>& shape, Granularity g) {
    return g == Granularity::Filter ? shape[1] * shape[2] * shape[3] : shape[2] * shape[3];
}

}  // namespace

std::string_view to_string(Granularity g) {
    return g == Granularity::Filter ? "filter" : "channel";
}

Granularity parse_granularity(std::string_view text) {
    if (text == "filter" || text == "filters") return Granularity::Filter;
    if (text == "channel" || text == "channels") return Granularity::Channel;
    throw InputError("unknown granularity: " + std::string(text));
}

std::size_t LayerDescriptor::weight_count() const {
    std::size_t total = 0;
    for (const auto& g : groups) total += g.count;
    return total;
}

double LayerDescriptor::max_abs() const {
    double m = 0.0;
    for (const auto& g : groups) m = std::max(m, g.max_abs);
    return m;
}

std::uint64_t ModelDescriptor::total_bits() const {
    std::uint64_t bits = 0;
    for (const auto& layer : layers)
        bits += static_cast<std::uint64_t>(layer.weight_count()) * static_cast<std::uint64_t>(b_max);
    return bits;
}

std::size_t ModelDescriptor::num_groups() const {
    std::size_t n = 0;
    for (const auto& layer : layers) n += layer.groups.size();
    return n;
}

std::size_t ModelDescriptor::num_quant_bits() const {
    std::size_t n = 0;
    for (const auto& layer : layers) n += static_cast<std::size_t>(layer.q_bits);
    return n;
}

int quant_bits_for(int b_max) {
    if (b_max < 2) throw InputError("b_max must be at least 2");
    // floor(log2(b_max)); equals ceil(log2(b_max)) for powers of two.
    return std::bit_width(static_cast<unsigned>(b_max)) - 1;
}

std::vector<WeightTensor> ingest_model(const std::filesystem::path& manifest) {
    const json doc = read_json(manifest);
    if (!doc.contains("layers") || !doc["layers"].is_array())
        throw InputError("manifest: missing layers array");
    const auto base = manifest.parent_path();
    std::vector<WeightTensor> tensors;
    std::unordered_set<int> seen;
    std::size_t position = 0;
    for (const auto& layer : doc["layers"]) {
        const int id = layer.value("id", static_cast<int>(position));
        const std::string tag = layer_tag(position, id);
        if (!seen.insert(id).second) throw InputError(tag + ": duplicate layer id");
        if (!layer.contains("weights") || !layer["weights"].is_string())
            throw InputError(tag + ": missing weights path (stats-only manifests cannot be ingested)");
        WeightTensor t;
        t.layer_id = id;
        t.shape = read_shape(layer, tag);
        t.data = read_blob(base / layer["weights"].get<std::string>(), t.size(), tag);
        tensors.push_back(std::move(t));
        ++position;
    }
    return tensors;
}

std::vector<GroupStats> compute_group_stats(const WeightTensor& tensor, Granularity granularity) {
    const std::size_t per_group = group_size(tensor.shape, granularity);
    const std::size_t n_groups = tensor.size() / per_group;
    std::vector<GroupStats> stats(n_groups);
    // Row-major layout makes every group a contiguous run of the data.
    for (std::size_t g = 0; g < n_groups; ++g) {
        GroupStats& s = stats[g];
        s.layer_id = tensor.layer_id;
        s.group_id = static_cast<int>(g);
        s.count = per_group;
        for (std::size_t k = g * per_group; k < (g + 1) * per_group; ++k) {
            const double a = std::abs(static_cast<double>(tensor.data[k]));
            s.l1_norm += a;
            s.max_abs = std::max(s.max_abs, a);
        }
    }
    return stats;
}

ModelDescriptor build_descriptor(std::span<const WeightTensor> tensors, Granularity granularity,
                                 int b_max) {
    ModelDescriptor d;
    d.b_max = b_max;
    d.granularity = granularity;
    const int q_bits = quant_bits_for(b_max);
    for (std::size_t n = 0; n < tensors.size(); ++n) {
        const auto& t = tensors[n];
        if (t.data.size() != t.size())
            throw InputError(layer_tag(n, t.layer_id) + ": data length does not match shape");
        LayerDescriptor layer;
        layer.id = t.layer_id;
        layer.q_bits = q_bits;
        layer.groups = compute_group_stats(t, granularity);
        d.layers.push_back(std::move(layer));
    }
    validate(d);
    return d;
}

ModelDescriptor load_descriptor(const std::filesystem::path& manifest, Granularity granularity,
                                std::optional<int> b_max) {
    const json doc = read_json(manifest);
    const int bits = b_max.value_or(read_b_max(doc));
    if (!doc.contains("layers") || !doc["layers"].is_array() || doc["layers"].empty())
        throw InputError("manifest: missing layers array");
    const bool stats_only = doc["layers"][0].contains("groups");
    if (!stats_only) {
        const auto tensors = ingest_model(manifest);
        return build_descriptor(tensors, granularity, bits);
    }

    const Granularity stored = parse_granularity(doc.value("granularity", std::string("filter")));
    if (stored != granularity)
        throw InputError("stats-only manifest is at " + std::string(to_string(stored)) +
                         " granularity; cannot regroup to " + std::string(to_string(granularity)));
    ModelDescriptor d;
    d.b_max = bits;
    d.granularity = granularity;
    const int q_bits = quant_bits_for(bits);
    std::unordered_set<int> seen;
    std::size_t position = 0;
    for (const auto& layer : doc["layers"]) {
        LayerDescriptor out;
        out.id = layer.value("id", static_cast<int>(position));
        const std::string tag = layer_tag(position, out.id);
        if (!seen.insert(out.id).second) throw InputError(tag + ": duplicate layer id");
        out.q_bits = q_bits;
        if (!layer.contains("groups") || !layer["groups"].is_array() || layer["groups"].empty())
            throw InputError(tag + ": missing groups");
        int gid = 0;
        for (const auto& g : layer["groups"]) {
            GroupStats s;
            s.layer_id = out.id;
            s.group_id = gid++;
            try {
                s.count = g.at("count").get<std::size_t>();
                s.l1_norm = g.at("l1_norm").get<double>();
                s.max_abs = g.at("max_abs").get<double>();
            } catch (const json::exception& e) {
                throw InputError(tag + ": bad group entry: " + e.what());
            }
            out.groups.push_back(s);
        }
        if (layer.contains("shape")) {
            const auto shape = read_shape(layer, tag);
            const std::size_t per = group_size(shape, granularity);
            const std::size_t expected = shape[0] * shape[1] * shape[2] * shape[3] / per;
            if (out.groups.size() != expected)
                throw InputError(tag + ": group count does not match shape");
            for (const auto& s : out.groups)
                if (s.count != per) throw InputError(tag + ": group size does not match shape");
        }
        d.layers.push_back(std::move(out));
        ++position;
    }
    validate(d);
    return d;
}

void validate(const ModelDescriptor& d) {
    if (d.b_max < 2) throw InputError("b_max must be at least 2");
    if (d.layers.empty()) throw InputError("descriptor has no layers");
    for (std::size_t n = 0; n < d.layers.size(); ++n) {
        const auto& layer = d.layers[n];
        const std::string tag = layer_tag(n, layer.id);
        if (layer.groups.empty()) throw InputError(tag + ": no groups");
        if (layer.q_bits < 0 || (1LL << layer.q_bits) - 1 > d.b_max - 1)
            throw InputError(tag + ": q_bits can encode more than b_max - 1 removed bits");
        for (const auto& g : layer.groups) {
            if (g.count < 1) throw InputError(tag + ": empty group");
            if (!std::isfinite(g.l1_norm) || !std::isfinite(g.max_abs) || g.l1_norm < 0 || g.max_abs < 0)
                throw InputError(tag + ": group statistics must be finite and non-negative");
            const double bound = static_cast<double>(g.count) * g.max_abs;
            if (g.l1_norm > bound * (1.0 + 1e-9) + 1e-12)
                throw InputError(tag + ": l1_norm exceeds count * max_abs");
        }
    }
}

}  // namespace qubopress
