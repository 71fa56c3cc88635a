/*
Copyright 2026 The Optune Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "optune/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "json.hpp"

namespace optune {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::pair<OperatorKind, std::string_view> kKindNames[] = {
    {OperatorKind::Conv, "Conv"},
    {OperatorKind::MatMul, "MatMul"},
    {OperatorKind::Embedding, "Embedding"},
    {OperatorKind::ElementwiseMath, "ElementwiseMath"},
    {OperatorKind::Reshape, "Reshape"},
    {OperatorKind::Concat, "Concat"},
    {OperatorKind::Split, "Split"},
    {OperatorKind::Control, "Control"},
    {OperatorKind::Other, "Other"},
};

void reject_unknown_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed,
                         std::string_view what) {
    for (const auto& item : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            throw ParseError(std::string(what) + ": unknown field \"" + item.key() + "\"");
        }
    }
}

double require_number(const nlohmann::json& obj, const char* key, std::string_view what) {
    if (!obj.contains(key)) {
        throw ParseError(std::string(what) + ": missing field \"" + key + "\"");
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        throw ParseError(std::string(what) + ": field \"" + key + "\" must be a number");
    }
    return v.get<double>();
}

std::string require_string(const nlohmann::json& obj, const char* key, std::string_view what) {
    if (!obj.contains(key) || !obj.at(key).is_string()) {
        throw ParseError(std::string(what) + ": missing string field \"" + key + "\"");
    }
    return obj.at(key).get<std::string>();
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open file: " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string_view to_string(OperatorKind kind) {
    for (const auto& [k, name] : kKindNames) {
        if (k == kind) return name;
    }
    return "Other";
}

bool kind_from_string(std::string_view text, OperatorKind& out) {
    for (const auto& [k, name] : kKindNames) {
        if (name == text) {
            out = k;
            return true;
        }
    }
    return false;
}

void validate(const std::string& name, const std::vector<Node>& nodes,
              const std::vector<Edge>& edges) {
    (void)name;
    std::vector<std::string> problems;
    std::map<std::string, std::size_t> index;

    for (const auto& n : nodes) {
        if (n.id.empty()) {
            problems.push_back("node with empty id");
            continue;
        }
        if (!index.emplace(n.id, index.size()).second) {
            problems.push_back("duplicate node id \"" + n.id + "\"");
        }
        for (auto [value, field] : {std::pair{n.serial_prep, "serial_prep"},
                                    {n.parallel_prep, "parallel_prep"},
                                    {n.flops, "flops"},
                                    {n.bytes, "bytes"}}) {
            if (!std::isfinite(value) || value < 0.0) {
                problems.push_back("node \"" + n.id + "\": " + field +
                                   " must be finite and non-negative");
            }
        }
    }

    std::set<Edge> seen;
    for (const auto& [u, v] : edges) {
        bool ok = true;
        for (const auto& end : {u, v}) {
            if (index.find(end) == index.end()) {
                problems.push_back("edge (" + u + " -> " + v + ") references unknown node \"" +
                                   end + "\"");
                ok = false;
            }
        }
        if (u == v) {
            problems.push_back("self-edge on node \"" + u + "\"");
            ok = false;
        }
        if (ok && !seen.insert({u, v}).second) {
            problems.push_back("duplicate edge (" + u + " -> " + v + ")");
        }
    }

    // Acyclicity via Kahn's algorithm; whatever survives is on a cycle.
    if (problems.empty() && !nodes.empty()) {
        std::vector<int> indegree(nodes.size(), 0);
        std::vector<std::vector<std::size_t>> succ(nodes.size());
        for (const auto& [u, v] : edges) {
            succ[index.at(u)].push_back(index.at(v));
            ++indegree[index.at(v)];
        }
        std::vector<std::size_t> stack;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (indegree[i] == 0) stack.push_back(i);
        }
        std::size_t removed = 0;
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            ++removed;
            for (std::size_t j : succ[i]) {
                if (--indegree[j] == 0) stack.push_back(j);
            }
        }
        if (removed != nodes.size()) {
            std::string cyclic = "cycle detected involving node(s):";
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                if (indegree[i] > 0) cyclic += " \"" + nodes[i].id + "\"";
            }
            problems.push_back(cyclic);
        }
    }

    if (!problems.empty()) {
        std::string msg;
        for (const auto& p : problems) {
            if (!msg.empty()) msg += "\n";
            msg += p;
        }
        throw ValidationError(msg);
    }
}

Graph::Graph(std::string name, std::vector<Node> nodes, std::vector<Edge> edges)
    : name_(std::move(name)), nodes_(std::move(nodes)), edges_(std::move(edges)) {
    validate(name_, nodes_, edges_);
    std::sort(nodes_.begin(), nodes_.end(),
              [](const Node& a, const Node& b) { return a.id < b.id; });
    std::sort(edges_.begin(), edges_.end());
    succ_.assign(nodes_.size(), {});
    pred_.assign(nodes_.size(), {});
    for (const auto& [u, v] : edges_) {
        auto ui = static_cast<std::uint32_t>(index_of(u));
        auto vi = static_cast<std::uint32_t>(index_of(v));
        succ_[ui].push_back(vi);
        pred_[vi].push_back(ui);
    }
    for (auto& s : succ_) std::sort(s.begin(), s.end());
    for (auto& p : pred_) std::sort(p.begin(), p.end());
}

bool Graph::has_node(std::string_view id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                               [](const Node& n, std::string_view key) { return n.id < key; });
    return it != nodes_.end() && it->id == id;
}

std::size_t Graph::index_of(std::string_view id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                               [](const Node& n, std::string_view key) { return n.id < key; });
    if (it == nodes_.end() || it->id != id) {
        throw std::out_of_range("unknown node id \"" + std::string(id) + "\"");
    }
    return static_cast<std::size_t>(it - nodes_.begin());
}

Graph parse_graph(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("graph file: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("graph file: top-level value must be an object");
    reject_unknown_keys(doc, {"name", "nodes", "edges"}, "graph file");

    std::string name = require_string(doc, "name", "graph file");
    if (!doc.contains("nodes") || !doc.at("nodes").is_array()) {
        throw ParseError("graph file: missing array field \"nodes\"");
    }
    if (!doc.contains("edges") || !doc.at("edges").is_array()) {
        throw ParseError("graph file: missing array field \"edges\"");
    }

    std::vector<Node> nodes;
    for (const auto& jn : doc.at("nodes")) {
        if (!jn.is_object()) throw ParseError("graph file: each node must be an object");
        reject_unknown_keys(jn, {"id", "kind", "serial_prep", "parallel_prep", "flops", "bytes"},
                            "graph file node");
        Node n;
        n.id = require_string(jn, "id", "graph file node");
        std::string kind = require_string(jn, "kind", "node \"" + n.id + "\"");
        if (!kind_from_string(kind, n.kind)) {
            throw ParseError("node \"" + n.id + "\": unknown kind \"" + kind + "\"");
        }
        n.serial_prep = require_number(jn, "serial_prep", "node \"" + n.id + "\"");
        n.parallel_prep = require_number(jn, "parallel_prep", "node \"" + n.id + "\"");
        n.flops = require_number(jn, "flops", "node \"" + n.id + "\"");
        n.bytes = require_number(jn, "bytes", "node \"" + n.id + "\"");
        nodes.push_back(std::move(n));
    }

    std::vector<Edge> edges;
    for (const auto& je : doc.at("edges")) {
        if (!je.is_array() || je.size() != 2 || !je[0].is_string() || !je[1].is_string()) {
            throw ParseError("graph file: each edge must be a [producer, consumer] string pair");
        }
        edges.emplace_back(je[0].get<std::string>(), je[1].get<std::string>());
    }

    return Graph(std::move(name), std::move(nodes), std::move(edges));
}

Graph load_graph(const std::filesystem::path& path) {
    try {
        return parse_graph(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::string serialize(const Graph& g) {
    ordered_json doc;
    doc["name"] = g.name();
    doc["nodes"] = ordered_json::array();
    for (const auto& n : g.nodes()) {
        ordered_json jn;
        jn["id"] = n.id;
        jn["kind"] = std::string(to_string(n.kind));
        jn["serial_prep"] = n.serial_prep;
        jn["parallel_prep"] = n.parallel_prep;
        jn["flops"] = n.flops;
        jn["bytes"] = n.bytes;
        doc["nodes"].push_back(std::move(jn));
    }
    doc["edges"] = ordered_json::array();
    for (const auto& [u, v] : g.edges()) {
        doc["edges"].push_back(ordered_json::array({u, v}));
    }
    return doc.dump(2) + "\n";
}

std::vector<std::string> topological_order(const Graph& g) {
    const auto& nodes = g.nodes();
    std::vector<int> indegree(nodes.size(), 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        indegree[i] = static_cast<int>(g.predecessors()[i].size());
    }
    // Min-heap on node id; nodes() is sorted by id, so indices order the same
    // way and the heap can work on indices directly.
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (indegree[i] == 0) ready.push(i);
    }
    std::vector<std::string> order;
    order.reserve(nodes.size());
    while (!ready.empty()) {
        std::size_t i = ready.top();
        ready.pop();
        order.push_back(nodes[i].id);
        for (std::uint32_t j : g.successors()[i]) {
            if (--indegree[j] == 0) ready.push(j);
        }
    }
    return order;
}

HardwareSpec parse_hardware(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("hardware file: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("hardware file: top-level value must be an object");
    reject_unknown_keys(doc,
                        {"sockets", "cores_per_socket", "smt_ways", "fma_rate", "upi_bandwidth",
                         "dispatch_overhead"},
                        "hardware file");
    HardwareSpec hw;
    hw.sockets = static_cast<int>(require_number(doc, "sockets", "hardware file"));
    hw.cores_per_socket = static_cast<int>(require_number(doc, "cores_per_socket", "hardware file"));
    hw.smt_ways = static_cast<int>(require_number(doc, "smt_ways", "hardware file"));
    hw.fma_rate = require_number(doc, "fma_rate", "hardware file");
    hw.upi_bandwidth = require_number(doc, "upi_bandwidth", "hardware file");
    hw.dispatch_overhead = require_number(doc, "dispatch_overhead", "hardware file");

    std::vector<std::string> problems;
    if (hw.sockets < 1) problems.push_back("sockets must be >= 1");
    if (hw.cores_per_socket < 1) problems.push_back("cores_per_socket must be >= 1");
    if (hw.smt_ways < 1) problems.push_back("smt_ways must be >= 1");
    if (!(hw.fma_rate > 0.0) || !std::isfinite(hw.fma_rate)) {
        problems.push_back("fma_rate must be finite and > 0");
    }
    if (!(hw.upi_bandwidth > 0.0) || !std::isfinite(hw.upi_bandwidth)) {
        problems.push_back("upi_bandwidth must be finite and > 0");
    }
    if (hw.dispatch_overhead < 0.0 || !std::isfinite(hw.dispatch_overhead)) {
        problems.push_back("dispatch_overhead must be finite and >= 0");
    }
    if (!problems.empty()) {
        std::string msg;
        for (const auto& p : problems) {
            if (!msg.empty()) msg += "\n";
            msg += p;
        }
        throw ValidationError(msg);
    }
    return hw;
}

HardwareSpec load_hardware(const std::filesystem::path& path) {
    try {
        return parse_hardware(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::string serialize(const HardwareSpec& hw) {
    ordered_json doc;
    doc["sockets"] = hw.sockets;
    doc["cores_per_socket"] = hw.cores_per_socket;
    doc["smt_ways"] = hw.smt_ways;
    doc["fma_rate"] = hw.fma_rate;
    doc["upi_bandwidth"] = hw.upi_bandwidth;
    doc["dispatch_overhead"] = hw.dispatch_overhead;
    return doc.dump(2) + "\n";
}

}  // namespace optune
