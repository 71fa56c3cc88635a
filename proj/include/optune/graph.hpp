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

#ifndef OPTUNE_GRAPH_HPP
#define OPTUNE_GRAPH_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace optune {

/// Raised when a graph or hardware file cannot be decoded (bad syntax,
/// unknown fields, wrong value types).
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when structural invariants are violated (dangling edge, duplicate
/// id, cycle, negative cost, ...). The message carries one line per
/// violation, each naming the offending node or edge.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OperatorKind {
    Conv,
    MatMul,
    Embedding,
    ElementwiseMath,
    Reshape,
    Concat,
    Split,
    Control,
    Other,
};

std::string_view to_string(OperatorKind kind);
// Returns false if `text` names no known kind.
bool kind_from_string(std::string_view text, OperatorKind& out);

/// One operator of a computational graph. Costs are abstract model
/// parameters, not wall-clock measurements:
///   serial_prep   framework work that never parallelizes
///   parallel_prep data-preparation work divisible across intra-op threads
///   flops         FMA-bound compute, divided by fma_rate * kernel units
///   bytes         data moved when the operator's output crosses sockets
struct Node {
    std::string id;
    OperatorKind kind = OperatorKind::Other;
    double serial_prep = 0.0;
    double parallel_prep = 0.0;
    double flops = 0.0;
    double bytes = 0.0;
};

using Edge = std::pair<std::string, std::string>;  // (producer id, consumer id)

/// A validated operator DAG. Construction validates; instances are immutable
/// afterwards and safe to share read-only across threads. Nodes are stored
/// sorted by id and edges sorted lexicographically, which makes
/// serialization canonical.
class Graph {
public:
    Graph() = default;
    /// Throws ValidationError listing every violated invariant.
    Graph(std::string name, std::vector<Node> nodes, std::vector<Edge> edges);

    const std::string& name() const { return name_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t node_count() const { return nodes_.size(); }

    bool has_node(std::string_view id) const;
    /// Index into nodes(); throws std::out_of_range for unknown ids.
    std::size_t index_of(std::string_view id) const;
    const Node& node(std::string_view id) const { return nodes_[index_of(id)]; }

    // Adjacency by node index, each list sorted ascending.
    const std::vector<std::vector<std::uint32_t>>& successors() const { return succ_; }
    const std::vector<std::vector<std::uint32_t>>& predecessors() const { return pred_; }

private:
    std::string name_;
    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::uint32_t>> succ_;
    std::vector<std::vector<std::uint32_t>> pred_;
};

/// Checks every Graph invariant on raw parts and throws ValidationError with
/// one line per violation. Graph's constructor calls this; it is exposed so
/// callers can validate candidate inputs without building adjacency.
void validate(const std::string& name, const std::vector<Node>& nodes,
              const std::vector<Edge>& edges);

/// Decodes and validates a graph document (see README for the format).
Graph parse_graph(std::string_view text);
Graph load_graph(const std::filesystem::path& path);

/// Canonical serialization; parse_graph(serialize(g)) reproduces g exactly
/// and identical graphs serialize byte-identically.
std::string serialize(const Graph& g);

/// Producer-before-consumer order, deterministic: ties broken by
/// lexicographic node id.
std::vector<std::string> topological_order(const Graph& g);

/// Machine description. All bundled specs use abstract units; only ratios
/// matter to the simulator.
struct HardwareSpec {
    int sockets = 1;
    int cores_per_socket = 1;
    int smt_ways = 1;              // hyperthreads per physical core
    double fma_rate = 1.0;         // flops per time-unit per physical core
    double upi_bandwidth = 1.0;    // bytes per time-unit between sockets
    double dispatch_overhead = 0.0;  // time-units per worker thread per dispatch

    int physical_cores() const { return sockets * cores_per_socket; }
    int logical_cores() const { return sockets * cores_per_socket * smt_ways; }
};

HardwareSpec parse_hardware(std::string_view text);
HardwareSpec load_hardware(const std::filesystem::path& path);
std::string serialize(const HardwareSpec& hw);

/// Per-pool thread configuration: `pools` inter-op pools, each with
/// `intra_threads` framework threads and `kernel_threads` math-kernel
/// threads.
struct ThreadConfig {
    int pools = 1;
    int intra_threads = 1;
    int kernel_threads = 1;

    bool operator==(const ThreadConfig&) const = default;
};

}  // namespace optune

#endif  // OPTUNE_GRAPH_HPP
