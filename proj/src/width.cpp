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

#include "optune/width.hpp"

#include <algorithm>
#include <vector>

#include "json.hpp"

namespace optune {

namespace {

// level[i] = length of the longest heavy chain ending at node i (counting i
// itself when heavy). Light nodes just forward the running maximum, which is
// exactly the light-transparency rule: reachability through them contracts.
std::vector<std::size_t> heavy_levels(const Graph& g) {
    const auto& nodes = g.nodes();
    std::vector<std::size_t> level(nodes.size(), 0);
    // nodes() is id-sorted, so topological_order maps back to indices cheaply.
    for (const auto& id : topological_order(g)) {
        std::size_t i = g.index_of(id);
        std::size_t best = 0;
        for (std::uint32_t p : g.predecessors()[i]) {
            best = std::max(best, level[p]);
        }
        level[i] = best + (classify_heavy(nodes[i]) ? 1 : 0);
    }
    return level;
}

}  // namespace

bool classify_heavy(const Node& n) {
    switch (n.kind) {
        case OperatorKind::Conv:
        case OperatorKind::MatMul:
        case OperatorKind::Embedding:
            return true;
        default:
            return false;
    }
}

std::size_t heavy_depth(const Graph& g) {
    auto level = heavy_levels(g);
    std::size_t depth = 0;
    for (std::size_t i = 0; i < level.size(); ++i) {
        if (classify_heavy(g.nodes()[i])) depth = std::max(depth, level[i]);
    }
    return depth;
}

std::size_t max_width(const Graph& g) {
    auto level = heavy_levels(g);
    std::size_t depth = 0;
    for (std::size_t i = 0; i < level.size(); ++i) {
        if (classify_heavy(g.nodes()[i])) depth = std::max(depth, level[i]);
    }
    if (depth == 0) return 0;
    std::vector<std::size_t> per_level(depth + 1, 0);
    std::size_t widest = 0;
    for (std::size_t i = 0; i < level.size(); ++i) {
        if (classify_heavy(g.nodes()[i])) {
            widest = std::max(widest, ++per_level[level[i]]);
        }
    }
    return widest;
}

std::size_t avg_width(const Graph& g) {
    std::size_t depth = heavy_depth(g);
    if (depth == 0) return 0;
    std::size_t count = 0;
    for (const auto& n : g.nodes()) {
        if (classify_heavy(n)) ++count;
    }
    return count / depth;
}

WidthReport width_report(const Graph& g) {
    WidthReport r;
    for (const auto& n : g.nodes()) {
        if (classify_heavy(n)) ++r.heavy_count;
    }
    r.heavy_depth = heavy_depth(g);
    r.max_width = max_width(g);
    r.avg_width = r.heavy_depth == 0 ? 0 : r.heavy_count / r.heavy_depth;
    return r;
}

std::string serialize(const WidthReport& report) {
    nlohmann::ordered_json doc;
    doc["heavy_count"] = report.heavy_count;
    doc["heavy_depth"] = report.heavy_depth;
    doc["max_width"] = report.max_width;
    doc["avg_width"] = report.avg_width;
    return doc.dump(2) + "\n";
}

}  // namespace optune
