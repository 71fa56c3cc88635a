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

#ifndef OPTUNE_WIDTH_HPP
#define OPTUNE_WIDTH_HPP

#include <cstddef>
#include <string>

#include "optune/graph.hpp"

namespace optune {

/// Graph-width metrics over heavy operators only. Light operators are
/// transparent: heavy-to-heavy reachability passes through them.
struct WidthReport {
    std::size_t heavy_count = 0;
    std::size_t heavy_depth = 0;  // longest heavy chain, counted in heavy ops
    std::size_t max_width = 0;    // most heavy ops sharing one longest-path level
    std::size_t avg_width = 0;    // floor(heavy_count / heavy_depth)

    bool operator==(const WidthReport&) const = default;
};

/// Heavy = compute-intensive (Conv, MatMul) or Embedding. Lightweight math,
/// reshaping and control kinds are not counted.
bool classify_heavy(const Node& n);

std::size_t heavy_depth(const Graph& g);
std::size_t max_width(const Graph& g);
std::size_t avg_width(const Graph& g);
WidthReport width_report(const Graph& g);

std::string serialize(const WidthReport& report);

}  // namespace optune

#endif  // OPTUNE_WIDTH_HPP
