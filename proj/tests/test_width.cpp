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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "optune/graph.hpp"
#include "optune/width.hpp"

using namespace optune;

namespace {

Node make_node(std::string id, OperatorKind kind) {
    Node n;
    n.id = std::move(id);
    n.kind = kind;
    n.serial_prep = 1.0;
    return n;
}

std::string data_path(const char* rel) { return std::string(OPTUNE_DATA_DIR "/") + rel; }

Graph conv_chain(int k) {
    std::vector<Node> nodes;
    std::vector<Edge> edges;
    for (int i = 0; i < k; ++i) {
        nodes.push_back(make_node("c" + std::to_string(i), OperatorKind::Conv));
        if (i > 0) edges.push_back({"c" + std::to_string(i - 1), "c" + std::to_string(i)});
    }
    return Graph("chain", nodes, edges);
}

// Random DAG over mixed kinds, forward edges only.
Graph random_graph(std::mt19937& rng, int max_nodes = 20) {
    static const OperatorKind kinds[] = {
        OperatorKind::Conv,    OperatorKind::MatMul,  OperatorKind::Embedding,
        OperatorKind::Reshape, OperatorKind::Control, OperatorKind::ElementwiseMath,
    };
    int n = 1 + static_cast<int>(rng() % max_nodes);
    std::vector<Node> nodes;
    for (int i = 0; i < n; ++i) {
        nodes.push_back(make_node("n" + std::to_string(i), kinds[rng() % 6]));
    }
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng() % 3 == 0) edges.push_back({nodes[i].id, nodes[j].id});
        }
    }
    return Graph("rand", nodes, edges);
}

}  // namespace

TEST_CASE("heavy classification follows operator kind") {
    CHECK(classify_heavy(make_node("a", OperatorKind::Conv)));
    CHECK(classify_heavy(make_node("a", OperatorKind::MatMul)));
    CHECK(classify_heavy(make_node("a", OperatorKind::Embedding)));
    CHECK_FALSE(classify_heavy(make_node("a", OperatorKind::ElementwiseMath)));
    CHECK_FALSE(classify_heavy(make_node("a", OperatorKind::Reshape)));
    CHECK_FALSE(classify_heavy(make_node("a", OperatorKind::Control)));
    CHECK_FALSE(classify_heavy(make_node("a", OperatorKind::Split)));
    CHECK_FALSE(classify_heavy(make_node("a", OperatorKind::Concat)));
    CHECK_FALSE(classify_heavy(make_node("a", OperatorKind::Other)));
}

TEST_CASE("inception module: the worked width example") {
    auto g = load_graph(data_path("graphs/inception-module4.json"));
    CHECK(heavy_depth(g) == 3);
    CHECK(max_width(g) == 4);
    CHECK(avg_width(g) == 2);  // floor(7 / 3)
    CHECK(width_report(g) == WidthReport{7, 3, 4, 2});
}

TEST_CASE("conv chains have depth k and width 1") {
    auto g = conv_chain(5);
    CHECK(heavy_depth(g) == 5);
    CHECK(max_width(g) == 1);
    CHECK(avg_width(g) == 1);
}

TEST_CASE("graphs with no heavy ops report all zeros") {
    Graph g("light",
            {make_node("a", OperatorKind::ElementwiseMath),
             make_node("b", OperatorKind::ElementwiseMath)},
            {{"a", "b"}});
    CHECK(width_report(g) == WidthReport{0, 0, 0, 0});
    CHECK(width_report(Graph("empty", {}, {})) == WidthReport{0, 0, 0, 0});
}

TEST_CASE("bundled graphs reproduce the published widths") {
    struct Expected {
        const char* file;
        std::size_t avg;
    };
    const Expected table[] = {
        {"graphs/dense-like.json", 1},     {"graphs/squeeze-like.json", 1},
        {"graphs/resnet-like.json", 1},    {"graphs/inception-v3-like.json", 2},
        {"graphs/widedeep-like.json", 3},  {"graphs/ncf-like.json", 4},
        {"graphs/transformer-like.json", 4},
    };
    for (const auto& e : table) {
        CAPTURE(e.file);
        CHECK(avg_width(load_graph(data_path(e.file))) == e.avg);
    }
    CHECK(max_width(load_graph(data_path("graphs/ncf-like.json"))) == 4);
}

TEST_CASE("light nodes are transparent for heavy reachability") {
    // conv -> relu -> conv still counts as a heavy chain of two
    Graph g("through",
            {make_node("a", OperatorKind::Conv), make_node("m", OperatorKind::ElementwiseMath),
             make_node("z", OperatorKind::Conv)},
            {{"a", "m"}, {"m", "z"}});
    CHECK(heavy_depth(g) == 2);
    CHECK(max_width(g) == 1);
}

TEST_CASE("property: avg_width <= max_width") {
    std::mt19937 rng(11);
    for (int iter = 0; iter < 200; ++iter) {
        auto g = random_graph(rng);
        auto r = width_report(g);
        CHECK(r.avg_width <= r.max_width);
        if (r.heavy_count >= 1) {
            CHECK(r.heavy_depth >= 1);
            CHECK(r.avg_width >= 1);
        }
        CHECK(r.avg_width == (r.heavy_depth == 0 ? 0 : r.heavy_count / r.heavy_depth));
    }
}

TEST_CASE("property: adding a light node never changes metrics") {
    std::mt19937 rng(13);
    for (int iter = 0; iter < 100; ++iter) {
        auto g = random_graph(rng);
        auto before = width_report(g);

        // (a) disconnected light node
        auto nodes = g.nodes();
        auto edges = g.edges();
        nodes.push_back(make_node("zz_light", OperatorKind::Control));
        CHECK(width_report(Graph("plus", nodes, edges)) == before);

        // (b) split an existing edge with a light pass-through
        if (!edges.empty()) {
            auto [u, v] = edges[rng() % edges.size()];
            auto edges2 = edges;
            edges2.erase(std::find(edges2.begin(), edges2.end(), Edge{u, v}));
            edges2.push_back({u, "zz_light"});
            edges2.push_back({"zz_light", v});
            CHECK(width_report(Graph("split", nodes, edges2)) == before);
        }
    }
}

TEST_CASE("property: disjoint duplication doubles count and width, keeps depth") {
    std::mt19937 rng(17);
    for (int iter = 0; iter < 100; ++iter) {
        auto g = random_graph(rng);
        auto r1 = width_report(g);
        auto nodes = g.nodes();
        auto edges = g.edges();
        for (const auto& n : g.nodes()) {
            auto copy = n;
            copy.id = "copy_" + n.id;
            nodes.push_back(copy);
        }
        for (const auto& [u, v] : g.edges()) {
            edges.push_back({"copy_" + u, "copy_" + v});
        }
        auto r2 = width_report(Graph("dup", nodes, edges));
        CHECK(r2.heavy_count == 2 * r1.heavy_count);
        CHECK(r2.heavy_depth == r1.heavy_depth);
        CHECK(r2.max_width == 2 * r1.max_width);
        if (r1.heavy_depth > 0) {
            // floor(2c/d) is 2*floor(c/d) or one more
            CHECK(r2.avg_width >= 2 * r1.avg_width);
            CHECK(r2.avg_width <= 2 * r1.avg_width + 1);
        }
    }
}

TEST_CASE("property: metrics are invariant under id renaming") {
    std::mt19937 rng(19);
    for (int iter = 0; iter < 50; ++iter) {
        auto g = random_graph(rng);
        auto r1 = width_report(g);
        auto nodes = g.nodes();
        auto edges = g.edges();
        auto rename = [](const std::string& id) { return "x" + id + "y"; };
        for (auto& n : nodes) n.id = rename(n.id);
        for (auto& [u, v] : edges) {
            u = rename(u);
            v = rename(v);
        }
        CHECK(width_report(Graph("renamed", nodes, edges)) == r1);
    }
}

TEST_CASE("width report serializes with the documented keys") {
    auto text = serialize(WidthReport{7, 3, 4, 2});
    CHECK(text.find("\"heavy_count\": 7") != std::string::npos);
    CHECK(text.find("\"avg_width\": 2") != std::string::npos);
}
