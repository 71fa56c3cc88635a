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

#include "optune/tuner.hpp"

using namespace optune;

namespace {

HardwareSpec make_hw(int sockets, int cores, int smt = 2) {
    HardwareSpec hw;
    hw.sockets = sockets;
    hw.cores_per_socket = cores;
    hw.smt_ways = smt;
    hw.fma_rate = 1024;
    hw.upi_bandwidth = 100;
    return hw;
}

WidthReport width_of(std::size_t avg) { return WidthReport{avg, 1, avg, avg}; }

}  // namespace

TEST_CASE("guideline reproduces the published example: width 3 on 2x24") {
    auto rec = recommend(width_of(3), make_hw(2, 24));
    CHECK(rec.config == ThreadConfig{3, 16, 16});
    CHECK(rec.basis == RecommendationBasis::guideline);
    CHECK(rec.rationale.find("avg_width 3") != std::string::npos);
}

TEST_CASE("guideline: width 1 on one socket keeps a single full-size pool") {
    CHECK(recommend(width_of(1), make_hw(1, 24)).config == ThreadConfig{1, 24, 24});
}

TEST_CASE("guideline: width 4 on 2x24 splits into 4x12") {
    CHECK(recommend(width_of(4), make_hw(2, 24)).config == ThreadConfig{4, 12, 12});
}

TEST_CASE("degenerate width clamps to one pool") {
    CHECK(recommend(WidthReport{0, 0, 0, 0}, make_hw(2, 24)).config == ThreadConfig{1, 48, 48});
}

TEST_CASE("very wide graphs never oversubscribe small machines") {
    auto rec = recommend(width_of(5), make_hw(1, 4));
    CHECK(rec.config.pools <= 4);
    CHECK(rec.config.pools * rec.config.intra_threads <= 4);
}

TEST_CASE("presets reproduce the published settings on 2x24 smt2") {
    auto hw = make_hw(2, 24);
    CHECK(preset(PresetKind::tensorflow, hw).config == ThreadConfig{2, 48, 48});
    CHECK(preset(PresetKind::intel, hw).config == ThreadConfig{2, 24, 24});
    CHECK(preset(PresetKind::framework_default, hw).config == ThreadConfig{96, 96, 96});
}

TEST_CASE("property: guideline never oversubscribes and stays within max width") {
    std::mt19937 rng(23);
    for (int iter = 0; iter < 500; ++iter) {
        std::size_t depth = 1 + rng() % 8;
        std::size_t max_w = 1 + rng() % 12;
        std::size_t count = depth * (1 + rng() % max_w);
        WidthReport w{count, depth, max_w * depth < count ? count / depth : max_w, 0};
        w.avg_width = count / depth;
        if (w.avg_width > w.max_width) w.max_width = w.avg_width;

        auto hw = make_hw(1 + static_cast<int>(rng() % 2), 1 + static_cast<int>(rng() % 32));
        auto rec = recommend(w, hw);
        CHECK(rec.config.pools >= 1);
        CHECK(rec.config.intra_threads >= 1);
        CHECK(rec.config.kernel_threads == rec.config.intra_threads);
        // no oversubscription, ever
        CHECK(rec.config.pools * rec.config.intra_threads <= hw.physical_cores());
        // pools never exceed the width that motivated them
        if (w.avg_width >= 1) {
            CHECK(rec.config.pools <= static_cast<int>(w.max_width));
        }
        // pure function of (avg_width, physical cores)
        auto again = recommend(w, hw);
        CHECK(again.config == rec.config);
    }
}

TEST_CASE("recommendation serializes config, basis and rationale") {
    auto text = serialize(recommend(width_of(3), make_hw(2, 24)));
    CHECK(text.find("\"pools\": 3") != std::string::npos);
    CHECK(text.find("\"basis\": \"guideline\"") != std::string::npos);
    CHECK(text.find("rationale") != std::string::npos);
}
