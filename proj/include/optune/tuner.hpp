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

#ifndef OPTUNE_TUNER_HPP
#define OPTUNE_TUNER_HPP

#include <string>

#include "optune/graph.hpp"
#include "optune/width.hpp"

namespace optune {

enum class RecommendationBasis {
    guideline,
    preset_tensorflow,
    preset_intel,
    preset_default,
};

std::string_view to_string(RecommendationBasis basis);

struct Recommendation {
    ThreadConfig config;
    RecommendationBasis basis = RecommendationBasis::guideline;
    std::string rationale;
};

/// Width-guided configuration: pools = avg_width (clamped to [1, physical
/// cores]), and intra = kernel = floor(physical cores / pools) so one kernel
/// thread and one intra-op thread share each physical core. Never
/// oversubscribes: pools * intra_threads <= physical cores.
Recommendation recommend(const WidthReport& width, const HardwareSpec& hw);

enum class PresetKind {
    tensorflow,  // pools = sockets, threads = total physical cores
    intel,       // pools = sockets, threads = physical cores per socket
    framework_default,  // everything = logical core count
};

Recommendation preset(PresetKind kind, const HardwareSpec& hw);

std::string serialize(const Recommendation& rec);

}  // namespace optune

#endif  // OPTUNE_TUNER_HPP
