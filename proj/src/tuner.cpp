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

#include "optune/tuner.hpp"

#include <algorithm>

#include "json.hpp"

namespace optune {

std::string_view to_string(RecommendationBasis basis) {
    switch (basis) {
        case RecommendationBasis::guideline: return "guideline";
        case RecommendationBasis::preset_tensorflow: return "preset_tensorflow";
        case RecommendationBasis::preset_intel: return "preset_intel";
        case RecommendationBasis::preset_default: return "preset_default";
    }
    return "guideline";
}

Recommendation recommend(const WidthReport& width, const HardwareSpec& hw) {
    const int physical = hw.physical_cores();
    // avg_width 0 (no heavy ops) still needs one pool; widths beyond the core
    // count are clamped so a pool never ends up with less than one core.
    int pools = std::clamp(static_cast<int>(width.avg_width), 1, physical);
    int threads = std::max(1, physical / pools);

    Recommendation rec;
    rec.config = {pools, threads, threads};
    rec.basis = RecommendationBasis::guideline;
    rec.rationale = "avg_width " + std::to_string(width.avg_width) + " (heavy_count " +
                    std::to_string(width.heavy_count) + ", heavy_depth " +
                    std::to_string(width.heavy_depth) + ", max_width " +
                    std::to_string(width.max_width) + "); " + std::to_string(physical) +
                    " physical cores split into " + std::to_string(pools) + " pool(s) of " +
                    std::to_string(threads) +
                    " kernel + " + std::to_string(threads) + " intra-op threads";
    return rec;
}

Recommendation preset(PresetKind kind, const HardwareSpec& hw) {
    Recommendation rec;
    switch (kind) {
        case PresetKind::tensorflow:
            rec.config = {hw.sockets, hw.physical_cores(), hw.physical_cores()};
            rec.basis = RecommendationBasis::preset_tensorflow;
            rec.rationale = "vendor guide: pools = socket count, threads = total physical cores";
            break;
        case PresetKind::intel:
            rec.config = {hw.sockets, hw.cores_per_socket, hw.cores_per_socket};
            rec.basis = RecommendationBasis::preset_intel;
            rec.rationale = "vendor guide: pools = socket count, threads = physical cores per socket";
            break;
        case PresetKind::framework_default:
            rec.config = {hw.logical_cores(), hw.logical_cores(), hw.logical_cores()};
            rec.basis = RecommendationBasis::preset_default;
            rec.rationale = "framework default: every knob set to the logical core count";
            break;
    }
    return rec;
}

std::string serialize(const Recommendation& rec) {
    nlohmann::ordered_json doc;
    doc["config"] = {{"pools", rec.config.pools},
                     {"intra_threads", rec.config.intra_threads},
                     {"kernel_threads", rec.config.kernel_threads}};
    doc["basis"] = std::string(to_string(rec.basis));
    doc["rationale"] = rec.rationale;
    return doc.dump(2) + "\n";
}

}  // namespace optune
