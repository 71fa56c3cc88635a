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

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "optune/graph.hpp"
#include "optune/kernels.hpp"
#include "optune/matmul.hpp"
#include "optune/pool.hpp"
#include "optune/sim.hpp"
#include "optune/tuner.hpp"
#include "optune/width.hpp"

namespace {

using optune::Graph;
using optune::HardwareSpec;
using optune::SimResult;
using optune::ThreadConfig;
using ordered_json = nlohmann::ordered_json;

constexpr const char* kVersion = OPTUNE_VERSION;

std::string fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016" PRIx64, h);
    return buf;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw optune::ParseError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write file: " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

struct LoadedGraph {
    Graph graph;
    std::string path;
    std::string digest;
};

struct LoadedHardware {
    HardwareSpec hw;
    std::string path;
    std::string digest;
};

LoadedGraph load_graph_input(const std::string& path) {
    std::string bytes = slurp(path);
    return {optune::parse_graph(bytes), path, fnv1a_digest(bytes)};
}

LoadedHardware load_hw_input(const std::string& path) {
    std::string bytes = slurp(path);
    return {optune::parse_hardware(bytes), path, fnv1a_digest(bytes)};
}

ordered_json report_envelope(const std::string& command) {
    ordered_json doc;
    doc["tool_version"] = kVersion;
    doc["command"] = command;
    doc["inputs"] = ordered_json::object();
    return doc;
}

void add_input(ordered_json& doc, const std::string& role, const std::string& path,
               const std::string& digest) {
    doc["inputs"][role] = {{"path", path}, {"digest", digest}};
}

ordered_json config_json(const ThreadConfig& cfg) {
    return {{"pools", cfg.pools},
            {"intra_threads", cfg.intra_threads},
            {"kernel_threads", cfg.kernel_threads}};
}

void emit(const ordered_json& doc, const std::string& format) {
    if (format == "json") {
        std::cout << doc.dump(2) << "\n";
    }
}

int run_analyze(const std::string& graph_path, const std::string& format) {
    auto in = load_graph_input(graph_path);
    auto report = optune::width_report(in.graph);

    if (format == "json") {
        auto doc = report_envelope("analyze");
        add_input(doc, "graph", in.path, in.digest);
        doc["results"] = {{"graph", in.graph.name()},
                          {"nodes", in.graph.node_count()},
                          {"edges", in.graph.edges().size()},
                          {"heavy_count", report.heavy_count},
                          {"heavy_depth", report.heavy_depth},
                          {"max_width", report.max_width},
                          {"avg_width", report.avg_width}};
        emit(doc, format);
    } else {
        std::printf("optune %s — analyze\n", kVersion);
        std::printf("graph: %s (%zu nodes, %zu edges)  [%s]\n", in.graph.name().c_str(),
                    in.graph.node_count(), in.graph.edges().size(), in.digest.c_str());
        std::printf("heavy_count: %zu\n", report.heavy_count);
        std::printf("heavy_depth: %zu\n", report.heavy_depth);
        std::printf("max_width:   %zu\n", report.max_width);
        std::printf("avg_width:   %zu\n", report.avg_width);
    }
    return 0;
}

int run_recommend(const std::string& graph_path, const std::string& hw_path,
                  const std::string& preset_name, const std::string& format) {
    auto gin = load_graph_input(graph_path);
    auto hin = load_hw_input(hw_path);

    optune::Recommendation rec;
    if (preset_name.empty()) {
        rec = optune::recommend(optune::width_report(gin.graph), hin.hw);
    } else if (preset_name == "tf" || preset_name == "tensorflow") {
        rec = optune::preset(optune::PresetKind::tensorflow, hin.hw);
    } else if (preset_name == "intel") {
        rec = optune::preset(optune::PresetKind::intel, hin.hw);
    } else if (preset_name == "default") {
        rec = optune::preset(optune::PresetKind::framework_default, hin.hw);
    } else {
        throw optune::ParseError("unknown preset \"" + preset_name + "\" (tf|intel|default)");
    }

    if (format == "json") {
        auto doc = report_envelope("recommend");
        add_input(doc, "graph", gin.path, gin.digest);
        add_input(doc, "hardware", hin.path, hin.digest);
        doc["results"] = {{"config", config_json(rec.config)},
                          {"basis", std::string(optune::to_string(rec.basis))},
                          {"rationale", rec.rationale}};
        emit(doc, format);
    } else {
        std::printf("optune %s — recommend (%s)\n", kVersion, optune::to_string(rec.basis).data());
        std::printf("graph: %s, hardware: %dx%d cores (smt %d)\n", gin.graph.name().c_str(),
                    hin.hw.sockets, hin.hw.cores_per_socket, hin.hw.smt_ways);
        std::printf("pools:          %d\n", rec.config.pools);
        std::printf("intra_threads:  %d\n", rec.config.intra_threads);
        std::printf("kernel_threads: %d\n", rec.config.kernel_threads);
        std::printf("rationale: %s\n", rec.rationale.c_str());
    }
    return 0;
}

optune::SchedulePolicy make_policy(const std::string& mode, const std::string& placement) {
    optune::SchedulePolicy policy;
    if (mode == "sync") {
        policy.mode = optune::ScheduleMode::synchronous;
    } else if (mode == "async") {
        policy.mode = optune::ScheduleMode::asynchronous;
    } else {
        throw optune::ParseError("unknown mode \"" + mode + "\" (sync|async)");
    }
    if (placement == "single") {
        policy.placement = optune::Placement::single_socket;
    } else if (placement == "data") {
        policy.placement = optune::Placement::data_parallel;
    } else if (placement == "model") {
        policy.placement = optune::Placement::model_parallel;
    } else {
        throw optune::ParseError("unknown placement \"" + placement + "\" (single|data|model)");
    }
    return policy;
}

int run_simulate(const std::string& graph_path, const std::string& hw_path, int pools,
                 int threads, const std::string& mode, const std::string& placement,
                 const std::string& trace_path, const std::string& format) {
    auto gin = load_graph_input(graph_path);
    auto hin = load_hw_input(hw_path);

    ThreadConfig cfg;
    if (pools > 0 || threads > 0) {
        if (pools <= 0 || threads <= 0) {
            throw optune::ParseError("--pools and --threads must be given together");
        }
        cfg = {pools, threads, threads};
    } else {
        cfg = optune::recommend(optune::width_report(gin.graph), hin.hw).config;
    }

    auto policy = make_policy(mode, placement);
    SimResult result = optune::simulate(gin.graph, cfg, hin.hw, policy);

    double busy = 0.0, sync = 0.0, idle = 0.0;
    for (const auto& u : result.per_core) {
        busy += u.busy;
        sync += u.sync;
        idle += u.idle;
    }

    if (!trace_path.empty()) {
        std::ostringstream ss;
        optune::write_trace_csv(ss, result);
        write_file_atomic(trace_path, ss.str());
    }

    if (format == "json") {
        auto doc = report_envelope("simulate");
        add_input(doc, "graph", gin.path, gin.digest);
        add_input(doc, "hardware", hin.path, hin.digest);
        doc["results"] = {{"config", config_json(cfg)},
                          {"mode", mode},
                          {"placement", placement},
                          {"makespan", result.makespan},
                          {"core_time", {{"busy", busy}, {"sync", sync}, {"idle", idle}}},
                          {"events", result.trace.size()}};
        emit(doc, format);
    } else {
        std::printf("optune %s — simulate (%s, %s)\n", kVersion, mode.c_str(), placement.c_str());
        std::printf("graph: %s, config: %d pools x (%d intra + %d kernel)\n",
                    gin.graph.name().c_str(), cfg.pools, cfg.intra_threads, cfg.kernel_threads);
        std::printf("makespan: %.10g\n", result.makespan);
        double total = busy + sync + idle;
        if (total > 0) {
            std::printf("core time: %.1f%% busy, %.1f%% sync, %.1f%% idle\n", 100.0 * busy / total,
                        100.0 * sync / total, 100.0 * idle / total);
        }
        if (!trace_path.empty()) {
            std::printf("trace written to %s\n", trace_path.c_str());
        }
    }
    return 0;
}

int run_sweep(const std::string& graph_path, const std::string& hw_path, int max_pools,
              bool compare_presets, const std::string& format) {
    auto gin = load_graph_input(graph_path);
    auto hin = load_hw_input(hw_path);
    if (max_pools <= 0) max_pools = hin.hw.physical_cores();

    auto swept = optune::sweep(gin.graph, hin.hw, max_pools);
    const auto& best = swept.best();

    struct PresetRow {
        std::string label;
        ThreadConfig config;
        bool feasible = true;
        double makespan = 0.0;
    };
    std::vector<PresetRow> preset_rows;
    if (compare_presets) {
        auto width = optune::width_report(gin.graph);
        std::vector<std::pair<std::string, ThreadConfig>> candidates = {
            {"guideline", optune::recommend(width, hin.hw).config},
            {"tensorflow", optune::preset(optune::PresetKind::tensorflow, hin.hw).config},
            {"intel", optune::preset(optune::PresetKind::intel, hin.hw).config},
            {"default", optune::preset(optune::PresetKind::framework_default, hin.hw).config},
        };
        for (auto& [label, cfg] : candidates) {
            PresetRow row{label, cfg, true, 0.0};
            try {
                row.makespan = optune::simulate(gin.graph, cfg, hin.hw).makespan;
            } catch (const optune::SimError&) {
                row.feasible = false;
            }
            preset_rows.push_back(row);
        }
        preset_rows.push_back({"argmin", best.config, true, best.makespan});
    }

    if (format == "json") {
        auto doc = report_envelope("sweep");
        add_input(doc, "graph", gin.path, gin.digest);
        add_input(doc, "hardware", hin.path, hin.digest);
        ordered_json entries = ordered_json::array();
        for (const auto& e : swept.entries) {
            entries.push_back({{"pools", e.config.pools},
                               {"threads", e.config.intra_threads},
                               {"makespan", e.makespan}});
        }
        doc["results"] = {{"argmin", config_json(best.config)},
                          {"argmin_makespan", best.makespan},
                          {"configs", entries}};
        if (compare_presets) {
            ordered_json rows = ordered_json::array();
            for (const auto& row : preset_rows) {
                ordered_json jr = {{"label", row.label}, {"config", config_json(row.config)}};
                if (row.feasible) {
                    jr["makespan"] = row.makespan;
                } else {
                    jr["status"] = "oversubscribed";
                }
                rows.push_back(jr);
            }
            doc["results"]["presets"] = rows;
        }
        emit(doc, format);
    } else if (format == "csv") {
        std::printf("pools,threads,makespan\n");
        for (const auto& e : swept.entries) {
            std::printf("%d,%d,%.10g\n", e.config.pools, e.config.intra_threads, e.makespan);
        }
    } else {
        std::printf("optune %s — sweep (%zu configurations)\n", kVersion, swept.entries.size());
        std::printf("graph: %s  [%s]\n", gin.graph.name().c_str(), gin.digest.c_str());
        std::printf("%-8s %-8s %s\n", "pools", "threads", "makespan");
        std::size_t shown = std::min<std::size_t>(swept.entries.size(), 10);
        for (std::size_t i = 0; i < shown; ++i) {
            const auto& e = swept.entries[i];
            std::printf("%-8d %-8d %.10g\n", e.config.pools, e.config.intra_threads, e.makespan);
        }
        if (shown < swept.entries.size()) {
            std::printf("... (%zu more, use --format csv for all)\n",
                        swept.entries.size() - shown);
        }
        std::printf("argmin: %d pools x %d threads, makespan %.10g\n", best.config.pools,
                    best.config.intra_threads, best.makespan);
        if (compare_presets) {
            std::printf("\n%-12s %-20s %s\n", "setting", "config", "makespan");
            for (const auto& row : preset_rows) {
                char cfgbuf[48];
                std::snprintf(cfgbuf, sizeof(cfgbuf), "%dp x %di/%dk", row.config.pools,
                              row.config.intra_threads, row.config.kernel_threads);
                if (row.feasible) {
                    std::printf("%-12s %-20s %.10g\n", row.label.c_str(), cfgbuf, row.makespan);
                } else {
                    std::printf("%-12s %-20s %s\n", row.label.c_str(), cfgbuf, "oversubscribed");
                }
            }
        }
    }
    return 0;
}

int run_bench_threadpool(std::size_t tasks, bool pin, const std::string& format) {
    const std::size_t cores = std::max(1u, std::thread::hardware_concurrency());
    struct Scenario {
        std::string label;
        std::size_t size;
    };
    std::vector<Scenario> scenarios = {{"serial", 1}, {"matched", cores}, {"16x", 16 * cores}};

    std::vector<optune::BenchResult> pooled;
    for (const auto& s : scenarios) {
        pooled.push_back(optune::microbench(s.size, tasks, pin));
    }
    auto naive = optune::microbench_thread_per_task(cores, tasks);

    if (format == "json") {
        auto doc = report_envelope("bench threadpool");
        doc["measured"] = true;
        ordered_json rows = ordered_json::array();
        for (std::size_t i = 0; i < scenarios.size(); ++i) {
            rows.push_back({{"scenario", scenarios[i].label},
                            {"pool_size", pooled[i].pool_size},
                            {"tasks", pooled[i].tasks},
                            {"total_latency_us", pooled[i].total_latency_us},
                            {"final_counter", pooled[i].final_counter}});
        }
        rows.push_back({{"scenario", "thread_per_task"},
                        {"pool_size", naive.pool_size},
                        {"tasks", naive.tasks},
                        {"total_latency_us", naive.total_latency_us},
                        {"final_counter", naive.final_counter}});
        doc["results"] = {{"rows", rows}};
        emit(doc, format);
    } else {
        std::printf("optune %s — bench threadpool (%zu tasks, measured)\n", kVersion, tasks);
        for (std::size_t i = 0; i < scenarios.size(); ++i) {
            std::printf("%-16s pool=%-5zu latency=%8" PRIu64 "us counter=%" PRIu64 "\n",
                        scenarios[i].label.c_str(), pooled[i].pool_size,
                        pooled[i].total_latency_us, pooled[i].final_counter);
        }
        std::printf("%-16s threads=%-2zu latency=%8" PRIu64 "us counter=%" PRIu64 "\n",
                    "thread_per_task", naive.pool_size, naive.total_latency_us,
                    naive.final_counter);
    }
    return 0;
}

int run_bench_matmul(std::vector<std::size_t> sizes, int threads, int trials, int prep_passes,
                     std::uint64_t seed, const std::string& format) {
    if (sizes.empty()) sizes = {256, 512};
    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    optune::MatmulOptions opts;
    opts.prep_passes = prep_passes;

    auto rows = optune::scaling_bench(sizes, threads, trials, opts, seed);

    // design 2 at the largest size, same thread budget via the intra-op pool.
    const std::size_t big = sizes.back();
    optune::Matrix x = optune::Matrix::random(big, big, seed ^ big);
    optune::Matrix w = optune::Matrix::random(big, big, (seed ^ big) + 1);
    optune::ThreadPool pool(static_cast<std::size_t>(threads));
    auto t0 = std::chrono::steady_clock::now();
    auto out = optune::matmul_design2(x, w, pool, opts);
    auto t1 = std::chrono::steady_clock::now();
    double design2_us = std::chrono::duration<double, std::micro>(t1 - t0).count();
    (void)out;

    if (format == "csv") {
        std::printf("size,threads,design,latency_us,speedup\n");
        for (const auto& r : rows) {
            std::printf("%zu,1,design1,%.1f,1.0\n", r.size, r.latency_1_us);
            std::printf("%zu,%d,design1,%.1f,%.3f\n", r.size, threads, r.latency_n_us, r.speedup);
        }
        std::printf("%zu,%d,design2,%.1f,%.3f\n", big, threads, design2_us,
                    rows.back().latency_1_us / design2_us);
    } else if (format == "json") {
        auto doc = report_envelope("bench matmul");
        doc["measured"] = true;
        ordered_json jrows = ordered_json::array();
        for (const auto& r : rows) {
            jrows.push_back({{"size", r.size},
                             {"threads", threads},
                             {"design", "design1"},
                             {"latency_1_us", r.latency_1_us},
                             {"latency_n_us", r.latency_n_us},
                             {"speedup", r.speedup}});
        }
        jrows.push_back({{"size", big},
                         {"threads", threads},
                         {"design", "design2"},
                         {"latency_n_us", design2_us},
                         {"speedup", rows.back().latency_1_us / design2_us}});
        doc["results"] = {{"kernel", std::string(optune::kernels::to_string(
                              optune::kernels::active_kernel()))},
                          {"rows", jrows}};
        emit(doc, format);
    } else {
        std::printf("optune %s — bench matmul (kernel %s, %d threads, measured)\n", kVersion,
                    optune::kernels::to_string(optune::kernels::active_kernel()).data(), threads);
        std::printf("%-8s %-12s %-12s %s\n", "size", "1-thread us", "n-thread us", "speedup");
        for (const auto& r : rows) {
            std::printf("%-8zu %-12.1f %-12.1f %.3f\n", r.size, r.latency_1_us, r.latency_n_us,
                        r.speedup);
        }
        std::printf("design2 @ %zu: %.1f us (%.3fx over design1 single-thread)\n", big,
                    design2_us, rows.back().latency_1_us / design2_us);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parallelism auto-tuner and scheduling simulator for operator graphs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    std::string format = "text";

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Width metrics of a graph file");
    std::string an_graph;
    analyze->add_option("graph", an_graph, "graph file")->required();
    analyze->add_option("--format", format, "text|json");

    // recommend
    auto* recommend = app.add_subcommand("recommend", "Thread configuration for a graph");
    std::string rc_graph, rc_hw, rc_preset;
    recommend->add_option("graph", rc_graph, "graph file")->required();
    recommend->add_option("--hw", rc_hw, "hardware file")->required();
    recommend->add_option("--preset", rc_preset, "tf|intel|default (skip the guideline)");
    recommend->add_option("--format", format, "text|json");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Discrete-event execution of a graph");
    std::string sm_graph, sm_hw, sm_mode = "async", sm_placement = "single", sm_trace;
    int sm_pools = 0, sm_threads = 0;
    simulate->add_option("graph", sm_graph, "graph file")->required();
    simulate->add_option("--hw", sm_hw, "hardware file")->required();
    simulate->add_option("--pools", sm_pools, "inter-op pools");
    simulate->add_option("--threads", sm_threads, "intra = kernel threads per pool");
    simulate->add_option("--mode", sm_mode, "sync|async (default async)");
    simulate->add_option("--placement", sm_placement, "single|data|model (default single)");
    simulate->add_option("--trace", sm_trace, "write trace CSV to this path");
    simulate->add_option("--format", format, "text|json");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Exhaustive configuration search");
    std::string sw_graph, sw_hw;
    int sw_max_pools = 0;
    bool sw_compare = false;
    sweep->add_option("graph", sw_graph, "graph file")->required();
    sweep->add_option("--hw", sw_hw, "hardware file")->required();
    sweep->add_option("--max-pools", sw_max_pools, "pool count ceiling (default: physical cores)");
    sweep->add_flag("--compare-presets", sw_compare,
                    "include guideline/tensorflow/intel/default/argmin rows");
    sweep->add_option("--format", format, "text|json|csv");

    // bench
    auto* bench = app.add_subcommand("bench", "Executable micro-benchmarks");
    bench->require_subcommand(1);
    auto* bench_pool = bench->add_subcommand("threadpool", "Shared-counter contention benchmark");
    std::size_t bp_tasks = 10000;
    bool bp_pin = false;
    bench_pool->add_option("--tasks", bp_tasks, "tasks to run (default 10000)");
    bench_pool->add_flag("--pin", bp_pin, "pin workers round-robin to cores");
    bench_pool->add_option("--format", format, "text|json");

    auto* bench_mm = bench->add_subcommand("matmul", "Operator design scaling benchmark");
    std::vector<std::size_t> bm_sizes;
    int bm_threads = 0, bm_trials = 3, bm_prep = 4;
    std::uint64_t bm_seed = 1;
    bench_mm->add_option("--sizes", bm_sizes, "square sizes (default 256 512)");
    bench_mm->add_option("--threads", bm_threads, "kernel threads (default: hardware)");
    bench_mm->add_option("--trials", bm_trials, "timing trials per point (default 3)");
    bench_mm->add_option("--prep-passes", bm_prep, "data-preparation passes (default 4)");
    bench_mm->add_option("--seed", bm_seed, "seed for random matrices");
    bench_mm->add_option("--format", format, "text|json|csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*analyze) return run_analyze(an_graph, format);
        if (*recommend) return run_recommend(rc_graph, rc_hw, rc_preset, format);
        if (*simulate) {
            return run_simulate(sm_graph, sm_hw, sm_pools, sm_threads, sm_mode, sm_placement,
                                sm_trace, format);
        }
        if (*sweep) return run_sweep(sw_graph, sw_hw, sw_max_pools, sw_compare, format);
        if (*bench_pool) return run_bench_threadpool(bp_tasks, bp_pin, format);
        if (*bench_mm) {
            return run_bench_matmul(bm_sizes, bm_threads, bm_trials, bm_prep, bm_seed, format);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
