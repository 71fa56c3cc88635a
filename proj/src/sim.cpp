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

#include "optune/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <ostream>
#include <queue>

namespace optune {

namespace {

// Duration formula shared by op_time, the event loop and the critical-path
// bound. `units` is the number of physical cores actually feeding FMA work.
double dispatch_time(const Node& n, int intra, int kernel, int units, double fma_rate,
                     double sigma, bool colocated) {
    double compute = n.flops / (fma_rate * units);
    double prep = n.parallel_prep / intra;
    double t = n.serial_prep + sigma * (intra + kernel - 1) + compute;
    if (colocated) {
        t += std::max(0.0, prep - compute);  // prep hides under kernel compute
    } else {
        t += prep;
    }
    return t;
}

// Physical cores one pool occupies: kernel and intra threads are paired onto
// cores as SMT siblings, waterfalling when smt_ways > 2.
int pool_core_span(const ThreadConfig& cfg, const HardwareSpec& hw) {
    int threads = cfg.intra_threads + cfg.kernel_threads;
    return (threads + hw.smt_ways - 1) / hw.smt_ways;
}

struct PoolLayout {
    int first_core = 0;  // physical core index
    int span = 1;        // physical cores occupied
    int socket = 0;
    int fma_units = 1;   // min(kernel threads, span)
};

std::vector<PoolLayout> layout_pools(int pools, const ThreadConfig& cfg, const HardwareSpec& hw,
                                     Placement placement) {
    const int span = pool_core_span(cfg, hw);
    std::vector<PoolLayout> out(pools);
    if (placement == Placement::model_parallel && hw.sockets > 1) {
        // Round-robin pinning: pool p lives on socket p % sockets.
        std::vector<int> per_socket(hw.sockets, 0);
        for (int p = 0; p < pools; ++p) {
            int socket = p % hw.sockets;
            int slot = per_socket[socket]++;
            if ((slot + 1) * span > hw.cores_per_socket) {
                throw SimError("oversubscribed: " + std::to_string(pools) + " pools of " +
                               std::to_string(cfg.intra_threads) + "+" +
                               std::to_string(cfg.kernel_threads) +
                               " threads do not fit the per-socket core budget under "
                               "model-parallel pinning");
            }
            out[p] = {socket * hw.cores_per_socket + slot * span, span, socket,
                      std::min(cfg.kernel_threads, span)};
        }
    } else {
        if (pools * span > hw.physical_cores()) {
            throw SimError(
                "oversubscribed: " + std::to_string(pools) + " pools x (" +
                std::to_string(cfg.intra_threads) + " intra + " +
                std::to_string(cfg.kernel_threads) + " kernel) threads need " +
                std::to_string(pools * span) + " physical cores, hardware has " +
                std::to_string(hw.physical_cores()) + " (" + std::to_string(hw.logical_cores()) +
                " logical)");
        }
        for (int p = 0; p < pools; ++p) {
            int first = p * span;
            out[p] = {first, span, first / hw.cores_per_socket, std::min(cfg.kernel_threads, span)};
        }
    }
    return out;
}

SimResult run_events(const Graph& g, const ThreadConfig& cfg, const HardwareSpec& hw,
                     ScheduleMode mode, Placement placement) {
    if (cfg.pools < 1 || cfg.intra_threads < 1 || cfg.kernel_threads < 1) {
        throw SimError("thread configuration fields must all be >= 1");
    }
    const int pools = mode == ScheduleMode::synchronous ? 1 : cfg.pools;
    const auto layouts = layout_pools(pools, cfg, hw, placement);
    const bool colocated = hw.smt_ways >= 2;
    const bool cross_socket_transfers = placement == Placement::model_parallel && hw.sockets > 1;
    const double node_transfer =
        placement == Placement::data_parallel && hw.sockets > 1 ? 1.0 : 0.0;

    const auto& nodes = g.nodes();
    const std::size_t n = nodes.size();

    std::vector<int> pending(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        pending[i] = static_cast<int>(g.predecessors()[i].size());
    }

    // Node indices are id-sorted, so ordering a ready batch by index is the
    // lexicographic tie-break.
    std::deque<std::uint32_t> ready;
    for (std::size_t i = 0; i < n; ++i) {
        if (pending[i] == 0) ready.push_back(static_cast<std::uint32_t>(i));
    }

    struct Completion {
        double time;
        int pool;
        std::uint32_t node;
        bool operator>(const Completion& o) const {
            return std::tie(time, pool) > std::tie(o.time, o.pool);
        }
    };
    std::priority_queue<Completion, std::vector<Completion>, std::greater<>> running;

    std::vector<bool> pool_idle(pools, true);
    std::vector<double> finish(n, 0.0);
    std::vector<int> node_socket(n, 0);
    std::vector<TraceEvent> trace;
    trace.reserve(n);

    double now = 0.0;
    std::size_t completed = 0;
    while (true) {
        // Dispatch phase at the current instant.
        for (int p = 0; p < pools && !ready.empty(); ++p) {
            if (!pool_idle[p]) continue;
            std::uint32_t i = ready.front();
            ready.pop_front();
            const Node& node = nodes[i];

            double start = now;
            if (cross_socket_transfers) {
                for (std::uint32_t pr : g.predecessors()[i]) {
                    if (node_socket[pr] != layouts[p].socket) {
                        start = std::max(start,
                                         finish[pr] + nodes[pr].bytes / hw.upi_bandwidth);
                    }
                }
            }
            double duration = dispatch_time(node, cfg.intra_threads, cfg.kernel_threads,
                                            layouts[p].fma_units, hw.fma_rate,
                                            hw.dispatch_overhead, colocated);
            duration += node_transfer * node.bytes / hw.upi_bandwidth;

            pool_idle[p] = false;
            node_socket[i] = layouts[p].socket;
            finish[i] = start + duration;
            trace.push_back({node.id, p, layouts[p].socket, start, start + duration});
            running.push({start + duration, p, i});
        }
        if (running.empty()) break;

        // Advance to the next completion instant and retire everything there.
        now = running.top().time;
        std::vector<std::uint32_t> newly_ready;
        while (!running.empty() && running.top().time == now) {
            auto done = running.top();
            running.pop();
            pool_idle[done.pool] = true;
            ++completed;
            for (std::uint32_t consumer : g.successors()[done.node]) {
                if (--pending[consumer] == 0) newly_ready.push_back(consumer);
            }
        }
        std::sort(newly_ready.begin(), newly_ready.end());
        for (auto i : newly_ready) ready.push_back(i);
    }

    if (completed != n) {
        throw SimError("internal scheduling error: not all nodes executed");
    }

    SimResult result;
    for (double f : finish) result.makespan = std::max(result.makespan, f);
    std::sort(trace.begin(), trace.end(), [](const TraceEvent& a, const TraceEvent& b) {
        return std::tie(a.start, a.end, a.pool_id, a.node_id) <
               std::tie(b.start, b.end, b.pool_id, b.node_id);
    });
    result.trace = std::move(trace);

    // Per-core accounting. During an op of duration D the pool's lead core is
    // busy for all of D (serial prep, dispatch, gather); every other core is
    // busy for its thread shares and stalled on the op barrier for the rest.
    result.per_core.assign(hw.physical_cores(), CoreUsage{});
    for (const auto& ev : result.trace) {
        const auto& lay = layouts[ev.pool_id];
        const Node& node = nodes[g.index_of(ev.node_id)];
        const double d = ev.end - ev.start;
        const double t_kernel = node.flops / (hw.fma_rate * lay.fma_units);
        const double t_intra = node.parallel_prep / cfg.intra_threads;
        for (int c = 0; c < lay.span; ++c) {
            double busy;
            if (c == 0) {
                busy = d;
            } else {
                const bool hosts_kernel = c < std::min(cfg.kernel_threads, lay.span);
                const bool hosts_intra = c < std::min(cfg.intra_threads, lay.span);
                double share_k = hosts_kernel ? t_kernel : 0.0;
                double share_i = hosts_intra ? t_intra : 0.0;
                busy = std::min(d, colocated ? std::max(share_k, share_i) : share_k + share_i);
            }
            auto& usage = result.per_core[lay.first_core + c];
            usage.busy += busy;
            usage.sync += d - busy;
        }
    }
    for (auto& usage : result.per_core) {
        // idle is the closure residual, nudged by ulps where final rounding
        // would leak, so busy + sync + idle reproduces the makespan exactly.
        const double active = usage.busy + usage.sync;
        double idle = result.makespan - active;
        for (int step = 0; step < 8 && active + idle != result.makespan; ++step) {
            idle = std::nextafter(idle, active + idle < result.makespan
                                            ? std::numeric_limits<double>::infinity()
                                            : -std::numeric_limits<double>::infinity());
        }
        usage.idle = idle;
    }
    return result;
}

}  // namespace

double op_time(const Node& n, int intra, int kernel, const HardwareSpec& hw, bool smt_colocated) {
    if (intra < 1 || kernel < 1) {
        throw SimError("op_time requires intra and kernel thread counts >= 1");
    }
    int units = std::min(kernel, hw.physical_cores());
    return dispatch_time(n, intra, kernel, units, hw.fma_rate, hw.dispatch_overhead,
                         smt_colocated);
}

SimResult simulate(const Graph& g, const ThreadConfig& cfg, const HardwareSpec& hw,
                   SchedulePolicy policy) {
    return run_events(g, cfg, hw, policy.mode, policy.placement);
}

double critical_path_bound(const Graph& g, const HardwareSpec& hw) {
    const int physical = hw.physical_cores();
    const auto& nodes = g.nodes();

    // Cheapest feasible dispatch per node: minimized over every thread
    // assignment, colocated, so no simulated configuration can beat it.
    std::vector<double> cost(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int intra = 1; intra <= physical; ++intra) {
            for (int kernel = 1; kernel <= physical; ++kernel) {
                best = std::min(best, dispatch_time(nodes[i], intra, kernel, kernel, hw.fma_rate,
                                                    hw.dispatch_overhead, true));
            }
        }
        cost[i] = best;
    }

    std::vector<double> longest(nodes.size(), 0.0);
    double bound = 0.0;
    for (const auto& id : topological_order(g)) {
        std::size_t i = g.index_of(id);
        double from = 0.0;
        for (std::uint32_t p : g.predecessors()[i]) {
            from = std::max(from, longest[p]);
        }
        longest[i] = from + cost[i];
        bound = std::max(bound, longest[i]);
    }
    return bound;
}

SweepResult sweep(const Graph& g, const HardwareSpec& hw, int max_pools) {
    if (max_pools < 1) throw SimError("sweep requires max_pools >= 1");
    SweepResult result;
    const int physical = hw.physical_cores();
    for (int pools = 1; pools <= max_pools; ++pools) {
        for (int threads = 1; threads <= physical; ++threads) {
            ThreadConfig cfg{pools, threads, threads};
            if (pools * pool_core_span(cfg, hw) > physical) continue;
            auto sim = run_events(g, cfg, hw, ScheduleMode::asynchronous,
                                  Placement::single_socket);
            result.entries.push_back({cfg, sim.makespan});
        }
    }
    if (result.entries.empty()) {
        throw SimError("sweep found no feasible configuration");
    }
    std::sort(result.entries.begin(), result.entries.end(),
              [](const SweepEntry& a, const SweepEntry& b) {
                  return std::tie(a.makespan, a.config.pools, a.config.intra_threads) <
                         std::tie(b.makespan, b.config.pools, b.config.intra_threads);
              });
    return result;
}

SimResult simulate_multisocket(const Graph& g, const ThreadConfig& cfg, const HardwareSpec& hw,
                               Placement placement) {
    return run_events(g, cfg, hw, ScheduleMode::asynchronous, placement);
}

void write_trace_csv(std::ostream& out, const SimResult& result) {
    out << "node_id,pool_id,socket_id,start,end\n";
    char buf[64];
    for (const auto& ev : result.trace) {
        out << ev.node_id << ',' << ev.pool_id << ',' << ev.socket_id;
        std::snprintf(buf, sizeof(buf), ",%.10g,%.10g\n", ev.start, ev.end);
        out << buf;
    }
}

void write_core_csv(std::ostream& out, const SimResult& result) {
    out << "core_id,busy,sync,idle\n";
    char buf[96];
    for (std::size_t c = 0; c < result.per_core.size(); ++c) {
        const auto& u = result.per_core[c];
        std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g,%.10g\n", c, u.busy, u.sync, u.idle);
        out << buf;
    }
}

}  // namespace optune
