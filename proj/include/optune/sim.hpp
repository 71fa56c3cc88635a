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

#ifndef OPTUNE_SIM_HPP
#define OPTUNE_SIM_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "optune/graph.hpp"

namespace optune {

/// Raised for configurations the simulator refuses to model, most notably
/// over-threading (more software threads than logical cores).
class SimError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ScheduleMode {
    synchronous,   // one operator at a time on a single pool
    asynchronous,  // every ready operator dispatched to an idle pool
};

enum class Placement {
    single_socket,
    data_parallel,   // every node's work spans all sockets; transfers serialize into node time
    model_parallel,  // pools pinned round-robin to sockets; cross-socket edges pay transfer
};

struct SchedulePolicy {
    ScheduleMode mode = ScheduleMode::asynchronous;
    Placement placement = Placement::single_socket;
};

struct TraceEvent {
    std::string node_id;
    int pool_id = 0;
    int socket_id = 0;
    double start = 0.0;
    double end = 0.0;
};

/// Wall-time split for one physical core over the whole run. The three parts
/// sum to the makespan exactly: busy while a hosted thread executes, sync
/// while the core's pool runs an op the core is stalled on, idle while the
/// pool has no work (or the core belongs to no pool).
struct CoreUsage {
    double busy = 0.0;
    double sync = 0.0;
    double idle = 0.0;
};

struct SimResult {
    double makespan = 0.0;
    std::vector<CoreUsage> per_core;  // one entry per physical core
    std::vector<TraceEvent> trace;    // ordered by start time
};

/// Modeled duration of one operator dispatch:
///   serial_prep + parallel_prep/intra + flops/(fma_rate * units)
///   + dispatch_overhead * (intra + kernel - 1)
/// where units = min(kernel, physical cores) because SMT siblings share one
/// set of FMA units. With smt_colocated the parallel prep overlaps the
/// kernel compute (only the excess max(0, prep - compute) remains visible).
double op_time(const Node& n, int intra, int kernel, const HardwareSpec& hw, bool smt_colocated);

/// Deterministic discrete-event execution of `g` under `cfg`. Ready nodes
/// dispatch FIFO (ties by node id) to the lowest-numbered idle pool.
SimResult simulate(const Graph& g, const ThreadConfig& cfg, const HardwareSpec& hw,
                   SchedulePolicy policy = {});

/// Longest dependency path with every node at its cheapest feasible thread
/// assignment; a lower bound on the makespan of any configuration.
double critical_path_bound(const Graph& g, const HardwareSpec& hw);

struct SweepEntry {
    ThreadConfig config;
    double makespan = 0.0;
};

/// Every non-oversubscribed (pools, threads) point with intra = kernel =
/// threads, sorted by makespan ascending (ties by pools, then threads).
struct SweepResult {
    std::vector<SweepEntry> entries;
    const SweepEntry& best() const { return entries.front(); }
};

SweepResult sweep(const Graph& g, const HardwareSpec& hw, int max_pools);

/// Multi-socket placements; with hw.sockets == 1 both reduce to simulate().
SimResult simulate_multisocket(const Graph& g, const ThreadConfig& cfg, const HardwareSpec& hw,
                               Placement placement);

/// CSV export: header `node_id,pool_id,socket_id,start,end`.
void write_trace_csv(std::ostream& out, const SimResult& result);
/// CSV export: header `core_id,busy,sync,idle`.
void write_core_csv(std::ostream& out, const SimResult& result);

}  // namespace optune

#endif  // OPTUNE_SIM_HPP
