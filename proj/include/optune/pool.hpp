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

#ifndef OPTUNE_POOL_HPP
#define OPTUNE_POOL_HPP

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace optune {

/// Fixed-size task pool over one shared queue. Workers park on a condition
/// variable instead of spinning, so oversubscribing the machine degrades
/// gracefully. Safe for concurrent submission from multiple threads; every
/// submitted task runs exactly once.
class ThreadPool {
public:
    /// Starts `size` workers. With pin_threads, workers are bound
    /// round-robin to cores (best effort, Linux only).
    explicit ThreadPool(std::size_t size, bool pin_threads = false);
    ~ThreadPool();

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    /// Throws std::runtime_error after shutdown().
    void submit(std::function<void()> task);

    /// Blocks until every task submitted so far has completed and the queue
    /// is drained. The pool stays usable afterwards.
    void join();

    /// Drains outstanding work, stops the workers and reaps them. Idempotent.
    void shutdown();

    std::size_t size() const { return workers_.size(); }

private:
    void worker_loop(std::size_t worker_index);

    std::mutex mutex_;
    std::condition_variable work_available_;
    std::condition_variable all_done_;
    std::deque<std::function<void()>> queue_;
    std::vector<std::thread> workers_;
    std::uint64_t submitted_ = 0;
    std::uint64_t completed_ = 0;
    bool stopping_ = false;
};

struct BenchResult {
    std::size_t pool_size = 0;
    std::size_t tasks = 0;
    std::uint64_t total_latency_us = 0;
    std::uint64_t final_counter = 0;
};

/// Contention stress: `tasks` increments of one shared atomic counter pushed
/// through a pool of `pool_size` workers. Pool construction is excluded from
/// the timed window.
BenchResult microbench(std::size_t pool_size, std::size_t tasks = 10000, bool pin_threads = false);

/// Deliberately naive contrast: a fresh std::thread per task, spawned in
/// waves of `threads`.
BenchResult microbench_thread_per_task(std::size_t threads, std::size_t tasks = 10000);

std::string serialize(const BenchResult& result);

}  // namespace optune

#endif  // OPTUNE_POOL_HPP
