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

#include "optune/pool.hpp"

#include <atomic>
#include <chrono>
#include <stdexcept>

#include "json.hpp"

#ifdef __linux__
#include <pthread.h>
#include <sched.h>
#endif

namespace optune {

namespace {

void pin_to_core(std::thread& t, std::size_t core) {
#ifdef __linux__
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) return;
    cpu_set_t set;
    CPU_ZERO(&set);
    CPU_SET(core % n, &set);
    // Best effort; failure just leaves the thread unpinned.
    pthread_setaffinity_np(t.native_handle(), sizeof(set), &set);
#else
    (void)t;
    (void)core;
#endif
}

}  // namespace

ThreadPool::ThreadPool(std::size_t size, bool pin_threads) {
    if (size == 0) {
        throw std::invalid_argument("thread pool needs at least one worker");
    }
    workers_.reserve(size);
    try {
        for (std::size_t i = 0; i < size; ++i) {
            workers_.emplace_back([this, i] { worker_loop(i); });
            if (pin_threads) pin_to_core(workers_.back(), i);
        }
    } catch (...) {
        shutdown();
        throw;
    }
}

ThreadPool::~ThreadPool() { shutdown(); }

void ThreadPool::submit(std::function<void()> task) {
    {
        std::lock_guard lock(mutex_);
        if (stopping_) {
            throw std::runtime_error("submit on a shut-down thread pool");
        }
        queue_.push_back(std::move(task));
        ++submitted_;
    }
    work_available_.notify_one();
}

void ThreadPool::join() {
    std::unique_lock lock(mutex_);
    all_done_.wait(lock, [this] { return completed_ == submitted_ && queue_.empty(); });
}

void ThreadPool::shutdown() {
    {
        std::lock_guard lock(mutex_);
        stopping_ = true;
    }
    work_available_.notify_all();
    for (auto& w : workers_) {
        if (w.joinable()) w.join();
    }
    workers_.clear();
}

void ThreadPool::worker_loop(std::size_t) {
    for (;;) {
        std::function<void()> task;
        {
            std::unique_lock lock(mutex_);
            work_available_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
            if (queue_.empty()) return;  // stopping and drained
            task = std::move(queue_.front());
            queue_.pop_front();
        }
        task();
        {
            std::lock_guard lock(mutex_);
            ++completed_;
            if (completed_ == submitted_ && queue_.empty()) {
                all_done_.notify_all();
            }
        }
    }
}

BenchResult microbench(std::size_t pool_size, std::size_t tasks, bool pin_threads) {
    ThreadPool pool(pool_size, pin_threads);
    std::atomic<std::uint64_t> counter{0};

    auto begin = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < tasks; ++i) {
        pool.submit([&counter] { counter.fetch_add(1, std::memory_order_relaxed); });
    }
    pool.join();
    auto end = std::chrono::steady_clock::now();

    BenchResult result;
    result.pool_size = pool_size;
    result.tasks = tasks;
    result.total_latency_us = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::microseconds>(end - begin).count());
    result.final_counter = counter.load();
    return result;
}

BenchResult microbench_thread_per_task(std::size_t threads, std::size_t tasks) {
    std::atomic<std::uint64_t> counter{0};

    auto begin = std::chrono::steady_clock::now();
    std::size_t launched = 0;
    while (launched < tasks) {
        std::size_t wave = std::min(threads, tasks - launched);
        std::vector<std::thread> batch;
        batch.reserve(wave);
        for (std::size_t i = 0; i < wave; ++i) {
            batch.emplace_back([&counter] { counter.fetch_add(1, std::memory_order_relaxed); });
        }
        for (auto& t : batch) t.join();
        launched += wave;
    }
    auto end = std::chrono::steady_clock::now();

    BenchResult result;
    result.pool_size = threads;
    result.tasks = tasks;
    result.total_latency_us = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::microseconds>(end - begin).count());
    result.final_counter = counter.load();
    return result;
}

std::string serialize(const BenchResult& result) {
    nlohmann::ordered_json doc;
    doc["pool_size"] = result.pool_size;
    doc["tasks"] = result.tasks;
    doc["total_latency_us"] = result.total_latency_us;
    doc["final_counter"] = result.final_counter;
    return doc.dump(2) + "\n";
}

}  // namespace optune
