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

#include <atomic>
#include <thread>
#include <vector>

#include "optune/pool.hpp"

using namespace optune;

TEST_CASE("a hundred increments land exactly once") {
    ThreadPool pool(4);
    std::atomic<int> counter{0};
    for (int i = 0; i < 100; ++i) {
        pool.submit([&] { counter.fetch_add(1); });
    }
    pool.join();
    CHECK(counter.load() == 100);
}

TEST_CASE("join with no tasks returns immediately") {
    ThreadPool pool(2);
    pool.join();
    CHECK(pool.size() == 2);
}

TEST_CASE("single worker serializes but completes everything") {
    ThreadPool pool(1);
    std::atomic<int> counter{0};
    for (int i = 0; i < 1000; ++i) {
        pool.submit([&] { counter.fetch_add(1); });
    }
    pool.join();
    CHECK(counter.load() == 1000);
}

TEST_CASE("concurrent producers: 4 x 2500 tasks all run exactly once") {
    ThreadPool pool(4);
    std::atomic<int> counter{0};
    std::vector<std::thread> producers;
    for (int p = 0; p < 4; ++p) {
        producers.emplace_back([&] {
            for (int i = 0; i < 2500; ++i) {
                pool.submit([&] { counter.fetch_add(1); });
            }
        });
    }
    for (auto& t : producers) t.join();
    pool.join();
    CHECK(counter.load() == 10000);
}

TEST_CASE("pool stays usable across repeated joins") {
    ThreadPool pool(3);
    std::atomic<int> counter{0};
    for (int round = 0; round < 5; ++round) {
        for (int i = 0; i < 200; ++i) {
            pool.submit([&] { counter.fetch_add(1); });
        }
        pool.join();
        CHECK(counter.load() == 200 * (round + 1));
    }
}

TEST_CASE("submit after shutdown throws") {
    ThreadPool pool(2);
    pool.shutdown();
    CHECK_THROWS_AS(pool.submit([] {}), std::runtime_error);
}

TEST_CASE("zero-size pool is rejected") {
    CHECK_THROWS_AS(ThreadPool(0), std::invalid_argument);
}

TEST_CASE("shutdown drains queued work first") {
    std::atomic<int> counter{0};
    {
        ThreadPool pool(2);
        for (int i = 0; i < 500; ++i) {
            pool.submit([&] { counter.fetch_add(1); });
        }
        // destructor shuts down
    }
    CHECK(counter.load() == 500);
}

TEST_CASE("microbench counts every task") {
    auto result = microbench(4, 10000);
    CHECK(result.final_counter == 10000);
    CHECK(result.tasks == 10000);
    CHECK(result.pool_size == 4);
}

TEST_CASE("microbench tolerates heavy oversubscription") {
    unsigned cores = std::max(1u, std::thread::hardware_concurrency());
    auto over = microbench(16 * cores, 10000);
    CHECK(over.final_counter == 10000);
}

TEST_CASE("naive thread-per-task contrast still counts correctly") {
    auto result = microbench_thread_per_task(4, 2000);
    CHECK(result.final_counter == 2000);
}

TEST_CASE("bench result serializes with the documented keys") {
    BenchResult r{4, 10000, 1234, 10000};
    auto text = serialize(r);
    CHECK(text.find("\"pool_size\": 4") != std::string::npos);
    CHECK(text.find("\"total_latency_us\": 1234") != std::string::npos);
    CHECK(text.find("\"final_counter\": 10000") != std::string::npos);
}
