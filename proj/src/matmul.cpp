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

#include "optune/matmul.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "optune/kernels.hpp"

namespace optune {

namespace {

// Data preparation: pack the operand into a fresh buffer, then walk it
// prep_passes times validating every element. The walks read through a
// volatile pointer so each pass really happens; this is the deliberately
// explicit "framework overhead" of the operator, strictly serial per call
// and linear in operand size.
void prep_buffer(float* dst, std::size_t count, int passes) {
    const volatile float* scan = dst;
    double checksum = 0.0;
    for (int pass = 0; pass < passes; ++pass) {
        for (std::size_t i = 0; i < count; ++i) {
            checksum += scan[i];
        }
    }
    if (!std::isfinite(checksum)) {
        throw std::invalid_argument("matmul operand contains non-finite values");
    }
}

std::vector<float> prep_operand(const float* src, std::size_t count, int passes) {
    std::vector<float> packed(src, src + count);
    prep_buffer(packed.data(), count, passes);
    return packed;
}

// Prep of a row range of a shared destination buffer (design 2 blocks).
void prep_rows(const float* src, float* dst, std::size_t count, int passes) {
    std::copy(src, src + count, dst);
    prep_buffer(dst, count, passes);
}

void kernel_multithreaded(const float* x, const float* w, float* out, std::size_t rows,
                          std::size_t inner, std::size_t cols, int threads) {
    if (threads <= 1 || rows <= 1) {
        kernels::matmul_rows(x, w, out, rows, inner, cols, 0, rows);
        return;
    }
    const std::size_t n = std::min<std::size_t>(threads, rows);
    std::vector<std::thread> crew;
    crew.reserve(n);
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t begin = rows * t / n;
        std::size_t end = rows * (t + 1) / n;
        crew.emplace_back([=] { kernels::matmul_rows(x, w, out, rows, inner, cols, begin, end); });
    }
    for (auto& th : crew) th.join();
}

void check_shapes(const Matrix& x, const Matrix& w) {
    if (x.cols != w.rows) {
        throw std::invalid_argument("matmul shape mismatch: x is " + std::to_string(x.rows) +
                                    "x" + std::to_string(x.cols) + ", w is " +
                                    std::to_string(w.rows) + "x" + std::to_string(w.cols));
    }
}

double time_once_us(const Matrix& x, const Matrix& w, const MatmulOptions& opts) {
    auto begin = std::chrono::steady_clock::now();
    Matrix out = matmul_design1(x, w, opts);
    auto end = std::chrono::steady_clock::now();
    // Touch the result so the whole computation stays observable.
    if (!std::isfinite(out.data.empty() ? 0.0f : out.data[0])) {
        throw std::runtime_error("non-finite matmul result");
    }
    return std::chrono::duration<double, std::micro>(end - begin).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0f;
    return m;
}

Matrix Matrix::random(std::size_t r, std::size_t c, std::uint64_t seed, float lo, float hi) {
    Matrix m(r, c);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> dist(lo, hi);
    for (auto& v : m.data) v = dist(rng);
    return m;
}

Matrix matmul_design1(const Matrix& x, const Matrix& w, const MatmulOptions& opts) {
    check_shapes(x, w);
    auto packed_x = prep_operand(x.data.data(), x.data.size(), opts.prep_passes);
    auto packed_w = prep_operand(w.data.data(), w.data.size(), opts.prep_passes);
    Matrix out(x.rows, w.cols);
    kernel_multithreaded(packed_x.data(), packed_w.data(), out.data.data(), x.rows, x.cols,
                         w.cols, opts.kernel_threads);
    return out;
}

Matrix matmul_design2(const Matrix& x, const Matrix& w, ThreadPool& intra_pool,
                      const MatmulOptions& opts) {
    check_shapes(x, w);
    auto packed_w = prep_operand(w.data.data(), w.data.size(), opts.prep_passes);

    std::vector<float> packed_x(x.data.size());
    Matrix out(x.rows, w.cols);

    const std::size_t blocks = std::min(intra_pool.size(), std::max<std::size_t>(x.rows, 1));
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t begin = x.rows * b / blocks;
        const std::size_t end = x.rows * (b + 1) / blocks;
        intra_pool.submit([&, begin, end] {
            try {
                prep_rows(x.data.data() + begin * x.cols, packed_x.data() + begin * x.cols,
                          (end - begin) * x.cols, opts.prep_passes);
                kernels::matmul_rows(packed_x.data(), packed_w.data(), out.data.data(), x.rows,
                                     x.cols, w.cols, begin, end);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    intra_pool.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<ScalingRow> scaling_bench(std::span<const std::size_t> sizes, int threads, int trials,
                                      const MatmulOptions& opts, std::uint64_t seed) {
    if (threads < 1) throw std::invalid_argument("scaling_bench requires threads >= 1");
    if (trials < 1) trials = 1;
    std::vector<ScalingRow> rows;
    rows.reserve(sizes.size());
    for (std::size_t n : sizes) {
        Matrix x = Matrix::random(n, n, seed ^ n);
        Matrix w = Matrix::random(n, n, (seed ^ n) + 1);

        MatmulOptions one = opts;
        one.kernel_threads = 1;
        MatmulOptions many = opts;
        many.kernel_threads = threads;

        time_once_us(x, w, many);  // warm-up

        std::vector<double> t1, tn;
        for (int trial = 0; trial < trials; ++trial) {
            t1.push_back(time_once_us(x, w, one));
            tn.push_back(time_once_us(x, w, many));
        }
        ScalingRow row;
        row.size = n;
        row.latency_1_us = median(t1);
        row.latency_n_us = median(tn);
        row.speedup = row.latency_1_us / row.latency_n_us;
        rows.push_back(row);
    }
    return rows;
}

double fit_amdahl(double speedup, int threads) {
    if (threads < 2) {
        throw std::invalid_argument("fit_amdahl requires threads >= 2");
    }
    if (!(speedup >= 1.0) || !(speedup <= static_cast<double>(threads))) {
        throw std::invalid_argument("speedup must lie in [1, threads]");
    }
    const double t = static_cast<double>(threads);
    return (t / speedup - 1.0) / (t - 1.0);
}

}  // namespace optune
