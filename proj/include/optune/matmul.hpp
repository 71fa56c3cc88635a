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

#ifndef OPTUNE_MATMUL_HPP
#define OPTUNE_MATMUL_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "optune/pool.hpp"

namespace optune {

/// Dense row-major float32 matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<float> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0f) {}

    float& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    float at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    static Matrix identity(std::size_t n);
    /// Uniform values in [lo, hi]; defaults keep elements positive so
    /// relative comparisons against references stay meaningful.
    static Matrix random(std::size_t r, std::size_t c, std::uint64_t seed, float lo = 0.5f,
                         float hi = 1.5f);

    bool operator==(const Matrix&) const = default;
};

struct MatmulOptions {
    int kernel_threads = 1;  // compute threads inside the kernel call
    /// Passes the data-preparation stage makes over the input operand. The
    /// prep stage is real serial work (packing + validation); raising this
    /// raises the operator's serial fraction, which the scaling studies rely
    /// on being measurable.
    int prep_passes = 4;
};

/// Operator design 1: single-threaded data preparation of both operands,
/// then the library kernel with `kernel_threads` compute threads.
Matrix matmul_design1(const Matrix& x, const Matrix& w, const MatmulOptions& opts = {});

/// Operator design 2: w is packed once, then row-blocks of x are dispatched
/// to `intra_pool`, each block running design 1's prep + kernel on its rows.
/// Row-splitting preserves per-element accumulation order, so the result is
/// identical to design 1.
Matrix matmul_design2(const Matrix& x, const Matrix& w, ThreadPool& intra_pool,
                      const MatmulOptions& opts = {});

struct ScalingRow {
    std::size_t size = 0;
    double latency_1_us = 0.0;
    double latency_n_us = 0.0;
    double speedup = 1.0;
};

/// For each square size, median design-1 latency at 1 and at `threads`
/// kernel threads. Measurements, not assertions.
std::vector<ScalingRow> scaling_bench(std::span<const std::size_t> sizes, int threads,
                                      int trials = 5, const MatmulOptions& opts = {},
                                      std::uint64_t seed = 1);

/// Inverts speedup = 1 / (s + (1 - s) / threads) for the serial fraction s.
/// Throws std::invalid_argument unless 1 <= speedup <= threads, threads >= 2.
double fit_amdahl(double speedup, int threads);

}  // namespace optune

#endif  // OPTUNE_MATMUL_HPP
