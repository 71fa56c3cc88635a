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

// AVX2 + FMA variant of the row-range matmul. This translation unit is the
// only one compiled with -mavx2 -mfma; callers reach it through the runtime
// dispatcher, never directly.

#include <immintrin.h>

#include <algorithm>

#include "optune/kernels.hpp"

namespace optune::kernels {

namespace {

constexpr std::size_t kBlockK = 256;

// 4 rows x 16 columns register tile, accumulating one k-panel into out.
inline void tile4x16(const float* x, const float* w, float* out, std::size_t inner,
                     std::size_t cols, std::size_t i, std::size_t j, std::size_t kb,
                     std::size_t kend) {
    const float* x0 = x + (i + 0) * inner;
    const float* x1 = x + (i + 1) * inner;
    const float* x2 = x + (i + 2) * inner;
    const float* x3 = x + (i + 3) * inner;
    float* o0 = out + (i + 0) * cols + j;
    float* o1 = out + (i + 1) * cols + j;
    float* o2 = out + (i + 2) * cols + j;
    float* o3 = out + (i + 3) * cols + j;

    __m256 acc00 = _mm256_loadu_ps(o0), acc01 = _mm256_loadu_ps(o0 + 8);
    __m256 acc10 = _mm256_loadu_ps(o1), acc11 = _mm256_loadu_ps(o1 + 8);
    __m256 acc20 = _mm256_loadu_ps(o2), acc21 = _mm256_loadu_ps(o2 + 8);
    __m256 acc30 = _mm256_loadu_ps(o3), acc31 = _mm256_loadu_ps(o3 + 8);

    for (std::size_t k = kb; k < kend; ++k) {
        const float* wk = w + k * cols + j;
        __m256 b0 = _mm256_loadu_ps(wk);
        __m256 b1 = _mm256_loadu_ps(wk + 8);
        __m256 a0 = _mm256_broadcast_ss(x0 + k);
        __m256 a1 = _mm256_broadcast_ss(x1 + k);
        __m256 a2 = _mm256_broadcast_ss(x2 + k);
        __m256 a3 = _mm256_broadcast_ss(x3 + k);
        acc00 = _mm256_fmadd_ps(a0, b0, acc00);
        acc01 = _mm256_fmadd_ps(a0, b1, acc01);
        acc10 = _mm256_fmadd_ps(a1, b0, acc10);
        acc11 = _mm256_fmadd_ps(a1, b1, acc11);
        acc20 = _mm256_fmadd_ps(a2, b0, acc20);
        acc21 = _mm256_fmadd_ps(a2, b1, acc21);
        acc30 = _mm256_fmadd_ps(a3, b0, acc30);
        acc31 = _mm256_fmadd_ps(a3, b1, acc31);
    }

    _mm256_storeu_ps(o0, acc00);
    _mm256_storeu_ps(o0 + 8, acc01);
    _mm256_storeu_ps(o1, acc10);
    _mm256_storeu_ps(o1 + 8, acc11);
    _mm256_storeu_ps(o2, acc20);
    _mm256_storeu_ps(o2 + 8, acc21);
    _mm256_storeu_ps(o3, acc30);
    _mm256_storeu_ps(o3 + 8, acc31);
}

// Single row, 8 columns at a time.
inline void tile1x8(const float* x, const float* w, float* out, std::size_t inner,
                    std::size_t cols, std::size_t i, std::size_t j, std::size_t kb,
                    std::size_t kend) {
    const float* xi = x + i * inner;
    float* oi = out + i * cols + j;
    __m256 acc = _mm256_loadu_ps(oi);
    for (std::size_t k = kb; k < kend; ++k) {
        __m256 b = _mm256_loadu_ps(w + k * cols + j);
        acc = _mm256_fmadd_ps(_mm256_broadcast_ss(xi + k), b, acc);
    }
    _mm256_storeu_ps(oi, acc);
}

// Scalar column tail (cols % 8), kept on the same k-panel walk.
inline void tail_cols(const float* x, const float* w, float* out, std::size_t inner,
                      std::size_t cols, std::size_t i, std::size_t j0, std::size_t kb,
                      std::size_t kend) {
    const float* xi = x + i * inner;
    float* oi = out + i * cols;
    for (std::size_t k = kb; k < kend; ++k) {
        const float a = xi[k];
        const float* wk = w + k * cols;
        for (std::size_t j = j0; j < cols; ++j) {
            oi[j] += a * wk[j];
        }
    }
}

}  // namespace

void matmul_rows_avx2(const float* x, const float* w, float* out, std::size_t /*rows*/,
                      std::size_t inner, std::size_t cols, std::size_t row_begin,
                      std::size_t row_end) {
    for (std::size_t i = row_begin; i < row_end; ++i) {
        std::fill(out + i * cols, out + (i + 1) * cols, 0.0f);
    }
    const std::size_t wide16 = cols - cols % 16;
    const std::size_t wide8 = cols - cols % 8;

    for (std::size_t kb = 0; kb < inner; kb += kBlockK) {
        const std::size_t kend = std::min(inner, kb + kBlockK);

        std::size_t i = row_begin;
        for (; i + 4 <= row_end; i += 4) {
            std::size_t j = 0;
            for (; j < wide16; j += 16) {
                tile4x16(x, w, out, inner, cols, i, j, kb, kend);
            }
            for (; j < wide8; j += 8) {
                for (std::size_t r = 0; r < 4; ++r) {
                    tile1x8(x, w, out, inner, cols, i + r, j, kb, kend);
                }
            }
            if (j < cols) {
                for (std::size_t r = 0; r < 4; ++r) {
                    tail_cols(x, w, out, inner, cols, i + r, j, kb, kend);
                }
            }
        }
        for (; i < row_end; ++i) {
            std::size_t j = 0;
            for (; j < wide8; j += 8) {
                tile1x8(x, w, out, inner, cols, i, j, kb, kend);
            }
            if (j < cols) {
                tail_cols(x, w, out, inner, cols, i, j, kb, kend);
            }
        }
    }
}

}  // namespace optune::kernels
