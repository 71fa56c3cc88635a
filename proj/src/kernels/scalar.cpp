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

#include "optune/kernels.hpp"

namespace optune::kernels {

namespace {
// k-panel size: one panel of w (kBlockK x cols floats) gets reused across all
// rows of the range before moving on.
constexpr std::size_t kBlockK = 256;
}  // namespace

void matmul_rows_scalar(const float* x, const float* w, float* out, std::size_t /*rows*/,
                        std::size_t inner, std::size_t cols, std::size_t row_begin,
                        std::size_t row_end) {
    for (std::size_t i = row_begin; i < row_end; ++i) {
        std::fill(out + i * cols, out + (i + 1) * cols, 0.0f);
    }
    for (std::size_t kb = 0; kb < inner; kb += kBlockK) {
        const std::size_t kend = std::min(inner, kb + kBlockK);
        for (std::size_t i = row_begin; i < row_end; ++i) {
            const float* xi = x + i * inner;
            float* oi = out + i * cols;
            for (std::size_t k = kb; k < kend; ++k) {
                const float a = xi[k];
                const float* wk = w + k * cols;
                for (std::size_t j = 0; j < cols; ++j) {
                    oi[j] += a * wk[j];
                }
            }
        }
    }
}

}  // namespace optune::kernels
