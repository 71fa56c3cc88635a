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

#ifndef OPTUNE_KERNELS_HPP
#define OPTUNE_KERNELS_HPP

#include <cstddef>
#include <optional>
#include <string_view>

namespace optune::kernels {

// Row-range matrix multiply: out[r, :] = x[r, :] * w for r in
// [row_begin, row_end), with x of shape rows x inner and w of shape
// inner x cols, all dense row-major. Each variant owns its output rows
// completely, so disjoint ranges may run on different threads.
//
// All variants accumulate in ascending-k order per output element; the AVX2
// variant fuses multiply-add, so results may differ from scalar by final
// rounding only.

void matmul_rows_scalar(const float* x, const float* w, float* out, std::size_t rows,
                        std::size_t inner, std::size_t cols, std::size_t row_begin,
                        std::size_t row_end);

void matmul_rows_avx2(const float* x, const float* w, float* out, std::size_t rows,
                      std::size_t inner, std::size_t cols, std::size_t row_begin,
                      std::size_t row_end);

enum class KernelKind { scalar, avx2 };

std::string_view to_string(KernelKind kind);

/// Variant the dispatcher selected for this machine (cpuid probe, cached).
KernelKind active_kernel();

/// True when the AVX2 variant is compiled in and the CPU supports it.
bool avx2_available();

/// Test hook: pin the dispatcher to one variant (nullopt restores the probe).
void force_kernel(std::optional<KernelKind> kind);

/// Dispatching entry point used by the operator implementations.
void matmul_rows(const float* x, const float* w, float* out, std::size_t rows, std::size_t inner,
                 std::size_t cols, std::size_t row_begin, std::size_t row_end);

}  // namespace optune::kernels

#endif  // OPTUNE_KERNELS_HPP
