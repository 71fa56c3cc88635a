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

#include <atomic>
#include <stdexcept>

#include "optune/kernels.hpp"

namespace optune::kernels {

namespace {

bool probe_avx2() {
#if defined(OPTUNE_AVX2_TU) && (defined(__x86_64__) || defined(__i386__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

// -1 = follow the probe, otherwise a forced KernelKind (tests only).
std::atomic<int> g_forced{-1};

}  // namespace

std::string_view to_string(KernelKind kind) {
    return kind == KernelKind::avx2 ? "avx2" : "scalar";
}

bool avx2_available() {
    static const bool available = probe_avx2();
    return available;
}

KernelKind active_kernel() {
    int forced = g_forced.load(std::memory_order_relaxed);
    if (forced >= 0) return static_cast<KernelKind>(forced);
    return avx2_available() ? KernelKind::avx2 : KernelKind::scalar;
}

void force_kernel(std::optional<KernelKind> kind) {
    if (kind && *kind == KernelKind::avx2 && !avx2_available()) {
        throw std::runtime_error("AVX2 kernel not available on this machine");
    }
    g_forced.store(kind ? static_cast<int>(*kind) : -1, std::memory_order_relaxed);
}

#ifndef OPTUNE_AVX2_TU
// Keeps links working on builds without the AVX2 translation unit; the
// dispatcher never routes here because avx2_available() is false.
void matmul_rows_avx2(const float*, const float*, float*, std::size_t, std::size_t, std::size_t,
                      std::size_t, std::size_t) {
    throw std::runtime_error("AVX2 kernel not compiled into this build");
}
#endif

void matmul_rows(const float* x, const float* w, float* out, std::size_t rows, std::size_t inner,
                 std::size_t cols, std::size_t row_begin, std::size_t row_end) {
#ifdef OPTUNE_AVX2_TU
    if (active_kernel() == KernelKind::avx2) {
        matmul_rows_avx2(x, w, out, rows, inner, cols, row_begin, row_end);
        return;
    }
#endif
    matmul_rows_scalar(x, w, out, rows, inner, cols, row_begin, row_end);
}

}  // namespace optune::kernels
