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

#include <cmath>
#include <random>

#include "optune/kernels.hpp"
#include "optune/matmul.hpp"
#include "optune/pool.hpp"

using namespace optune;

namespace {

// Independent oracle: the naive triple loop, same float32 arithmetic.
Matrix naive_matmul(const Matrix& x, const Matrix& w) {
    Matrix out(x.rows, w.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t j = 0; j < w.cols; ++j) {
            float acc = 0.0f;
            for (std::size_t k = 0; k < x.cols; ++k) {
                acc += x.at(i, k) * w.at(k, j);
            }
            out.at(i, j) = acc;
        }
    }
    return out;
}

void check_close(const Matrix& got, const Matrix& want, double rel = 1e-5) {
    REQUIRE(got.rows == want.rows);
    REQUIRE(got.cols == want.cols);
    for (std::size_t i = 0; i < got.data.size(); ++i) {
        double g = got.data[i], r = want.data[i];
        REQUIRE(std::abs(g - r) <= rel * std::abs(r));
    }
}

}  // namespace

TEST_CASE("identity times anything is anything") {
    auto x = Matrix::identity(4);
    auto w = Matrix::random(4, 3, 42);
    auto out = matmul_design1(x, w);
    check_close(out, w, 1e-7);
}

TEST_CASE("the hand-checked 2x2 case") {
    Matrix x(2, 2), w(2, 2);
    x.data = {1, 2, 3, 4};
    w.data = {5, 6, 7, 8};
    auto out = matmul_design1(x, w);
    CHECK(out.at(0, 0) == 19.0f);
    CHECK(out.at(0, 1) == 22.0f);
    CHECK(out.at(1, 0) == 43.0f);
    CHECK(out.at(1, 1) == 50.0f);

    ThreadPool pool(2);
    auto out2 = matmul_design2(x, w, pool);
    CHECK(out2 == out);
}

TEST_CASE("dimension mismatch is rejected") {
    Matrix x(2, 3), w(2, 2);
    CHECK_THROWS_AS(matmul_design1(x, w), std::invalid_argument);
    ThreadPool pool(2);
    CHECK_THROWS_AS(matmul_design2(x, w, pool), std::invalid_argument);
}

TEST_CASE("non-finite operands fail preparation") {
    Matrix x(2, 2), w(2, 2);
    x.data = {1, 2, 3, std::nanf("")};
    w.data = {1, 0, 0, 1};
    CHECK_THROWS_AS(matmul_design1(x, w), std::invalid_argument);
}

TEST_CASE("design1 matches the naive oracle on a 512-cube") {
    auto x = Matrix::random(512, 512, 1001);
    auto w = Matrix::random(512, 512, 1002);
    MatmulOptions opts;
    opts.kernel_threads = 2;
    auto out = matmul_design1(x, w, opts);
    check_close(out, naive_matmul(x, w));
}

TEST_CASE("property: both designs match the oracle on random shapes") {
    std::mt19937 rng(71);
    ThreadPool pool(3);
    for (int iter = 0; iter < 25; ++iter) {
        std::size_t m = 1 + rng() % 96;
        std::size_t k = 1 + rng() % 96;
        std::size_t n = 1 + rng() % 96;
        auto x = Matrix::random(m, k, rng());
        auto w = Matrix::random(k, n, rng());
        auto want = naive_matmul(x, w);

        MatmulOptions opts;
        opts.kernel_threads = 1 + static_cast<int>(rng() % 3);
        auto d1 = matmul_design1(x, w, opts);
        check_close(d1, want);

        auto d2 = matmul_design2(x, w, pool, opts);
        CHECK(d2 == d1);  // row split preserves accumulation order exactly
    }
}

TEST_CASE("design2 with a single-worker pool equals design1") {
    ThreadPool pool(1);
    auto x = Matrix::random(33, 17, 5);
    auto w = Matrix::random(17, 29, 6);
    CHECK(matmul_design2(x, w, pool) == matmul_design1(x, w));
}

TEST_CASE("kernel variants agree (scalar vs runtime-selected)") {
    std::mt19937 rng(73);
    for (int iter = 0; iter < 20; ++iter) {
        std::size_t m = 1 + rng() % 64;
        std::size_t k = 1 + rng() % 64;
        std::size_t n = 1 + rng() % 64;  // exercises 16/8/tail column paths
        auto x = Matrix::random(m, k, rng());
        auto w = Matrix::random(k, n, rng());

        Matrix a(m, n), b(m, n);
        kernels::matmul_rows_scalar(x.data.data(), w.data.data(), a.data.data(), m, k, n, 0, m);
        if (kernels::avx2_available()) {
            kernels::matmul_rows_avx2(x.data.data(), w.data.data(), b.data.data(), m, k, n, 0, m);
        } else {
            kernels::matmul_rows(x.data.data(), w.data.data(), b.data.data(), m, k, n, 0, m);
        }
        check_close(b, a);
    }
}

TEST_CASE("kernel dispatch honors the test override") {
    auto probed = kernels::active_kernel();
    kernels::force_kernel(kernels::KernelKind::scalar);
    CHECK(kernels::active_kernel() == kernels::KernelKind::scalar);
    kernels::force_kernel(std::nullopt);
    CHECK(kernels::active_kernel() == probed);
    if (kernels::avx2_available()) {
        CHECK(probed == kernels::KernelKind::avx2);
    }
}

TEST_CASE("fit_amdahl: frozen and boundary values") {
    // closed form: s = (t/speedup - 1) / (t - 1)
    CHECK(fit_amdahl(16.0, 24) == doctest::Approx(0.0217).epsilon(0.005));
    CHECK(std::abs(fit_amdahl(16.0, 24) - 0.0217) < 1e-4);
    CHECK(fit_amdahl(8.0, 8) == 0.0);
    CHECK(fit_amdahl(1.0, 8) == 1.0);
    CHECK_THROWS_AS(fit_amdahl(0.5, 8), std::invalid_argument);
    CHECK_THROWS_AS(fit_amdahl(9.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(fit_amdahl(2.0, 1), std::invalid_argument);
}

TEST_CASE("property: fit_amdahl inverts the predicted speedup exactly") {
    for (int threads : {2, 4, 8, 24, 48}) {
        for (int i = 0; i <= 20; ++i) {
            double s = i / 20.0;
            double predicted = 1.0 / (s + (1.0 - s) / threads);
            CHECK(fit_amdahl(predicted, threads) == doctest::Approx(s).epsilon(1e-12));
        }
    }
}

TEST_CASE("scaling bench: speedup definitions hold") {
    std::vector<std::size_t> sizes = {64, 96};
    auto rows = scaling_bench(sizes, 1, 1);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.speedup == doctest::Approx(r.latency_1_us / r.latency_n_us));
    }
}
