// Copyright 2026 The Intovar Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "intovar/kernels.hpp"
#include "intovar/rng.hpp"

using intovar::Rng;
namespace kernels = intovar::kernels;

namespace {

std::vector<double> random_vec(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = 2.0 * rng.uniform() - 1.0;
  return v;
}

// Magnitude-aware tolerance for sums whose order differs between backends.
void check_close(const std::vector<double>& a, const std::vector<double>& b,
                 double scale) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i] - b[i]) <=
          1e-12 * (scale + std::abs(a[i]) + std::abs(b[i])));
  }
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar dot and matvec match naive loops") {
  const auto& ops = kernels::scalar_ops();
  Rng rng(11);
  const std::vector<double> a = random_vec(37, rng);
  const std::vector<double> b = random_vec(37, rng);
  double expect = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) expect += a[i] * b[i];
  CHECK(ops.dot(a.data(), b.data(), a.size()) == doctest::Approx(expect).epsilon(1e-14));

  const std::size_t m = 5, n = 7;
  const std::vector<double> mat = random_vec(m * n, rng);
  const std::vector<double> x = random_vec(n, rng);
  std::vector<double> y(m, 0.0);
  ops.matvec(mat.data(), x.data(), y.data(), m, n);
  for (std::size_t i = 0; i < m; ++i) {
    double e = 0.0;
    for (std::size_t j = 0; j < n; ++j) e += mat[i * n + j] * x[j];
    CHECK(y[i] == doctest::Approx(e).epsilon(1e-14));
  }
}

TEST_CASE("gemm variants agree with index-level definitions") {
  const auto& ops = kernels::scalar_ops();
  Rng rng(5);
  const std::size_t m = 4, n = 6, k = 5;
  const std::vector<double> a = random_vec(m * k, rng);
  const std::vector<double> bnn = random_vec(k * n, rng);
  const std::vector<double> bnt = random_vec(n * k, rng);
  const std::vector<double> atn = random_vec(k * m, rng);

  std::vector<double> c(m * n, 0.0);
  ops.gemm_nn(a.data(), bnn.data(), c.data(), m, n, k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double e = 0.0;
      for (std::size_t l = 0; l < k; ++l) e += a[i * k + l] * bnn[l * n + j];
      CHECK(c[i * n + j] == doctest::Approx(e).epsilon(1e-13));
    }

  std::fill(c.begin(), c.end(), 0.0);
  ops.gemm_nt(a.data(), bnt.data(), c.data(), m, n, k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double e = 0.0;
      for (std::size_t l = 0; l < k; ++l) e += a[i * k + l] * bnt[j * k + l];
      CHECK(c[i * n + j] == doctest::Approx(e).epsilon(1e-13));
    }

  std::fill(c.begin(), c.end(), 0.0);
  ops.gemm_tn(atn.data(), bnn.data(), c.data(), m, n, k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double e = 0.0;
      for (std::size_t l = 0; l < k; ++l) e += atn[l * m + i] * bnn[l * n + j];
      CHECK(c[i * n + j] == doctest::Approx(e).epsilon(1e-13));
    }
}

TEST_CASE("avx2 backend matches scalar reference on awkward sizes") {
  if (!kernels::avx2_available()) return;  // scalar-only host
  const auto& ref = kernels::scalar_ops();
  const auto& simd = kernels::avx2_ops();
  Rng rng(99);

  for (const std::size_t n : {1u, 3u, 4u, 5u, 16u, 17u, 63u, 64u, 257u, 1024u}) {
    const std::vector<double> a = random_vec(n, rng);
    const std::vector<double> b = random_vec(n, rng);
    const double d0 = ref.dot(a.data(), b.data(), n);
    const double d1 = simd.dot(a.data(), b.data(), n);
    CHECK(std::abs(d0 - d1) <= 1e-12 * (static_cast<double>(n) + std::abs(d0)));

    std::vector<double> y0 = random_vec(n, rng);
    std::vector<double> y1 = y0;
    ref.axpy(0.37, a.data(), y0.data(), n);
    simd.axpy(0.37, a.data(), y1.data(), n);
    check_close(y0, y1, 1.0);
  }

  for (const auto& [m, n, k] :
       std::vector<std::array<std::size_t, 3>>{{1, 1, 1},
                                               {2, 3, 5},
                                               {7, 9, 11},
                                               {16, 64, 56},
                                               {33, 65, 67},
                                               {64, 3, 256}}) {
    const std::vector<double> a = random_vec(m * k, rng);
    const std::vector<double> bnn = random_vec(k * n, rng);
    const std::vector<double> bnt = random_vec(n * k, rng);
    const std::vector<double> atn = random_vec(k * m, rng);
    std::vector<double> c0(m * n, 0.1), c1(m * n, 0.1);
    ref.gemm_nn(a.data(), bnn.data(), c0.data(), m, n, k);
    simd.gemm_nn(a.data(), bnn.data(), c1.data(), m, n, k);
    check_close(c0, c1, static_cast<double>(k));

    std::fill(c0.begin(), c0.end(), -0.2);
    std::fill(c1.begin(), c1.end(), -0.2);
    ref.gemm_nt(a.data(), bnt.data(), c0.data(), m, n, k);
    simd.gemm_nt(a.data(), bnt.data(), c1.data(), m, n, k);
    check_close(c0, c1, static_cast<double>(k));

    std::fill(c0.begin(), c0.end(), 0.0);
    std::fill(c1.begin(), c1.end(), 0.0);
    ref.gemm_tn(atn.data(), bnn.data(), c0.data(), m, n, k);
    simd.gemm_tn(atn.data(), bnn.data(), c1.data(), m, n, k);
    check_close(c0, c1, static_cast<double>(k));

    std::vector<double> x = random_vec(k, rng);
    std::vector<double> mv0(m, 0.0), mv1(m, 0.0);
    ref.matvec(a.data(), x.data(), mv0.data(), m, k);
    simd.matvec(a.data(), x.data(), mv1.data(), m, k);
    check_close(mv0, mv1, static_cast<double>(k));

    std::vector<double> xt = random_vec(m, rng);
    std::vector<double> mt0(k, 0.0), mt1(k, 0.0);
    ref.matvec_t(a.data(), xt.data(), mt0.data(), m, k);
    simd.matvec_t(a.data(), xt.data(), mt1.data(), m, k);
    check_close(mt0, mt1, static_cast<double>(m));
  }
}

TEST_CASE("adam kernels agree across backends") {
  if (!kernels::avx2_available()) return;
  Rng rng(3);
  const std::size_t n = 131;
  const std::vector<double> g = random_vec(n, rng);
  std::vector<double> p0 = random_vec(n, rng), p1 = p0;
  std::vector<double> m0(n, 0.01), m1 = m0, v0(n, 0.02), v1 = v0;
  kernels::scalar_ops().adam_update(p0.data(), g.data(), m0.data(), v0.data(),
                                    n, 1e-3, 0.9, 0.999, 1e-8, 0.1, 0.001);
  kernels::avx2_ops().adam_update(p1.data(), g.data(), m1.data(), v1.data(), n,
                                  1e-3, 0.9, 0.999, 1e-8, 0.1, 0.001);
  check_close(p0, p1, 1.0);
  check_close(m0, m1, 1.0);
  check_close(v0, v1, 1.0);
}

TEST_CASE("backend selection is reported") {
  const char* backend = kernels::active_backend();
  const bool ok = std::string(backend) == "scalar" || std::string(backend) == "avx2";
  CHECK(ok);
}

}  // TEST_SUITE
