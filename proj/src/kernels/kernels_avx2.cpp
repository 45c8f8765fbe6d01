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

#include "intovar/kernels.hpp"

#if defined(INTOVAR_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace intovar::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sw = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sw));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  acc0 = _mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3));
  double s = hsum(acc0);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4),
                                                _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void matvec_avx2(const double* a, const double* x, double* y, std::size_t m,
                 std::size_t n) {
  // Two rows per pass share the x loads.
  std::size_t i = 0;
  for (; i + 2 <= m; i += 2) {
    const double* a0 = a + i * n;
    const double* a1 = a0 + n;
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const __m256d xv = _mm256_loadu_pd(x + j);
      s0 = _mm256_fmadd_pd(_mm256_loadu_pd(a0 + j), xv, s0);
      s1 = _mm256_fmadd_pd(_mm256_loadu_pd(a1 + j), xv, s1);
    }
    double d0 = hsum(s0);
    double d1 = hsum(s1);
    for (; j < n; ++j) {
      d0 += a0[j] * x[j];
      d1 += a1[j] * x[j];
    }
    y[i] += d0;
    y[i + 1] += d1;
  }
  for (; i < m; ++i) y[i] += dot_avx2(a + i * n, x, n);
}

void matvec_t_avx2(const double* a, const double* x, double* y, std::size_t m,
                   std::size_t n) {
  // Four rows per sweep over y.
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const double* a0 = a + i * n;
    const double* a1 = a0 + n;
    const double* a2 = a1 + n;
    const double* a3 = a2 + n;
    const __m256d v0 = _mm256_set1_pd(x[i]);
    const __m256d v1 = _mm256_set1_pd(x[i + 1]);
    const __m256d v2 = _mm256_set1_pd(x[i + 2]);
    const __m256d v3 = _mm256_set1_pd(x[i + 3]);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      __m256d acc = _mm256_loadu_pd(y + j);
      acc = _mm256_fmadd_pd(v0, _mm256_loadu_pd(a0 + j), acc);
      acc = _mm256_fmadd_pd(v1, _mm256_loadu_pd(a1 + j), acc);
      acc = _mm256_fmadd_pd(v2, _mm256_loadu_pd(a2 + j), acc);
      acc = _mm256_fmadd_pd(v3, _mm256_loadu_pd(a3 + j), acc);
      _mm256_storeu_pd(y + j, acc);
    }
    for (; j < n; ++j)
      y[j] += x[i] * a0[j] + x[i + 1] * a1[j] + x[i + 2] * a2[j] + x[i + 3] * a3[j];
  }
  for (; i < m; ++i) axpy_avx2(x[i], a + i * n, y, n);
}

// ---------------------------------------------------------------------------
// gemm micro-kernels: 4 x 8 register tiles of C, accumulators live in ymm
// across the whole k loop.

// C[i0..i0+4) x [j0..j0+8) += A B with A addressed by a_row(i) + l*stride.
template <bool kATransposed>
inline void gemm_tile_bcast(const double* a, const double* b, double* c,
                            std::size_t i0, std::size_t j0, std::size_t n,
                            std::size_t k, std::size_t a_rows) {
  __m256d acc[4][2];
  for (int r = 0; r < 4; ++r) {
    acc[r][0] = _mm256_loadu_pd(c + (i0 + r) * n + j0);
    acc[r][1] = _mm256_loadu_pd(c + (i0 + r) * n + j0 + 4);
  }
  for (std::size_t l = 0; l < k; ++l) {
    const __m256d b0 = _mm256_loadu_pd(b + l * n + j0);
    const __m256d b1 = _mm256_loadu_pd(b + l * n + j0 + 4);
    for (int r = 0; r < 4; ++r) {
      const double av = kATransposed ? a[l * a_rows + i0 + r]
                                     : a[(i0 + r) * k + l];
      const __m256d va = _mm256_set1_pd(av);
      acc[r][0] = _mm256_fmadd_pd(va, b0, acc[r][0]);
      acc[r][1] = _mm256_fmadd_pd(va, b1, acc[r][1]);
    }
  }
  for (int r = 0; r < 4; ++r) {
    _mm256_storeu_pd(c + (i0 + r) * n + j0, acc[r][0]);
    _mm256_storeu_pd(c + (i0 + r) * n + j0 + 4, acc[r][1]);
  }
}

// Remainder (any i count < 4, any j count < 8) for the broadcast kernels.
template <bool kATransposed>
inline void gemm_edge_bcast(const double* a, const double* b, double* c,
                            std::size_t i0, std::size_t i1, std::size_t j0,
                            std::size_t j1, std::size_t n, std::size_t k,
                            std::size_t a_rows) {
  for (std::size_t l = 0; l < k; ++l) {
    const double* bl = b + l * n;
    for (std::size_t i = i0; i < i1; ++i) {
      const double av = kATransposed ? a[l * a_rows + i] : a[i * k + l];
      double* ci = c + i * n;
      for (std::size_t j = j0; j < j1; ++j) ci[j] += av * bl[j];
    }
  }
}

template <bool kATransposed>
void gemm_bcast(const double* a, const double* b, double* c, std::size_t m,
                std::size_t n, std::size_t k) {
  const std::size_t mt = m - m % 4;
  const std::size_t nt = n - n % 8;
  for (std::size_t i = 0; i < mt; i += 4)
    for (std::size_t j = 0; j < nt; j += 8)
      gemm_tile_bcast<kATransposed>(a, b, c, i, j, n, k, m);
  if (nt < n) gemm_edge_bcast<kATransposed>(a, b, c, 0, mt, nt, n, n, k, m);
  if (mt < m) gemm_edge_bcast<kATransposed>(a, b, c, mt, m, 0, n, n, k, m);
}

void gemm_nn_avx2(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t n, std::size_t k) {
  gemm_bcast<false>(a, b, c, m, n, k);
}

void gemm_tn_avx2(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t n, std::size_t k) {
  gemm_bcast<true>(a, b, c, m, n, k);
}

// C[i0..i0+4) x [j0..j0+2) += A B^T as dot products with 8 accumulators.
inline void gemm_nt_tile(const double* a, const double* b, double* c,
                         std::size_t i0, std::size_t j0, std::size_t n,
                         std::size_t k) {
  const double* a0 = a + i0 * k;
  const double* a1 = a0 + k;
  const double* a2 = a1 + k;
  const double* a3 = a2 + k;
  const double* b0 = b + j0 * k;
  const double* b1 = b0 + k;
  __m256d s00 = _mm256_setzero_pd(), s01 = _mm256_setzero_pd();
  __m256d s10 = _mm256_setzero_pd(), s11 = _mm256_setzero_pd();
  __m256d s20 = _mm256_setzero_pd(), s21 = _mm256_setzero_pd();
  __m256d s30 = _mm256_setzero_pd(), s31 = _mm256_setzero_pd();
  std::size_t l = 0;
  for (; l + 4 <= k; l += 4) {
    const __m256d vb0 = _mm256_loadu_pd(b0 + l);
    const __m256d vb1 = _mm256_loadu_pd(b1 + l);
    const __m256d va0 = _mm256_loadu_pd(a0 + l);
    const __m256d va1 = _mm256_loadu_pd(a1 + l);
    const __m256d va2 = _mm256_loadu_pd(a2 + l);
    const __m256d va3 = _mm256_loadu_pd(a3 + l);
    s00 = _mm256_fmadd_pd(va0, vb0, s00);
    s01 = _mm256_fmadd_pd(va0, vb1, s01);
    s10 = _mm256_fmadd_pd(va1, vb0, s10);
    s11 = _mm256_fmadd_pd(va1, vb1, s11);
    s20 = _mm256_fmadd_pd(va2, vb0, s20);
    s21 = _mm256_fmadd_pd(va2, vb1, s21);
    s30 = _mm256_fmadd_pd(va3, vb0, s30);
    s31 = _mm256_fmadd_pd(va3, vb1, s31);
  }
  double d[4][2] = {{hsum(s00), hsum(s01)},
                    {hsum(s10), hsum(s11)},
                    {hsum(s20), hsum(s21)},
                    {hsum(s30), hsum(s31)}};
  for (; l < k; ++l) {
    d[0][0] += a0[l] * b0[l];
    d[0][1] += a0[l] * b1[l];
    d[1][0] += a1[l] * b0[l];
    d[1][1] += a1[l] * b1[l];
    d[2][0] += a2[l] * b0[l];
    d[2][1] += a2[l] * b1[l];
    d[3][0] += a3[l] * b0[l];
    d[3][1] += a3[l] * b1[l];
  }
  for (int r = 0; r < 4; ++r) {
    c[(i0 + r) * n + j0] += d[r][0];
    c[(i0 + r) * n + j0 + 1] += d[r][1];
  }
}

void gemm_nt_avx2(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t n, std::size_t k) {
  const std::size_t mt = m - m % 4;
  const std::size_t nt = n - n % 2;
  for (std::size_t i = 0; i < mt; i += 4)
    for (std::size_t j = 0; j < nt; j += 2) gemm_nt_tile(a, b, c, i, j, n, k);
  for (std::size_t i = 0; i < mt; ++i)
    for (std::size_t j = nt; j < n; ++j)
      c[i * n + j] += dot_avx2(a + i * k, b + j * k, k);
  for (std::size_t i = mt; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      c[i * n + j] += dot_avx2(a + i * k, b + j * k, k);
}

void adam_update_avx2(double* p, const double* g, double* m, double* v,
                      std::size_t n, double lr, double beta1, double beta2,
                      double eps, double bc1, double bc2) {
  const __m256d vb1 = _mm256_set1_pd(beta1);
  const __m256d vb2 = _mm256_set1_pd(beta2);
  const __m256d vomb1 = _mm256_set1_pd(1.0 - beta1);
  const __m256d vomb2 = _mm256_set1_pd(1.0 - beta2);
  const __m256d vlr = _mm256_set1_pd(lr);
  const __m256d veps = _mm256_set1_pd(eps);
  const __m256d vrbc1 = _mm256_set1_pd(1.0 / bc1);
  const __m256d vrbc2 = _mm256_set1_pd(1.0 / bc2);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d gi = _mm256_loadu_pd(g + i);
    __m256d mi = _mm256_loadu_pd(m + i);
    __m256d vi = _mm256_loadu_pd(v + i);
    mi = _mm256_fmadd_pd(vb1, mi, _mm256_mul_pd(vomb1, gi));
    vi = _mm256_fmadd_pd(vb2, vi, _mm256_mul_pd(vomb2, _mm256_mul_pd(gi, gi)));
    _mm256_storeu_pd(m + i, mi);
    _mm256_storeu_pd(v + i, vi);
    const __m256d mhat = _mm256_mul_pd(mi, vrbc1);
    const __m256d vhat = _mm256_mul_pd(vi, vrbc2);
    const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), veps);
    const __m256d upd = _mm256_div_pd(_mm256_mul_pd(vlr, mhat), denom);
    _mm256_storeu_pd(p + i, _mm256_sub_pd(_mm256_loadu_pd(p + i), upd));
  }
  for (; i < n; ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    p[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
  }
}

}  // namespace

const Ops& avx2_ops_impl() {
  static const Ops table = {dot_avx2,     axpy_avx2,    matvec_avx2,
                            matvec_t_avx2, gemm_nn_avx2, gemm_nt_avx2,
                            gemm_tn_avx2,  adam_update_avx2};
  return table;
}

}  // namespace intovar::kernels

#endif  // INTOVAR_HAVE_AVX2
