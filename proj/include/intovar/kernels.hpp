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

#pragma once

#include <cstddef>

namespace intovar::kernels {

// Dense double-precision primitives behind the training and generation math.
// All matrices are row-major. Accumulating forms (+=) so callers control
// zeroing. Two backends: a scalar reference and an AVX2/FMA variant chosen at
// runtime; INTOVAR_KERNELS=scalar|avx2 overrides the CPU-based choice.
struct Ops {
  // sum_i a[i]*b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // y += A x, A is m x n, x has n entries, y has m
  void (*matvec)(const double* a, const double* x, double* y, std::size_t m,
                 std::size_t n);
  // y += A^T x, A is m x n, x has m entries, y has n
  void (*matvec_t)(const double* a, const double* x, double* y, std::size_t m,
                   std::size_t n);
  // C += A B, A is m x k, B is k x n, C is m x n
  void (*gemm_nn)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t n, std::size_t k);
  // C += A B^T, A is m x k, B is n x k, C is m x n
  void (*gemm_nt)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t n, std::size_t k);
  // C += A^T B, A is k x m, B is k x n, C is m x n
  void (*gemm_tn)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t n, std::size_t k);
  // Fused Adam update with precomputed bias corrections bc1 = 1-beta1^t,
  // bc2 = 1-beta2^t:
  //   m = beta1*m + (1-beta1)*g
  //   v = beta2*v + (1-beta2)*g^2
  //   p -= lr * (m/bc1) / (sqrt(v/bc2) + eps)
  void (*adam_update)(double* p, const double* g, double* m, double* v,
                      std::size_t n, double lr, double beta1, double beta2,
                      double eps, double bc1, double bc2);
};

// Backend selected once per process.
const Ops& ops();

// "scalar" or "avx2".
const char* active_backend();

// Reference/SIMD tables, exposed for equivalence tests.
const Ops& scalar_ops();
bool avx2_available();
const Ops& avx2_ops();  // throws if unavailable on this CPU/build

}  // namespace intovar::kernels
