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

// Reference implementations used only by tests: dense solvers, brute-force
// densities, finite differences. Deliberately naive; independence from the
// production code paths is the point.

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "intovar/matrix.hpp"

namespace oracles {

using intovar::Matrix;

// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(Matrix a, std::vector<double> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("dense_solve");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
    std::swap(b[col], b[piv]);
    if (a(col, col) == 0.0) throw std::runtime_error("dense_solve: singular");
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t ri = n; ri-- > 0;) {
    double s = b[ri];
    for (std::size_t c = ri + 1; c < n; ++c) s -= a(ri, c) * x[c];
    x[ri] = s / a(ri, ri);
  }
  return x;
}

// Least squares via normal equations (columns assumed independent).
inline std::vector<double> dense_least_squares(const Matrix& a,
                                               const std::vector<double>& b) {
  const std::size_t m = a.rows(), n = a.cols();
  Matrix ata(n, n);
  std::vector<double> atb(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      atb[i] += a(r, i) * b[r];
      for (std::size_t j = 0; j < n; ++j) ata(i, j) += a(r, i) * a(r, j);
    }
  }
  return dense_solve(ata, atb);
}

// Moore-Penrose pseudo-inverse solve of (A^T A) x = A^T b for the ranking
// system, done by eigen-free means: project out the all-ones null direction
// and solve the regularized system, then re-center. Used to cross-check the
// production gauge fixing.
inline std::vector<double> pinv_ranking_solve(const Matrix& a,
                                              const std::vector<double>& b) {
  const std::size_t n = a.cols();
  Matrix ata(n, n);
  std::vector<double> atb(n, 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t i = 0; i < n; ++i) {
      atb[i] += a(r, i) * b[r];
      for (std::size_t j = 0; j < n; ++j) ata(i, j) += a(r, i) * a(r, j);
    }
  // (A^T A + 11^T) has the same action as A^T A on mean-zero vectors.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ata(i, j) += 1.0;
  std::vector<double> x = dense_solve(ata, atb);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  for (double& v : x) v -= mean;
  return x;
}

// Central finite differences of a scalar function of a parameter vector.
inline std::vector<double> finite_difference_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> params, double h = 1e-5) {
  std::vector<double> grad(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + h;
    const double fp = f(params);
    params[i] = saved - h;
    const double fm = f(params);
    params[i] = saved;
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

// Max relative error between an analytic gradient and finite differences.
inline double max_relative_error(const std::vector<double>& analytic,
                                 const std::vector<double>& numeric,
                                 double floor = 1e-6) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double denom =
        std::max({std::abs(analytic[i]), std::abs(numeric[i]), floor});
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / denom);
  }
  return worst;
}

}  // namespace oracles
