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

#include "intovar/mlpg.hpp"

#include <cmath>

#include "intovar/errors.hpp"
#include "intovar/feats.hpp"

namespace intovar::mlpg {

std::vector<double> solve_banded_spd(BandedSystem system) {
  const std::size_t n = system.n;
  const std::size_t bw = system.half_bandwidth;
  if (system.bands.rows() != bw + 1 || system.bands.cols() != n ||
      system.rhs.size() != n)
    throw DataError("solve_banded_spd: inconsistent band system");
  Matrix& b = system.bands;

  // Cholesky: L(j+d, j) overwrites bands(d, j).
  for (std::size_t j = 0; j < n; ++j) {
    double diag = b(0, j);
    for (std::size_t d = 1; d <= bw && d <= j; ++d) {
      const double l = b(d, j - d);
      diag -= l * l;
    }
    if (!(diag > 0.0))
      throw NumericalError("solve_banded_spd: non-positive pivot at row " +
                           std::to_string(j));
    const double ljj = std::sqrt(diag);
    b(0, j) = ljj;
    for (std::size_t i = 1; i <= bw && j + i < n; ++i) {
      double s = b(i, j);
      for (std::size_t k = 1; k + i <= bw && k <= j; ++k)
        s -= b(i + k, j - k) * b(k, j - k);
      b(i, j) = s / ljj;
    }
  }

  // L y = rhs
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = system.rhs[i];
    for (std::size_t d = 1; d <= bw && d <= i; ++d)
      s -= b(d, i - d) * y[i - d];
    y[i] = s / b(0, i);
  }
  // L^T x = y
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t d = 1; d <= bw && ii + d < n; ++d)
      s -= b(d, ii) * x[ii + d];
    x[ii] = s / b(0, ii);
  }
  return x;
}

namespace {

// Window row for stream `stream` at frame t as (index, coefficient) pairs,
// replication edges folded in. Stream 0 is the identity.
struct WindowRow {
  int count;
  std::size_t idx[3];
  double coef[3];
};

WindowRow window_row(std::size_t stream, std::size_t t, std::size_t n) {
  WindowRow row{0, {0, 0, 0}, {0.0, 0.0, 0.0}};
  if (stream == 0) {
    row.count = 1;
    row.idx[0] = t;
    row.coef[0] = 1.0;
    return row;
  }
  const double* w = stream == 1 ? feats::kDeltaWindow : feats::kDeltaDeltaWindow;
  // Taps land on frames t-1, t, t+1; out-of-range taps fold onto the edge
  // frame (replication), matching feats::compute_deltas.
  double folded[3] = {0.0, 0.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    std::int64_t j = static_cast<std::int64_t>(t) + k - 1;
    if (j < 0) j = 0;
    if (j >= static_cast<std::int64_t>(n)) j = static_cast<std::int64_t>(n) - 1;
    folded[j - (static_cast<std::int64_t>(t) - 1)] += w[k];
  }
  for (int s = 0; s < 3; ++s) {
    const std::int64_t j = static_cast<std::int64_t>(t) - 1 + s;
    if (j < 0 || j >= static_cast<std::int64_t>(n)) continue;
    if (folded[s] == 0.0) continue;
    row.idx[row.count] = static_cast<std::size_t>(j);
    row.coef[row.count] = folded[s];
    ++row.count;
  }
  return row;
}

}  // namespace

std::vector<double> generate_trajectory(const TrajectoryDistribution& dist) {
  const std::size_t n = dist.means.rows();
  if (n == 0 || dist.means.cols() != 3 || !dist.variances.same_shape(dist.means))
    throw DataError("generate_trajectory: need T x 3 means and variances");
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t s = 0; s < 3; ++s)
      if (!(dist.variances(t, s) > 0.0))
        throw DataError("generate_trajectory: non-positive variance");

  constexpr std::size_t kBandwidth = 2;
  BandedSystem sys;
  sys.n = n;
  sys.half_bandwidth = kBandwidth;
  sys.bands = Matrix(kBandwidth + 1, n);
  sys.rhs.assign(n, 0.0);

  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t s = 0; s < 3; ++s) {
      const WindowRow row = window_row(s, t, n);
      const double prec = 1.0 / dist.variances(t, s);
      const double target = dist.means(t, s);
      for (int a = 0; a < row.count; ++a) {
        sys.rhs[row.idx[a]] += row.coef[a] * prec * target;
        // Lower triangle only: each unordered index pair contributes once.
        for (int b2 = 0; b2 < row.count; ++b2) {
          if (row.idx[b2] > row.idx[a]) continue;
          const std::size_t d = row.idx[a] - row.idx[b2];
          sys.bands(d, row.idx[b2]) += row.coef[a] * row.coef[b2] * prec;
        }
      }
    }
  }
  return solve_banded_spd(std::move(sys));
}

}  // namespace intovar::mlpg
