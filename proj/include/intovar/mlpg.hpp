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

#include <vector>

#include "intovar/matrix.hpp"

namespace intovar::mlpg {

enum class Units { kNormalized, kDenormalized };

// Per-frame Gaussian over [static, delta, delta-delta] logF0 streams.
struct TrajectoryDistribution {
  Matrix means;      // T x 3
  Matrix variances;  // T x 3, diagonal, > 0
  Units units = Units::kNormalized;
};

// Symmetric positive-definite band system stored as lower band diagonals:
// bands(d, i) = A(i + d, i) for d = 0..half_bandwidth.
struct BandedSystem {
  std::size_t n = 0;
  std::size_t half_bandwidth = 0;
  Matrix bands;  // (half_bandwidth + 1) x n
  std::vector<double> rhs;
};

// In-place banded Cholesky (A = L L^T) followed by forward/back
// substitution. O(n * bw^2). Throws NumericalError on a non-positive pivot.
std::vector<double> solve_banded_spd(BandedSystem system);

// Most likely static trajectory under the distribution: solves
// (W^T S^-1 W) c = W^T S^-1 mu where W stacks the identity and the delta /
// delta-delta windows with the same edge replication as feats::compute_deltas.
std::vector<double> generate_trajectory(const TrajectoryDistribution& dist);

}  // namespace intovar::mlpg
