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

#include <cstdint>
#include <vector>

#include "json.hpp"

#include "intovar/matrix.hpp"

namespace intovar::feats {

// Delta windows shared with the trajectory generator: velocity

// [-0.5, 0, 0.5] and acceleration [1, -2, 1], both applied with edge
// replication. Changing these requires changing mlpg to match.
inline constexpr double kDeltaWindow[3] = {-0.5, 0.0, 0.5};
inline constexpr double kDeltaDeltaWindow[3] = {1.0, -2.0, 1.0};

// Fill unvoiced frames: interior gaps by linear interpolation between the
// flanking voiced values, leading/trailing runs by holding the nearest
// voiced value. Throws DataError when no frame is voiced.
std::vector<double> interpolate_logf0(const std::vector<double>& logf0,
                                      const std::vector<std::uint8_t>& voicing);

// T x 3 matrix of [static, delta, delta-delta] from a static sequence.
Matrix compute_deltas(const std::vector<double>& statics);

struct NormStats {
  enum class Kind { kMinMax, kMeanVar };
  Kind kind = Kind::kMeanVar;
  // min/max for kMinMax, mean/std for kMeanVar, one entry per dimension.
  std::vector<double> lo_or_mean;
  std::vector<double> hi_or_std;
};

// Fit per-dimension statistics over the frames of all given matrices
// (training split only, by contract).
NormStats fit_norm(const std::vector<const Matrix*>& data, NormStats::Kind kind);

// Min-max maps the training range onto [0.01, 0.99]; mean-variance maps to
// zero mean, unit std. Ranges and stds are floored at 1e-8 before dividing;
// constant dimensions land on the midpoint (0.5) or zero.
Matrix apply_norm(const Matrix& data, const NormStats& stats);
Matrix invert_norm(const Matrix& data, const NormStats& stats);

// Scalar forms for single-stream use.
double apply_norm_value(double v, const NormStats& stats, std::size_t dim);
double invert_norm_value(double v, const NormStats& stats, std::size_t dim);

void to_json(nlohmann::json& j, const NormStats& s);
void from_json(const nlohmann::json& j, NormStats& s);

}  // namespace intovar::feats
