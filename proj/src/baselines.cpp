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

#include "intovar/baselines.hpp"

#include <cmath>

#include "intovar/errors.hpp"
#include "intovar/feats.hpp"

namespace intovar::baselines {

std::vector<double> copy_synth(const corpus::Utterance& utt) {
  return feats::interpolate_logf0(utt.logf0, utt.voicing);
}

std::vector<double> quadratic_baseline(const corpus::Utterance& utt) {
  const std::size_t T = utt.frames();
  std::size_t n_voiced = 0;
  for (std::uint8_t v : utt.voicing) n_voiced += v ? 1 : 0;
  if (n_voiced < 3)
    throw DataError("quadratic_baseline: need >= 3 voiced frames");

  // Normal equations for [a, b, c] over a*tau^2 + b*tau + c.
  double s[5] = {0, 0, 0, 0, 0};  // sums of tau^0..tau^4
  double ty[3] = {0, 0, 0};       // sums of y * tau^0..tau^2
  for (std::size_t t = 0; t < T; ++t) {
    if (!utt.voicing[t]) continue;
    const double tau =
        T > 1 ? static_cast<double>(t) / static_cast<double>(T - 1) : 0.0;
    double p = 1.0;
    for (int k = 0; k < 5; ++k) {
      s[k] += p;
      if (k < 3) ty[k] += utt.logf0[t] * p;
      p *= tau;
    }
  }
  // 3x3 symmetric solve by Gaussian elimination with partial pivoting.
  double A[3][4] = {{s[4], s[3], s[2], ty[2]},
                    {s[3], s[2], s[1], ty[1]},
                    {s[2], s[1], s[0], ty[0]}};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    for (int c = 0; c < 4; ++c) std::swap(A[col][c], A[piv][c]);
    if (A[col][col] == 0.0)
      throw NumericalError("quadratic_baseline: degenerate fit");
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = A[r][col] / A[col][col];
      for (int c = col; c < 4; ++c) A[r][c] -= f * A[col][c];
    }
  }
  const double a = A[0][3] / A[0][0];
  const double b = A[1][3] / A[1][1];
  const double c = A[2][3] / A[2][2];

  std::vector<double> out(T);
  for (std::size_t t = 0; t < T; ++t) {
    const double tau =
        T > 1 ? static_cast<double>(t) / static_cast<double>(T - 1) : 0.0;
    out[t] = (a * tau + b) * tau + c;
  }
  return out;
}

std::vector<double> variance_scale(const std::vector<double>& contour,
                                   const std::vector<std::uint8_t>& voicing,
                                   double factor) {
  if (!(factor > 0.0)) throw DataError("variance_scale: factor must be > 0");
  if (contour.size() != voicing.size())
    throw DataError("variance_scale: contour/voicing length mismatch");
  double mean = 0.0;
  std::size_t n = 0;
  for (std::size_t t = 0; t < contour.size(); ++t) {
    if (!voicing[t]) continue;
    mean += contour[t];
    ++n;
  }
  if (n == 0) throw DataError("variance_scale: no voiced frames");
  mean /= static_cast<double>(n);
  std::vector<double> out(contour.size());
  for (std::size_t t = 0; t < contour.size(); ++t)
    out[t] = mean + factor * (contour[t] - mean);
  return out;
}

}  // namespace intovar::baselines
