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

namespace intovar::losses {

// Variance floor for mixture components (applied after exp).
inline constexpr double kMdnVarianceFloor = 1e-4;

// Mean over all elements of the squared error. d_pred is the gradient.
double mse_loss(const Matrix& pred, const Matrix& target, Matrix* d_pred);

// Per-frame diagonal-Gaussian mixture negative log likelihood, averaged over
// frames and computed via log-sum-exp. Layout per frame: K weight logits,
// K*D means, K*D log variances. Variances are floored at kMdnVarianceFloor
// (the floor zeroes the log-variance gradient where it is active).
double mdn_nll(const Matrix& logits,    // T x K
               const Matrix& means,     // T x (K*D)
               const Matrix& log_vars,  // T x (K*D)
               const Matrix& target,    // T x D
               Matrix* d_logits, Matrix* d_means, Matrix* d_log_vars);

// KL( N(mu, diag(exp(log_var))) || N(0, I) ), summed over dimensions.
double gaussian_kl(const std::vector<double>& mu,
                   const std::vector<double>& log_var,
                   std::vector<double>* d_mu, std::vector<double>* d_log_var);

}  // namespace intovar::losses
