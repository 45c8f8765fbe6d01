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

#include "intovar/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "intovar/errors.hpp"

namespace intovar::losses {

namespace {
constexpr double kLog2Pi = 1.8378770664093453;
}

double mse_loss(const Matrix& pred, const Matrix& target, Matrix* d_pred) {
  if (!pred.same_shape(target)) throw DataError("mse_loss: shape mismatch");
  const double n = static_cast<double>(pred.size());
  double loss = 0.0;
  if (d_pred) *d_pred = Matrix(pred.rows(), pred.cols());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double e = pred.data()[i] - target.data()[i];
    loss += e * e;
    if (d_pred) d_pred->data()[i] = 2.0 * e / n;
  }
  return loss / n;
}

double mdn_nll(const Matrix& logits, const Matrix& means,
               const Matrix& log_vars, const Matrix& target, Matrix* d_logits,
               Matrix* d_means, Matrix* d_log_vars) {
  const std::size_t T = target.rows();
  const std::size_t D = target.cols();
  const std::size_t K = logits.cols();
  if (logits.rows() != T || means.rows() != T || log_vars.rows() != T ||
      means.cols() != K * D || log_vars.cols() != K * D)
    throw DataError("mdn_nll: shape mismatch");
  for (const Matrix* m : {&logits, &means, &log_vars, &target})
    for (std::size_t i = 0; i < m->size(); ++i)
      if (!std::isfinite(m->data()[i]))
        throw DataError("mdn_nll: non-finite input");

  if (d_logits) *d_logits = Matrix(T, K);
  if (d_means) *d_means = Matrix(T, K * D);
  if (d_log_vars) *d_log_vars = Matrix(T, K * D);

  double total = 0.0;
  std::vector<double> log_w(K), comp(K);
  for (std::size_t t = 0; t < T; ++t) {
    // log softmax of the weight logits
    double lmax = -std::numeric_limits<double>::infinity();
    for (std::size_t kk = 0; kk < K; ++kk) lmax = std::max(lmax, logits(t, kk));
    double lse = 0.0;
    for (std::size_t kk = 0; kk < K; ++kk) lse += std::exp(logits(t, kk) - lmax);
    lse = lmax + std::log(lse);
    for (std::size_t kk = 0; kk < K; ++kk) log_w[kk] = logits(t, kk) - lse;

    // log w_k + log N_k
    double amax = -std::numeric_limits<double>::infinity();
    for (std::size_t kk = 0; kk < K; ++kk) {
      double ln = 0.0;
      for (std::size_t dd = 0; dd < D; ++dd) {
        const std::size_t i = kk * D + dd;
        const double var = std::max(std::exp(log_vars(t, i)), kMdnVarianceFloor);
        const double e = target(t, dd) - means(t, i);
        ln += -0.5 * (kLog2Pi + std::log(var)) - 0.5 * e * e / var;
      }
      comp[kk] = log_w[kk] + ln;
      amax = std::max(amax, comp[kk]);
    }
    double sum = 0.0;
    for (std::size_t kk = 0; kk < K; ++kk) sum += std::exp(comp[kk] - amax);
    const double log_lik = amax + std::log(sum);
    total -= log_lik;

    if (!d_logits && !d_means && !d_log_vars) continue;
    const double scale = 1.0 / static_cast<double>(T);
    for (std::size_t kk = 0; kk < K; ++kk) {
      const double resp = std::exp(comp[kk] - log_lik);  // responsibility
      const double w = std::exp(log_w[kk]);
      if (d_logits) (*d_logits)(t, kk) = (w - resp) * scale;
      for (std::size_t dd = 0; dd < D; ++dd) {
        const std::size_t i = kk * D + dd;
        const double raw_var = std::exp(log_vars(t, i));
        const bool floored = raw_var < kMdnVarianceFloor;
        const double var = floored ? kMdnVarianceFloor : raw_var;
        const double e = target(t, dd) - means(t, i);
        if (d_means) (*d_means)(t, i) = -resp * e / var * scale;
        if (d_log_vars)
          (*d_log_vars)(t, i) =
              floored ? 0.0 : resp * (0.5 - 0.5 * e * e / var) * scale;
      }
    }
  }
  return total / static_cast<double>(T);
}

double gaussian_kl(const std::vector<double>& mu,
                   const std::vector<double>& log_var,
                   std::vector<double>* d_mu, std::vector<double>* d_log_var) {
  if (mu.size() != log_var.size()) throw DataError("gaussian_kl: size mismatch");
  if (d_mu) d_mu->assign(mu.size(), 0.0);
  if (d_log_var) d_log_var->assign(mu.size(), 0.0);
  double kl = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double var = std::exp(log_var[i]);
    kl += -0.5 * (1.0 + log_var[i] - mu[i] * mu[i] - var);
    if (d_mu) (*d_mu)[i] = mu[i];
    if (d_log_var) (*d_log_var)[i] = 0.5 * (var - 1.0);
  }
  return kl;
}

}  // namespace intovar::losses
