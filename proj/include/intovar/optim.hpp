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
#include <vector>

namespace intovar::optim {

// Linear warmup to the peak over `warmup` steps, then inverse-square-root
// decay: lr = peak * min(step / warmup, sqrt(warmup / step)). Steps are
// 1-based batch counts.
double lr_at_step(std::size_t step, double peak = 0.005,
                  std::size_t warmup = 1000);

struct AdamState {
  std::size_t step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::vector<double> m;  // first moments
  std::vector<double> v;  // second moments

  explicit AdamState(std::size_t n_params = 0)
      : m(n_params, 0.0), v(n_params, 0.0) {}
};

// Standard bias-corrected Adam update, in place.
void adam_step(std::vector<double>& params, const std::vector<double>& grads,
               AdamState& state, double lr);

}  // namespace intovar::optim
