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

#include <cmath>
#include <vector>

#include "doctest.h"

#include "intovar/optim.hpp"

namespace optim = intovar::optim;

TEST_SUITE("optim") {

TEST_CASE("learning-rate schedule") {
  CHECK(optim::lr_at_step(500) == doctest::Approx(0.0025).epsilon(1e-12));
  CHECK(optim::lr_at_step(1000) == doctest::Approx(0.005).epsilon(1e-12));
  CHECK(optim::lr_at_step(4000) == doctest::Approx(0.0025).epsilon(1e-12));
  // Warmup is linear from the origin.
  CHECK(optim::lr_at_step(1) == doctest::Approx(0.005 / 1000.0).epsilon(1e-12));
  // Decay is monotone after the peak.
  CHECK(optim::lr_at_step(2000) < optim::lr_at_step(1000));
  CHECK(optim::lr_at_step(9000) < optim::lr_at_step(2000));
}

TEST_CASE("zero gradients leave parameters unchanged") {
  std::vector<double> p = {1.0, -2.0, 0.5};
  const std::vector<double> p0 = p;
  optim::AdamState state(p.size());
  const std::vector<double> g(p.size(), 0.0);
  for (int i = 0; i < 25; ++i) optim::adam_step(p, g, state, 0.01);
  CHECK(p == p0);
}

TEST_CASE("first step moves by about -lr for unit gradient") {
  std::vector<double> p = {0.0};
  optim::AdamState state(1);
  optim::adam_step(p, {1.0}, state, 0.25);
  CHECK(p[0] == doctest::Approx(-0.25).epsilon(1e-6));
}

TEST_CASE("two steps match the hand-unrolled recurrence") {
  const double lr = 0.1, b1 = 0.9, b2 = 0.999, eps = 1e-8;
  const double g1 = 0.7, g2 = -1.3;
  double p = 0.4, m = 0.0, v = 0.0;
  // step 1
  m = b1 * m + (1 - b1) * g1;
  v = b2 * v + (1 - b2) * g1 * g1;
  p -= lr * (m / (1 - b1)) / (std::sqrt(v / (1 - b2)) + eps);
  // step 2
  m = b1 * m + (1 - b1) * g2;
  v = b2 * v + (1 - b2) * g2 * g2;
  p -= lr * (m / (1 - b1 * b1)) / (std::sqrt(v / (1 - b2 * b2)) + eps);

  std::vector<double> params = {0.4};
  optim::AdamState state(1);
  optim::adam_step(params, {g1}, state, lr);
  optim::adam_step(params, {g2}, state, lr);
  CHECK(std::abs(params[0] - p) < 1e-12);
}

}  // TEST_SUITE
