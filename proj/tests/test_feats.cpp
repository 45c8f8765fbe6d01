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

#include "intovar/errors.hpp"
#include "intovar/feats.hpp"
#include "intovar/rng.hpp"

using intovar::DataError;
using intovar::Matrix;
using intovar::Rng;
namespace feats = intovar::feats;

TEST_SUITE("feats") {

TEST_CASE("interpolation leaves voiced frames alone") {
  const std::vector<double> f0 = {1.0, 2.0, 3.0};
  const std::vector<std::uint8_t> voicing = {1, 1, 1};
  CHECK(feats::interpolate_logf0(f0, voicing) == f0);
}

TEST_CASE("interior gap is linear, edges hold") {
  const double l100 = std::log(100.0), l150 = std::log(150.0), l200 = std::log(200.0);
  {
    const std::vector<double> f0 = {l100, -1e10, l200};
    const std::vector<std::uint8_t> v = {1, 0, 1};
    const auto out = feats::interpolate_logf0(f0, v);
    CHECK(out[1] == doctest::Approx(0.5 * (l100 + l200)).epsilon(1e-12));
  }
  {
    const std::vector<double> f0 = {-1e10, l150, -1e10};
    const std::vector<std::uint8_t> v = {0, 1, 0};
    const auto out = feats::interpolate_logf0(f0, v);
    CHECK(out[0] == l150);
    CHECK(out[1] == l150);
    CHECK(out[2] == l150);
  }
}

TEST_CASE("all-unvoiced input is an error") {
  CHECK_THROWS_AS(feats::interpolate_logf0({1.0, 2.0}, {0, 0}), DataError);
}

TEST_CASE("interpolation is idempotent") {
  Rng rng(8);
  std::vector<double> f0(50);
  std::vector<std::uint8_t> v(50);
  for (std::size_t t = 0; t < 50; ++t) {
    v[t] = rng.uniform() < 0.7 ? 1 : 0;
    f0[t] = v[t] ? 5.0 + 0.1 * rng.normal() : -1e10;
  }
  v[10] = 1;
  f0[10] = 5.0;
  const auto once = feats::interpolate_logf0(f0, v);
  const std::vector<std::uint8_t> all_voiced(50, 1);
  const auto twice = feats::interpolate_logf0(once, all_voiced);
  CHECK(once == twice);
}

TEST_CASE("delta windows on constants and ramps") {
  {
    const auto d = feats::compute_deltas({2.5, 2.5, 2.5, 2.5});
    for (std::size_t t = 0; t < 4; ++t) {
      CHECK(d(t, 1) == doctest::Approx(0.0));
      CHECK(d(t, 2) == doctest::Approx(0.0));
    }
  }
  {
    const auto d = feats::compute_deltas({0.0, 1.0, 2.0, 3.0});
    CHECK(d(1, 1) == doctest::Approx(1.0));   // interior velocity
    CHECK(d(1, 2) == doctest::Approx(0.0));   // interior acceleration
    CHECK(d(0, 1) == doctest::Approx(0.5));   // replication edge: 0.5*(c1-c0)
    CHECK(d(0, 2) == doctest::Approx(1.0));   // c1 - c0
    CHECK(d(3, 1) == doctest::Approx(0.5));
  }
  {
    const auto d = feats::compute_deltas({7.0});
    CHECK(d(0, 1) == 0.0);
    CHECK(d(0, 2) == 0.0);
  }
}

TEST_CASE("compute_deltas is linear") {
  Rng rng(4);
  std::vector<double> x(20), y(20), combo(20);
  for (std::size_t i = 0; i < 20; ++i) {
    x[i] = rng.normal();
    y[i] = rng.normal();
    combo[i] = 2.0 * x[i] - 3.0 * y[i];
  }
  const auto dx = feats::compute_deltas(x);
  const auto dy = feats::compute_deltas(y);
  const auto dc = feats::compute_deltas(combo);
  for (std::size_t t = 0; t < 20; ++t)
    for (std::size_t c = 0; c < 3; ++c)
      CHECK(dc(t, c) == doctest::Approx(2.0 * dx(t, c) - 3.0 * dy(t, c)).epsilon(1e-12));
}

TEST_CASE("normalization examples and round trip") {
  Rng rng(9);
  Matrix data(40, 3);
  for (std::size_t i = 0; i < data.size(); ++i) data.data()[i] = rng.normal() * 2.0 + 1.0;
  for (std::size_t r = 0; r < 40; ++r) data(r, 2) = 4.0;  // constant dim

  SUBCASE("min-max maps to [0.01, 0.99], constants to midpoint") {
    const auto stats = feats::fit_norm({&data}, feats::NormStats::Kind::kMinMax);
    const Matrix n = feats::apply_norm(data, stats);
    double lo = 1.0, hi = 0.0;
    for (std::size_t r = 0; r < 40; ++r) {
      lo = std::min(lo, n(r, 0));
      hi = std::max(hi, n(r, 0));
      CHECK(n(r, 2) == doctest::Approx(0.5));
    }
    CHECK(lo == doctest::Approx(0.01));
    CHECK(hi == doctest::Approx(0.99));
    const Matrix back = feats::invert_norm(n, stats);
    for (std::size_t r = 0; r < 40; ++r)
      for (std::size_t c = 0; c < 2; ++c)
        CHECK(back(r, c) == doctest::Approx(data(r, c)).epsilon(1e-6));
  }

  SUBCASE("mean-variance yields zero mean unit std on the fit data") {
    const auto stats = feats::fit_norm({&data}, feats::NormStats::Kind::kMeanVar);
    const Matrix n = feats::apply_norm(data, stats);
    for (std::size_t c = 0; c < 2; ++c) {
      double mean = 0.0, sq = 0.0;
      for (std::size_t r = 0; r < 40; ++r) {
        mean += n(r, c);
        sq += n(r, c) * n(r, c);
      }
      mean /= 40.0;
      CHECK(std::abs(mean) < 1e-6);
      CHECK(std::sqrt(sq / 40.0 - mean * mean) == doctest::Approx(1.0).epsilon(1e-6));
    }
    // constant dim maps to zero and inverts to the constant
    CHECK(n(0, 2) == doctest::Approx(0.0));
    const Matrix back = feats::invert_norm(n, stats);
    CHECK(back(0, 2) == doctest::Approx(4.0));
    for (std::size_t r = 0; r < 40; ++r)
      for (std::size_t c = 0; c < 3; ++c)
        CHECK(back(r, c) == doctest::Approx(data(r, c)).epsilon(1e-6));
  }

  SUBCASE("json round trip") {
    const auto stats = feats::fit_norm({&data}, feats::NormStats::Kind::kMeanVar);
    nlohmann::json j;
    feats::to_json(j, stats);
    feats::NormStats back;
    feats::from_json(j, back);
    CHECK(back.kind == stats.kind);
    CHECK(back.lo_or_mean == stats.lo_or_mean);
    CHECK(back.hi_or_std == stats.hi_or_std);
  }
}

}  // TEST_SUITE
