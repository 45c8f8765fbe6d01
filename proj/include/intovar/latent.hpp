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
#include <optional>
#include <string>
#include <vector>

#include "intovar/matrix.hpp"
#include "intovar/mlpg.hpp"
#include "intovar/rng.hpp"

namespace intovar::latent {

// Sentence-level approximate posterior.
struct GaussianPosterior {
  std::vector<double> mu;
  std::vector<double> log_var;
};

struct LatentSpec {
  enum class Mode { kPeak, kTail, kPosterior };
  Mode mode = Mode::kPeak;
  double radius = 3.0;  // tail only
  std::uint64_t seed = 0;
};

LatentSpec::Mode latent_mode_from_name(const std::string& name);
const char* latent_mode_name(LatentSpec::Mode mode);

// Uniform sample on the unit hypersphere: g ~ N(0, I) normalized.
std::vector<double> sample_unit_sphere(std::size_t dim, Rng& rng);

// peak -> zero vector; tail -> radius * unit-sphere sample; posterior ->
// mu + sigma . eps with eps ~ N(0, I) (eps_override is the test hook).
std::vector<double> make_latent(const LatentSpec& spec, std::size_t dim,
                                Rng& rng,
                                const GaussianPosterior* posterior = nullptr,
                                const std::vector<double>* eps_override = nullptr);

// Frame-level Gaussian mixture as predicted by the mixture model.
struct MixtureFrames {
  std::size_t n_components = 0;
  std::size_t dims = 0;
  Matrix weights;    // T x K, rows on the simplex
  Matrix means;      // T x (K*D)
  Matrix variances;  // T x (K*D), floored
};

enum class SelectionStrategy { kArgmaxWeights, kPerFrameRandom, kFixed };

SelectionStrategy selection_strategy_from_name(const std::string& name);

// Reduce a mixture to per-frame (mean, variance) triples by picking one
// component per frame.
mlpg::TrajectoryDistribution select_components(const MixtureFrames& mix,
                                               SelectionStrategy strategy,
                                               int fixed_component, Rng& rng);

}  // namespace intovar::latent
