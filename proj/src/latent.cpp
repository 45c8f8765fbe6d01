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

#include "intovar/latent.hpp"

#include <cmath>

#include "intovar/errors.hpp"

namespace intovar::latent {

LatentSpec::Mode latent_mode_from_name(const std::string& name) {
  if (name == "peak") return LatentSpec::Mode::kPeak;
  if (name == "tail") return LatentSpec::Mode::kTail;
  if (name == "posterior") return LatentSpec::Mode::kPosterior;
  throw DataError("unknown latent mode '" + name + "'");
}

const char* latent_mode_name(LatentSpec::Mode mode) {
  switch (mode) {
    case LatentSpec::Mode::kPeak: return "peak";
    case LatentSpec::Mode::kTail: return "tail";
    default: return "posterior";
  }
}

std::vector<double> sample_unit_sphere(std::size_t dim, Rng& rng) {
  if (dim == 0) throw DataError("sample_unit_sphere: dim must be >= 1");
  std::vector<double> z(dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& v : z) {
      v = rng.normal();
      norm += v * v;
    }
  } while (norm == 0.0);
  norm = std::sqrt(norm);
  for (double& v : z) v /= norm;
  return z;
}

std::vector<double> make_latent(const LatentSpec& spec, std::size_t dim,
                                Rng& rng, const GaussianPosterior* posterior,
                                const std::vector<double>* eps_override) {
  switch (spec.mode) {
    case LatentSpec::Mode::kPeak:
      return std::vector<double>(dim, 0.0);
    case LatentSpec::Mode::kTail: {
      if (!(spec.radius > 0.0))
        throw DataError("make_latent: tail radius must be > 0");
      std::vector<double> z = sample_unit_sphere(dim, rng);
      for (double& v : z) v *= spec.radius;
      return z;
    }
    default: {
      if (!posterior || posterior->mu.size() != dim)
        throw DataError("make_latent: posterior required for posterior mode");
      std::vector<double> z(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        const double eps = eps_override ? (*eps_override)[i] : rng.normal();
        z[i] = posterior->mu[i] + std::exp(0.5 * posterior->log_var[i]) * eps;
      }
      return z;
    }
  }
}

SelectionStrategy selection_strategy_from_name(const std::string& name) {
  if (name == "argmax") return SelectionStrategy::kArgmaxWeights;
  if (name == "random") return SelectionStrategy::kPerFrameRandom;
  if (name == "fixed") return SelectionStrategy::kFixed;
  throw DataError("unknown component-selection strategy '" + name + "'");
}

mlpg::TrajectoryDistribution select_components(const MixtureFrames& mix,
                                               SelectionStrategy strategy,
                                               int fixed_component, Rng& rng) {
  const std::size_t T = mix.weights.rows();
  const std::size_t K = mix.n_components;
  const std::size_t D = mix.dims;
  if (strategy == SelectionStrategy::kFixed &&
      (fixed_component < 0 || static_cast<std::size_t>(fixed_component) >= K))
    throw DataError("select_components: fixed component out of range");

  mlpg::TrajectoryDistribution out;
  out.means = Matrix(T, D);
  out.variances = Matrix(T, D);
  for (std::size_t t = 0; t < T; ++t) {
    std::size_t pick = 0;
    switch (strategy) {
      case SelectionStrategy::kArgmaxWeights: {
        for (std::size_t kk = 1; kk < K; ++kk)
          if (mix.weights(t, kk) > mix.weights(t, pick)) pick = kk;
        break;
      }
      case SelectionStrategy::kPerFrameRandom: {
        const double u = rng.uniform();
        double acc = 0.0;
        pick = K - 1;
        for (std::size_t kk = 0; kk < K; ++kk) {
          acc += mix.weights(t, kk);
          if (u < acc) {
            pick = kk;
            break;
          }
        }
        break;
      }
      case SelectionStrategy::kFixed:
        pick = static_cast<std::size_t>(fixed_component);
        break;
    }
    for (std::size_t dd = 0; dd < D; ++dd) {
      out.means(t, dd) = mix.means(t, pick * D + dd);
      out.variances(t, dd) = mix.variances(t, pick * D + dd);
    }
  }
  return out;
}

}  // namespace intovar::latent
