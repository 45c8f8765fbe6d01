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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "intovar/corpus.hpp"
#include "intovar/feats.hpp"
#include "intovar/latent.hpp"
#include "intovar/matrix.hpp"
#include "intovar/mlpg.hpp"
#include "intovar/net.hpp"

namespace intovar::models {

enum class ModelKind { kRnn, kMdn, kVae };

ModelKind kind_from_name(const std::string& name);
const char* kind_name(ModelKind kind);

struct ModelConfig {
  ModelKind kind = ModelKind::kRnn;
  std::size_t latent_dim = 16;      // vae
  std::size_t n_components = 4;     // mdn
  double kl_target_weight = 0.01;   // vae
  std::size_t kl_anneal_epochs = 40;
  std::size_t batch_size = 32;
  std::size_t max_epochs = 100;
  std::size_t patience = 5;
  std::uint64_t seed = 0;
  std::size_t ff_units = 256;
  std::size_t gru_units = 64;
  std::size_t n_gru = 3;
  double lr_peak = 0.005;
  std::size_t lr_warmup = 1000;
  std::size_t n_threads = 2;
};

void to_json(nlohmann::json& j, const ModelConfig& c);
void from_json(const nlohmann::json& j, ModelConfig& c);

// KL weight for a 1-based epoch: zero during epoch 1, then climbing
// linearly to the target across kl_anneal_epochs (epochs 2..1+anneal).
double kl_beta(const ModelConfig& config, std::size_t epoch);

struct EpochLog {
  std::size_t epoch = 0;
  double beta = 0.0;
  double train_loss = 0.0;
  double train_recon = 0.0;
  double train_kl = 0.0;
  double val_loss = 0.0;
};

// Everything synthesis needs; immutable after training.
struct TrainedModel {
  ModelConfig config;
  feats::NormStats ling_norm;      // min-max over linguistic dims
  feats::NormStats acoustic_norm;  // mean-variance over the 3 streams
  // Global per-stream std of the normalized training targets; the MLPG
  // variance source for every model except the mixture model.
  std::array<double, 3> stream_std = {1.0, 1.0, 1.0};
  net::ParamLayout layout;
  std::vector<double> params;
  net::TrunkRef dec_trunk;
  net::LinearRef dec_head;
  bool has_encoder = false;
  net::TrunkRef enc_trunk;
  net::LinearRef enc_head;
  std::vector<EpochLog> log;
};

// Interpolated logF0 plus dynamic features, unnormalized.
Matrix acoustic_targets(const corpus::Utterance& utt);

// Trains on the corpus's train split with validation-based early stopping.
// Deterministic given config.seed (and independent of n_threads).
TrainedModel train(const ModelConfig& config,
                   const std::vector<corpus::Utterance>& corpus);

latent::GaussianPosterior encode(const TrainedModel& model,
                                 const corpus::Utterance& utt);

struct PredictOptions {
  const std::vector<double>* latent = nullptr;  // required for vae
  latent::SelectionStrategy strategy = latent::SelectionStrategy::kArgmaxWeights;
  int fixed_component = 0;
  std::uint64_t selection_seed = 0;
  mlpg::Units units = mlpg::Units::kDenormalized;
};

// Full per-frame mixture (normalized domain); mixture models only.
latent::MixtureFrames predict_mixture(const TrainedModel& model,
                                      const corpus::Utterance& utt);

// Per-frame trajectory distribution. rnn/vae use the global training stds
// as variances; the mixture model uses its predicted, floored variances
// reduced by the selection strategy. kNormalized keeps the model's output
// domain (where the variance floor lives); kDenormalized maps means and
// variances through the acoustic normalization stats.
mlpg::TrajectoryDistribution predict(const TrainedModel& model,
                                     const corpus::Utterance& utt,
                                     const PredictOptions& options = {});

// predict (normalized) -> MLPG -> denormalized static logF0 contour.
std::vector<double> synthesize_contour(const TrainedModel& model,
                                       const corpus::Utterance& utt,
                                       const PredictOptions& options = {});

void save_model(const TrainedModel& model, const std::filesystem::path& dir);
TrainedModel load_model(const std::filesystem::path& dir);

}  // namespace intovar::models
