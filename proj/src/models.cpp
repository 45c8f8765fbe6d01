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

#include "intovar/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "intovar/errors.hpp"
#include "intovar/fmat.hpp"
#include "intovar/losses.hpp"
#include "intovar/optim.hpp"
#include "intovar/parallel.hpp"
#include "intovar/rng.hpp"

namespace intovar::models {

namespace {

constexpr std::size_t kAcousticDims = 3;

Matrix concat_cols(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double* row = out.row(r);
    const double* ra = a.row(r);
    for (std::size_t c = 0; c < a.cols(); ++c) row[c] = ra[c];
    const double* rb = b.row(r);
    for (std::size_t c = 0; c < b.cols(); ++c) row[a.cols() + c] = rb[c];
  }
  return out;
}

Matrix broadcast_latent(const Matrix& ling, const std::vector<double>& z) {
  Matrix out(ling.rows(), ling.cols() + z.size());
  for (std::size_t r = 0; r < ling.rows(); ++r) {
    double* row = out.row(r);
    const double* rl = ling.row(r);
    for (std::size_t c = 0; c < ling.cols(); ++c) row[c] = rl[c];
    for (std::size_t c = 0; c < z.size(); ++c) row[ling.cols() + c] = z[c];
  }
  return out;
}

void build_nets(TrainedModel& m, std::size_t d_ling) {
  const ModelConfig& c = m.config;
  m.layout = net::ParamLayout();
  std::size_t head_out = kAcousticDims;
  std::size_t dec_in = d_ling;
  if (c.kind == ModelKind::kMdn)
    head_out = c.n_components * (1 + 2 * kAcousticDims);
  if (c.kind == ModelKind::kVae) dec_in = d_ling + c.latent_dim;
  m.dec_trunk = net::add_trunk(m.layout, "dec", dec_in, c.ff_units,
                               c.gru_units, c.n_gru);
  m.dec_head = net::add_linear(m.layout, "dec.head", head_out, c.gru_units);
  m.has_encoder = c.kind == ModelKind::kVae;
  if (m.has_encoder) {
    m.enc_trunk = net::add_trunk(m.layout, "enc", d_ling + kAcousticDims,
                                 c.ff_units, c.gru_units, c.n_gru);
    m.enc_head =
        net::add_linear(m.layout, "enc.head", 2 * c.latent_dim, c.gru_units);
  }
}

struct Prepared {
  const corpus::Utterance* utt = nullptr;
  Matrix ling;  // normalized linguistic features
  Matrix ac;    // normalized acoustic targets
};

struct EvalResult {
  double loss = 0.0;
  double recon = 0.0;
  double kl = 0.0;
};

// Loss (and optionally gradients) for one utterance. For the VAE, eps null
// means decode at the posterior mean (used for validation).
EvalResult eval_utterance(const TrainedModel& m, const Prepared& p, double beta,
                          const std::vector<double>* eps,
                          std::vector<double>* grads) {
  std::span<const double> params(m.params);
  std::span<double> gspan;
  if (grads) gspan = std::span<double>(*grads);
  EvalResult res;

  if (m.config.kind == ModelKind::kVae) {
    const std::size_t L = m.config.latent_dim;
    const Matrix enc_in = concat_cols(p.ling, p.ac);
    net::TrunkTape etape;
    const Matrix enc_top =
        net::trunk_forward(params, m.enc_trunk, enc_in, grads ? &etape : nullptr);
    Matrix h_last(1, m.config.gru_units);
    for (std::size_t j = 0; j < m.config.gru_units; ++j)
      h_last(0, j) = enc_top(enc_top.rows() - 1, j);
    const Matrix enc_out = net::linear_forward(params, m.enc_head, h_last);
    std::vector<double> mu(L), log_var(L);
    for (std::size_t j = 0; j < L; ++j) {
      mu[j] = enc_out(0, j);
      log_var[j] = enc_out(0, L + j);
    }
    std::vector<double> z(L);
    for (std::size_t j = 0; j < L; ++j) {
      const double e = eps ? (*eps)[j] : 0.0;
      z[j] = mu[j] + std::exp(0.5 * log_var[j]) * e;
    }
    const Matrix dec_in = broadcast_latent(p.ling, z);
    net::TrunkTape dtape;
    const Matrix dec_top =
        net::trunk_forward(params, m.dec_trunk, dec_in, grads ? &dtape : nullptr);
    const Matrix out = net::linear_forward(params, m.dec_head, dec_top);
    Matrix d_out;
    res.recon = losses::mse_loss(out, p.ac, grads ? &d_out : nullptr);
    std::vector<double> d_mu_kl, d_lv_kl;
    res.kl = losses::gaussian_kl(mu, log_var, grads ? &d_mu_kl : nullptr,
                                 grads ? &d_lv_kl : nullptr);
    res.loss = res.recon + beta * res.kl;
    if (!grads) return res;

    const Matrix d_dec_top =
        net::linear_backward(params, m.dec_head, dec_top, d_out, gspan, true);
    const Matrix d_dec_in = net::trunk_backward(params, m.dec_trunk, dec_in,
                                                dtape, d_dec_top, gspan, true);
    std::vector<double> dz(L, 0.0);
    for (std::size_t t = 0; t < d_dec_in.rows(); ++t) {
      const double* row = d_dec_in.row(t);
      for (std::size_t j = 0; j < L; ++j) dz[j] += row[p.ling.cols() + j];
    }
    Matrix d_enc_out(1, 2 * L);
    for (std::size_t j = 0; j < L; ++j) {
      const double e = eps ? (*eps)[j] : 0.0;
      d_enc_out(0, j) = dz[j] + beta * d_mu_kl[j];
      d_enc_out(0, L + j) =
          dz[j] * 0.5 * std::exp(0.5 * log_var[j]) * e + beta * d_lv_kl[j];
    }
    const Matrix d_h_last =
        net::linear_backward(params, m.enc_head, h_last, d_enc_out, gspan, true);
    Matrix d_enc_top(enc_top.rows(), enc_top.cols());
    for (std::size_t j = 0; j < enc_top.cols(); ++j)
      d_enc_top(enc_top.rows() - 1, j) = d_h_last(0, j);
    net::trunk_backward(params, m.enc_trunk, enc_in, etape, d_enc_top, gspan,
                        false);
    return res;
  }

  net::TrunkTape tape;
  const Matrix top =
      net::trunk_forward(params, m.dec_trunk, p.ling, grads ? &tape : nullptr);
  const Matrix out = net::linear_forward(params, m.dec_head, top);
  Matrix d_out(out.rows(), out.cols());

  if (m.config.kind == ModelKind::kRnn) {
    Matrix d_pred;
    res.recon = losses::mse_loss(out, p.ac, grads ? &d_pred : nullptr);
    res.loss = res.recon;
    if (!grads) return res;
    d_out = std::move(d_pred);
  } else {
    const std::size_t K = m.config.n_components;
    const std::size_t T = out.rows();
    Matrix logits(T, K), means(T, K * kAcousticDims), lvars(T, K * kAcousticDims);
    for (std::size_t t = 0; t < T; ++t) {
      const double* row = out.row(t);
      for (std::size_t kk = 0; kk < K; ++kk) logits(t, kk) = row[kk];
      for (std::size_t i = 0; i < K * kAcousticDims; ++i) {
        means(t, i) = row[K + i];
        lvars(t, i) = row[K + K * kAcousticDims + i];
      }
    }
    Matrix dl, dm, dv;
    res.recon = losses::mdn_nll(logits, means, lvars, p.ac,
                                grads ? &dl : nullptr, grads ? &dm : nullptr,
                                grads ? &dv : nullptr);
    res.loss = res.recon;
    if (!grads) return res;
    for (std::size_t t = 0; t < T; ++t) {
      double* row = d_out.row(t);
      for (std::size_t kk = 0; kk < K; ++kk) row[kk] = dl(t, kk);
      for (std::size_t i = 0; i < K * kAcousticDims; ++i) {
        row[K + i] = dm(t, i);
        row[K + K * kAcousticDims + i] = dv(t, i);
      }
    }
  }

  const Matrix d_top =
      net::linear_backward(params, m.dec_head, top, d_out, gspan, true);
  net::trunk_backward(params, m.dec_trunk, p.ling, tape, d_top, gspan, false);
  return res;
}

}  // namespace

ModelKind kind_from_name(const std::string& name) {
  if (name == "rnn") return ModelKind::kRnn;
  if (name == "mdn") return ModelKind::kMdn;
  if (name == "vae") return ModelKind::kVae;
  throw DataError("unknown model kind '" + name + "'");
}

const char* kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kRnn: return "rnn";
    case ModelKind::kMdn: return "mdn";
    default: return "vae";
  }
}

void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = nlohmann::json{{"kind", kind_name(c.kind)},
                     {"latent_dim", c.latent_dim},
                     {"n_components", c.n_components},
                     {"kl_target_weight", c.kl_target_weight},
                     {"kl_anneal_epochs", c.kl_anneal_epochs},
                     {"batch_size", c.batch_size},
                     {"max_epochs", c.max_epochs},
                     {"patience", c.patience},
                     {"seed", c.seed},
                     {"ff_units", c.ff_units},
                     {"gru_units", c.gru_units},
                     {"n_gru", c.n_gru},
                     {"lr_peak", c.lr_peak},
                     {"lr_warmup", c.lr_warmup},
                     {"n_threads", c.n_threads}};
}

void from_json(const nlohmann::json& j, ModelConfig& c) {
  c.kind = kind_from_name(j.at("kind").get<std::string>());
  j.at("latent_dim").get_to(c.latent_dim);
  j.at("n_components").get_to(c.n_components);
  j.at("kl_target_weight").get_to(c.kl_target_weight);
  j.at("kl_anneal_epochs").get_to(c.kl_anneal_epochs);
  j.at("batch_size").get_to(c.batch_size);
  j.at("max_epochs").get_to(c.max_epochs);
  j.at("patience").get_to(c.patience);
  j.at("seed").get_to(c.seed);
  j.at("ff_units").get_to(c.ff_units);
  j.at("gru_units").get_to(c.gru_units);
  j.at("n_gru").get_to(c.n_gru);
  j.at("lr_peak").get_to(c.lr_peak);
  j.at("lr_warmup").get_to(c.lr_warmup);
  j.at("n_threads").get_to(c.n_threads);
}

double kl_beta(const ModelConfig& config, std::size_t epoch) {
  if (config.kind != ModelKind::kVae || epoch <= 1) return 0.0;
  const double frac = static_cast<double>(epoch - 1) /
                      static_cast<double>(config.kl_anneal_epochs);
  return config.kl_target_weight * std::min(1.0, frac);
}

Matrix acoustic_targets(const corpus::Utterance& utt) {
  return feats::compute_deltas(feats::interpolate_logf0(utt.logf0, utt.voicing));
}

TrainedModel train(const ModelConfig& config,
                   const std::vector<corpus::Utterance>& corpus) {
  std::vector<const corpus::Utterance*> train_utts, val_utts;
  for (const corpus::Utterance& u : corpus) {
    if (u.split == corpus::Split::kTrain) train_utts.push_back(&u);
    if (u.split == corpus::Split::kVal) val_utts.push_back(&u);
  }
  if (train_utts.empty()) throw DataError("train: empty train split");
  if (val_utts.empty()) throw DataError("train: empty val split");

  TrainedModel model;
  model.config = config;

  // Normalization statistics from the training split only.
  std::vector<Matrix> train_ac(train_utts.size());
  for (std::size_t i = 0; i < train_utts.size(); ++i)
    train_ac[i] = acoustic_targets(*train_utts[i]);
  {
    std::vector<const Matrix*> ling_ptrs, ac_ptrs;
    for (const corpus::Utterance* u : train_utts)
      ling_ptrs.push_back(&u->linguistic);
    for (const Matrix& m : train_ac) ac_ptrs.push_back(&m);
    model.ling_norm = feats::fit_norm(ling_ptrs, feats::NormStats::Kind::kMinMax);
    model.acoustic_norm =
        feats::fit_norm(ac_ptrs, feats::NormStats::Kind::kMeanVar);
  }

  auto prepare = [&](const corpus::Utterance& u, const Matrix* raw_ac) {
    Prepared p;
    p.utt = &u;
    p.ling = feats::apply_norm(u.linguistic, model.ling_norm);
    p.ac = feats::apply_norm(raw_ac ? *raw_ac : acoustic_targets(u),
                             model.acoustic_norm);
    return p;
  };
  std::vector<Prepared> train_data(train_utts.size()), val_data(val_utts.size());
  for (std::size_t i = 0; i < train_utts.size(); ++i)
    train_data[i] = prepare(*train_utts[i], &train_ac[i]);
  train_ac.clear();
  train_ac.shrink_to_fit();
  for (std::size_t i = 0; i < val_utts.size(); ++i)
    val_data[i] = prepare(*val_utts[i], nullptr);

  // Global per-stream std of the normalized training targets.
  {
    std::array<double, kAcousticDims> sum{}, sumsq{};
    std::size_t n = 0;
    for (const Prepared& p : train_data) {
      n += p.ac.rows();
      for (std::size_t t = 0; t < p.ac.rows(); ++t)
        for (std::size_t s = 0; s < kAcousticDims; ++s) {
          sum[s] += p.ac(t, s);
          sumsq[s] += p.ac(t, s) * p.ac(t, s);
        }
    }
    for (std::size_t s = 0; s < kAcousticDims; ++s) {
      const double mean = sum[s] / static_cast<double>(n);
      model.stream_std[s] =
          std::sqrt(std::max(sumsq[s] / static_cast<double>(n) - mean * mean,
                             1e-16));
    }
  }

  build_nets(model, train_data[0].ling.cols());
  model.params.assign(model.layout.size(), 0.0);
  const Rng root(config.seed);
  {
    Rng init_rng = root.substream("init");
    net::init_params(model.layout, model.params, init_rng);
  }

  optim::AdamState adam(model.params.size());
  std::vector<std::vector<double>> slot_grads(
      std::min(config.batch_size, train_data.size()),
      std::vector<double>(model.params.size(), 0.0));
  std::vector<EvalResult> slot_results(slot_grads.size());
  std::vector<double> batch_grad(model.params.size());

  std::vector<std::size_t> order(train_data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<double> best_params;
  double best_val = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  std::size_t global_step = 0;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const double beta = kl_beta(config, epoch);
    {
      Rng shuffle_rng = root.substream("shuffle").substream(epoch);
      for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1],
                  order[static_cast<std::size_t>(
                      shuffle_rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
    }

    double epoch_loss = 0.0, epoch_recon = 0.0, epoch_kl = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t bn = std::min(config.batch_size, order.size() - start);
      parallel_for(bn, config.n_threads, [&](std::size_t slot) {
        const std::size_t idx = order[start + slot];
        std::fill(slot_grads[slot].begin(), slot_grads[slot].end(), 0.0);
        std::vector<double> eps;
        std::vector<double>* eps_ptr = nullptr;
        if (config.kind == ModelKind::kVae) {
          Rng eps_rng =
              root.substream("eps").substream(epoch).substream(idx);
          eps.resize(config.latent_dim);
          for (double& e : eps) e = eps_rng.normal();
          eps_ptr = &eps;
        }
        slot_results[slot] = eval_utterance(model, train_data[idx], beta,
                                            eps_ptr, &slot_grads[slot]);
      });

      std::fill(batch_grad.begin(), batch_grad.end(), 0.0);
      double batch_loss = 0.0;
      for (std::size_t slot = 0; slot < bn; ++slot) {
        batch_loss += slot_results[slot].loss;
        epoch_loss += slot_results[slot].loss;
        epoch_recon += slot_results[slot].recon;
        epoch_kl += slot_results[slot].kl;
        const std::vector<double>& g = slot_grads[slot];
        for (std::size_t i = 0; i < batch_grad.size(); ++i)
          batch_grad[i] += g[i];
      }
      batch_loss /= static_cast<double>(bn);
      const double inv = 1.0 / static_cast<double>(bn);
      for (double& g : batch_grad) g *= inv;
      if (!std::isfinite(batch_loss))
        throw NumericalError("train: diverged (non-finite loss) at epoch " +
                             std::to_string(epoch));
      ++global_step;
      optim::adam_step(model.params, batch_grad, adam,
                       optim::lr_at_step(global_step, config.lr_peak,
                                         config.lr_warmup));
    }

    // Validation at the posterior mean, scored against the final KL weight
    // so the early-stopping objective does not drift with annealing.
    std::vector<EvalResult> val_results(val_data.size());
    parallel_for(val_data.size(), config.n_threads, [&](std::size_t i) {
      val_results[i] = eval_utterance(model, val_data[i],
                                      config.kl_target_weight, nullptr, nullptr);
    });
    double val_loss = 0.0;
    for (const EvalResult& r : val_results) val_loss += r.loss;
    val_loss /= static_cast<double>(val_data.size());

    EpochLog log;
    log.epoch = epoch;
    log.beta = beta;
    log.train_loss = epoch_loss / static_cast<double>(order.size());
    log.train_recon = epoch_recon / static_cast<double>(order.size());
    log.train_kl = epoch_kl / static_cast<double>(order.size());
    log.val_loss = val_loss;
    model.log.push_back(log);

    if (val_loss < best_val) {
      best_val = val_loss;
      best_params = model.params;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  if (!best_params.empty()) model.params = std::move(best_params);
  return model;
}

latent::GaussianPosterior encode(const TrainedModel& model,
                                 const corpus::Utterance& utt) {
  if (model.config.kind != ModelKind::kVae)
    throw DataError("encode: model is not a vae");
  const Matrix ling = feats::apply_norm(utt.linguistic, model.ling_norm);
  const Matrix ac = feats::apply_norm(acoustic_targets(utt), model.acoustic_norm);
  const Matrix enc_in = concat_cols(ling, ac);
  const Matrix enc_top =
      net::trunk_forward(model.params, model.enc_trunk, enc_in, nullptr);
  Matrix h_last(1, model.config.gru_units);
  for (std::size_t j = 0; j < model.config.gru_units; ++j)
    h_last(0, j) = enc_top(enc_top.rows() - 1, j);
  const Matrix enc_out = net::linear_forward(model.params, model.enc_head, h_last);
  latent::GaussianPosterior post;
  const std::size_t L = model.config.latent_dim;
  post.mu.resize(L);
  post.log_var.resize(L);
  for (std::size_t j = 0; j < L; ++j) {
    post.mu[j] = enc_out(0, j);
    post.log_var[j] = enc_out(0, L + j);
  }
  return post;
}

latent::MixtureFrames predict_mixture(const TrainedModel& model,
                                      const corpus::Utterance& utt) {
  if (model.config.kind != ModelKind::kMdn)
    throw DataError("predict_mixture: model is not a mixture model");
  const Matrix ling = feats::apply_norm(utt.linguistic, model.ling_norm);
  const Matrix top =
      net::trunk_forward(model.params, model.dec_trunk, ling, nullptr);
  const Matrix out = net::linear_forward(model.params, model.dec_head, top);
  const std::size_t K = model.config.n_components;
  const std::size_t T = out.rows();
  latent::MixtureFrames mix;
  mix.n_components = K;
  mix.dims = kAcousticDims;
  mix.weights = Matrix(T, K);
  mix.means = Matrix(T, K * kAcousticDims);
  mix.variances = Matrix(T, K * kAcousticDims);
  for (std::size_t t = 0; t < T; ++t) {
    const double* row = out.row(t);
    double lmax = row[0];
    for (std::size_t kk = 1; kk < K; ++kk) lmax = std::max(lmax, row[kk]);
    double lse = 0.0;
    for (std::size_t kk = 0; kk < K; ++kk) lse += std::exp(row[kk] - lmax);
    for (std::size_t kk = 0; kk < K; ++kk)
      mix.weights(t, kk) = std::exp(row[kk] - lmax) / lse;
    for (std::size_t i = 0; i < K * kAcousticDims; ++i) {
      mix.means(t, i) = row[K + i];
      mix.variances(t, i) = std::max(std::exp(row[K + K * kAcousticDims + i]),
                                     losses::kMdnVarianceFloor);
    }
  }
  return mix;
}

mlpg::TrajectoryDistribution predict(const TrainedModel& model,
                                     const corpus::Utterance& utt,
                                     const PredictOptions& options) {
  const bool is_vae = model.config.kind == ModelKind::kVae;
  if (is_vae && (!options.latent || options.latent->size() != model.config.latent_dim))
    throw DataError("predict: vae requires a latent of dimension " +
                    std::to_string(model.config.latent_dim));
  if (!is_vae && options.latent)
    throw DataError("predict: latent only applies to vae models");

  mlpg::TrajectoryDistribution dist;
  if (model.config.kind == ModelKind::kMdn) {
    const latent::MixtureFrames mix = predict_mixture(model, utt);
    Rng rng(options.selection_seed);
    dist = latent::select_components(mix, options.strategy,
                                     options.fixed_component, rng);
  } else {
    const Matrix ling = feats::apply_norm(utt.linguistic, model.ling_norm);
    const Matrix input =
        is_vae ? broadcast_latent(ling, *options.latent) : ling;
    const Matrix top =
        net::trunk_forward(model.params, model.dec_trunk, input, nullptr);
    dist.means = net::linear_forward(model.params, model.dec_head, top);
    dist.variances = Matrix(dist.means.rows(), kAcousticDims);
    for (std::size_t t = 0; t < dist.variances.rows(); ++t)
      for (std::size_t s = 0; s < kAcousticDims; ++s)
        dist.variances(t, s) = model.stream_std[s] * model.stream_std[s];
  }
  dist.units = mlpg::Units::kNormalized;

  if (options.units == mlpg::Units::kDenormalized) {
    dist.means = feats::invert_norm(dist.means, model.acoustic_norm);
    for (std::size_t t = 0; t < dist.variances.rows(); ++t)
      for (std::size_t s = 0; s < kAcousticDims; ++s) {
        const double sd = std::max(model.acoustic_norm.hi_or_std[s], 1e-8);
        dist.variances(t, s) *= sd * sd;
      }
    dist.units = mlpg::Units::kDenormalized;
  }
  return dist;
}

std::vector<double> synthesize_contour(const TrainedModel& model,
                                       const corpus::Utterance& utt,
                                       const PredictOptions& options) {
  PredictOptions normalized = options;
  normalized.units = mlpg::Units::kNormalized;
  const mlpg::TrajectoryDistribution dist = predict(model, utt, normalized);
  std::vector<double> contour = mlpg::generate_trajectory(dist);
  for (double& v : contour)
    v = feats::invert_norm_value(v, model.acoustic_norm, 0);
  return contour;
}

namespace {

const char* activation_tag(const std::string& name) {
  if (name.find(".ff.") != std::string::npos) return "tanh";
  if (name.find(".gru") != std::string::npos) return "gru";
  return "linear";
}

std::string tensor_filename(const std::string& name) {
  std::string s = name;
  std::replace(s.begin(), s.end(), '.', '_');
  return s + ".fmat";
}

}  // namespace

void save_model(const TrainedModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json j;
  j["kind"] = kind_name(model.config.kind);
  j["config"] = model.config;
  j["ling_norm"] = model.ling_norm;
  j["acoustic_norm"] = model.acoustic_norm;
  j["stream_std"] = model.stream_std;
  nlohmann::json log = nlohmann::json::array();
  for (const EpochLog& e : model.log)
    log.push_back({{"epoch", e.epoch},
                   {"beta", e.beta},
                   {"train_loss", e.train_loss},
                   {"train_recon", e.train_recon},
                   {"train_kl", e.train_kl},
                   {"val_loss", e.val_loss}});
  j["log"] = log;
  nlohmann::json tensors = nlohmann::json::array();
  for (const net::TensorRef& t : model.layout.tensors()) {
    const std::string file = tensor_filename(t.name);
    tensors.push_back({{"name", t.name},
                       {"rows", t.rows},
                       {"cols", t.cols},
                       {"file", file},
                       {"activation", activation_tag(t.name)}});
    Matrix m(t.rows, t.cols);
    for (std::size_t i = 0; i < t.size(); ++i)
      m.data()[i] = model.params[t.offset + i];
    write_matrix(dir / file, m);
  }
  j["tensors"] = tensors;
  std::ofstream out(dir / "manifest.json", std::ios::trunc);
  if (!out) throw DataError("save_model: cannot write manifest in " + dir.string());
  out << j.dump(2) << "\n";
}

TrainedModel load_model(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw DataError("load_model: missing manifest in " + dir.string());
  nlohmann::json j;
  in >> j;
  TrainedModel model;
  model.config = j.at("config").get<ModelConfig>();
  model.ling_norm = j.at("ling_norm").get<feats::NormStats>();
  model.acoustic_norm = j.at("acoustic_norm").get<feats::NormStats>();
  const auto ss = j.at("stream_std").get<std::vector<double>>();
  if (ss.size() != kAcousticDims) throw DataError("load_model: bad stream_std");
  std::copy(ss.begin(), ss.end(), model.stream_std.begin());
  for (const nlohmann::json& e : j.at("log")) {
    EpochLog log;
    e.at("epoch").get_to(log.epoch);
    e.at("beta").get_to(log.beta);
    e.at("train_loss").get_to(log.train_loss);
    e.at("train_recon").get_to(log.train_recon);
    e.at("train_kl").get_to(log.train_kl);
    e.at("val_loss").get_to(log.val_loss);
    model.log.push_back(log);
  }
  build_nets(model, model.ling_norm.lo_or_mean.size());
  model.params.assign(model.layout.size(), 0.0);
  for (const nlohmann::json& t : j.at("tensors")) {
    const net::TensorRef& ref = model.layout.find(t.at("name").get<std::string>());
    if (ref.rows != t.at("rows").get<std::size_t>() ||
        ref.cols != t.at("cols").get<std::size_t>())
      throw DataError("load_model: shape mismatch for tensor " + ref.name);
    const Matrix m = read_matrix(dir / t.at("file").get<std::string>());
    if (m.rows() != ref.rows || m.cols() != ref.cols)
      throw DataError("load_model: file shape mismatch for " + ref.name);
    for (std::size_t i = 0; i < ref.size(); ++i)
      model.params[ref.offset + i] = m.data()[i];
  }
  return model;
}

}  // namespace intovar::models
