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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "intovar/baselines.hpp"
#include "intovar/corpus.hpp"
#include "intovar/errors.hpp"
#include "intovar/evalkit.hpp"
#include "intovar/fmat.hpp"
#include "intovar/manifest.hpp"
#include "intovar/models.hpp"
#include "intovar/svg.hpp"

namespace intovar::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

Matrix contour_to_matrix(const std::vector<double>& c) {
  Matrix m(c.size(), 1);
  for (std::size_t t = 0; t < c.size(); ++t) m(t, 0) = c[t];
  return m;
}

std::vector<corpus::Utterance> load_split(const std::string& dir,
                                          const std::string& split,
                                          const std::string& only_utt) {
  auto utts = corpus::load_corpus(dir);
  const corpus::Split want = corpus::split_from_name(split);
  std::vector<corpus::Utterance> out;
  for (auto& u : utts) {
    if (!only_utt.empty()) {
      if (u.id == only_utt) out.push_back(std::move(u));
      continue;
    }
    if (u.split == want) out.push_back(std::move(u));
  }
  if (!only_utt.empty() && out.empty())
    throw DataError("no utterance with id '" + only_utt + "' in corpus");
  if (out.empty())
    throw DataError("corpus has no utterances in split '" + split + "'");
  return out;
}

}  // namespace

int cmd_gen_corpus(const GenCorpusArgs& args) {
  Stopwatch timer;
  corpus::CorpusConfig cfg;
  cfg.n_utterances = args.n_utterances;
  cfg.n_styles = args.n_styles;
  cfg.seed = args.seed;
  cfg.d_linguistic = args.d_linguistic;
  if (args.split_fractions.size() != 3)
    throw DataError("--split-fractions needs exactly 3 values");
  std::copy(args.split_fractions.begin(), args.split_fractions.end(),
            cfg.split_fractions.begin());
  const auto utts = corpus::gen_corpus(cfg);
  corpus::save_corpus(utts, args.out);
  const json config{{"n_utterances", cfg.n_utterances},
                    {"n_styles", cfg.n_styles},
                    {"d_linguistic", cfg.d_linguistic},
                    {"split_fractions", args.split_fractions}};
  write_run_manifest(args.out, "gen-corpus", config, args.seed,
                     {"index.jsonl"}, timer.seconds());
  std::printf("gen-corpus: wrote %zu utterances to %s\n", utts.size(),
              args.out.c_str());
  return 0;
}

int cmd_train(const TrainArgs& args) {
  Stopwatch timer;
  models::ModelConfig cfg;
  cfg.kind = models::kind_from_name(args.kind);
  cfg.seed = args.seed;
  cfg.max_epochs = args.max_epochs;
  cfg.patience = args.patience;
  cfg.lr_warmup = args.lr_warmup;
  cfg.n_threads = args.n_threads;
  if (!args.config.empty()) {
    std::ifstream in(args.config);
    if (!in) throw DataError("cannot open config file " + args.config);
    json j;
    in >> j;
    json base = cfg;
    base.merge_patch(j);
    cfg = base.get<models::ModelConfig>();
  }
  const auto data = corpus::load_corpus(args.corpus);
  const auto model = models::train(cfg, data);
  models::save_model(model, fs::path(args.out) / "model");
  write_run_manifest(args.out, "train", json(cfg), cfg.seed, {"model"},
                     timer.seconds());
  std::printf("train: %s model, %zu epochs logged, last val %.5f -> %s\n",
              args.kind.c_str(), model.log.size(),
              model.log.empty() ? 0.0 : model.log.back().val_loss,
              args.out.c_str());
  return 0;
}

namespace {

// One system's contour for one utterance, per the CLI system names.
std::vector<double> render_system(const std::string& system,
                                  const models::TrainedModel* model,
                                  const corpus::Utterance& utt,
                                  const SynthArgs& args, Rng& utt_rng) {
  if (system == "copy-synth") return baselines::copy_synth(utt);
  if (system == "baseline") return baselines::quadratic_baseline(utt);

  models::PredictOptions opt;
  std::vector<double> z;
  if (system == "rnn" || system == "rnn-scaled") {
    // plain trajectory model
  } else if (system == "mdn") {
    opt.strategy = latent::selection_strategy_from_name(args.strategy);
    opt.fixed_component = args.component;
    opt.selection_seed = utt_rng.next_u64();
  } else if (system == "vae-peak") {
    z.assign(model->config.latent_dim, 0.0);
    opt.latent = &z;
  } else if (system == "vae-tail") {
    latent::LatentSpec spec;
    spec.mode = latent::LatentSpec::Mode::kTail;
    spec.radius = args.radius;
    z = latent::make_latent(spec, model->config.latent_dim, utt_rng);
    opt.latent = &z;
  } else if (system == "vae-posterior") {
    latent::LatentSpec spec;
    spec.mode = latent::LatentSpec::Mode::kPosterior;
    const auto post = models::encode(*model, utt);
    z = latent::make_latent(spec, model->config.latent_dim, utt_rng, &post);
    opt.latent = &z;
  } else {
    throw DataError("unknown system '" + system + "'");
  }
  std::vector<double> contour = models::synthesize_contour(*model, utt, opt);
  if (system == "rnn-scaled")
    contour = baselines::variance_scale(contour, utt.voicing, args.scale_factor);
  return contour;
}

bool system_needs_model(const std::string& system) {
  return system != "copy-synth" && system != "baseline";
}

}  // namespace

int cmd_synth(const SynthArgs& args) {
  Stopwatch timer;
  const auto utts = load_split(args.corpus, args.split, args.utt);

  models::TrainedModel model;
  if (system_needs_model(args.system)) {
    if (args.model.empty())
      throw DataError("--model is required for system '" + args.system + "'");
    model = models::load_model(args.model);
    const bool vae_system = args.system.rfind("vae-", 0) == 0;
    const char* want = vae_system               ? "vae"
                       : args.system == "mdn"   ? "mdn"
                                                : "rnn";
    if (std::string(models::kind_name(model.config.kind)) != want)
      throw DataError("system '" + args.system + "' needs a " +
                      std::string(want) + " model, got " +
                      models::kind_name(model.config.kind));
  }

  const fs::path sysdir = fs::path(args.out) / args.system;
  fs::create_directories(sysdir);
  const Rng root = Rng(args.seed).substream("synth");
  std::vector<std::string> outputs;

  if (args.samples > 0) {
    if (args.utt.empty()) throw DataError("--samples requires --utt");
    const corpus::Utterance& utt = utts.front();
    Matrix all(args.samples, utt.frames());
    for (std::size_t s = 0; s < args.samples; ++s) {
      Rng rng = root.substream(utt.id).substream(s);
      const auto contour = render_system(args.system, &model, utt, args, rng);
      for (std::size_t t = 0; t < utt.frames(); ++t) all(s, t) = contour[t];
    }
    const std::string name = utt.id + ".samples.fmat";
    write_matrix(sysdir / name, all);
    outputs.push_back(args.system + "/" + name);
  } else {
    for (const auto& utt : utts) {
      Rng rng = root.substream(utt.id);
      const auto contour = render_system(args.system, &model, utt, args, rng);
      write_matrix(sysdir / (utt.id + ".fmat"), contour_to_matrix(contour));
      outputs.push_back(args.system + "/" + utt.id + ".fmat");
    }
  }

  const json config{{"system", args.system},
                    {"split", args.split},
                    {"radius", args.radius},
                    {"strategy", args.strategy},
                    {"component", args.component},
                    {"scale_factor", args.scale_factor},
                    {"samples", args.samples},
                    {"utt", args.utt}};
  write_run_manifest(args.out, "synth", config, args.seed, outputs,
                     timer.seconds());
  std::printf("synth: %s wrote %zu file(s) under %s\n", args.system.c_str(),
              outputs.size(), args.out.c_str());
  return 0;
}

int cmd_mlpg(const MlpgArgs& args) {
  mlpg::TrajectoryDistribution dist;
  dist.means = read_matrix(args.means);
  dist.variances = read_matrix(args.variances);
  const auto contour = mlpg::generate_trajectory(dist);
  write_matrix(args.out, contour_to_matrix(contour));
  std::printf("mlpg: %zu frames -> %s\n", contour.size(), args.out.c_str());
  return 0;
}

int cmd_eval(const EvalArgs& args) {
  Stopwatch timer;
  const auto utts = load_split(args.corpus, args.split, "");

  std::vector<std::string> systems;
  for (const auto& entry : fs::directory_iterator(args.systems_dir))
    if (entry.is_directory()) systems.push_back(entry.path().filename());
  std::sort(systems.begin(), systems.end());
  if (systems.empty())
    throw DataError("no system directories under " + args.systems_dir);

  std::vector<evalkit::ContourSet> sets;
  for (const std::string& system : systems) {
    evalkit::ContourSet set;
    set.system = system;
    for (const auto& utt : utts) {
      const fs::path p =
          fs::path(args.systems_dir) / system / (utt.id + ".fmat");
      if (!fs::exists(p))
        throw DataError("missing contour " + p.string() + " for system " +
                        system);
      const Matrix m = read_matrix(p);
      if (m.rows() != utt.frames())
        throw DataError("contour length mismatch in " + p.string());
      evalkit::Contour c;
      c.utt_id = utt.id;
      c.voicing = utt.voicing;
      c.logf0.resize(m.rows());
      for (std::size_t t = 0; t < m.rows(); ++t) c.logf0[t] = m(t, 0);
      set.contours.push_back(std::move(c));
    }
    sets.push_back(std::move(set));
  }

  fs::create_directories(args.out);

  // Shared histogram over the voiced logF0 support.
  std::vector<double> edges;
  for (int b = 0; b <= 60; ++b)
    edges.push_back(corpus::kLogF0Min +
                    (corpus::kLogF0Max - corpus::kLogF0Min) * b / 60.0);
  {
    std::ofstream csv(fs::path(args.out) / "histogram.csv", std::ios::trunc);
    csv << "bin_lo,bin_hi";
    for (const auto& s : sets) csv << ',' << s.system;
    csv << "\n";
    std::vector<std::vector<std::size_t>> counts;
    for (const auto& s : sets)
      counts.push_back(evalkit::logf0_histogram(s, edges));
    for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
      csv << fmt(edges[b]) << ',' << fmt(edges[b + 1]);
      for (const auto& c : counts) csv << ',' << c[b];
      csv << "\n";
    }
  }

  json variedness = json::object();
  std::vector<evalkit::VariednessStats> stats;
  for (const auto& s : sets) {
    stats.push_back(evalkit::variedness_stats(s));
    json per = json::object();
    for (const auto& [id, sd] : stats.back().per_utterance) per[id] = sd;
    variedness[s.system] = {
        {"pooled_std", stats.back().pooled_std},
        {"per_utterance", per},
        {"single_frame_utterances", stats.back().single_frame_utterances}};
  }
  std::ofstream(fs::path(args.out) / "variedness.json")
      << variedness.dump(2) << "\n";

  {
    std::ofstream csv(fs::path(args.out) / "scores.csv", std::ios::trunc);
    csv << "system,utt,value\n";
    for (std::size_t s = 0; s < sets.size(); ++s)
      for (const auto& [id, sd] : stats[s].per_utterance)
        csv << sets[s].system << ',' << id << ',' << fmt(sd) << "\n";
  }

  std::vector<std::string> outputs = {"histogram.csv", "variedness.json",
                                      "scores.csv"};
  if (args.emit_preferences) {
    // Simulated variedness judgements: per utterance and pair, the contour
    // with the larger voiced std is marked more varied. Ties are skipped.
    std::ofstream csv(fs::path(args.out) / "preferences.csv", std::ios::trunc);
    csv << "left_system,right_system,winner\n";
    for (std::size_t i = 0; i < sets.size(); ++i) {
      for (std::size_t j = i + 1; j < sets.size(); ++j) {
        for (std::size_t u = 0; u < utts.size(); ++u) {
          const double a = stats[i].per_utterance[u].second;
          const double b = stats[j].per_utterance[u].second;
          if (a == b) continue;
          csv << sets[i].system << ',' << sets[j].system << ','
              << (a > b ? sets[i].system : sets[j].system) << "\n";
        }
      }
    }
    outputs.push_back("preferences.csv");
  }

  const json config{{"split", args.split},
                    {"systems", systems},
                    {"emit_preferences", args.emit_preferences}};
  write_run_manifest(args.out, "eval", config, 0, outputs, timer.seconds());
  std::printf("eval: %zu systems x %zu utterances -> %s\n", systems.size(),
              utts.size(), args.out.c_str());
  return 0;
}

int cmd_rank(const RankArgs& args) {
  Stopwatch timer;
  const auto table = evalkit::load_preference_csv(args.preferences);
  const auto ep = evalkit::excess_preference(table);
  const auto sol = evalkit::solve_ranking(ep);

  fs::create_directories(args.out);
  {
    std::ofstream csv(fs::path(args.out) / "ranking.csv", std::ios::trunc);
    csv << "system,relative_variedness\n";
    for (std::size_t i = 0; i < table.systems.size(); ++i)
      csv << table.systems[i] << ',' << fmt(sol.x[i]) << "\n";
  }
  json report;
  report["systems"] = table.systems;
  report["x"] = sol.x;
  json pairs = json::array();
  for (std::size_t p = 0; p < ep.pairs.size(); ++p) {
    std::vector<double> row(table.systems.size());
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = ep.a(p, c);
    pairs.push_back({{"left", table.systems[ep.pairs[p].first]},
                     {"right", table.systems[ep.pairs[p].second]},
                     {"b", ep.b[p]},
                     {"row", row}});
  }
  report["pairs"] = pairs;
  std::ofstream(fs::path(args.out) / "rank_report.json")
      << report.dump(2) << "\n";

  std::vector<std::string> outputs = {"ranking.csv", "rank_report.json"};
  if (!args.variedness.empty()) {
    std::ifstream in(args.variedness);
    if (!in) throw DataError("cannot open " + args.variedness);
    json varied;
    in >> varied;
    std::ofstream csv(fs::path(args.out) / "tradeoff.csv", std::ios::trunc);
    csv << "system,relative_variedness,pooled_std\n";
    for (std::size_t i = 0; i < table.systems.size(); ++i) {
      if (!varied.contains(table.systems[i]))
        throw DataError("variedness file lacks system " + table.systems[i]);
      csv << table.systems[i] << ',' << fmt(sol.x[i]) << ','
          << fmt(varied[table.systems[i]]["pooled_std"].get<double>()) << "\n";
    }
    outputs.push_back("tradeoff.csv");
  }
  write_run_manifest(args.out, "rank", json{{"pairs", ep.pairs.size()}}, 0,
                     outputs, timer.seconds());
  std::printf("rank: %zu systems, %zu pairs -> %s\n", table.systems.size(),
              ep.pairs.size(), args.out.c_str());
  return 0;
}

int cmd_stats(const StatsArgs& args) {
  Stopwatch timer;
  if (args.preferences.empty() && args.scores.empty())
    throw DataError("stats: need --preferences and/or --scores");
  json report = json::object();

  if (!args.preferences.empty()) {
    const auto table = evalkit::load_preference_csv(args.preferences);
    const auto ep = evalkit::excess_preference(table);
    std::vector<double> raw;
    for (const auto& [i, j] : ep.pairs) {
      const double wins = table.counts(i, j);
      const double n = wins + table.counts(j, i);
      raw.push_back(evalkit::binomial_test(static_cast<std::size_t>(wins),
                                           static_cast<std::size_t>(n), 0.5));
    }
    const auto adjusted = evalkit::holm_bonferroni(raw);
    json tests = json::array();
    for (std::size_t p = 0; p < ep.pairs.size(); ++p) {
      tests.push_back(
          {{"test", "binomial"},
           {"left", table.systems[ep.pairs[p].first]},
           {"right", table.systems[ep.pairs[p].second]},
           {"statistic", table.counts(ep.pairs[p].first, ep.pairs[p].second)},
           {"p_raw", raw[p]},
           {"p_holm", adjusted[p]}});
    }
    report["binomial"] = tests;
  }

  if (!args.scores.empty()) {
    std::ifstream in(args.scores);
    if (!in) throw DataError("cannot open " + args.scores);
    std::string line;
    if (!std::getline(in, line) || line != "system,utt,value")
      throw DataError("scores CSV must start with 'system,utt,value'");
    std::map<std::string, std::vector<double>> samples;
    std::vector<std::string> order;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string system, utt, value;
      if (!std::getline(ss, system, ',') || !std::getline(ss, utt, ',') ||
          !std::getline(ss, value))
        throw DataError("bad scores row: " + line);
      if (samples.find(system) == samples.end()) order.push_back(system);
      samples[system].push_back(std::stod(value));
    }
    std::vector<double> raw;
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<double> statistics;
    for (std::size_t i = 0; i < order.size(); ++i)
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        const auto res =
            evalkit::wilcoxon_ranksum(samples[order[i]], samples[order[j]]);
        raw.push_back(res.p_two_sided);
        statistics.push_back(res.statistic);
        pairs.emplace_back(order[i], order[j]);
      }
    const auto adjusted = evalkit::holm_bonferroni(raw);
    json tests = json::array();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      tests.push_back({{"test", "wilcoxon_ranksum"},
                       {"left", pairs[p].first},
                       {"right", pairs[p].second},
                       {"statistic", statistics[p]},
                       {"p_raw", raw[p]},
                       {"p_holm", adjusted[p]}});
    }
    report["wilcoxon"] = tests;
  }

  fs::create_directories(args.out);
  std::ofstream(fs::path(args.out) / "stats.json") << report.dump(2) << "\n";
  write_run_manifest(args.out, "stats", json::object(), 0, {"stats.json"},
                     timer.seconds());
  std::printf("stats: report -> %s/stats.json\n", args.out.c_str());
  return 0;
}

int cmd_plot(const PlotArgs& args) {
  std::string svg;
  if (args.kind == "histogram") {
    std::ifstream in(args.input);
    if (!in) throw DataError("cannot open " + args.input);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty histogram CSV");
    std::stringstream head(line);
    std::string col;
    std::vector<std::string> systems;
    std::getline(head, col, ',');  // bin_lo
    std::getline(head, col, ',');  // bin_hi
    while (std::getline(head, col, ',')) systems.push_back(col);
    std::vector<double> edges;
    std::vector<intovar::svg::HistogramSeries> series(systems.size());
    for (std::size_t s = 0; s < systems.size(); ++s)
      series[s].label = systems[s];
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string field;
      std::getline(ss, field, ',');
      const double lo = std::stod(field);
      std::getline(ss, field, ',');
      const double hi = std::stod(field);
      if (edges.empty()) edges.push_back(lo);
      edges.push_back(hi);
      for (std::size_t s = 0; s < systems.size(); ++s) {
        std::getline(ss, field, ',');
        series[s].counts.push_back(std::stoul(field));
      }
    }
    svg = intovar::svg::render_histogram(edges, series);
  } else if (args.kind == "density") {
    const Matrix contours = read_matrix(args.input);
    svg = intovar::svg::render_density(contours, 200, 120);
  } else if (args.kind == "tradeoff") {
    std::ifstream in(args.input);
    if (!in) throw DataError("cannot open " + args.input);
    std::string line;
    if (!std::getline(in, line) ||
        line != "system,relative_variedness,pooled_std")
      throw DataError(
          "tradeoff CSV must start with "
          "'system,relative_variedness,pooled_std'");
    std::vector<intovar::svg::TradeoffPoint> points;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      intovar::svg::TradeoffPoint p;
      std::string field;
      std::getline(ss, p.label, ',');
      std::getline(ss, field, ',');
      p.x = std::stod(field);
      std::getline(ss, field, ',');
      p.y = std::stod(field);
      points.push_back(p);
    }
    svg = intovar::svg::render_tradeoff(points);
  } else {
    throw DataError("unknown plot kind '" + args.kind + "'");
  }
  std::ofstream out(args.out, std::ios::trunc);
  if (!out) throw DataError("cannot write " + args.out);
  out << svg;
  std::printf("plot: %s -> %s\n", args.kind.c_str(), args.out.c_str());
  return 0;
}

}  // namespace intovar::cli
