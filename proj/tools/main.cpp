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

#include <cstdio>
#include <exception>

#include "CLI11.hpp"

#include "commands.hpp"
#include "intovar/errors.hpp"
#include "intovar/manifest.hpp"

// Exit codes: 0 success, 2 usage, 3 data error, 4 numerical failure.

int main(int argc, char** argv) {
  CLI::App app{"intovar: synthetic intonation-variation workbench"};
  app.set_version_flag("--version", intovar::kVersion);
  app.require_subcommand(1);

  intovar::cli::GenCorpusArgs gen;
  auto* cmd_gen = app.add_subcommand("gen-corpus",
                                     "generate a synthetic multi-style corpus");
  cmd_gen->add_option("--n", gen.n_utterances, "number of utterances");
  cmd_gen->add_option("--styles", gen.n_styles, "number of latent styles");
  cmd_gen->add_option("--seed", gen.seed, "corpus seed");
  cmd_gen->add_option("--d-linguistic", gen.d_linguistic,
                      "linguistic feature dimensionality");
  cmd_gen->add_option("--split-fractions", gen.split_fractions,
                      "train/val/test fractions")
      ->expected(3);
  cmd_gen->add_option("--out", gen.out, "output directory")->required();

  intovar::cli::TrainArgs train;
  auto* cmd_train = app.add_subcommand("train", "train a model");
  cmd_train->add_option("--corpus", train.corpus, "corpus directory")
      ->required();
  cmd_train->add_option("--kind", train.kind, "model kind")
      ->check(CLI::IsMember({"rnn", "mdn", "vae"}));
  cmd_train->add_option("--config", train.config,
                        "JSON file overriding model-config fields");
  cmd_train->add_option("--seed", train.seed, "training seed");
  cmd_train->add_option("--max-epochs", train.max_epochs, "epoch cap");
  cmd_train->add_option("--patience", train.patience, "early-stop patience");
  cmd_train->add_option("--lr-warmup", train.lr_warmup, "warmup batches");
  cmd_train->add_option("--threads", train.n_threads, "worker threads");
  cmd_train->add_option("--out", train.out, "output directory")->required();

  intovar::cli::SynthArgs synth;
  auto* cmd_synth = app.add_subcommand("synth", "synthesize logF0 contours");
  cmd_synth->add_option("--corpus", synth.corpus, "corpus directory")
      ->required();
  cmd_synth->add_option("--split", synth.split, "corpus split")
      ->check(CLI::IsMember({"train", "val", "test"}));
  cmd_synth->add_option("--system", synth.system, "system to synthesize")
      ->check(CLI::IsMember({"rnn", "mdn", "vae-peak", "vae-tail",
                             "vae-posterior", "copy-synth", "baseline",
                             "rnn-scaled"}));
  cmd_synth->add_option("--model", synth.model, "trained model directory");
  cmd_synth->add_option("--mode", synth.system,
                        "alias for --system vae-<mode> (peak|tail|posterior)")
      ->transform(CLI::Validator(
          [](std::string& s) -> std::string {
            if (s != "peak" && s != "tail" && s != "posterior")
              return "must be one of peak, tail, posterior";
            s = "vae-" + s;
            return {};
          },
          "MODE"));
  cmd_synth->add_option("--radius", synth.radius, "tail radius")
      ->check(CLI::PositiveNumber);
  cmd_synth->add_option("--strategy", synth.strategy,
                        "mixture component selection")
      ->check(CLI::IsMember({"argmax", "random", "fixed"}));
  cmd_synth->add_option("--component", synth.component,
                        "fixed component index");
  cmd_synth->add_option("--scale-factor", synth.scale_factor,
                        "rnn-scaled factor");
  cmd_synth->add_option("--seed", synth.seed, "sampling seed");
  cmd_synth->add_option("--utt", synth.utt, "single utterance id");
  cmd_synth->add_option("--samples", synth.samples,
                        "write N sampled contours for --utt");
  cmd_synth->add_option("--out", synth.out, "output directory")->required();

  intovar::cli::MlpgArgs mlpg;
  auto* cmd_mlpg = app.add_subcommand(
      "mlpg", "trajectory generation from a mean/variance pair");
  cmd_mlpg->add_option("--means", mlpg.means, "T x 3 FMAT of means")
      ->required();
  cmd_mlpg->add_option("--variances", mlpg.variances, "T x 3 FMAT of variances")
      ->required();
  cmd_mlpg->add_option("--out", mlpg.out, "output contour FMAT")->required();

  intovar::cli::EvalArgs eval;
  auto* cmd_eval =
      app.add_subcommand("eval", "objective variation analysis of contours");
  cmd_eval->add_option("--corpus", eval.corpus, "corpus directory")->required();
  cmd_eval->add_option("--split", eval.split, "corpus split")
      ->check(CLI::IsMember({"train", "val", "test"}));
  cmd_eval->add_option("--systems-dir", eval.systems_dir,
                       "directory holding <system>/<utt>.fmat trees")
      ->required();
  cmd_eval->add_flag("--emit-preferences", eval.emit_preferences,
                     "write simulated pairwise variedness preferences");
  cmd_eval->add_option("--out", eval.out, "output directory")->required();

  intovar::cli::RankArgs rank;
  auto* cmd_rank = app.add_subcommand(
      "rank", "least-squares relative-variedness positions");
  cmd_rank->add_option("--preferences", rank.preferences, "preference CSV")
      ->required();
  cmd_rank->add_option("--variedness", rank.variedness,
                       "variedness.json to join into tradeoff.csv");
  cmd_rank->add_option("--out", rank.out, "output directory")->required();

  intovar::cli::StatsArgs stats;
  auto* cmd_stats =
      app.add_subcommand("stats", "significance tests with Holm correction");
  cmd_stats->add_option("--preferences", stats.preferences,
                        "preference CSV (binomial tests)");
  cmd_stats->add_option("--scores", stats.scores,
                        "scores CSV (Wilcoxon rank-sum tests)");
  cmd_stats->add_option("--out", stats.out, "output directory")->required();

  intovar::cli::PlotArgs plot;
  auto* cmd_plot = app.add_subcommand("plot", "render an SVG figure");
  cmd_plot->add_option("--kind", plot.kind, "plot kind")
      ->check(CLI::IsMember({"histogram", "density", "tradeoff"}));
  cmd_plot->add_option("--input", plot.input, "input data file")->required();
  cmd_plot->add_option("--out", plot.out, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (cmd_synth->parsed() && synth.system.empty()) {
    std::fprintf(stderr, "synth: pass --system NAME or --mode peak|tail|posterior\n");
    return 2;
  }

  try {
    if (cmd_gen->parsed()) return intovar::cli::cmd_gen_corpus(gen);
    if (cmd_train->parsed()) return intovar::cli::cmd_train(train);
    if (cmd_synth->parsed()) return intovar::cli::cmd_synth(synth);
    if (cmd_mlpg->parsed()) return intovar::cli::cmd_mlpg(mlpg);
    if (cmd_eval->parsed()) return intovar::cli::cmd_eval(eval);
    if (cmd_rank->parsed()) return intovar::cli::cmd_rank(rank);
    if (cmd_stats->parsed()) return intovar::cli::cmd_stats(stats);
    if (cmd_plot->parsed()) return intovar::cli::cmd_plot(plot);
  } catch (const intovar::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 4;
  } catch (const intovar::DataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}
