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
#include <string>
#include <vector>

namespace intovar::cli {

struct GenCorpusArgs {
  std::size_t n_utterances = 100;
  int n_styles = 3;
  std::uint64_t seed = 0;
  std::size_t d_linguistic = 40;
  std::vector<double> split_fractions = {0.90, 0.05, 0.05};
  std::string out;
};
int cmd_gen_corpus(const GenCorpusArgs& args);

struct TrainArgs {
  std::string corpus;
  std::string kind = "rnn";
  std::string config;  // optional JSON file overriding model config fields
  std::uint64_t seed = 0;
  std::size_t max_epochs = 100;
  std::size_t patience = 5;
  std::size_t lr_warmup = 1000;
  std::size_t n_threads = 2;
  std::string out;
};
int cmd_train(const TrainArgs& args);

struct SynthArgs {
  std::string corpus;
  std::string split = "test";
  std::string system;  // rnn|mdn|vae-peak|vae-tail|vae-posterior|copy-synth|baseline|rnn-scaled
  std::string model;   // model directory where required
  double radius = 3.0;
  std::string strategy = "argmax";  // mdn component selection
  int component = 0;
  double scale_factor = 3.0;  // rnn-scaled
  std::uint64_t seed = 0;
  std::string utt;          // single-utterance mode
  std::size_t samples = 0;  // >0 writes an [N x T] sample matrix for --utt
  std::string out;
};
int cmd_synth(const SynthArgs& args);

struct MlpgArgs {
  std::string means;
  std::string variances;
  std::string out;
};
int cmd_mlpg(const MlpgArgs& args);

struct EvalArgs {
  std::string corpus;
  std::string split = "test";
  std::string systems_dir;  // directory of <system>/<utt>.fmat trees
  bool emit_preferences = false;
  std::string out;
};
int cmd_eval(const EvalArgs& args);

struct RankArgs {
  std::string preferences;
  std::string variedness;  // optional variedness.json to join into the CSV
  std::string out;
};
int cmd_rank(const RankArgs& args);

struct StatsArgs {
  std::string preferences;  // optional: binomial tests per pair
  std::string scores;       // optional: CSV system,utt,value -> Wilcoxon
  std::string out;
};
int cmd_stats(const StatsArgs& args);

struct PlotArgs {
  std::string kind = "histogram";  // histogram|density|tradeoff
  std::string input;
  std::string out;
};
int cmd_plot(const PlotArgs& args);

}  // namespace intovar::cli
