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
#include <string>
#include <vector>

#include "intovar/matrix.hpp"

namespace intovar::corpus {

enum class Split { kTrain, kVal, kTest };

const char* split_name(Split s);
Split split_from_name(const std::string& name);

// Unvoiced frames carry this sentinel in the logf0 vector (files stay
// NaN-free); the voicing mask is authoritative.
inline constexpr double kUnvoicedLogF0 = -1e10;

// 5 ms frame shift. Utterances span 1.4-4.8 s.
inline constexpr std::size_t kMinFrames = 280;
inline constexpr std::size_t kMaxFrames = 960;

// Voiced logF0 stays inside [ln 50, ln 600] Hz.
inline constexpr double kLogF0Min = 3.9120230054281460;  // ln 50
inline constexpr double kLogF0Max = 6.3969296858636168;  // ln 600

struct Utterance {
  std::string id;
  Matrix linguistic;                  // T x D_l, unnormalized
  std::vector<double> logf0;          // T, natural log Hz, sentinel when unvoiced
  std::vector<std::uint8_t> voicing;  // T
  int style = 0;
  Split split = Split::kTrain;

  std::size_t frames() const { return logf0.size(); }
};

struct CorpusConfig {
  std::size_t n_utterances = 0;
  int n_styles = 3;
  std::uint64_t seed = 0;
  std::size_t d_linguistic = 40;
  std::array<double, 3> split_fractions = {0.90, 0.05, 0.05};
};

// Deterministic synthetic multi-style corpus. logF0 is a declination
// baseline plus accent shapes driven by the linguistic features, passed
// through a style-dependent transform (0: narrow range, 1: raised register
// and wide excursions, 2: final rise) plus a little noise. The style label
// never appears in the linguistic features.
std::vector<Utterance> gen_corpus(const CorpusConfig& config);

// On-disk layout: index.jsonl with one object per utterance
// ({"id","split","style","frames","linguistic_path","logf0_path",
//   "voicing_path"}) next to per-utterance FMAT files.
void save_corpus(const std::vector<Utterance>& utts,
                 const std::filesystem::path& dir);
std::vector<Utterance> load_corpus(const std::filesystem::path& dir);

}  // namespace intovar::corpus
