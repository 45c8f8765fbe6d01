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

#include "intovar/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

#include "intovar/errors.hpp"
#include "intovar/fmat.hpp"
#include "intovar/rng.hpp"

namespace intovar::corpus {

namespace {

// Phone inventory: classes 0-3 vowels, 4-6 voiced consonants, 7-9 unvoiced
// consonants. Only unvoiced consonants produce unvoiced frames.
constexpr int kNumPhoneClasses = 10;
constexpr int kFirstUnvoicedClass = 7;

constexpr int kMinWords = 7, kMaxWords = 11;
constexpr int kMinPhonesPerWord = 3, kMaxPhonesPerWord = 5;
constexpr int kMinPhoneFrames = 10, kMaxPhoneFrames = 20;

// logF0 recipe. The accent bump is a raised cosine spanning the word; its
// height is driven by the word's accent-strength feature, so the contour is
// predictable from the linguistic input up to the style transform and noise.
constexpr double kBaseLogF0 = 5.1059454739005803;  // ln 165
constexpr double kRegisterJitterStd = 0.03;
constexpr double kDeclinationStart = 0.10;
constexpr double kDeclinationEnd = -0.12;
constexpr double kAccentBase = 0.10;
constexpr double kAccentGain = 0.32;
constexpr double kAccentCap = 0.50;
constexpr double kNoiseStd = 0.015;
constexpr double kClampLo = 3.9512437185814275;  // ln 52
constexpr double kClampHi = 6.3630281113623454;  // ln 580

struct StyleTransform {
  double scale;     // excursion scaling around the register
  double register_; // register shift in nats
  double rise;      // final-rise height, 0 when absent
};

StyleTransform style_transform(int style) {
  switch (style % 3) {
    case 0: return {0.45, -0.02, 0.0};   // narrow range
    case 1: return {1.70, 0.10, 0.0};    // raised register, wide excursions
    default: return {1.00, 0.0, 0.42};   // final rise
  }
}

constexpr double kRiseStartFrac = 0.82;

struct Phone {
  int word;
  int cls;
  int frames;
  bool nucleus;
  double articulation;
  double distract[3];
};

// Fixed linguistic layout for d >= 40: 20 one-hot columns (current and next
// phone class), a scalar block, extra distractor columns when d > 40, and
// the 9 positional features in the last columns.
constexpr std::size_t kScalarBase = 20;
constexpr std::size_t kNumPositional = 9;

double frac_through(std::size_t i, std::size_t n) {
  return (static_cast<double>(i) + 0.5) / static_cast<double>(n);
}

Utterance gen_utterance(const CorpusConfig& cfg, std::size_t index, Rng root) {
  Rng rng = root.substream("utt").substream(index);
  Utterance utt;
  {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "u%06zu", index);
    utt.id = buf;
  }
  utt.style = static_cast<int>(index % static_cast<std::size_t>(cfg.n_styles));

  const int n_words = static_cast<int>(rng.uniform_int(kMinWords, kMaxWords));
  std::vector<double> accent(n_words);
  std::vector<Phone> phones;
  for (int w = 0; w < n_words; ++w) {
    accent[w] = rng.uniform();
    const int n_ph =
        static_cast<int>(rng.uniform_int(kMinPhonesPerWord, kMaxPhonesPerWord));
    const int nucleus = static_cast<int>(rng.uniform_int(0, n_ph - 1));
    for (int p = 0; p < n_ph; ++p) {
      Phone ph;
      ph.word = w;
      ph.nucleus = (p == nucleus);
      // The nucleus is always a vowel so every word carries voiced frames.
      ph.cls = ph.nucleus
                   ? static_cast<int>(rng.uniform_int(0, 3))
                   : static_cast<int>(rng.uniform_int(0, kNumPhoneClasses - 1));
      ph.frames = static_cast<int>(rng.uniform_int(kMinPhoneFrames, kMaxPhoneFrames));
      ph.articulation = 2.0 * rng.uniform() - 1.0;
      for (double& d : ph.distract) d = rng.normal();
      phones.push_back(ph);
    }
  }

  // Enforce the frame-count bounds by adjusting the tail phone.
  auto total_frames = [&] {
    std::size_t t = 0;
    for (const Phone& p : phones) t += static_cast<std::size_t>(p.frames);
    return t;
  };
  std::size_t frames = total_frames();
  if (frames < kMinFrames)
    phones.back().frames += static_cast<int>(kMinFrames - frames);
  while ((frames = total_frames()) > kMaxFrames) {
    for (Phone& p : phones) {
      if (frames <= kMaxFrames) break;
      const int cut = std::min<int>(p.frames - 6, static_cast<int>(frames - kMaxFrames));
      if (cut > 0) {
        p.frames -= cut;
        frames -= static_cast<std::size_t>(cut);
      }
    }
  }
  const std::size_t T = total_frames();

  // Word geometry for positional features and accent bump placement.
  std::vector<std::size_t> word_start(n_words, 0), word_frames(n_words, 0);
  std::vector<double> nucleus_center(n_words, 0.0);
  {
    std::size_t t = 0;
    int prev_word = -1;
    for (const Phone& p : phones) {
      if (p.word != prev_word) {
        word_start[p.word] = t;
        prev_word = p.word;
      }
      if (p.nucleus)
        nucleus_center[p.word] = static_cast<double>(t) + 0.5 * p.frames;
      word_frames[p.word] += static_cast<std::size_t>(p.frames);
      t += static_cast<std::size_t>(p.frames);
    }
  }

  const std::size_t d = cfg.d_linguistic;
  utt.linguistic = Matrix(T, d);
  utt.logf0.assign(T, kUnvoicedLogF0);
  utt.voicing.assign(T, 0);

  const double base = kBaseLogF0 + kRegisterJitterStd * rng.normal();
  const StyleTransform st = style_transform(utt.style);

  std::size_t t0 = 0;
  for (std::size_t pi = 0; pi < phones.size(); ++pi) {
    const Phone& p = phones[pi];
    const int next_cls = (pi + 1 < phones.size()) ? phones[pi + 1].cls : -1;
    const std::size_t pf = static_cast<std::size_t>(p.frames);
    for (std::size_t k = 0; k < pf; ++k) {
      const std::size_t t = t0 + k;
      double* row = utt.linguistic.row(t);
      row[p.cls] = 1.0;
      if (next_cls >= 0) row[10 + next_cls] = 1.0;
      std::size_t c = kScalarBase;
      row[c++] = accent[p.word];
      row[c++] = p.articulation;
      row[c++] = accent[p.word] > 0.5 ? 1.0 : 0.0;
      row[c++] = static_cast<double>(p.frames);
      row[c++] = static_cast<double>(word_frames[p.word]);
      row[c++] = static_cast<double>(n_words);
      row[c++] = static_cast<double>(p.word);
      row[c++] = static_cast<double>(T);
      row[c++] = p.distract[0];
      row[c++] = p.distract[1];
      row[c++] = p.distract[2];
      while (c + kNumPositional < d) row[c++] = 0.0;
      // 9 positional features: utterance / word / phone counters.
      row[c++] = static_cast<double>(t + 1);
      row[c++] = static_cast<double>(T - t);
      row[c++] = frac_through(t, T);
      row[c++] = static_cast<double>(t - word_start[p.word] + 1);
      row[c++] = static_cast<double>(word_start[p.word] + word_frames[p.word] - t);
      row[c++] = frac_through(t - word_start[p.word], word_frames[p.word]);
      row[c++] = static_cast<double>(k + 1);
      row[c++] = static_cast<double>(pf - k);
      row[c++] = frac_through(k, pf);
    }
    t0 += pf;
  }

  // logF0 synthesis over voiced frames.
  t0 = 0;
  for (const Phone& p : phones) {
    const bool voiced = p.cls < kFirstUnvoicedClass;
    const std::size_t pf = static_cast<std::size_t>(p.frames);
    for (std::size_t k = 0; k < pf; ++k) {
      const std::size_t t = t0 + k;
      const double noise = kNoiseStd * rng.normal();
      if (!voiced) continue;
      const double u = (T > 1) ? static_cast<double>(t) / static_cast<double>(T - 1) : 0.0;
      const double declination =
          kDeclinationStart + (kDeclinationEnd - kDeclinationStart) * u;
      double accents = 0.0;
      for (int w = 0; w < n_words; ++w) {
        const double half = 0.5 * static_cast<double>(word_frames[w]);
        const double dist = std::abs(static_cast<double>(t) - nucleus_center[w]);
        if (dist < half) {
          const double h = kAccentBase + kAccentGain * accent[w];
          accents += h * 0.5 * (1.0 + std::cos(M_PI * dist / half));
        }
      }
      accents = std::min(accents, kAccentCap);
      double rise = 0.0;
      if (st.rise > 0.0 && u > kRiseStartFrac) {
        const double v = (u - kRiseStartFrac) / (1.0 - kRiseStartFrac);
        rise = st.rise * 0.5 * (1.0 - std::cos(M_PI * v));
      }
      const double value = base + st.register_ +
                           st.scale * (declination + accents) + rise + noise;
      utt.logf0[t] = std::clamp(value, kClampLo, kClampHi);
      utt.voicing[t] = 1;
    }
    t0 += pf;
  }

  // Quantize to float32 grid so disk round-trips are exact.
  for (double& v : utt.logf0) v = static_cast<double>(static_cast<float>(v));
  for (std::size_t i = 0; i < utt.linguistic.size(); ++i)
    utt.linguistic.data()[i] =
        static_cast<double>(static_cast<float>(utt.linguistic.data()[i]));
  return utt;
}

void validate(const CorpusConfig& cfg) {
  if (cfg.n_styles < 2) throw DataError("gen_corpus: n_styles must be >= 2");
  if (cfg.n_utterances < static_cast<std::size_t>(cfg.n_styles))
    throw DataError("gen_corpus: n_utterances < n_styles");
  double sum = 0.0;
  for (double f : cfg.split_fractions) {
    if (f <= 0.0) throw DataError("gen_corpus: split fractions must be > 0");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw DataError("gen_corpus: split fractions must sum to 1");
  if (cfg.d_linguistic < kScalarBase + 11 + kNumPositional)
    throw DataError("gen_corpus: d_linguistic must be >= 40");
}

}  // namespace

const char* split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    default: return "test";
  }
}

Split split_from_name(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  throw DataError("unknown split '" + name + "'");
}

std::vector<Utterance> gen_corpus(const CorpusConfig& cfg) {
  validate(cfg);
  const Rng root(cfg.seed);
  const double n = static_cast<double>(cfg.n_utterances);
  const double train_end = n * cfg.split_fractions[0];
  const double val_end = n * (cfg.split_fractions[0] + cfg.split_fractions[1]);
  std::vector<Utterance> utts(cfg.n_utterances);
  for (std::size_t i = 0; i < cfg.n_utterances; ++i) {
    utts[i] = gen_utterance(cfg, i, root);
    const double pos = static_cast<double>(i);
    utts[i].split = pos < train_end  ? Split::kTrain
                    : pos < val_end ? Split::kVal
                                    : Split::kTest;
  }
  return utts;
}

void save_corpus(const std::vector<Utterance>& utts,
                 const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream index(dir / "index.jsonl", std::ios::trunc);
  if (!index) throw DataError("save_corpus: cannot write index in " + dir.string());
  for (const Utterance& u : utts) {
    const std::string ling = u.id + ".ling.fmat";
    const std::string lf0 = u.id + ".lf0.fmat";
    const std::string voic = u.id + ".voic.fmat";
    write_matrix(dir / ling, u.linguistic);
    Matrix f0(u.frames(), 1), vo(u.frames(), 1);
    for (std::size_t t = 0; t < u.frames(); ++t) {
      f0(t, 0) = u.logf0[t];
      vo(t, 0) = u.voicing[t] ? 1.0 : 0.0;
    }
    write_matrix(dir / lf0, f0);
    write_matrix(dir / voic, vo);
    nlohmann::json j{{"id", u.id},
                     {"split", split_name(u.split)},
                     {"style", u.style},
                     {"frames", u.frames()},
                     {"linguistic_path", ling},
                     {"logf0_path", lf0},
                     {"voicing_path", voic}};
    index << j.dump() << "\n";
  }
}

std::vector<Utterance> load_corpus(const std::filesystem::path& dir) {
  std::ifstream index(dir / "index.jsonl");
  if (!index) throw DataError("load_corpus: missing index " + (dir / "index.jsonl").string());
  std::vector<Utterance> utts;
  std::string line;
  while (std::getline(index, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    Utterance u;
    u.id = j.at("id").get<std::string>();
    u.split = split_from_name(j.at("split").get<std::string>());
    u.style = j.at("style").get<int>();
    for (const char* key : {"linguistic_path", "logf0_path", "voicing_path"}) {
      const auto p = dir / j.at(key).get<std::string>();
      if (!std::filesystem::exists(p))
        throw DataError("load_corpus: missing matrix file " + p.string());
    }
    u.linguistic = read_matrix(dir / j.at("linguistic_path").get<std::string>());
    const Matrix f0 = read_matrix(dir / j.at("logf0_path").get<std::string>());
    const Matrix vo = read_matrix(dir / j.at("voicing_path").get<std::string>());
    const std::size_t frames = j.at("frames").get<std::size_t>();
    if (f0.rows() != frames || vo.rows() != frames || u.linguistic.rows() != frames)
      throw DataError("load_corpus: frame count mismatch for " + u.id);
    u.logf0.resize(frames);
    u.voicing.resize(frames);
    for (std::size_t t = 0; t < frames; ++t) {
      u.logf0[t] = f0(t, 0);
      u.voicing[t] = vo(t, 0) != 0.0 ? 1 : 0;
    }
    utts.push_back(std::move(u));
  }
  return utts;
}

}  // namespace intovar::corpus
