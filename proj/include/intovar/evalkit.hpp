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
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "intovar/matrix.hpp"

namespace intovar::evalkit {

// One system's synthesized (or natural) contours over an utterance set.
struct Contour {
  std::string utt_id;
  std::vector<double> logf0;
  std::vector<std::uint8_t> voicing;
};

struct ContourSet {
  std::string system;
  std::vector<Contour> contours;
};

// Pairwise "which is more varied" counts. counts(i, j) is the number of
// trials where system i beat system j.
struct PreferenceTable {
  std::vector<std::string> systems;
  Matrix counts;
};

PreferenceTable load_preference_csv(const std::filesystem::path& path);
void save_preference_csv(const PreferenceTable& table,
                         const std::filesystem::path& path);

// Excess-preference system of equations: one row per unordered pair (i, j),
// +1 at i, -1 at j, b = preference fraction difference for that pair.
struct ExcessPreference {
  Matrix a;               // P x S with entries in {-1, 0, +1}
  std::vector<double> b;  // P
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

ExcessPreference excess_preference(const PreferenceTable& table);

// Least-squares positions on the relative-variedness axis. A^T A is
// singular (only differences are observed), so the mean-zero (minimum-norm)
// solution is returned. Throws DataError when the comparison graph is
// disconnected.
struct RankSolution {
  std::vector<double> x;
};

RankSolution solve_ranking(const ExcessPreference& system);

// Two-sided Wilcoxon rank-sum test with midrank tie handling. Exact
// enumeration of the rank-sum distribution when either side has fewer than
// 10 observations, otherwise the normal approximation with tie-corrected
// variance and continuity correction.
struct WilcoxonResult {
  double statistic = 0.0;  // rank sum of the first sample
  double p_two_sided = 1.0;
};

WilcoxonResult wilcoxon_ranksum(const std::vector<double>& sample_a,
                                const std::vector<double>& sample_b);

// Exact two-sided binomial test: sums the probabilities of all outcomes no
// more likely than the observed one.
double binomial_test(std::size_t successes, std::size_t trials, double p0 = 0.5);

// Step-down Holm-Bonferroni adjustment, returned in the input order.
std::vector<double> holm_bonferroni(const std::vector<double>& p_values);

// Histogram of voiced-frame logF0 values; half-open bins [lo, hi), last bin
// closed. Values outside the edges are dropped.
std::vector<std::size_t> logf0_histogram(const ContourSet& contours,
                                         const std::vector<double>& bin_edges);

struct VariednessStats {
  std::vector<std::pair<std::string, double>> per_utterance;  // voiced std
  double pooled_std = 0.0;
  std::size_t single_frame_utterances = 0;  // flagged, std taken as 0
};

// Sample standard deviations (n-1 denominator) of voiced logF0.
VariednessStats variedness_stats(const ContourSet& contours);

}  // namespace intovar::evalkit
