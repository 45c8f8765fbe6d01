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

#include <vector>

#include "intovar/corpus.hpp"

namespace intovar::baselines {

// Natural logF0, unvoiced gaps interpolated.
std::vector<double> copy_synth(const corpus::Utterance& utt);

// Least-squares quadratic in normalized time tau = t/(T-1), fitted over
// voiced frames and evaluated everywhere. Needs >= 3 voiced frames.
std::vector<double> quadratic_baseline(const corpus::Utterance& utt);

// f' = m + factor * (f - m) around the voiced-frame mean m, in log domain.
std::vector<double> variance_scale(const std::vector<double>& contour,
                                   const std::vector<std::uint8_t>& voicing,
                                   double factor = 3.0);

}  // namespace intovar::baselines
