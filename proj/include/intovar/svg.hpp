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

#include <string>
#include <utility>
#include <vector>

#include "intovar/matrix.hpp"

namespace intovar::svg {

struct HistogramSeries {
  std::string label;
  std::vector<std::size_t> counts;
};

// Step-outline histograms, one polyline per system.
std::string render_histogram(const std::vector<double>& bin_edges,
                             const std::vector<HistogramSeries>& series);

// Rasterized density of many contours (rows of `contours`) on a
// time x logF0 grid.
std::string render_density(const Matrix& contours, std::size_t time_bins,
                           std::size_t value_bins);

struct TradeoffPoint {
  std::string label;
  double x = 0.0;  // relative variedness
  double y = 0.0;  // objective variation (pooled std)
};

std::string render_tradeoff(const std::vector<TradeoffPoint>& points);

}  // namespace intovar::svg
