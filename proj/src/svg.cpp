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

#include "intovar/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "intovar/errors.hpp"

namespace intovar::svg {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 420.0;
constexpr double kMargin = 50.0;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string header() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
         "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) +
         " " + num(kHeight) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

struct Scale {
  double lo, hi, out_lo, out_hi;
  double operator()(double v) const {
    return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
  }
};

std::string axes() {
  std::string s;
  s += "<line x1=\"" + num(kMargin) + "\" y1=\"" + num(kHeight - kMargin) +
       "\" x2=\"" + num(kWidth - kMargin) + "\" y2=\"" +
       num(kHeight - kMargin) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + num(kMargin) + "\" y1=\"" + num(kMargin) + "\" x2=\"" +
       num(kMargin) + "\" y2=\"" + num(kHeight - kMargin) +
       "\" stroke=\"black\"/>\n";
  return s;
}

}  // namespace

std::string render_histogram(const std::vector<double>& bin_edges,
                             const std::vector<HistogramSeries>& series) {
  if (bin_edges.size() < 2 || series.empty())
    throw DataError("render_histogram: empty data");
  std::size_t max_count = 1;
  for (const HistogramSeries& s : series) {
    if (s.counts.size() + 1 != bin_edges.size())
      throw DataError("render_histogram: counts/edges mismatch for " + s.label);
    for (std::size_t c : s.counts) max_count = std::max(max_count, c);
  }
  const Scale sx{bin_edges.front(), bin_edges.back(), kMargin, kWidth - kMargin};
  const Scale sy{0.0, static_cast<double>(max_count), kHeight - kMargin, kMargin};

  std::string out = header() + axes();
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % 8];
    std::string pts;
    for (std::size_t b = 0; b < series[si].counts.size(); ++b) {
      const double y = sy(static_cast<double>(series[si].counts[b]));
      pts += num(sx(bin_edges[b])) + "," + num(y) + " ";
      pts += num(sx(bin_edges[b + 1])) + "," + num(y) + " ";
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    out += "<text x=\"" + num(kWidth - kMargin - 130.0) + "\" y=\"" +
           num(kMargin + 16.0 * static_cast<double>(si)) + "\" fill=\"" + color +
           "\" font-size=\"12\">" + series[si].label + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string render_density(const Matrix& contours, std::size_t time_bins,
                           std::size_t value_bins) {
  if (contours.rows() == 0 || contours.cols() == 0)
    throw DataError("render_density: empty contour matrix");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < contours.size(); ++i) {
    lo = std::min(lo, contours.data()[i]);
    hi = std::max(hi, contours.data()[i]);
  }
  if (!(hi > lo)) hi = lo + 1.0;

  Matrix grid(value_bins, time_bins);
  for (std::size_t r = 0; r < contours.rows(); ++r) {
    for (std::size_t t = 0; t < contours.cols(); ++t) {
      const std::size_t tb = std::min(
          time_bins - 1, t * time_bins / contours.cols());
      const double frac = (contours(r, t) - lo) / (hi - lo);
      const std::size_t vb = std::min(
          value_bins - 1,
          static_cast<std::size_t>(frac * static_cast<double>(value_bins)));
      grid(vb, tb) += 1.0;
    }
  }
  double max_cell = 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    max_cell = std::max(max_cell, grid.data()[i]);

  const double cw = (kWidth - 2 * kMargin) / static_cast<double>(time_bins);
  const double ch = (kHeight - 2 * kMargin) / static_cast<double>(value_bins);
  std::string out = header() + axes();
  for (std::size_t vb = 0; vb < value_bins; ++vb) {
    for (std::size_t tb = 0; tb < time_bins; ++tb) {
      const double d = grid(vb, tb);
      if (d == 0.0) continue;
      const double alpha = std::pow(d / max_cell, 0.35);
      const double x = kMargin + cw * static_cast<double>(tb);
      // value_bins grow upward; SVG y grows downward
      const double y = kHeight - kMargin - ch * static_cast<double>(vb + 1);
      out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" +
             num(cw) + "\" height=\"" + num(ch) + "\" fill=\"#1f77b4\" opacity=\"" +
             num(alpha) + "\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

std::string render_tradeoff(const std::vector<TradeoffPoint>& points) {
  if (points.empty()) throw DataError("render_tradeoff: no points");
  double xlo = points[0].x, xhi = points[0].x, ylo = points[0].y, yhi = points[0].y;
  for (const TradeoffPoint& p : points) {
    xlo = std::min(xlo, p.x);
    xhi = std::max(xhi, p.x);
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
  }
  const double xpad = (xhi - xlo) * 0.1 + 1e-6;
  const double ypad = (yhi - ylo) * 0.1 + 1e-6;
  const Scale sx{xlo - xpad, xhi + xpad, kMargin, kWidth - kMargin};
  const Scale sy{ylo - ypad, yhi + ypad, kHeight - kMargin, kMargin};
  std::string out = header() + axes();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const char* color = kPalette[i % 8];
    const double x = sx(points[i].x);
    const double y = sy(points[i].y);
    out += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) +
           "\" r=\"5\" fill=\"" + color + "\"/>\n";
    out += "<text x=\"" + num(x + 8.0) + "\" y=\"" + num(y - 8.0) +
           "\" font-size=\"12\">" + points[i].label + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace intovar::svg
