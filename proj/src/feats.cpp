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

#include "intovar/feats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "intovar/errors.hpp"

namespace intovar::feats {

namespace {
constexpr double kFloor = 1e-8;
}

std::vector<double> interpolate_logf0(const std::vector<double>& logf0,
                                      const std::vector<std::uint8_t>& voicing) {
  const std::size_t n = logf0.size();
  if (voicing.size() != n)
    throw DataError("interpolate_logf0: voicing/logf0 length mismatch");
  std::size_t first = n;
  for (std::size_t t = 0; t < n; ++t) {
    if (voicing[t]) {
      first = t;
      break;
    }
  }
  if (first == n) throw DataError("interpolate_logf0: no voiced frame");

  std::vector<double> out(n);
  std::size_t last = first;
  for (std::size_t t = 0; t < n; ++t) {
    if (voicing[t]) {
      out[t] = logf0[t];
      last = t;
    }
  }
  // Leading/trailing holds.
  for (std::size_t t = 0; t < first; ++t) out[t] = logf0[first];
  for (std::size_t t = last + 1; t < n; ++t) out[t] = logf0[last];
  // Interior gaps.
  std::size_t prev = first;
  for (std::size_t t = first + 1; t <= last; ++t) {
    if (!voicing[t]) continue;
    const std::size_t gap = t - prev;
    for (std::size_t u = prev + 1; u < t; ++u) {
      const double frac = static_cast<double>(u - prev) / static_cast<double>(gap);
      out[u] = logf0[prev] + frac * (logf0[t] - logf0[prev]);
    }
    prev = t;
  }
  return out;
}

Matrix compute_deltas(const std::vector<double>& statics) {
  const std::size_t n = statics.size();
  if (n == 0) throw DataError("compute_deltas: empty input");
  Matrix out(n, 3);
  auto at = [&](std::int64_t t) {
    t = std::clamp<std::int64_t>(t, 0, static_cast<std::int64_t>(n) - 1);
    return statics[static_cast<std::size_t>(t)];
  };
  for (std::size_t t = 0; t < n; ++t) {
    const std::int64_t ti = static_cast<std::int64_t>(t);
    out(t, 0) = statics[t];
    out(t, 1) = kDeltaWindow[0] * at(ti - 1) + kDeltaWindow[1] * at(ti) +
                kDeltaWindow[2] * at(ti + 1);
    out(t, 2) = kDeltaDeltaWindow[0] * at(ti - 1) + kDeltaDeltaWindow[1] * at(ti) +
                kDeltaDeltaWindow[2] * at(ti + 1);
  }
  return out;
}

NormStats fit_norm(const std::vector<const Matrix*>& data, NormStats::Kind kind) {
  if (data.empty() || data[0]->cols() == 0)
    throw DataError("fit_norm: no data");
  const std::size_t dims = data[0]->cols();
  NormStats stats;
  stats.kind = kind;
  if (kind == NormStats::Kind::kMinMax) {
    stats.lo_or_mean.assign(dims, std::numeric_limits<double>::infinity());
    stats.hi_or_std.assign(dims, -std::numeric_limits<double>::infinity());
    for (const Matrix* m : data) {
      if (m->cols() != dims) throw DataError("fit_norm: inconsistent dims");
      for (std::size_t r = 0; r < m->rows(); ++r) {
        const double* row = m->row(r);
        for (std::size_t c = 0; c < dims; ++c) {
          stats.lo_or_mean[c] = std::min(stats.lo_or_mean[c], row[c]);
          stats.hi_or_std[c] = std::max(stats.hi_or_std[c], row[c]);
        }
      }
    }
  } else {
    stats.lo_or_mean.assign(dims, 0.0);
    stats.hi_or_std.assign(dims, 0.0);
    std::size_t n = 0;
    for (const Matrix* m : data) {
      if (m->cols() != dims) throw DataError("fit_norm: inconsistent dims");
      n += m->rows();
      for (std::size_t r = 0; r < m->rows(); ++r) {
        const double* row = m->row(r);
        for (std::size_t c = 0; c < dims; ++c) stats.lo_or_mean[c] += row[c];
      }
    }
    if (n == 0) throw DataError("fit_norm: no frames");
    for (std::size_t c = 0; c < dims; ++c) stats.lo_or_mean[c] /= static_cast<double>(n);
    for (const Matrix* m : data) {
      for (std::size_t r = 0; r < m->rows(); ++r) {
        const double* row = m->row(r);
        for (std::size_t c = 0; c < dims; ++c) {
          const double d = row[c] - stats.lo_or_mean[c];
          stats.hi_or_std[c] += d * d;
        }
      }
    }
    for (std::size_t c = 0; c < dims; ++c)
      stats.hi_or_std[c] = std::sqrt(stats.hi_or_std[c] / static_cast<double>(n));
  }
  return stats;
}

double apply_norm_value(double v, const NormStats& stats, std::size_t dim) {
  if (stats.kind == NormStats::Kind::kMinMax) {
    const double range = stats.hi_or_std[dim] - stats.lo_or_mean[dim];
    if (range < kFloor) return 0.5;
    return 0.01 + 0.98 * (v - stats.lo_or_mean[dim]) / range;
  }
  const double std = std::max(stats.hi_or_std[dim], kFloor);
  return (v - stats.lo_or_mean[dim]) / std;
}

double invert_norm_value(double v, const NormStats& stats, std::size_t dim) {
  if (stats.kind == NormStats::Kind::kMinMax) {
    const double range = stats.hi_or_std[dim] - stats.lo_or_mean[dim];
    if (range < kFloor)
      return 0.5 * (stats.hi_or_std[dim] + stats.lo_or_mean[dim]);
    return stats.lo_or_mean[dim] + (v - 0.01) / 0.98 * range;
  }
  const double std = std::max(stats.hi_or_std[dim], kFloor);
  return v * std + stats.lo_or_mean[dim];
}

Matrix apply_norm(const Matrix& data, const NormStats& stats) {
  if (data.cols() != stats.lo_or_mean.size())
    throw DataError("apply_norm: dimension mismatch");
  Matrix out(data.rows(), data.cols());
  for (std::size_t r = 0; r < data.rows(); ++r)
    for (std::size_t c = 0; c < data.cols(); ++c)
      out(r, c) = apply_norm_value(data(r, c), stats, c);
  return out;
}

Matrix invert_norm(const Matrix& data, const NormStats& stats) {
  if (data.cols() != stats.lo_or_mean.size())
    throw DataError("invert_norm: dimension mismatch");
  Matrix out(data.rows(), data.cols());
  for (std::size_t r = 0; r < data.rows(); ++r)
    for (std::size_t c = 0; c < data.cols(); ++c)
      out(r, c) = invert_norm_value(data(r, c), stats, c);
  return out;
}

void to_json(nlohmann::json& j, const NormStats& s) {
  j = nlohmann::json{
      {"kind", s.kind == NormStats::Kind::kMinMax ? "min_max" : "mean_variance"},
      {"lo_or_mean", s.lo_or_mean},
      {"hi_or_std", s.hi_or_std}};
}

void from_json(const nlohmann::json& j, NormStats& s) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "min_max") {
    s.kind = NormStats::Kind::kMinMax;
  } else if (kind == "mean_variance") {
    s.kind = NormStats::Kind::kMeanVar;
  } else {
    throw DataError("NormStats: unknown kind '" + kind + "'");
  }
  j.at("lo_or_mean").get_to(s.lo_or_mean);
  j.at("hi_or_std").get_to(s.hi_or_std);
}

}  // namespace intovar::feats
