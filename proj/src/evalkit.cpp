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

#include "intovar/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "intovar/errors.hpp"

namespace intovar::evalkit {

namespace {

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

PreferenceTable load_preference_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("load_preference_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) ||
      split_csv_line(line) !=
          std::vector<std::string>{"left_system", "right_system", "winner"})
    throw DataError("load_preference_csv: bad header in " + path.string());

  std::vector<std::string> systems;
  auto system_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < systems.size(); ++i)
      if (systems[i] == name) return i;
    systems.push_back(name);
    return systems.size() - 1;
  };
  struct Trial {
    std::size_t winner, loser;
  };
  std::vector<Trial> trials;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 3)
      throw DataError("load_preference_csv: bad row at line " +
                      std::to_string(line_no));
    const std::size_t left = system_index(fields[0]);
    const std::size_t right = system_index(fields[1]);
    std::size_t winner;
    if (fields[2] == fields[0]) {
      winner = left;
    } else if (fields[2] == fields[1]) {
      winner = right;
    } else {
      throw DataError("load_preference_csv: winner not in pair at line " +
                      std::to_string(line_no));
    }
    trials.push_back({winner, winner == left ? right : left});
  }
  PreferenceTable table;
  table.systems = systems;
  table.counts = Matrix(systems.size(), systems.size());
  for (const Trial& t : trials) table.counts(t.winner, t.loser) += 1.0;
  return table;
}

void save_preference_csv(const PreferenceTable& table,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("save_preference_csv: cannot open " + path.string());
  out << "left_system,right_system,winner\n";
  const std::size_t s = table.systems.size();
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i + 1; j < s; ++j) {
      for (std::size_t n = 0; n < static_cast<std::size_t>(table.counts(i, j)); ++n)
        out << table.systems[i] << ',' << table.systems[j] << ','
            << table.systems[i] << "\n";
      for (std::size_t n = 0; n < static_cast<std::size_t>(table.counts(j, i)); ++n)
        out << table.systems[i] << ',' << table.systems[j] << ','
            << table.systems[j] << "\n";
    }
  }
}

ExcessPreference excess_preference(const PreferenceTable& table) {
  const std::size_t s = table.systems.size();
  if (s < 2) throw DataError("excess_preference: need at least 2 systems");
  ExcessPreference out;
  const std::size_t pairs = s * (s - 1) / 2;
  out.a = Matrix(pairs, s);
  out.b.resize(pairs);
  std::size_t p = 0;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i + 1; j < s; ++j, ++p) {
      const double wins_i = table.counts(i, j);
      const double wins_j = table.counts(j, i);
      const double n = wins_i + wins_j;
      if (n <= 0.0)
        throw DataError("excess_preference: no trials for pair (" +
                        table.systems[i] + ", " + table.systems[j] + ")");
      out.a(p, i) = 1.0;
      out.a(p, j) = -1.0;
      out.b[p] = (wins_i - wins_j) / n;
      out.pairs.emplace_back(i, j);
    }
  }
  return out;
}

RankSolution solve_ranking(const ExcessPreference& system) {
  const std::size_t s = system.a.cols();
  const std::size_t p = system.a.rows();
  if (system.b.size() != p) throw DataError("solve_ranking: shape mismatch");

  // Connectivity of the comparison graph.
  std::vector<std::size_t> parent(s);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [i, j] : system.pairs) parent[find(i)] = find(j);
  for (std::size_t i = 1; i < s; ++i)
    if (find(i) != find(0))
      throw DataError("solve_ranking: comparison graph is disconnected");

  // Normal equations plus a rank-one term fixing the mean-zero gauge:
  // (A^T A + 1 1^T / s) x = A^T b. A^T b is orthogonal to the all-ones
  // vector, so the solution is the minimum-norm least-squares solution.
  Matrix m(s, s);
  std::vector<double> rhs(s, 0.0);
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t i = 0; i < s; ++i) {
      if (system.a(r, i) == 0.0) continue;
      rhs[i] += system.a(r, i) * system.b[r];
      for (std::size_t j = 0; j < s; ++j)
        m(i, j) += system.a(r, i) * system.a(r, j);
    }
  }
  const double gauge = 1.0 / static_cast<double>(s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j) m(i, j) += gauge;

  // Dense Cholesky solve; S is at most a handful of systems.
  Matrix l(s, s);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = m(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
      if (i == j) {
        if (!(sum > 0.0))
          throw NumericalError("solve_ranking: gauge-fixed system not SPD");
        l(i, i) = std::sqrt(sum);
      } else {
        l(i, j) = sum / l(j, j);
      }
    }
  }
  std::vector<double> y(s), x(s);
  for (std::size_t i = 0; i < s; ++i) {
    double sum = rhs[i];
    for (std::size_t k = 0; k < i; ++k) sum -= l(i, k) * y[k];
    y[i] = sum / l(i, i);
  }
  for (std::size_t ii = s; ii-- > 0;) {
    double sum = y[ii];
    for (std::size_t k = ii + 1; k < s; ++k) sum -= l(k, ii) * x[k];
    x[ii] = sum / l(ii, ii);
  }
  return RankSolution{std::move(x)};
}

namespace {

// Midranks of the pooled sample, plus the tie-correction term sum(t^3 - t).
struct PooledRanks {
  std::vector<double> ranks_a, ranks_b;
  double tie_term = 0.0;
};

PooledRanks midranks(const std::vector<double>& a, const std::vector<double>& b) {
  struct Item {
    double value;
    bool from_a;
  };
  std::vector<Item> pool;
  pool.reserve(a.size() + b.size());
  for (double v : a) pool.push_back({v, true});
  for (double v : b) pool.push_back({v, false});
  std::stable_sort(pool.begin(), pool.end(),
                   [](const Item& x, const Item& y) { return x.value < y.value; });
  PooledRanks out;
  std::size_t i = 0;
  while (i < pool.size()) {
    std::size_t j = i;
    while (j < pool.size() && pool[j].value == pool[i].value) ++j;
    const double t = static_cast<double>(j - i);
    const double rank = 0.5 * static_cast<double>(i + 1 + j);  // midrank
    out.tie_term += t * t * t - t;
    for (std::size_t k = i; k < j; ++k) {
      if (pool[k].from_a) {
        out.ranks_a.push_back(rank);
      } else {
        out.ranks_b.push_back(rank);
      }
    }
    i = j;
  }
  return out;
}

}  // namespace

WilcoxonResult wilcoxon_ranksum(const std::vector<double>& sample_a,
                                const std::vector<double>& sample_b) {
  if (sample_a.empty() || sample_b.empty())
    throw DataError("wilcoxon_ranksum: empty sample");
  const std::size_t na = sample_a.size();
  const std::size_t nb = sample_b.size();
  const std::size_t n = na + nb;
  const PooledRanks pr = midranks(sample_a, sample_b);

  WilcoxonResult res;
  for (double r : pr.ranks_a) res.statistic += r;
  const double mean = static_cast<double>(na) * static_cast<double>(n + 1) / 2.0;

  if (std::min(na, nb) < 10) {
    // Exact distribution of the rank sum, counted by subset-sum DP over
    // doubled midranks (integers). The DP runs over the smaller side; the
    // two rank sums total a constant, so the absolute deviation from the
    // mean is the same either way.
    const std::size_t m = std::min(na, nb);
    double small_stat = res.statistic;
    if (nb < na) {
      small_stat = 0.0;
      for (double r : pr.ranks_b) small_stat += r;
    }
    std::vector<long long> doubled;
    doubled.reserve(n);
    for (double r : pr.ranks_a) doubled.push_back(std::llround(2.0 * r));
    for (double r : pr.ranks_b) doubled.push_back(std::llround(2.0 * r));
    std::vector<long long> sorted = doubled;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    long long max_sum = 0;
    for (std::size_t i = 0; i < m; ++i) max_sum += sorted[i];
    // dp[c][s] = number of c-subsets with doubled-rank sum s
    std::vector<std::vector<double>> dp(
        m + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
    dp[0][0] = 1.0;
    for (long long d : doubled) {
      for (std::size_t c = m; c-- > 0;) {
        const auto& src = dp[c];
        auto& dst = dp[c + 1];
        for (long long s2 = max_sum - d; s2 >= 0; --s2) {
          const double v = src[static_cast<std::size_t>(s2)];
          if (v != 0.0) dst[static_cast<std::size_t>(s2 + d)] += v;
        }
      }
    }
    const long long mean2 = static_cast<long long>(m) * static_cast<long long>(n + 1);
    const long long obs_dev = std::llabs(std::llround(2.0 * small_stat) - mean2);
    double favorable = 0.0, total = 0.0;
    for (long long s2 = 0; s2 <= max_sum; ++s2) {
      const double cnt = dp[m][static_cast<std::size_t>(s2)];
      if (cnt == 0.0) continue;
      total += cnt;
      if (std::llabs(s2 - mean2) >= obs_dev) favorable += cnt;
    }
    res.p_two_sided = favorable / total;
    return res;
  }

  const double dn = static_cast<double>(n);
  const double tie_corrected =
      (dn + 1.0) - pr.tie_term / (dn * (dn - 1.0));
  const double var = static_cast<double>(na) * static_cast<double>(nb) / 12.0 *
                     tie_corrected;
  if (!(var > 0.0)) {
    res.p_two_sided = 1.0;  // everything tied
    return res;
  }
  double dev = res.statistic - mean;
  // Continuity correction toward the mean.
  if (dev > 0.5) {
    dev -= 0.5;
  } else if (dev < -0.5) {
    dev += 0.5;
  } else {
    dev = 0.0;
  }
  const double z = dev / std::sqrt(var);
  res.p_two_sided = std::min(1.0, 2.0 * normal_sf(std::abs(z)));
  return res;
}

double binomial_test(std::size_t successes, std::size_t trials, double p0) {
  if (trials == 0) throw DataError("binomial_test: zero trials");
  if (successes > trials)
    throw DataError("binomial_test: successes exceed trials");
  if (!(p0 > 0.0 && p0 < 1.0))
    throw DataError("binomial_test: p0 must be in (0, 1)");
  auto log_pmf = [&](std::size_t k) {
    const double dk = static_cast<double>(k);
    const double dn = static_cast<double>(trials);
    return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) -
           std::lgamma(dn - dk + 1.0) + dk * std::log(p0) +
           (dn - dk) * std::log1p(-p0);
  };
  const double obs = log_pmf(successes);
  double p = 0.0;
  for (std::size_t k = 0; k <= trials; ++k) {
    if (log_pmf(k) <= obs + 1e-9) p += std::exp(log_pmf(k));
  }
  return std::min(1.0, p);
}

std::vector<double> holm_bonferroni(const std::vector<double>& p_values) {
  const std::size_t m = p_values.size();
  for (double p : p_values)
    if (!(p >= 0.0 && p <= 1.0))
      throw DataError("holm_bonferroni: p-value outside [0, 1]");
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return p_values[a] < p_values[b];
  });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double term =
        std::min(1.0, static_cast<double>(m - j) * p_values[idx[j]]);
    running = std::max(running, term);
    adjusted[idx[j]] = running;
  }
  return adjusted;
}

std::vector<std::size_t> logf0_histogram(const ContourSet& contours,
                                         const std::vector<double>& bin_edges) {
  if (bin_edges.size() < 2)
    throw DataError("logf0_histogram: need at least 2 bin edges");
  for (std::size_t i = 1; i < bin_edges.size(); ++i)
    if (!(bin_edges[i] > bin_edges[i - 1]))
      throw DataError("logf0_histogram: bin edges must be increasing");
  std::vector<std::size_t> counts(bin_edges.size() - 1, 0);
  for (const Contour& c : contours.contours) {
    for (std::size_t t = 0; t < c.logf0.size(); ++t) {
      if (!c.voicing[t]) continue;
      const double v = c.logf0[t];
      if (v < bin_edges.front() || v > bin_edges.back()) continue;
      if (v == bin_edges.back()) {
        ++counts.back();  // last bin is closed
        continue;
      }
      const auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), v);
      counts[static_cast<std::size_t>(it - bin_edges.begin()) - 1] += 1;
    }
  }
  return counts;
}

VariednessStats variedness_stats(const ContourSet& contours) {
  VariednessStats stats;
  double pooled_sum = 0.0, pooled_sq = 0.0;
  std::size_t pooled_n = 0;
  for (const Contour& c : contours.contours) {
    double sum = 0.0, sq = 0.0;
    std::size_t n = 0;
    for (std::size_t t = 0; t < c.logf0.size(); ++t) {
      if (!c.voicing[t]) continue;
      sum += c.logf0[t];
      sq += c.logf0[t] * c.logf0[t];
      ++n;
    }
    if (n == 0)
      throw DataError("variedness_stats: utterance " + c.utt_id +
                      " has no voiced frames");
    pooled_sum += sum;
    pooled_sq += sq;
    pooled_n += n;
    double sd = 0.0;
    if (n == 1) {
      ++stats.single_frame_utterances;
    } else {
      const double mean = sum / static_cast<double>(n);
      const double var =
          std::max(0.0, (sq - static_cast<double>(n) * mean * mean) /
                            static_cast<double>(n - 1));
      sd = std::sqrt(var);
    }
    stats.per_utterance.emplace_back(c.utt_id, sd);
  }
  if (pooled_n >= 2) {
    const double mean = pooled_sum / static_cast<double>(pooled_n);
    const double var =
        std::max(0.0, (pooled_sq - static_cast<double>(pooled_n) * mean * mean) /
                          static_cast<double>(pooled_n - 1));
    stats.pooled_std = std::sqrt(var);
  }
  return stats;
}

}  // namespace intovar::evalkit
