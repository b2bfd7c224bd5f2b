// Copyright 2026 The embeval Authors.
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

#ifndef EMBEVAL_TESTS_ORACLES_H_
#define EMBEVAL_TESTS_ORACLES_H_

// Brute-force implementations written straight from the definitions. They
// share no code with the library beyond plain data types.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace embeval::oracle {

using Vec = std::vector<double>;

inline double cos(const Vec &u, const Vec &v) {
  double dot = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  return dot / (std::sqrt(uu) * std::sqrt(vv));
}

// Candidates ordered by descending score, lower index first among equals,
// found by repeated selection.
inline std::vector<std::size_t> order_by(const std::vector<double> &score) {
  std::vector<std::size_t> out;
  std::vector<bool> used(score.size(), false);
  for (std::size_t step = 0; step < score.size(); ++step) {
    std::size_t best = score.size();
    for (std::size_t j = 0; j < score.size(); ++j) {
      if (used[j]) continue;
      if (best == score.size() || score[j] > score[best]) best = j;
    }
    used[best] = true;
    out.push_back(best);
  }
  return out;
}

// 0-based rank of `d` among all rows except a, b and c, by cosine to
// b - a + c.
inline std::size_t analogy_rank(const std::vector<Vec> &rows, std::size_t a,
                                std::size_t b, std::size_t c, std::size_t d) {
  Vec q(rows[a].size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    q[k] = rows[b][k] - rows[a][k] + rows[c][k];
  }
  std::vector<double> score(rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) score[j] = cos(rows[j], q);
  std::size_t rank = 0;
  for (const std::size_t j : order_by(score)) {
    if (j == d) return rank;
    if (j != a && j != b && j != c) ++rank;
  }
  return rank;
}

// 2 cos(q, y) - r(q) - r(y) with K-nearest means, K capped at the set size.
inline double mean_top(std::vector<double> v, std::size_t k) {
  std::sort(v.begin(), v.end(), [](double x, double y) { return x > y; });
  k = std::min(k, v.size());
  double s = 0;
  for (std::size_t i = 0; i < k; ++i) s += v[i];
  return s / static_cast<double>(k);
}

inline std::vector<double> csls(const Vec &q, const std::vector<Vec> &cands,
                                const std::vector<Vec> &query_set,
                                std::size_t k) {
  std::vector<double> to_cands;
  for (const auto &y : cands) to_cands.push_back(cos(q, y));
  const double rq = mean_top(to_cands, k);
  std::vector<double> out;
  for (std::size_t j = 0; j < cands.size(); ++j) {
    std::vector<double> to_queries;
    for (const auto &x : query_set) to_queries.push_back(cos(cands[j], x));
    out.push_back(2 * to_cands[j] - rq - mean_top(to_queries, k));
  }
  return out;
}

// Per-class F1 for labels 0..2 with label 3 as "other", from a full
// confusion matrix.
struct F1Result {
  std::array<double, 3> f1{};
  double macro = 0;
};

inline F1Result macro_f1(const std::vector<int> &gold,
                         const std::vector<int> &pred) {
  std::array<std::array<std::uint64_t, 4>, 4> m{};
  for (std::size_t i = 0; i < gold.size(); ++i) ++m[gold[i]][pred[i]];
  F1Result r;
  double sum = 0;
  for (int c = 0; c < 3; ++c) {
    std::uint64_t tp = m[c][c], fp = 0, fn = 0;
    for (int o = 0; o < 4; ++o) {
      if (o == c) continue;
      fp += m[o][c];
      fn += m[c][o];
    }
    const double p = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double rc = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    r.f1[c] = p + rc == 0 ? 0.0 : 2 * p * rc / (p + rc);
    sum += r.f1[c];
  }
  r.macro = sum / 3;
  return r;
}

// Sequential greedy near-duplicate filter over units given as shingle
// lists: keep unless more than `threshold` of the shingles were seen.
inline std::vector<std::size_t> dedup_keep(
    const std::vector<std::vector<std::uint64_t>> &units, double threshold) {
  std::vector<std::uint64_t> seen;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < units.size(); ++i) {
    std::size_t dup = 0;
    for (const auto h : units[i]) {
      if (std::find(seen.begin(), seen.end(), h) != seen.end()) ++dup;
    }
    const double ratio =
        units[i].empty() ? 0.0 : static_cast<double>(dup) / static_cast<double>(units[i].size());
    if (ratio > threshold) continue;
    kept.push_back(i);
    seen.insert(seen.end(), units[i].begin(), units[i].end());
  }
  return kept;
}

}  // namespace embeval::oracle

#endif  // EMBEVAL_TESTS_ORACLES_H_
