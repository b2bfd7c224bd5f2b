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

#include <algorithm>
#include <numeric>

#include "embeval/corpus.h"
#include "embeval/dedup.h"
#include "embeval/error.h"
#include "embeval/kernels.h"

namespace embeval::reference {

void tokenize_paragraphs(std::span<corpus::Paragraph> paragraphs,
                         const corpus::LanguageRules &rules) {
  for (corpus::Paragraph &p : paragraphs) corpus::tokenize_paragraph(p, rules);
}

std::vector<std::vector<std::uint64_t>> shingle_units(
    std::span<const std::vector<std::string>> units, std::size_t n) {
  std::vector<std::vector<std::uint64_t>> out;
  out.reserve(units.size());
  for (const auto &unit : units) out.push_back(dedup::shingle(unit, n));
  return out;
}

void count_tokens(std::span<const std::string> lines,
                  vocab::TokenCounts &counts) {
  for (const std::string &line : lines) {
    for (const std::string_view token : corpus::split_whitespace(line)) {
      ++counts[std::string(token)];
    }
  }
}

void accumulate_by_token(std::span<const emb::TokenEmbeddingRecord> records,
                         emb::Layer layer,
                         const std::unordered_set<std::string> *filter,
                         std::uint64_t base, emb::AccumulatorTable &table) {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const emb::TokenEmbeddingRecord &r = records[i];
    if (r.layer != layer) continue;
    if (filter && !filter->count(r.token)) continue;
    auto &shard = table.shard(table.shard_of(r.token));
    auto [it, inserted] = shard.try_emplace(r.token);
    if (inserted) it->second.first_seen = base + i;
    it->second.acc.add(r.vector);
  }
}

std::vector<std::size_t> target_ranks(emb::MatrixView<float> candidates,
                                      std::span<const double> inv_norms,
                                      std::span<const RankQuery> queries) {
  std::vector<std::size_t> ranks;
  ranks.reserve(queries.size());
  std::vector<double> scores(candidates.rows);
  std::vector<std::size_t> order(candidates.rows);
  for (const RankQuery &query : queries) {
    const double q_inv = emb::inverse_norm(std::span<const double>(query.q));
    for (std::size_t j = 0; j < candidates.rows; ++j) {
      scores[j] = emb::scaled_dot(candidates.row(j), query.q, inv_norms[j], q_inv);
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return scores[a] > scores[b];
    });
    std::size_t rank = 0;
    for (const std::size_t j : order) {
      if (j == query.target) break;
      if (std::find(query.exclude.begin(), query.exclude.end(), j) ==
          query.exclude.end()) {
        ++rank;
      }
    }
    ranks.push_back(rank);
  }
  return ranks;
}

std::vector<std::uint64_t> confusion_counts(std::span<const std::uint8_t> gold,
                                            std::span<const std::uint8_t> pred,
                                            std::size_t classes) {
  if (gold.size() != pred.size()) {
    throw ArgumentError("confusion_counts: length mismatch");
  }
  std::vector<std::uint64_t> m(classes * classes, 0);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] >= classes || pred[i] >= classes) {
      throw ArgumentError("confusion_counts: label out of range");
    }
    ++m[gold[i] * classes + pred[i]];
  }
  return m;
}

}  // namespace embeval::reference
