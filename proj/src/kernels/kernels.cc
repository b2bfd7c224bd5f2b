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

#include "embeval/corpus.h"
#include "embeval/dedup.h"
#include "embeval/error.h"
#include "embeval/kernels.h"
#include "embeval/parallel.h"

namespace embeval::kernels {

void tokenize_paragraphs(std::span<corpus::Paragraph> paragraphs,
                         const corpus::LanguageRules &rules) {
  const auto n = static_cast<std::ptrdiff_t>(paragraphs.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    corpus::tokenize_paragraph(paragraphs[i], rules);
  }
}

std::vector<std::vector<std::uint64_t>> shingle_units(
    std::span<const std::vector<std::string>> units, std::size_t n) {
  if (n == 0) throw ArgumentError("shingle length must be >= 1");
  std::vector<std::vector<std::uint64_t>> out(units.size());
  const auto count = static_cast<std::ptrdiff_t>(units.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    out[i] = dedup::shingle(units[i], n);
  }
  return out;
}

void count_tokens(std::span<const std::string> lines,
                  vocab::TokenCounts &counts) {
  const int threads = std::max(1, max_threads());
  if (threads == 1 || lines.size() < 2) {
    reference::count_tokens(lines, counts);
    return;
  }
  std::vector<vocab::TokenCounts> local(static_cast<std::size_t>(threads));
  const auto n = static_cast<std::ptrdiff_t>(lines.size());
#pragma omp parallel num_threads(threads)
  {
#ifdef _OPENMP
    auto &mine = local[static_cast<std::size_t>(omp_get_thread_num())];
#else
    auto &mine = local[0];
#endif
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      for (const std::string_view token : corpus::split_whitespace(lines[i])) {
        ++mine[std::string(token)];
      }
    }
  }
  for (auto &m : local) {
    for (auto &[token, c] : m) counts[token] += c;
  }
}

void accumulate_by_token(std::span<const emb::TokenEmbeddingRecord> records,
                         emb::Layer layer,
                         const std::unordered_set<std::string> *filter,
                         std::uint64_t base, emb::AccumulatorTable &table) {
  constexpr std::size_t kSkip = static_cast<std::size_t>(-1);
  std::vector<std::size_t> shard_id(records.size(), kSkip);
  const auto n = static_cast<std::ptrdiff_t>(records.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const emb::TokenEmbeddingRecord &r = records[i];
    if (r.layer != layer) continue;
    if (filter && !filter->count(r.token)) continue;
    shard_id[i] = table.shard_of(r.token);
  }

  // Each shard walks the chunk in stream order, so a token's vectors are
  // summed in the same order whatever the shard count.
  const auto shards = static_cast<std::ptrdiff_t>(table.shards());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t s = 0; s < shards; ++s) {
    auto &shard = table.shard(static_cast<std::size_t>(s));
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (shard_id[i] != static_cast<std::size_t>(s)) continue;
      auto [it, inserted] = shard.try_emplace(records[i].token);
      if (inserted) it->second.first_seen = base + i;
      it->second.acc.add(records[i].vector);
    }
  }
}

std::vector<std::size_t> target_ranks(emb::MatrixView<float> candidates,
                                      std::span<const double> inv_norms,
                                      std::span<const RankQuery> queries) {
  std::vector<std::size_t> ranks(queries.size());
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const RankQuery &query = queries[i];
    const double q_inv = emb::inverse_norm(std::span<const double>(query.q));
    const std::size_t t = query.target;
    const double target =
        emb::scaled_dot(candidates.row(t), query.q, inv_norms[t], q_inv);
    std::size_t rank = 0;
    for (std::size_t j = 0; j < candidates.rows; ++j) {
      if (j == t || j == query.exclude[0] || j == query.exclude[1] ||
          j == query.exclude[2]) {
        continue;
      }
      const double s =
          emb::scaled_dot(candidates.row(j), query.q, inv_norms[j], q_inv);
      if (s > target || (s == target && j < t)) ++rank;
    }
    ranks[i] = rank;
  }
  return ranks;
}

std::vector<std::uint64_t> confusion_counts(std::span<const std::uint8_t> gold,
                                            std::span<const std::uint8_t> pred,
                                            std::size_t classes) {
  if (gold.size() != pred.size()) {
    throw ArgumentError("confusion_counts: length mismatch");
  }
  const std::size_t cells = classes * classes;
  std::vector<std::uint64_t> m(cells, 0);
  bool bad = false;
  const auto n = static_cast<std::ptrdiff_t>(gold.size());
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(cells, 0);
    bool local_bad = false;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (gold[i] >= classes || pred[i] >= classes) {
        local_bad = true;
        continue;
      }
      ++local[gold[i] * classes + pred[i]];
    }
#pragma omp critical(embeval_confusion)
    {
      for (std::size_t c = 0; c < cells; ++c) m[c] += local[c];
      bad = bad || local_bad;
    }
  }
  if (bad) throw ArgumentError("confusion_counts: label out of range");
  return m;
}

}  // namespace embeval::kernels
