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

#ifndef EMBEVAL_KERNELS_H_
#define EMBEVAL_KERNELS_H_

// Hot loops of the toolkit. `kernels` holds the OpenMP versions used by the
// library; `reference` holds straightforward serial versions with identical
// results, kept for tests and benchmarks.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "embeval/corpus.h"
#include "embeval/embstore.h"
#include "embeval/vocab.h"

namespace embeval {

// Cosine query with a known target and up to three excluded rows.
struct RankQuery {
  std::vector<double> q;
  std::size_t target = 0;
  std::array<std::size_t, 3> exclude{};
};

#define EMBEVAL_KERNEL_DECLS                                                  \
  void tokenize_paragraphs(std::span<corpus::Paragraph> paragraphs,          \
                           const corpus::LanguageRules &rules);              \
  std::vector<std::vector<std::uint64_t>> shingle_units(                     \
      std::span<const std::vector<std::string>> units, std::size_t n);       \
  void count_tokens(std::span<const std::string> lines,                      \
                    vocab::TokenCounts &counts);                             \
  void accumulate_by_token(std::span<const emb::TokenEmbeddingRecord> records, \
                           emb::Layer layer,                                 \
                           const std::unordered_set<std::string> *filter,    \
                           std::uint64_t base, emb::AccumulatorTable &table); \
  std::vector<std::size_t> target_ranks(emb::MatrixView<float> candidates,   \
                                        std::span<const double> inv_norms,   \
                                        std::span<const RankQuery> queries); \
  std::vector<std::uint64_t> confusion_counts(                               \
      std::span<const std::uint8_t> gold, std::span<const std::uint8_t> pred, \
      std::size_t classes);

namespace kernels {
using embeval::RankQuery;
EMBEVAL_KERNEL_DECLS
}  // namespace kernels

namespace reference {
using embeval::RankQuery;
EMBEVAL_KERNEL_DECLS
}  // namespace reference

#undef EMBEVAL_KERNEL_DECLS

}  // namespace embeval

#endif  // EMBEVAL_KERNELS_H_
