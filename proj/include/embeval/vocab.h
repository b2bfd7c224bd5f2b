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

#ifndef EMBEVAL_VOCAB_H_
#define EMBEVAL_VOCAB_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace embeval::vocab {

using TokenCounts = std::unordered_map<std::string, std::uint64_t>;

struct VocabEntry {
  std::string token;
  std::uint64_t count = 0;
  std::size_t rank = 0;  // 1-based

  bool operator==(const VocabEntry &) const = default;
};

// Exact counts of whitespace-separated tokens. The stream variant reads in
// chunks and counts each chunk in parallel.
TokenCounts count_tokens(std::span<const std::string> lines);
TokenCounts count_tokens(std::istream &in, std::size_t chunk_lines = 65536);
TokenCounts count_tokens(const std::filesystem::path &path);

std::uint64_t total_tokens(const TokenCounts &counts);

// Keeps tokens with count >= min_count, orders them by descending count with
// ties broken by byte order of the token (code point order for UTF-8), then
// truncates to max_size.
std::vector<VocabEntry> build_vocab(const TokenCounts &counts,
                                    std::uint64_t min_count,
                                    std::optional<std::size_t> max_size = {});

// Minimum count scaled to corpus size: 15 below 100M tokens, 25 from 1B
// tokens, linear in between (rounded down).
std::uint64_t default_min_count(std::uint64_t corpus_tokens);

// One token per line in rank order, optionally followed by a tab and count.
void write_vocab(std::span<const VocabEntry> vocab, std::ostream &out,
                 bool with_counts);
void write_vocab(std::span<const VocabEntry> vocab,
                 const std::filesystem::path &path, bool with_counts);

// First column of a vocabulary file, in file order.
std::vector<std::string> read_vocab(const std::filesystem::path &path);

}  // namespace embeval::vocab

#endif  // EMBEVAL_VOCAB_H_
