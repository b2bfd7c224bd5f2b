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

#include "embeval/vocab.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "embeval/error.h"
#include "embeval/kernels.h"

namespace embeval::vocab {

TokenCounts count_tokens(std::span<const std::string> lines) {
  TokenCounts counts;
  kernels::count_tokens(lines, counts);
  return counts;
}

TokenCounts count_tokens(std::istream &in, std::size_t chunk_lines) {
  TokenCounts counts;
  std::vector<std::string> chunk;
  chunk.reserve(chunk_lines);
  std::string line;
  while (std::getline(in, line)) {
    chunk.push_back(std::move(line));
    if (chunk.size() >= chunk_lines) {
      kernels::count_tokens(chunk, counts);
      chunk.clear();
    }
  }
  if (in.bad()) throw IoError("read error while counting tokens");
  kernels::count_tokens(chunk, counts);
  return counts;
}

TokenCounts count_tokens(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return count_tokens(in);
}

std::uint64_t total_tokens(const TokenCounts &counts) {
  std::uint64_t total = 0;
  for (const auto &[token, count] : counts) total += count;
  return total;
}

std::vector<VocabEntry> build_vocab(const TokenCounts &counts,
                                    std::uint64_t min_count,
                                    std::optional<std::size_t> max_size) {
  if (min_count < 1) throw ArgumentError("min_count must be >= 1");
  std::vector<VocabEntry> vocab;
  for (const auto &[token, count] : counts) {
    if (count >= min_count) vocab.push_back({token, count, 0});
  }
  std::sort(vocab.begin(), vocab.end(),
            [](const VocabEntry &a, const VocabEntry &b) {
              if (a.count != b.count) return a.count > b.count;
              return a.token < b.token;
            });
  if (max_size && vocab.size() > *max_size) vocab.resize(*max_size);
  for (std::size_t i = 0; i < vocab.size(); ++i) vocab[i].rank = i + 1;
  return vocab;
}

std::uint64_t default_min_count(std::uint64_t corpus_tokens) {
  constexpr std::uint64_t kLow = 100'000'000;
  constexpr std::uint64_t kHigh = 1'000'000'000;
  if (corpus_tokens < kLow) return 15;
  if (corpus_tokens >= kHigh) return 25;
  return 15 + (10 * (corpus_tokens - kLow)) / (kHigh - kLow);
}

void write_vocab(std::span<const VocabEntry> vocab, std::ostream &out,
                 bool with_counts) {
  for (const VocabEntry &e : vocab) {
    out << e.token;
    if (with_counts) out << '\t' << e.count;
    out << '\n';
  }
}

void write_vocab(std::span<const VocabEntry> vocab,
                 const std::filesystem::path &path, bool with_counts) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_vocab(vocab, out, with_counts);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::string> read_vocab(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tab = line.find('\t');
    std::string token = line.substr(0, tab);
    if (!token.empty()) tokens.push_back(std::move(token));
  }
  return tokens;
}

}  // namespace embeval::vocab
