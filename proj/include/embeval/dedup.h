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

#ifndef EMBEVAL_DEDUP_H_
#define EMBEVAL_DEDUP_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

namespace embeval::dedup {

enum class Unit { kParagraph, kSentence };

Unit parse_unit(std::string_view name);
std::string_view unit_name(Unit unit);

struct DedupConfig {
  std::size_t n = 9;       // shingle length in tokens
  double threshold = 0.9;  // drop when duplicate ratio is strictly above this
  Unit unit = Unit::kParagraph;

  // Throws ArgumentError unless n >= 1 and 0 <= threshold <= 1.
  void validate() const;
};

// 64-bit FNV-1a over the bytes of the tokens joined by single spaces. Case
// and all other bytes are preserved, so the value is stable everywhere.
std::uint64_t hash_window(std::span<const std::string> window);

// Hashes of every contiguous n-token window; a unit shorter than n gives a
// single hash of the whole unit.
std::vector<std::uint64_t> shingle(std::span<const std::string> unit,
                                   std::size_t n);

// Seen-content store, sharded by the top bits of the hash.
class ShingleSet {
 public:
  explicit ShingleSet(std::size_t shard_bits = 6);

  bool contains(std::uint64_t hash) const;
  // Returns true if the hash was new.
  bool insert(std::uint64_t hash);
  std::size_t size() const { return size_; }

 private:
  std::size_t shard_of(std::uint64_t hash) const {
    return static_cast<std::size_t>(hash >> (64 - shard_bits_));
  }

  std::size_t shard_bits_;
  std::vector<std::unordered_set<std::uint64_t>> shards_;
  std::size_t size_ = 0;
};

struct DedupStats {
  std::size_t units_in = 0;
  std::size_t units_kept = 0;
  std::size_t tokens_in = 0;
  std::size_t tokens_kept = 0;
  std::size_t distinct_shingles = 0;

  std::size_t units_dropped() const { return units_in - units_kept; }
  std::size_t tokens_dropped() const { return tokens_in - tokens_kept; }
  nlohmann::json to_json() const;
};

// The sequential keep/drop decision. Feed units in corpus order.
class Deduplicator {
 public:
  explicit Deduplicator(const DedupConfig &config);

  // Fraction of `shingles` already present in the seen set (0 for an empty
  // list). Does not modify state.
  double duplicate_ratio(std::span<const std::uint64_t> shingles) const;

  // Decides one unit; kept units add their shingles to the seen set.
  bool offer(std::span<const std::uint64_t> shingles, std::size_t tokens);

  const DedupStats &stats() const { return stats_; }
  const ShingleSet &seen() const { return seen_; }

 private:
  DedupConfig config_;
  ShingleSet seen_;
  DedupStats stats_;
};

struct DedupResult {
  std::vector<std::size_t> kept;  // indices into the input, ascending
  DedupStats stats;
};

// Single pass over `units` (token sequences). Shingling runs in parallel;
// decisions are made in input order.
DedupResult dedup_stream(std::span<const std::vector<std::string>> units,
                         const DedupConfig &config);

// File driver over the one-sentence-per-line format. Kept units are written
// in the same format; a paragraph whose sentences were all dropped
// disappears together with its separator.
DedupStats dedup_file(const std::filesystem::path &in,
                      const std::filesystem::path &out,
                      const DedupConfig &config,
                      std::size_t batch_paragraphs = 4096);

}  // namespace embeval::dedup

#endif  // EMBEVAL_DEDUP_H_
