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

#include "embeval/dedup.h"

#include <fstream>

#include "embeval/corpus.h"
#include "embeval/error.h"
#include "embeval/kernels.h"

namespace embeval::dedup {

namespace {
constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes) {
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return h;
}
}  // namespace

Unit parse_unit(std::string_view name) {
  if (name == "paragraph") return Unit::kParagraph;
  if (name == "sentence") return Unit::kSentence;
  throw ArgumentError("unknown dedup unit '" + std::string(name) +
                      "' (expected paragraph or sentence)");
}

std::string_view unit_name(Unit unit) {
  return unit == Unit::kParagraph ? "paragraph" : "sentence";
}

void DedupConfig::validate() const {
  if (n < 1) throw ArgumentError("shingle length must be >= 1");
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ArgumentError("duplicate threshold must be in [0, 1]");
  }
}

std::uint64_t hash_window(std::span<const std::string> window) {
  std::uint64_t h = kFnvOffset;
  for (std::size_t i = 0; i < window.size(); ++i) {
    if (i > 0) h = fnv1a(h, " ");
    h = fnv1a(h, window[i]);
  }
  return h;
}

std::vector<std::uint64_t> shingle(std::span<const std::string> unit,
                                   std::size_t n) {
  if (n == 0) throw ArgumentError("shingle length must be >= 1");
  std::vector<std::uint64_t> hashes;
  if (unit.empty()) return hashes;
  if (unit.size() < n) {
    hashes.push_back(hash_window(unit));
    return hashes;
  }
  hashes.reserve(unit.size() - n + 1);
  for (std::size_t i = 0; i + n <= unit.size(); ++i) {
    hashes.push_back(hash_window(unit.subspan(i, n)));
  }
  return hashes;
}

ShingleSet::ShingleSet(std::size_t shard_bits)
    : shard_bits_(shard_bits == 0 ? 1 : shard_bits),
      shards_(std::size_t{1} << shard_bits_) {}

bool ShingleSet::contains(std::uint64_t hash) const {
  const auto &shard = shards_[shard_of(hash)];
  return shard.find(hash) != shard.end();
}

bool ShingleSet::insert(std::uint64_t hash) {
  const bool added = shards_[shard_of(hash)].insert(hash).second;
  if (added) ++size_;
  return added;
}

nlohmann::json DedupStats::to_json() const {
  return nlohmann::json{{"units_in", units_in},
                        {"units_kept", units_kept},
                        {"tokens_in", tokens_in},
                        {"tokens_kept", tokens_kept},
                        {"distinct_shingles", distinct_shingles}};
}

Deduplicator::Deduplicator(const DedupConfig &config) : config_(config) {
  config_.validate();
}

double Deduplicator::duplicate_ratio(
    std::span<const std::uint64_t> shingles) const {
  if (shingles.empty()) return 0.0;
  std::size_t seen = 0;
  for (const std::uint64_t h : shingles) {
    if (seen_.contains(h)) ++seen;
  }
  return static_cast<double>(seen) / static_cast<double>(shingles.size());
}

bool Deduplicator::offer(std::span<const std::uint64_t> shingles,
                         std::size_t tokens) {
  ++stats_.units_in;
  stats_.tokens_in += tokens;
  if (duplicate_ratio(shingles) > config_.threshold) return false;
  for (const std::uint64_t h : shingles) seen_.insert(h);
  ++stats_.units_kept;
  stats_.tokens_kept += tokens;
  stats_.distinct_shingles = seen_.size();
  return true;
}

DedupResult dedup_stream(std::span<const std::vector<std::string>> units,
                         const DedupConfig &config) {
  Deduplicator dedup(config);
  const auto shingles = kernels::shingle_units(units, config.n);
  DedupResult result;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (dedup.offer(shingles[i], units[i].size())) result.kept.push_back(i);
  }
  result.stats = dedup.stats();
  return result;
}

DedupStats dedup_file(const std::filesystem::path &in,
                      const std::filesystem::path &out,
                      const DedupConfig &config,
                      std::size_t batch_paragraphs) {
  Deduplicator dedup(config);
  corpus::ParagraphReader reader(in, corpus::InputFormat::kPretokenized);
  std::ofstream os(out, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + out.string());

  bool first = true;
  std::vector<corpus::Paragraph> batch;
  std::vector<std::vector<std::string>> units;
  const auto flush = [&] {
    units.clear();
    for (const corpus::Paragraph &p : batch) {
      if (config.unit == Unit::kParagraph) {
        std::vector<std::string> tokens;
        for (const auto &s : p.sentences) {
          tokens.insert(tokens.end(), s.tokens.begin(), s.tokens.end());
        }
        units.push_back(std::move(tokens));
      } else {
        for (const auto &s : p.sentences) units.push_back(s.tokens);
      }
    }
    const auto shingles = kernels::shingle_units(units, config.n);

    std::size_t u = 0;
    for (const corpus::Paragraph &p : batch) {
      corpus::Paragraph kept;
      if (config.unit == Unit::kParagraph) {
        if (dedup.offer(shingles[u], units[u].size())) kept = p;
        ++u;
      } else {
        for (const auto &s : p.sentences) {
          if (dedup.offer(shingles[u], units[u].size())) {
            kept.sentences.push_back(s);
          }
          ++u;
        }
      }
      if (corpus::emit_paragraph(kept, os, first) > 0) first = false;
    }
    batch.clear();
  };

  while (auto p = reader.next()) {
    batch.push_back(std::move(*p));
    if (batch.size() >= batch_paragraphs) flush();
  }
  flush();
  os.flush();
  if (!os) throw IoError("write failed: " + out.string());
  return dedup.stats();
}

}  // namespace embeval::dedup
