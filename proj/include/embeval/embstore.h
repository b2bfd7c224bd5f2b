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

#ifndef EMBEVAL_EMBSTORE_H_
#define EMBEVAL_EMBSTORE_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "embeval/error.h"

namespace embeval::emb {

// The three output levels of a contextual model.
enum class Layer { kCnn = 0, kLstm1 = 1, kLstm2 = 2 };

inline constexpr std::size_t kNumLayers = 3;

std::string_view layer_name(Layer layer);
std::optional<Layer> parse_layer(std::string_view name);
// Throws ArgumentError for unknown names.
Layer layer_from_string(std::string_view name);

// Row-major read-only view of a dense matrix.
template <typename T>
struct MatrixView {
  std::span<const T> data;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::span<const T> row(std::size_t i) const {
    return data.subspan(i * cols, cols);
  }
};

// Vocabulary-aligned word vectors.
class StaticEmbeddings {
 public:
  StaticEmbeddings() = default;
  // Throws ArgumentError on duplicate tokens, size mismatch, non-finite
  // values or an empty vocabulary.
  StaticEmbeddings(std::vector<std::string> vocab, std::vector<float> data,
                   std::size_t dim);

  std::size_t size() const { return vocab_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string> &vocab() const { return vocab_; }
  const std::string &token(std::size_t i) const { return vocab_[i]; }
  std::span<const float> row(std::size_t i) const {
    return std::span<const float>(data_).subspan(i * dim_, dim_);
  }
  std::optional<std::size_t> find(std::string_view token) const;
  MatrixView<float> view() const { return {data_, size(), dim_}; }
  const std::vector<float> &data() const { return data_; }

 private:
  std::vector<std::string> vocab_;
  std::vector<float> data_;
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

// Reads word2vec-style text vectors: an optional "count dim" header, then a
// token and dim floats per line. Duplicate tokens keep the first row; their
// number is written to `duplicates` when given.
StaticEmbeddings load_static(const std::filesystem::path &path,
                             std::optional<std::size_t> expected_dim = {},
                             std::size_t *duplicates = nullptr);

// Writes the header and one row per token using the shortest float
// representation that reads back exactly.
void save_static(const StaticEmbeddings &emb, const std::filesystem::path &path);
void save_static(const StaticEmbeddings &emb, std::ostream &out);

// One contextual vector: sentence id, token position, token, layer, values.
struct TokenEmbeddingRecord {
  std::string sentence_id;
  std::size_t position = 0;
  std::string token;
  Layer layer = Layer::kCnn;
  std::vector<float> vector;
};

// Streams records from the tab-separated record format:
//   sentence_id \t position \t token \t layer \t v1 v2 ... vd
// Checks that the dimension is constant per layer and across the layers of
// one (sentence_id, position).
class RecordReader {
 public:
  explicit RecordReader(const std::filesystem::path &path);
  RecordReader(std::istream &in, std::string source_name);

  bool next(TokenEmbeddingRecord &record);

  std::size_t line() const { return line_; }
  const std::string &source() const { return source_; }

 private:
  std::unique_ptr<std::ifstream> owned_;
  std::istream *in_;
  std::string source_;
  std::size_t line_ = 0;
  std::optional<std::size_t> layer_dim_[kNumLayers];
  std::string last_sentence_;
  std::size_t last_position_ = 0;
  std::size_t last_dim_ = 0;
  bool has_last_ = false;
};

void write_record(std::ostream &out, const TokenEmbeddingRecord &record);
void write_record(std::ostream &out, std::string_view sentence_id,
                  std::size_t position, std::string_view token, Layer layer,
                  std::span<const float> vector);

// Running mean of one token's occurrence vectors in double precision.
class AverageAccumulator {
 public:
  void add(std::span<const float> v);
  std::size_t count() const { return count_; }
  std::size_t dim() const { return sum_.size(); }
  // Throws when no vector was added.
  std::vector<double> finalize() const;

 private:
  std::vector<double> sum_;
  std::size_t count_ = 0;
};

// Accumulators keyed by token, split into shards by token hash. Each shard
// sees its tokens in stream order, so results do not depend on how many
// shards run concurrently.
class AccumulatorTable {
 public:
  explicit AccumulatorTable(std::size_t shards);

  struct Entry {
    AverageAccumulator acc;
    std::uint64_t first_seen = 0;  // stream index of the first occurrence
  };

  std::size_t shards() const { return shards_.size(); }
  std::size_t shard_of(std::string_view token) const;
  std::unordered_map<std::string, Entry> &shard(std::size_t s) {
    return shards_[s];
  }
  const std::unordered_map<std::string, Entry> &shard(std::size_t s) const {
    return shards_[s];
  }
  std::size_t tokens() const;

 private:
  std::vector<std::unordered_map<std::string, Entry>> shards_;
};

struct AveragingOptions {
  Layer layer = Layer::kLstm1;
  // Restricts output to these tokens and orders it as listed. Without a
  // filter, tokens appear in order of first occurrence.
  std::optional<std::vector<std::string>> vocab_filter;
  std::size_t shards = 0;  // 0 = one per thread
  std::size_t chunk_records = 16384;
};

// Occurrence means in double precision, before conversion to float storage.
struct OccurrenceMeans {
  std::vector<std::string> tokens;
  std::vector<double> means;  // tokens.size() x dim
  std::vector<std::size_t> counts;
  std::size_t dim = 0;

  StaticEmbeddings to_static() const;
};

// Mean of every token's vectors at one layer. Throws Error when the stream
// holds no records for the layer (after filtering).
OccurrenceMeans average_means(RecordReader &records,
                              const AveragingOptions &options);
OccurrenceMeans average_means(std::span<const TokenEmbeddingRecord> records,
                              const AveragingOptions &options);
StaticEmbeddings average_occurrences(RecordReader &records,
                                     const AveragingOptions &options);
StaticEmbeddings average_occurrences(
    std::span<const TokenEmbeddingRecord> records,
    const AveragingOptions &options);

// Cosine similarity u.v / (|u||v|). Throws ArgumentError on a zero vector or
// a dimension mismatch.
template <typename T, typename U>
double cosine(std::span<const T> u, std::span<const U> v) {
  if (u.size() != v.size()) {
    throw ArgumentError("cosine: dimension mismatch");
  }
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i];
    const double b = v[i];
    dot += a * b;
    uu += a * a;
    vv += b * b;
  }
  if (uu == 0.0 || vv == 0.0) {
    throw ArgumentError("cosine: undefined for a zero vector");
  }
  return dot / (std::sqrt(uu) * std::sqrt(vv));
}

inline double cosine(const std::vector<double> &u,
                     const std::vector<double> &v) {
  return cosine(std::span<const double>(u), std::span<const double>(v));
}

// Scoring primitive shared by every ranking routine: dot(row, q) scaled by
// the precomputed inverse norms. Zero rows or queries score 0.
inline double scaled_dot(std::span<const float> row, std::span<const double> q,
                         double row_inv_norm, double query_inv_norm) {
  double dot = 0.0;
  for (std::size_t k = 0; k < row.size(); ++k) dot += row[k] * q[k];
  return dot * row_inv_norm * query_inv_norm;
}

template <typename T>
double inverse_norm(std::span<const T> v) {
  double ss = 0.0;
  for (const T x : v) ss += static_cast<double>(x) * static_cast<double>(x);
  return ss > 0.0 ? 1.0 / std::sqrt(ss) : 0.0;
}

std::vector<double> row_inverse_norms(MatrixView<float> m);

// Cosine of `query` against every row.
std::vector<double> similarities(MatrixView<float> rows,
                                 std::span<const double> row_inv_norms,
                                 std::span<const double> query);

}  // namespace embeval::emb

#endif  // EMBEVAL_EMBSTORE_H_
