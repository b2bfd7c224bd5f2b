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

#include "embeval/embstore.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

#include "embeval/kernels.h"
#include "embeval/parallel.h"

namespace embeval::emb {

namespace {

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = line.find(sep, begin);
    if (end == std::string_view::npos) {
      out.push_back(line.substr(begin));
      return out;
    }
    out.push_back(line.substr(begin, end - begin));
    begin = end + 1;
  }
}

// Splits on runs of spaces and tabs.
std::vector<std::string_view> split_blanks(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t begin = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > begin) out.push_back(line.substr(begin, i - begin));
  }
  return out;
}

bool parse_float(std::string_view s, float &out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

template <typename T>
bool parse_uint(std::string_view s, T &out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

void strip_cr(std::string &line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

void append_float(std::string &out, float v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

}  // namespace

std::string_view layer_name(Layer layer) {
  switch (layer) {
    case Layer::kCnn:
      return "CNN";
    case Layer::kLstm1:
      return "LSTM1";
    case Layer::kLstm2:
      return "LSTM2";
  }
  return "?";
}

std::optional<Layer> parse_layer(std::string_view name) {
  if (name == "CNN") return Layer::kCnn;
  if (name == "LSTM1") return Layer::kLstm1;
  if (name == "LSTM2") return Layer::kLstm2;
  return std::nullopt;
}

Layer layer_from_string(std::string_view name) {
  if (auto layer = parse_layer(name)) return *layer;
  throw ArgumentError("unknown layer '" + std::string(name) +
                      "' (expected CNN, LSTM1 or LSTM2)");
}

StaticEmbeddings::StaticEmbeddings(std::vector<std::string> vocab,
                                   std::vector<float> data, std::size_t dim)
    : vocab_(std::move(vocab)), data_(std::move(data)), dim_(dim) {
  if (vocab_.empty()) throw ArgumentError("embeddings need at least one word");
  if (dim_ == 0) throw ArgumentError("embedding dimension must be positive");
  if (data_.size() != vocab_.size() * dim_) {
    throw ArgumentError("embedding matrix does not match vocabulary size");
  }
  for (const float v : data_) {
    if (!std::isfinite(v)) throw ArgumentError("non-finite embedding value");
  }
  index_.reserve(vocab_.size());
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], i).second) {
      throw ArgumentError("duplicate token in embeddings: " + vocab_[i]);
    }
  }
}

std::optional<std::size_t> StaticEmbeddings::find(
    std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

StaticEmbeddings load_static(const std::filesystem::path &path,
                             std::optional<std::size_t> expected_dim,
                             std::size_t *duplicates) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string source = path.string();

  std::vector<std::string> vocab;
  std::vector<float> data;
  std::unordered_set<std::string> seen;
  std::optional<std::size_t> dim = expected_dim;
  std::optional<std::size_t> header_count;
  std::size_t dups = 0;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    const auto fields = split_blanks(line);
    if (fields.empty()) continue;

    if (lineno == 1 && fields.size() == 2) {
      std::size_t count = 0, header_dim = 0;
      if (parse_uint(fields[0], count) && parse_uint(fields[1], header_dim)) {
        if (expected_dim && header_dim != *expected_dim) {
          throw FormatError(source, lineno,
                            "header dimension " + std::to_string(header_dim) +
                                " does not match expected " +
                                std::to_string(*expected_dim));
        }
        dim = header_dim;
        header_count = count;
        continue;
      }
    }

    const std::size_t values = fields.size() - 1;
    if (!dim) dim = values;
    if (values != *dim || values == 0) {
      throw FormatError(source, lineno,
                        "expected " + std::to_string(*dim) + " values, got " +
                            std::to_string(values));
    }
    std::string token(fields[0]);
    if (!seen.insert(token).second) {
      ++dups;
      continue;
    }
    for (std::size_t k = 1; k < fields.size(); ++k) {
      float v;
      if (!parse_float(fields[k], v)) {
        throw FormatError(source, lineno,
                          "bad number '" + std::string(fields[k]) + "'");
      }
      data.push_back(v);
    }
    vocab.push_back(std::move(token));
  }
  if (in.bad()) throw IoError("read error: " + source);
  if (dups > 0) {
    spdlog::warn("{}: {} duplicate token(s), first occurrence kept", source,
                 dups);
  }
  if (header_count && *header_count != vocab.size() + dups) {
    spdlog::warn("{}: header announces {} rows, file has {}", source,
                 *header_count, vocab.size() + dups);
  }
  if (duplicates) *duplicates = dups;
  if (vocab.empty()) throw FormatError(source, 0, "no vectors in file");
  return StaticEmbeddings(std::move(vocab), std::move(data), *dim);
}

void save_static(const StaticEmbeddings &emb, std::ostream &out) {
  out << emb.size() << ' ' << emb.dim() << '\n';
  std::string line;
  for (std::size_t i = 0; i < emb.size(); ++i) {
    line = emb.token(i);
    for (const float v : emb.row(i)) {
      line.push_back(' ');
      append_float(line, v);
    }
    line.push_back('\n');
    out << line;
  }
}

void save_static(const StaticEmbeddings &emb,
                 const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  save_static(emb, out);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

RecordReader::RecordReader(const std::filesystem::path &path)
    : owned_(std::make_unique<std::ifstream>(path, std::ios::binary)),
      in_(owned_.get()),
      source_(path.string()) {
  if (!*owned_) throw IoError("cannot open " + source_);
}

RecordReader::RecordReader(std::istream &in, std::string source_name)
    : in_(&in), source_(std::move(source_name)) {}

bool RecordReader::next(TokenEmbeddingRecord &record) {
  std::string line;
  while (std::getline(*in_, line)) {
    ++line_;
    strip_cr(line);
    if (line.empty()) continue;

    const auto fields = split_fields(line, '\t');
    if (fields.size() != 5) {
      throw FormatError(source_, line_,
                        "expected 5 tab-separated fields, got " +
                            std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[2].empty()) {
      throw FormatError(source_, line_, "empty sentence id or token");
    }
    std::size_t position;
    if (!parse_uint(fields[1], position)) {
      throw FormatError(source_, line_,
                        "bad position '" + std::string(fields[1]) + "'");
    }
    const auto layer = parse_layer(fields[3]);
    if (!layer) {
      throw FormatError(source_, line_,
                        "unknown layer '" + std::string(fields[3]) + "'");
    }

    record.sentence_id.assign(fields[0]);
    record.position = position;
    record.token.assign(fields[2]);
    record.layer = *layer;
    record.vector.clear();
    for (std::string_view v : split_blanks(fields[4])) {
      float x;
      if (!parse_float(v, x)) {
        throw FormatError(source_, line_, "bad number '" + std::string(v) + "'");
      }
      record.vector.push_back(x);
    }
    const std::size_t d = record.vector.size();
    if (d == 0) throw FormatError(source_, line_, "empty vector");

    auto &layer_dim = layer_dim_[static_cast<std::size_t>(*layer)];
    if (layer_dim && *layer_dim != d) {
      throw FormatError(source_, line_,
                        "dimension " + std::to_string(d) + " differs from " +
                            std::to_string(*layer_dim) + " seen earlier for " +
                            std::string(layer_name(*layer)));
    }
    layer_dim = d;

    if (has_last_ && last_position_ == position &&
        last_sentence_ == record.sentence_id && last_dim_ != d) {
      throw FormatError(source_, line_,
                        "layers of one token disagree on dimension");
    }
    has_last_ = true;
    last_sentence_ = record.sentence_id;
    last_position_ = position;
    last_dim_ = d;
    return true;
  }
  if (in_->bad()) throw IoError("read error: " + source_);
  return false;
}

void write_record(std::ostream &out, std::string_view sentence_id,
                  std::size_t position, std::string_view token, Layer layer,
                  std::span<const float> vector) {
  std::string line;
  line.append(sentence_id);
  line.push_back('\t');
  line.append(std::to_string(position));
  line.push_back('\t');
  line.append(token);
  line.push_back('\t');
  line.append(layer_name(layer));
  line.push_back('\t');
  for (std::size_t k = 0; k < vector.size(); ++k) {
    if (k > 0) line.push_back(' ');
    append_float(line, vector[k]);
  }
  line.push_back('\n');
  out << line;
}

void write_record(std::ostream &out, const TokenEmbeddingRecord &record) {
  write_record(out, record.sentence_id, record.position, record.token,
               record.layer, record.vector);
}

void AverageAccumulator::add(std::span<const float> v) {
  if (count_ == 0) {
    sum_.assign(v.size(), 0.0);
  } else if (v.size() != sum_.size()) {
    throw ArgumentError("occurrence vectors differ in dimension");
  }
  for (std::size_t k = 0; k < v.size(); ++k) sum_[k] += v[k];
  ++count_;
}

std::vector<double> AverageAccumulator::finalize() const {
  if (count_ == 0) throw Error("no occurrences to average");
  std::vector<double> mean(sum_);
  for (double &x : mean) x /= static_cast<double>(count_);
  return mean;
}

AccumulatorTable::AccumulatorTable(std::size_t shards)
    : shards_(shards == 0 ? 1 : shards) {}

std::size_t AccumulatorTable::shard_of(std::string_view token) const {
  // FNV-1a; std::hash is not stable across standard libraries.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : token) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h % shards_.size());
}

std::size_t AccumulatorTable::tokens() const {
  std::size_t n = 0;
  for (const auto &s : shards_) n += s.size();
  return n;
}

StaticEmbeddings OccurrenceMeans::to_static() const {
  std::vector<float> data(means.begin(), means.end());
  return StaticEmbeddings(tokens, std::move(data), dim);
}

namespace {

OccurrenceMeans finish(const AccumulatorTable &table,
                       const AveragingOptions &options) {
  struct Item {
    const std::string *token;
    const AccumulatorTable::Entry *entry;
  };
  std::vector<Item> items;
  items.reserve(table.tokens());
  for (std::size_t s = 0; s < table.shards(); ++s) {
    for (const auto &[token, entry] : table.shard(s)) {
      items.push_back({&token, &entry});
    }
  }
  if (items.empty()) {
    throw Error("no records for layer " +
                std::string(layer_name(options.layer)));
  }

  if (options.vocab_filter) {
    std::unordered_map<std::string_view, std::size_t> order;
    for (std::size_t i = 0; i < options.vocab_filter->size(); ++i) {
      order.emplace((*options.vocab_filter)[i], i);
    }
    std::sort(items.begin(), items.end(), [&](const Item &a, const Item &b) {
      return order.at(*a.token) < order.at(*b.token);
    });
  } else {
    std::sort(items.begin(), items.end(), [](const Item &a, const Item &b) {
      return a.entry->first_seen < b.entry->first_seen;
    });
  }

  OccurrenceMeans out;
  out.dim = items.front().entry->acc.dim();
  out.tokens.reserve(items.size());
  out.means.reserve(items.size() * out.dim);
  for (const Item &item : items) {
    out.tokens.push_back(*item.token);
    const std::vector<double> mean = item.entry->acc.finalize();
    out.means.insert(out.means.end(), mean.begin(), mean.end());
    out.counts.push_back(item.entry->acc.count());
  }
  return out;
}

std::size_t shard_count(const AveragingOptions &options) {
  return options.shards > 0 ? options.shards
                            : static_cast<std::size_t>(max_threads());
}

std::optional<std::unordered_set<std::string>> filter_set(
    const AveragingOptions &options) {
  if (!options.vocab_filter) return std::nullopt;
  return std::unordered_set<std::string>(options.vocab_filter->begin(),
                                         options.vocab_filter->end());
}

}  // namespace

OccurrenceMeans average_means(RecordReader &records,
                              const AveragingOptions &options) {
  AccumulatorTable table(shard_count(options));
  const auto filter = filter_set(options);
  const std::size_t chunk_size = std::max<std::size_t>(1, options.chunk_records);
  std::vector<TokenEmbeddingRecord> chunk(chunk_size);
  std::uint64_t base = 0;
  while (true) {
    std::size_t n = 0;
    while (n < chunk_size && records.next(chunk[n])) ++n;
    if (n == 0) break;
    kernels::accumulate_by_token(
        std::span<const TokenEmbeddingRecord>(chunk.data(), n), options.layer,
        filter ? &*filter : nullptr, base, table);
    base += n;
    if (n < chunk_size) break;
  }
  return finish(table, options);
}

OccurrenceMeans average_means(std::span<const TokenEmbeddingRecord> records,
                              const AveragingOptions &options) {
  AccumulatorTable table(shard_count(options));
  const auto filter = filter_set(options);
  kernels::accumulate_by_token(records, options.layer,
                               filter ? &*filter : nullptr, 0, table);
  return finish(table, options);
}

StaticEmbeddings average_occurrences(RecordReader &records,
                                     const AveragingOptions &options) {
  return average_means(records, options).to_static();
}

StaticEmbeddings average_occurrences(
    std::span<const TokenEmbeddingRecord> records,
    const AveragingOptions &options) {
  return average_means(records, options).to_static();
}

std::vector<double> row_inverse_norms(MatrixView<float> m) {
  std::vector<double> inv(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) inv[i] = inverse_norm(m.row(i));
  return inv;
}

std::vector<double> similarities(MatrixView<float> rows,
                                 std::span<const double> row_inv_norms,
                                 std::span<const double> query) {
  if (query.size() != rows.cols) {
    throw ArgumentError("query dimension does not match candidates");
  }
  const double q_inv = inverse_norm(query);
  std::vector<double> out(rows.rows);
  for (std::size_t i = 0; i < rows.rows; ++i) {
    out[i] = scaled_dot(rows.row(i), query, row_inv_norms[i], q_inv);
  }
  return out;
}

}  // namespace embeval::emb
