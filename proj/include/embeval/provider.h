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

#ifndef EMBEVAL_PROVIDER_H_
#define EMBEVAL_PROVIDER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "embeval/embstore.h"

namespace embeval::provider {

using TokenSentence = std::vector<std::string>;

// Per-token, per-layer vectors for one sentence. Layers the provider did not
// return are empty.
struct SentenceEmbedding {
  std::size_t tokens = 0;
  std::size_t dim = 0;
  std::array<std::vector<float>, emb::kNumLayers> layers;  // tokens x dim

  bool has(emb::Layer layer) const {
    return !layers[static_cast<std::size_t>(layer)].empty();
  }
  // Throws ProtocolError when the layer is missing.
  std::span<const float> vector(emb::Layer layer, std::size_t position) const;
};

// Anything that maps sentences to contextual vectors.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  // Returns one embedding per input sentence, in order.
  virtual std::vector<SentenceEmbedding> embed(
      std::span<const TokenSentence> sentences) = 0;
};

// Request file: one sentence per line, tokens joined by single spaces. A
// blank line is an empty sentence, so ids stay equal to line numbers.
void write_requests(std::span<const TokenSentence> sentences, std::ostream &out);
std::vector<TokenSentence> read_requests(const std::filesystem::path &path);

// Groups a response record file by sentence. Sentence ids must be the
// 0-based line numbers of the request; every requested token must be present
// with its text. Throws ProtocolError otherwise.
std::vector<SentenceEmbedding> collect_responses(
    emb::RecordReader &records, std::span<const TokenSentence> requested);

// Single-quotes `arg` for /bin/sh.
std::string shell_quote_arg(const std::string &arg);

// Runs `<command> --embed-in <request> --embed-out <response>` through the
// shell. Throws ProtocolError on a non-zero exit status.
void run_provider_command(const std::string &command,
                          const std::filesystem::path &request,
                          const std::filesystem::path &response);

// Runs `<command> --embed-in <request> --embed-out <response>` through the
// shell for every batch.
class SubprocessProvider : public EmbeddingProvider {
 public:
  SubprocessProvider(std::string command, std::filesystem::path work_dir);

  std::vector<SentenceEmbedding> embed(
      std::span<const TokenSentence> sentences) override;

  std::size_t calls() const { return calls_; }

 private:
  std::string command_;
  std::filesystem::path work_dir_;
  std::size_t calls_ = 0;
};

// Serves sentences from a precomputed record file. Sentences are matched by
// their canonical text, rebuilt from the token column of the records.
class RecordFileProvider : public EmbeddingProvider {
 public:
  explicit RecordFileProvider(const std::filesystem::path &records);

  std::vector<SentenceEmbedding> embed(
      std::span<const TokenSentence> sentences) override;

  std::size_t sentences() const { return by_text_.size(); }

 private:
  std::unordered_map<std::string, SentenceEmbedding> by_text_;
};

// Context-free deterministic provider: each token's vector is a function of
// a hash of the token, the layer and a seed only. Used to check the method-B
// plumbing without a trained model.
class HashingMockProvider : public EmbeddingProvider {
 public:
  explicit HashingMockProvider(std::size_t dim = 16, std::uint64_t seed = 0);

  std::vector<SentenceEmbedding> embed(
      std::span<const TokenSentence> sentences) override;

  std::vector<float> token_vector(const std::string &token,
                                  emb::Layer layer) const;

  std::size_t dim() const { return dim_; }
  std::size_t sentences_embedded() const { return sentences_embedded_; }

 private:
  std::size_t dim_;
  std::uint64_t seed_;
  std::size_t sentences_embedded_ = 0;
};

// Writes the records for `sentences` (all three layers) with sentence ids
// equal to their index.
void write_responses(std::span<const TokenSentence> sentences,
                     std::span<const SentenceEmbedding> embeddings,
                     std::ostream &out);

}  // namespace embeval::provider

#endif  // EMBEVAL_PROVIDER_H_
