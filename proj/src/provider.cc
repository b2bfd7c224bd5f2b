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

#include "embeval/provider.h"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>

#include "embeval/corpus.h"
#include "embeval/error.h"

namespace embeval::provider {

namespace {

std::uint64_t splitmix64(std::uint64_t &state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::string shell_quote(const std::string &s) {
  std::string out = "'";
  for (const char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('\'');
  return out;
}

std::string join(const TokenSentence &tokens) {
  std::string out;
  for (const std::string &t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

// Collects the records of one sentence and checks them for completeness.
class SentenceBuilder {
 public:
  void add(const emb::TokenEmbeddingRecord &r, const std::string &context) {
    if (dim_ == 0) dim_ = r.vector.size();
    if (r.vector.size() != dim_) {
      throw ProtocolError(context + ": dimension " +
                          std::to_string(r.vector.size()) + " differs from " +
                          std::to_string(dim_));
    }
    if (r.position >= tokens_.size()) {
      tokens_.resize(r.position + 1);
    }
    if (tokens_[r.position].empty()) {
      tokens_[r.position] = r.token;
    } else if (tokens_[r.position] != r.token) {
      throw ProtocolError(context + ": conflicting tokens at position " +
                          std::to_string(r.position));
    }
    auto &slot = vectors_[static_cast<std::size_t>(r.layer)];
    if (slot.size() <= r.position) slot.resize(r.position + 1);
    slot[r.position] = r.vector;
  }

  const std::vector<std::string> &tokens() const { return tokens_; }

  SentenceEmbedding build(const std::string &context) const {
    SentenceEmbedding out;
    out.tokens = tokens_.size();
    out.dim = dim_;
    for (std::size_t p = 0; p < tokens_.size(); ++p) {
      if (tokens_[p].empty()) {
        throw ProtocolError(context + ": missing token at position " +
                            std::to_string(p));
      }
    }
    for (std::size_t l = 0; l < emb::kNumLayers; ++l) {
      const auto &slot = vectors_[l];
      if (slot.empty()) continue;
      if (slot.size() != tokens_.size()) {
        throw ProtocolError(context + ": layer " +
                            std::string(emb::layer_name(emb::Layer(l))) +
                            " does not cover every token");
      }
      auto &flat = out.layers[l];
      flat.reserve(tokens_.size() * dim_);
      for (std::size_t p = 0; p < slot.size(); ++p) {
        if (slot[p].empty()) {
          throw ProtocolError(context + ": layer " +
                              std::string(emb::layer_name(emb::Layer(l))) +
                              " missing at position " + std::to_string(p));
        }
        flat.insert(flat.end(), slot[p].begin(), slot[p].end());
      }
    }
    return out;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> tokens_;
  std::array<std::vector<std::vector<float>>, emb::kNumLayers> vectors_;
};

}  // namespace

std::span<const float> SentenceEmbedding::vector(emb::Layer layer,
                                                 std::size_t position) const {
  const auto &flat = layers[static_cast<std::size_t>(layer)];
  if (flat.empty()) {
    throw ProtocolError("provider returned no " +
                        std::string(emb::layer_name(layer)) + " vectors");
  }
  if (position >= tokens) throw ProtocolError("token position out of range");
  return std::span<const float>(flat).subspan(position * dim, dim);
}

void write_requests(std::span<const TokenSentence> sentences,
                    std::ostream &out) {
  for (const TokenSentence &s : sentences) {
    for (const std::string &t : s) {
      const auto pieces = corpus::split_whitespace(t);
      if (pieces.size() != 1 || pieces[0].size() != t.size()) {
        throw ArgumentError("request token is empty or contains whitespace: '" +
                            t + "'");
      }
    }
    out << join(s) << '\n';
  }
}

std::vector<TokenSentence> read_requests(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<TokenSentence> out;
  std::string line;
  while (std::getline(in, line)) {
    TokenSentence s;
    for (std::string_view t : corpus::split_whitespace(line)) s.emplace_back(t);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<SentenceEmbedding> collect_responses(
    emb::RecordReader &records, std::span<const TokenSentence> requested) {
  std::vector<SentenceBuilder> builders(requested.size());
  emb::TokenEmbeddingRecord r;
  while (records.next(r)) {
    const std::string context =
        records.source() + ":" + std::to_string(records.line());
    std::size_t id = 0;
    const auto [ptr, ec] = std::from_chars(
        r.sentence_id.data(), r.sentence_id.data() + r.sentence_id.size(), id);
    if (ec != std::errc() || ptr != r.sentence_id.data() + r.sentence_id.size() ||
        id >= requested.size()) {
      throw ProtocolError(context + ": unexpected sentence id '" +
                          r.sentence_id + "'");
    }
    builders[id].add(r, context);
  }

  std::vector<SentenceEmbedding> out;
  out.reserve(requested.size());
  std::size_t dim = 0;
  for (std::size_t i = 0; i < requested.size(); ++i) {
    const std::string context = records.source() + ": sentence " + std::to_string(i);
    if (builders[i].tokens() != requested[i]) {
      throw ProtocolError(context + ": tokens do not match the request");
    }
    SentenceEmbedding e = builders[i].build(context);
    if (dim == 0) dim = e.dim;
    if (e.dim != dim) {
      throw ProtocolError(context + ": dimension " + std::to_string(e.dim) +
                          " differs from " + std::to_string(dim));
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string shell_quote_arg(const std::string &arg) { return shell_quote(arg); }

void run_provider_command(const std::string &command,
                          const std::filesystem::path &request,
                          const std::filesystem::path &response) {
  const std::string cmd = command + " --embed-in " +
                          shell_quote(request.string()) + " --embed-out " +
                          shell_quote(response.string());
  const int status = std::system(cmd.c_str());
  if (status != 0) {
    throw ProtocolError("provider command failed (status " +
                        std::to_string(status) + "): " + cmd);
  }
}

SubprocessProvider::SubprocessProvider(std::string command,
                                       std::filesystem::path work_dir)
    : command_(std::move(command)), work_dir_(std::move(work_dir)) {
  std::filesystem::create_directories(work_dir_);
}

std::vector<SentenceEmbedding> SubprocessProvider::embed(
    std::span<const TokenSentence> sentences) {
  const std::string stem = "embed-" + std::to_string(calls_++);
  const auto request = work_dir_ / (stem + ".request.txt");
  const auto response = work_dir_ / (stem + ".records.tsv");
  {
    std::ofstream out(request, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + request.string());
    write_requests(sentences, out);
  }
  run_provider_command(command_, request, response);
  emb::RecordReader reader(response);
  try {
    auto result = collect_responses(reader, sentences);
    std::filesystem::remove(request);
    std::filesystem::remove(response);
    return result;
  } catch (const FormatError &e) {
    throw ProtocolError(e.what());
  }
}

RecordFileProvider::RecordFileProvider(const std::filesystem::path &records) {
  emb::RecordReader reader(records);
  std::map<std::string, SentenceBuilder> builders;
  emb::TokenEmbeddingRecord r;
  while (reader.next(r)) {
    builders[r.sentence_id].add(r, reader.source() + ":" +
                                       std::to_string(reader.line()));
  }
  for (const auto &[id, builder] : builders) {
    by_text_.emplace(join(builder.tokens()),
                     builder.build(reader.source() + ": sentence " + id));
  }
}

std::vector<SentenceEmbedding> RecordFileProvider::embed(
    std::span<const TokenSentence> sentences) {
  std::vector<SentenceEmbedding> out;
  out.reserve(sentences.size());
  for (const TokenSentence &s : sentences) {
    const std::string text = join(s);
    auto it = by_text_.find(text);
    if (it == by_text_.end()) {
      throw ProtocolError("record file has no embedding for sentence: " + text);
    }
    out.push_back(it->second);
  }
  return out;
}

HashingMockProvider::HashingMockProvider(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed) {
  if (dim_ == 0) throw ArgumentError("mock provider dimension must be > 0");
}

std::vector<float> HashingMockProvider::token_vector(const std::string &token,
                                                     emb::Layer layer) const {
  std::uint64_t state = 0xcbf29ce484222325ULL;
  for (const char c : token) {
    state ^= static_cast<unsigned char>(c);
    state *= 0x100000001b3ULL;
  }
  state ^= seed_ * 0x9e3779b97f4a7c15ULL;
  state += static_cast<std::uint64_t>(layer) + 1;
  std::vector<float> v(dim_);
  for (float &x : v) {
    const double u =
        static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;  // [0, 1)
    x = static_cast<float>(2.0 * u - 1.0);
  }
  return v;
}

std::vector<SentenceEmbedding> HashingMockProvider::embed(
    std::span<const TokenSentence> sentences) {
  std::vector<SentenceEmbedding> out;
  out.reserve(sentences.size());
  for (const TokenSentence &s : sentences) {
    SentenceEmbedding e;
    e.tokens = s.size();
    e.dim = dim_;
    for (std::size_t l = 0; l < emb::kNumLayers; ++l) {
      auto &flat = e.layers[l];
      flat.reserve(s.size() * dim_);
      for (const std::string &t : s) {
        const auto v = token_vector(t, emb::Layer(l));
        flat.insert(flat.end(), v.begin(), v.end());
      }
    }
    out.push_back(std::move(e));
  }
  sentences_embedded_ += sentences.size();
  return out;
}

void write_responses(std::span<const TokenSentence> sentences,
                     std::span<const SentenceEmbedding> embeddings,
                     std::ostream &out) {
  if (sentences.size() != embeddings.size()) {
    throw ArgumentError("sentence and embedding counts differ");
  }
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const std::string id = std::to_string(i);
    for (std::size_t p = 0; p < sentences[i].size(); ++p) {
      for (std::size_t l = 0; l < emb::kNumLayers; ++l) {
        if (!embeddings[i].has(emb::Layer(l))) continue;
        emb::write_record(out, id, p, sentences[i][p], emb::Layer(l),
                          embeddings[i].vector(emb::Layer(l), p));
      }
    }
  }
}

}  // namespace embeval::provider
