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

#ifndef EMBEVAL_ANALOGY_H_
#define EMBEVAL_ANALOGY_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "embeval/embstore.h"
#include "embeval/provider.h"

namespace embeval::analogy {

enum class Kind { kSemantic, kSyntactic };

std::string_view kind_name(Kind kind);

// a : b :: c : d, with the answer d.
struct AnalogyQuestion {
  std::string a, b, c, d;
  std::string category;
  Kind kind = Kind::kSemantic;
};

// Category -> kind assignment. Categories named in `overrides` use that kind;
// otherwise the first `semantic_categories` categories of the file are
// semantic and the rest syntactic.
struct KindTable {
  std::map<std::string, Kind> overrides;
  std::size_t semantic_categories = 5;

  Kind kind_for(const std::string &category, std::size_t index) const;
};

// Mikolov-style analogy file: ": <category>" lines open a category, every
// other non-empty line holds four distinct whitespace-separated words.
std::vector<AnalogyQuestion> parse_analogy_dataset(
    const std::filesystem::path &path, const KindTable &kinds = {});
std::vector<AnalogyQuestion> parse_analogy_dataset(
    std::istream &in, const std::string &source, const KindTable &kinds = {});

// Every word of the dataset, in order of first appearance.
std::vector<std::string> dataset_words(std::span<const AnalogyQuestion> qs);

struct CategoryResult {
  std::string category;
  Kind kind = Kind::kSemantic;
  std::size_t asked = 0;
  std::size_t skipped_oov = 0;
  std::map<int, std::size_t> hits;  // n -> questions answered within top n

  std::size_t answered() const { return asked - skipped_oov; }
  // hits@n / answered, 0 when nothing was answered.
  double accuracy(int n) const;
};

nlohmann::json to_json(std::span<const CategoryResult> results);
std::vector<CategoryResult> results_from_json(const nlohmann::json &j);
// Columns: category, kind, asked, skipped_oov, then hits@n and acc@n per n.
void write_tsv(std::span<const CategoryResult> results, std::ostream &out);

// 0-based rank of the answer among the first `candidate_limit` words,
// ranked by cosine to b - a + c with a, b and c removed. Ties go to the
// lower vocabulary index. nullopt when a word is outside the candidates.
std::vector<std::optional<std::size_t>> method_a_ranks(
    const emb::StaticEmbeddings &emb, std::span<const AnalogyQuestion> qs,
    std::size_t candidate_limit);

// Nearest-neighbour evaluation over static vectors. Questions run in
// parallel; results come back per category in dataset order.
std::vector<CategoryResult> method_a_evaluate(
    const emb::StaticEmbeddings &emb, std::span<const AnalogyQuestion> qs,
    std::size_t candidate_limit, std::span<const int> ns);

// The n best candidate words for b - a + c, without a, b and c.
std::vector<std::string> method_a_top(const emb::StaticEmbeddings &emb,
                                      const AnalogyQuestion &q,
                                      std::size_t candidate_limit,
                                      std::size_t n);

// A sentence pattern with the slots {A} {B} {C} {D}, each exactly once, {D}
// last among them.
class TemplateSpec {
 public:
  // Throws ArgumentError for an invalid pattern.
  TemplateSpec(std::string language, std::string pattern);

  const std::string &language() const { return language_; }
  const std::string &pattern() const { return pattern_; }

  struct Piece {
    std::string literal;  // text before the slot
    int slot = -1;        // 0..3 for A..D, -1 for the trailing literal
  };
  const std::vector<Piece> &pieces() const { return pieces_; }

 private:
  std::string language_;
  std::string pattern_;
  std::vector<Piece> pieces_;
};

// Default template plus per-category overrides.
class TemplateSet {
 public:
  explicit TemplateSet(TemplateSpec default_spec);

  // Template file: '#' comments, one line without a tab holding the default
  // pattern, optional "<category>\t<pattern>" overrides.
  static TemplateSet parse(std::string language, std::string_view content);
  static TemplateSet load(const std::filesystem::path &path,
                          std::string language);
  // Shipped template for `language`; falls back to English with a warning.
  static TemplateSet builtin(const std::string &language);

  void set_override(const std::string &category, TemplateSpec spec);
  const TemplateSpec &for_category(const std::string &category) const;
  const TemplateSpec &default_spec() const { return default_; }

 private:
  TemplateSpec default_;
  std::map<std::string, TemplateSpec> overrides_;
};

struct TemplateSentence {
  std::vector<std::string> tokens;
  std::array<std::size_t, 4> slots{};  // token positions of A, B, C, D

  std::size_t d_slot() const { return slots[3]; }
};

// Tokenizes the literal parts of the pattern with the language rules and
// inserts the four words verbatim as single tokens.
TemplateSentence build_template_sentence(const AnalogyQuestion &q,
                                         const TemplateSpec &spec);

struct CslsConfig {
  std::size_t k = 10;

  // K >= 1 and K <= candidates - 1.
  void validate(std::size_t candidates) const;
};

// CSLS(q, y) = 2 cos(q, y) - r(q) - r(y). r(q) is the mean cosine of q to its
// K nearest candidates, r(y) the mean cosine of y to its K nearest members
// of `query_set` (K capped at the set size).
std::vector<double> csls_scores(std::span<const double> query,
                                emb::MatrixView<float> candidates,
                                std::span<const std::vector<double>> query_set,
                                const CslsConfig &cfg);
// Single-query form: the query set is {query}, so r(y) = cos(y, q).
std::vector<double> csls_scores(std::span<const double> query,
                                emb::MatrixView<float> candidates,
                                const CslsConfig &cfg);

// Candidate indices by descending score; equal scores keep index order.
std::vector<std::size_t> rank_by_score(std::span<const double> scores);

std::vector<std::size_t> csls_rank(std::span<const double> query,
                                   emb::MatrixView<float> candidates,
                                   const CslsConfig &cfg);

enum class Ranking { kCosine, kCsls };

struct MethodBOptions {
  emb::Layer layer = emb::Layer::kLstm1;
  Ranking ranking = Ranking::kCsls;
  CslsConfig csls;
  std::vector<int> topn = {1, 5};
  // Sentences per provider call; questions are never split across calls.
  std::size_t batch_sentences = 4096;
};

// Method-B candidates. By default the dataset's own words come first,
// followed by `vocab` words not yet listed; with `full_vocab` only `vocab` is
// used. At most `limit` words either way.
std::vector<std::string> method_b_candidates(
    std::span<const AnalogyQuestion> qs, std::span<const std::string> vocab,
    std::size_t limit, bool full_vocab);

struct MethodBStats {
  std::size_t sentences_embedded = 0;
  std::size_t provider_calls = 0;
};

// Template-sentence evaluation. For each question the template sentence is
// embedded once, and once more per candidate with the candidate in the {D}
// slot; q = v(B) - v(A) + v(C) is compared with each candidate's {D}-slot
// vector. A question is skipped when any of its words is not a candidate.
std::vector<CategoryResult> method_b_evaluate(
    provider::EmbeddingProvider &provider, std::span<const AnalogyQuestion> qs,
    const TemplateSet &templates, std::span<const std::string> candidates,
    const MethodBOptions &options, MethodBStats *stats = nullptr);

// Unweighted means of per-category accuracy@n within each kind.
struct KindScores {
  std::optional<double> semantic;
  std::optional<double> syntactic;
};

KindScores aggregate(std::span<const CategoryResult> results, int n);

// "sl | sem 0.41 | syn 0.79"
std::string format_aggregate_row(std::string_view label,
                                 const KindScores &scores, int digits = 2);

}  // namespace embeval::analogy

#endif  // EMBEVAL_ANALOGY_H_
