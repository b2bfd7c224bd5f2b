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

#ifndef EMBEVAL_NER_H_
#define EMBEVAL_NER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace embeval::ner {

// Entity classes first, so they index per-class arrays directly.
enum class NerLabel : std::uint8_t { kPer = 0, kLoc = 1, kOrg = 2, kO = 3 };

inline constexpr std::size_t kNumLabels = 4;
inline constexpr std::size_t kNumEntities = 3;

std::string_view label_name(NerLabel label);
std::optional<NerLabel> parse_label(std::string_view name);

struct NerSentence {
  std::vector<std::string> tokens;
  std::vector<NerLabel> labels;
};

// Maps source-dataset labels onto PER/LOC/ORG/O. Explicit entries win;
// otherwise a BIO-style prefix (B-, I-, E-, S-, L-, U-) is stripped and
// PER, LOC, ORG and O are kept. Anything else becomes O and counts as
// unmapped.
class LabelMap {
 public:
  static LabelMap default_map() { return {}; }
  // Two columns per line, source and target label; '#' starts a comment.
  static LabelMap load(const std::filesystem::path &path);

  void set(std::string source, NerLabel target);
  // `unmapped` is set when the default rule fell through to O.
  NerLabel apply(std::string_view raw, bool *unmapped = nullptr) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, NerLabel, std::less<>> entries_;
};

struct ParseResult {
  std::vector<NerSentence> sentences;
  std::size_t unmapped = 0;                     // tokens whose label fell to O
  std::map<std::string, std::size_t> unmapped_labels;
};

// Two whitespace-separated columns per line, token and label; a blank line
// ends a sentence. Throws FormatError naming the line for any other shape.
ParseResult parse_ner(std::istream &in, const std::string &source,
                      const LabelMap &map = LabelMap::default_map());
ParseResult parse_ner(const std::filesystem::path &path,
                      const LabelMap &map = LabelMap::default_map());

// Writes "token<TAB>label" lines with a blank line after every sentence.
void write_ner(std::span<const NerSentence> sentences, std::ostream &out);
void write_ner(std::span<const NerSentence> sentences,
               const std::filesystem::path &path);

struct LabelStats {
  std::size_t per = 0, loc = 0, org = 0;
  std::size_t n = 0;  // all tokens
  std::size_t sentences = 0;
  double density = 0.0;

  nlohmann::json to_json() const;
  static LabelStats from_json(const nlohmann::json &j);
};

LabelStats label_stats(std::span<const NerSentence> sentences);
// Stats from published counts, for checking reported tables.
LabelStats label_stats(std::size_t per, std::size_t loc, std::size_t org,
                       std::size_t n);

struct SplitSpec {
  double fraction = 0.9;  // share of sentences used for training
  std::uint64_t seed = 0;

  void validate() const;
};

// max(1, round((1 - fraction) * n)), at most n - 1. Halves round up.
std::size_t test_size(std::size_t n, double fraction);

// Sentence indices of each side, each ascending. A seeded Fisher-Yates
// shuffle picks the test sentences. Throws ArgumentError for n < 2.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::size_t n, const SplitSpec &spec);

struct Split {
  std::vector<NerSentence> train;
  std::vector<NerSentence> test;
};

Split split(std::span<const NerSentence> sentences, const SplitSpec &spec);

struct ClassScore {
  std::uint64_t tp = 0, fp = 0, fn = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct RunScore {
  int run = 0;
  std::array<ClassScore, kNumEntities> classes{};
  double macro_f1 = 0.0;

  double f1(NerLabel label) const {
    return classes[static_cast<std::size_t>(label)].f1;
  }
};

// Token-level precision, recall and F1 per entity class (0/0 counts as 0)
// and their unweighted mean. Gold and prediction must hold the same
// sentences and tokens; the first divergence is reported otherwise.
RunScore macro_f1(std::span<const NerSentence> gold,
                  std::span<const NerSentence> pred, int run = 0);

// Per-class F1 and macro-F1 only.
struct ScoreSummary {
  std::array<double, kNumEntities> f1{};
  double macro_f1 = 0.0;
};

struct RunAggregate {
  std::vector<RunScore> runs;
  ScoreSummary mean;
  ScoreSummary stddev;  // sample standard deviation, 0 for a single run
};

// Throws ArgumentError for an empty list.
RunAggregate aggregate_runs(std::span<const RunScore> runs);

// (a - b) / b. Throws ArgumentError unless b > 0.
double relative_difference(double a, double b);

// A scored system on one dataset.
struct ScoreReport {
  std::string language;
  std::string system;
  std::optional<std::uint64_t> seed;
  RunAggregate result;
};

nlohmann::json to_json(const ScoreReport &report);
ScoreReport score_report_from_json(const nlohmann::json &j);
void write_tsv(const ScoreReport &report, std::ostream &out);

// Candidate versus baseline on one dataset, with dataset covariates.
struct Comparison {
  std::string language;
  std::string candidate;
  std::string baseline;
  double density = 0.0;
  std::size_t size = 0;  // tokens
  ScoreSummary candidate_score;
  ScoreSummary baseline_score;
  // Relative differences for PER, LOC, ORG and the macro score; empty when
  // the baseline score is 0.
  std::array<std::optional<double>, kNumEntities + 1> relative{};
};

Comparison compare(const ScoreReport &candidate, const ScoreReport &baseline,
                   const LabelStats &stats);

nlohmann::json to_json(std::span<const Comparison> rows);
void write_tsv(std::span<const Comparison> rows, std::ostream &out);

}  // namespace embeval::ner

#endif  // EMBEVAL_NER_H_
