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

#ifndef EMBEVAL_PIPELINE_H_
#define EMBEVAL_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "embeval/analogy.h"
#include "embeval/corpus.h"
#include "embeval/dedup.h"
#include "embeval/embstore.h"
#include "embeval/ner.h"

namespace embeval::pipeline {

// Stages in dependency order.
enum class Stage { kTokenize, kDedup, kVocab, kAverage, kEvalA, kEvalB, kNer };

inline constexpr Stage kAllStages[] = {Stage::kTokenize, Stage::kDedup,
                                       Stage::kVocab,    Stage::kAverage,
                                       Stage::kEvalA,    Stage::kEvalB,
                                       Stage::kNer};

std::string_view stage_name(Stage stage);
// "tokenize", "dedup", "vocab", "average", "eval-a", "eval-b", "ner".
Stage parse_stage(std::string_view name);
// Comma-separated stage names.
std::set<Stage> parse_stages(std::string_view list);

// Environment variable naming the config file used when none is given.
inline constexpr const char *kConfigEnv = "EMBEVAL_CONFIG";

struct PipelineConfig {
  std::string language = "en";
  std::filesystem::path work_dir = "work";
  int threads = 0;
  std::optional<std::set<Stage>> stages;  // unset = every configured stage

  // tokenize
  std::optional<std::filesystem::path> corpus;
  corpus::InputFormat format = corpus::InputFormat::kRawText;
  std::optional<std::filesystem::path> rules_dir;

  dedup::DedupConfig dedup;

  // vocab; min_count defaults to a value scaled to the corpus size
  std::optional<std::uint64_t> min_count;
  std::optional<std::size_t> max_size;

  // average: a precomputed record file, or a provider command run over the
  // deduplicated corpus
  std::optional<std::filesystem::path> records;
  std::string provider;
  emb::Layer layer = emb::Layer::kLstm1;
  std::size_t shards = 0;

  // analogy
  std::optional<std::filesystem::path> analogy_dataset;
  std::optional<std::filesystem::path> templates;
  std::size_t candidates = 200000;
  std::vector<int> topn = {1, 5};
  std::size_t csls_k = 10;
  analogy::Ranking ranking = analogy::Ranking::kCsls;
  std::size_t semantic_categories = 5;
  // eval-b candidates: dataset words then the vocabulary, or only the
  // vocabulary when set
  bool full_vocab = false;

  // ner
  std::optional<std::filesystem::path> ner_data;
  std::optional<std::filesystem::path> label_map;
  std::uint64_t split_seed = 0;
  double train_fraction = 0.9;
  int runs = 5;
  // Shell command with {train}, {test}, {pred}, {seed} and {run}
  // placeholders, run once per seed split_seed + run.
  std::string trainer;
  std::vector<std::filesystem::path> predictions;
  std::string system = "embeddings";
};

// Applies one "section.key = value" setting. Relative paths are resolved
// against `base`. Throws ArgumentError for unknown keys or bad values.
void apply_setting(PipelineConfig &config, std::string_view key,
                   std::string_view value, const std::filesystem::path &base);

// INI file with [general], [corpus], [dedup], [vocab], [average],
// [analogy] and [ner] sections.
PipelineConfig load_config(const std::filesystem::path &path);

// Stages that would run: the configured list, or every stage whose inputs
// are configured.
std::set<Stage> selected_stages(const PipelineConfig &config);

// Checks parameters and that every input exists or is produced by an
// earlier selected stage. Throws ArgumentError listing the problems.
void validate(const PipelineConfig &config, const std::set<Stage> &stages);

struct StageResult {
  Stage stage;
  bool ok = false;
  std::string message;
  std::vector<std::filesystem::path> artifacts;  // relative to work_dir
};

struct PipelineResult {
  std::vector<StageResult> stages;

  bool ok() const;
  int exit_status() const { return ok() ? 0 : 1; }
};

// Runs the selected stages in order and stops at the first failure. Each
// stage writes its artifacts through a ".partial" file renamed on success,
// plus "<stage>.manifest.json" with parameters and SHA-256 digests of its
// inputs and outputs.
PipelineResult run_pipeline(const PipelineConfig &config);

// Artifact file names inside the work directory.
namespace artifacts {
inline constexpr const char *kTokenized = "tokenized.txt";
inline constexpr const char *kDedup = "dedup.txt";
inline constexpr const char *kDedupStats = "dedup.stats.json";
inline constexpr const char *kVocab = "vocab.tsv";
inline constexpr const char *kRequests = "requests.txt";
inline constexpr const char *kRecords = "records.tsv";
inline constexpr const char *kVectors = "vectors.txt";
inline constexpr const char *kAnalogyA = "analogy_a.json";
inline constexpr const char *kAnalogyB = "analogy_b.json";
inline constexpr const char *kNerStats = "ner.stats.json";
inline constexpr const char *kNerTrain = "ner.train.tsv";
inline constexpr const char *kNerTest = "ner.test.tsv";
inline constexpr const char *kNerScore = "ner.score.json";
}  // namespace artifacts

}  // namespace embeval::pipeline

#endif  // EMBEVAL_PIPELINE_H_
