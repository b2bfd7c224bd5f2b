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

#ifndef EMBEVAL_REPORT_H_
#define EMBEVAL_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "embeval/analogy.h"
#include "embeval/ner.h"

namespace embeval::report {

enum class Format { kJson, kTsv, kMarkdown };

// "json", "tsv", "markdown" (or "md"). Throws ArgumentError otherwise.
Format parse_format(std::string_view name);

// An empty cell renders as N/A.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  int digits = 2;  // decimals for floating cells in text formats

  // Throws ArgumentError when the row width differs from the header.
  void add_row(std::vector<Cell> row);
};

nlohmann::json to_json(const Table &table);
// Inverse of to_json.
Table table_from_json(const nlohmann::json &j);
Table parse_table_json(std::string_view text);

// Text of the table; an empty table is just its header.
std::string render(const Table &table, Format format);
void write(const Table &table, Format format, std::ostream &out);
void write(const Table &table, Format format, const std::filesystem::path &path);

// Analogy evaluation output with the labels the tables need.
struct AnalogyReport {
  std::string language;
  std::string label;  // layer or system name
  std::string method;
  std::vector<int> topn;
  std::vector<analogy::CategoryResult> categories;
};

nlohmann::json to_json(const AnalogyReport &report);
AnalogyReport analogy_report_from_json(const nlohmann::json &j);

struct ScoredEntry {
  std::string language;
  std::string label;
  analogy::KindScores scores;
};

// Rows per label and kind ("semantic", "syntactic"), one column per
// language in order of first appearance.
Table kind_by_language_table(std::span<const ScoredEntry> entries,
                             int digits = 3);

// One row per language; columns are sem and syn for each label in order of
// first appearance (the three layers for a single-model report).
Table language_by_label_table(std::span<const ScoredEntry> entries,
                              int digits = 2);

struct StatsEntry {
  std::string language;
  ner::LabelStats stats;
};

// Language, PER, LOC, ORG, density, N.
Table label_stats_table(std::span<const StatsEntry> entries);

struct SystemScore {
  std::string language;
  std::string system;
  double macro_f1 = 0.0;
};

// One row per language, one column per system; missing pairs are N/A.
Table systems_table(std::span<const SystemScore> entries, int digits = 2);

Table comparison_table(std::span<const ner::Comparison> rows);

}  // namespace embeval::report

#endif  // EMBEVAL_REPORT_H_
