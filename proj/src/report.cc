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

#include "embeval/report.h"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "embeval/error.h"

namespace embeval::report {

namespace {

std::string cell_text(const Cell &cell, int digits) {
  return std::visit(
      [&](const auto &v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "N/A";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return fmt::format("{:.{}f}", v, digits);
        } else {
          return v;
        }
      },
      cell);
}

// Keeps first-appearance order.
std::size_t index_of(std::vector<std::string> &list, const std::string &key) {
  auto it = std::find(list.begin(), list.end(), key);
  if (it != list.end()) return static_cast<std::size_t>(it - list.begin());
  list.push_back(key);
  return list.size() - 1;
}

Cell optional_cell(const std::optional<double> &v) {
  return v ? Cell(*v) : Cell();
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "json") return Format::kJson;
  if (name == "tsv") return Format::kTsv;
  if (name == "markdown" || name == "md") return Format::kMarkdown;
  throw ArgumentError("unknown report format '" + std::string(name) + "'");
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw ArgumentError(fmt::format("row has {} cells, table has {} columns",
                                    row.size(), columns.size()));
  }
  rows.push_back(std::move(row));
}

nlohmann::json to_json(const Table &table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto &row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const Cell &cell : row) {
      std::visit(
          [&](const auto &v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
              r.push_back(nullptr);
            } else {
              r.push_back(v);
            }
          },
          cell);
    }
    rows.push_back(std::move(r));
  }
  return {{"title", table.title},
          {"columns", table.columns},
          {"digits", table.digits},
          {"rows", rows}};
}

Table table_from_json(const nlohmann::json &j) {
  Table t;
  t.title = j.value("title", std::string());
  t.columns = j.at("columns").get<std::vector<std::string>>();
  t.digits = j.value("digits", 2);
  for (const auto &r : j.at("rows")) {
    std::vector<Cell> row;
    for (const auto &v : r) {
      if (v.is_null()) {
        row.emplace_back();
      } else if (v.is_number_integer()) {
        row.emplace_back(v.get<std::int64_t>());
      } else if (v.is_number()) {
        row.emplace_back(v.get<double>());
      } else if (v.is_string()) {
        row.emplace_back(v.get<std::string>());
      } else {
        throw FormatError("table", 0, "unsupported cell type");
      }
    }
    t.add_row(std::move(row));
  }
  return t;
}

Table parse_table_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw FormatError("table", 0, e.what());
  }
  return table_from_json(j);
}

std::string render(const Table &table, Format format) {
  std::ostringstream out;
  switch (format) {
    case Format::kJson:
      out << to_json(table).dump(2) << '\n';
      break;
    case Format::kTsv:
      for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "\t" : "") << table.columns[i];
      }
      out << '\n';
      for (const auto &row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          out << (i ? "\t" : "") << cell_text(row[i], table.digits);
        }
        out << '\n';
      }
      break;
    case Format::kMarkdown: {
      out << '|';
      for (const auto &c : table.columns) out << ' ' << c << " |";
      out << "\n|";
      for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i == 0 ? " --- |" : " ---: |");
      }
      out << '\n';
      for (const auto &row : table.rows) {
        out << '|';
        for (const Cell &cell : row) {
          out << ' ' << cell_text(cell, table.digits) << " |";
        }
        out << '\n';
      }
      break;
    }
  }
  return out.str();
}

void write(const Table &table, Format format, std::ostream &out) {
  out << render(table, format);
}

void write(const Table &table, Format format,
           const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write(table, format, out);
  if (!out) throw IoError("write failed: " + path.string());
}

nlohmann::json to_json(const AnalogyReport &report) {
  return {{"language", report.language},
          {"label", report.label},
          {"method", report.method},
          {"topn", report.topn},
          {"categories", analogy::to_json(report.categories)}};
}

AnalogyReport analogy_report_from_json(const nlohmann::json &j) {
  AnalogyReport r;
  r.language = j.value("language", std::string());
  r.label = j.value("label", std::string());
  r.method = j.value("method", std::string());
  r.topn = j.value("topn", std::vector<int>{});
  r.categories = analogy::results_from_json(j.at("categories"));
  return r;
}

Table kind_by_language_table(std::span<const ScoredEntry> entries,
                             int digits) {
  std::vector<std::string> labels, languages;
  for (const auto &e : entries) {
    index_of(labels, e.label);
    index_of(languages, e.language);
  }
  std::map<std::pair<std::size_t, std::size_t>, const ScoredEntry *> cells;
  for (const auto &e : entries) {
    cells[{index_of(labels, e.label), index_of(languages, e.language)}] = &e;
  }
  Table t;
  t.digits = digits;
  t.columns = {"Layer", "category"};
  t.columns.insert(t.columns.end(), languages.begin(), languages.end());
  for (std::size_t l = 0; l < labels.size(); ++l) {
    for (const bool semantic : {true, false}) {
      std::vector<Cell> row{semantic ? Cell(labels[l]) : Cell(std::string()),
                            std::string(semantic ? "semantic" : "syntactic")};
      for (std::size_t g = 0; g < languages.size(); ++g) {
        auto it = cells.find({l, g});
        if (it == cells.end()) {
          row.emplace_back();
        } else {
          const auto &s = it->second->scores;
          row.push_back(optional_cell(semantic ? s.semantic : s.syntactic));
        }
      }
      t.add_row(std::move(row));
    }
  }
  return t;
}

Table language_by_label_table(std::span<const ScoredEntry> entries,
                              int digits) {
  std::vector<std::string> labels, languages;
  for (const auto &e : entries) {
    index_of(languages, e.language);
    index_of(labels, e.label);
  }
  std::map<std::pair<std::size_t, std::size_t>, const ScoredEntry *> cells;
  for (const auto &e : entries) {
    cells[{index_of(languages, e.language), index_of(labels, e.label)}] = &e;
  }
  Table t;
  t.digits = digits;
  t.columns = {"Language"};
  for (const auto &l : labels) {
    t.columns.push_back(l + " sem");
    t.columns.push_back(l + " syn");
  }
  for (std::size_t g = 0; g < languages.size(); ++g) {
    std::vector<Cell> row{languages[g]};
    for (std::size_t l = 0; l < labels.size(); ++l) {
      auto it = cells.find({g, l});
      if (it == cells.end()) {
        row.emplace_back();
        row.emplace_back();
      } else {
        row.push_back(optional_cell(it->second->scores.semantic));
        row.push_back(optional_cell(it->second->scores.syntactic));
      }
    }
    t.add_row(std::move(row));
  }
  return t;
}

Table label_stats_table(std::span<const StatsEntry> entries) {
  Table t;
  t.digits = 3;
  t.columns = {"Language", "PER", "LOC", "ORG", "density", "N"};
  for (const auto &e : entries) {
    const auto &s = e.stats;
    t.add_row({e.language, static_cast<std::int64_t>(s.per),
               static_cast<std::int64_t>(s.loc),
               static_cast<std::int64_t>(s.org), s.density,
               static_cast<std::int64_t>(s.n)});
  }
  return t;
}

Table systems_table(std::span<const SystemScore> entries, int digits) {
  std::vector<std::string> systems, languages;
  for (const auto &e : entries) {
    index_of(languages, e.language);
    index_of(systems, e.system);
  }
  std::map<std::pair<std::size_t, std::size_t>, double> cells;
  for (const auto &e : entries) {
    cells[{index_of(languages, e.language), index_of(systems, e.system)}] =
        e.macro_f1;
  }
  Table t;
  t.digits = digits;
  t.columns = {"Language"};
  t.columns.insert(t.columns.end(), systems.begin(), systems.end());
  for (std::size_t g = 0; g < languages.size(); ++g) {
    std::vector<Cell> row{languages[g]};
    for (std::size_t s = 0; s < systems.size(); ++s) {
      auto it = cells.find({g, s});
      row.push_back(it == cells.end() ? Cell() : Cell(it->second));
    }
    t.add_row(std::move(row));
  }
  return t;
}

Table comparison_table(std::span<const ner::Comparison> rows) {
  Table t;
  t.digits = 4;
  t.columns = {"Language", "candidate", "baseline", "density", "N",
               "candidate macro-F1", "baseline macro-F1",
               "rel PER", "rel LOC", "rel ORG", "rel macro-F1"};
  for (const auto &c : rows) {
    std::vector<Cell> row{c.language,
                          c.candidate,
                          c.baseline,
                          c.density,
                          static_cast<std::int64_t>(c.size),
                          c.candidate_score.macro_f1,
                          c.baseline_score.macro_f1};
    for (const auto &r : c.relative) row.push_back(optional_cell(r));
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace embeval::report
