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

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "embeval/error.h"

namespace embeval::report {
namespace {

std::vector<ScoredEntry> one_language_three_layers() {
  return {{"sl", "CNN", {0.14, 0.79}},
          {"sl", "LSTM1", {0.41, 0.79}},
          {"sl", "LSTM2", {0.33, 0.57}}};
}

TEST(Layout, OneLanguageThreeLayers) {
  auto entries = one_language_three_layers();
  auto t = language_by_label_table(entries);
  ASSERT_EQ(t.rows.size(), 1u);
  std::size_t numeric = 0;
  for (const auto &c : t.rows[0]) {
    if (std::holds_alternative<double>(c)) ++numeric;
  }
  EXPECT_EQ(numeric, 6u);
  EXPECT_EQ(t.columns[1], "CNN sem");
  EXPECT_EQ(render(t, Format::kTsv),
            "Language\tCNN sem\tCNN syn\tLSTM1 sem\tLSTM1 syn\tLSTM2 sem\tLSTM2 syn\n"
            "sl\t0.14\t0.79\t0.41\t0.79\t0.33\t0.57\n");
}

TEST(Layout, KindByLanguage) {
  std::vector<ScoredEntry> entries{{"hr", "CNN", {0.081, 0.475}},
                                   {"sl", "CNN", {0.059, 0.47}},
                                   {"hr", "LSTM1", {0.219, 0.663}}};
  auto t = kind_by_language_table(entries);
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"Layer", "category", "hr", "sl"}));
  EXPECT_EQ(render(t, Format::kTsv),
            "Layer\tcategory\thr\tsl\n"
            "CNN\tsemantic\t0.081\t0.059\n"
            "\tsyntactic\t0.475\t0.470\n"
            "LSTM1\tsemantic\t0.219\tN/A\n"
            "\tsyntactic\t0.663\tN/A\n");
}

TEST(Layout, EmptyIsHeaderOnly) {
  std::vector<ScoredEntry> none;
  auto t = language_by_label_table(none);
  EXPECT_EQ(render(t, Format::kTsv), "Language\n");
  Table s{"stats", {"Language", "N"}, {}, 2};
  EXPECT_EQ(render(s, Format::kMarkdown), "| Language | N |\n| --- | ---: |\n");
}

TEST(Layout, Markdown) {
  Table t{"", {"a", "b"}, {}, 3};
  t.add_row({std::string("x"), 0.5});
  EXPECT_EQ(render(t, Format::kMarkdown),
            "| a | b |\n| --- | ---: |\n| x | 0.500 |\n");
  EXPECT_THROW(t.add_row({std::string("only")}), ArgumentError);
}

TEST(Json, TableRoundTrip) {
  Table t{"t", {"name", "count", "score", "missing"}, {}, 4};
  t.add_row({std::string("a"), std::int64_t{3}, 0.125, std::monostate{}});
  auto back = parse_table_json(to_json(t).dump());
  EXPECT_EQ(back.title, t.title);
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_EQ(back.digits, 4);
  ASSERT_EQ(back.rows.size(), 1u);
  EXPECT_EQ(back.rows[0], t.rows[0]);
  EXPECT_EQ(render(back, Format::kTsv), render(t, Format::kTsv));
}

TEST(Json, AnalogyReportRoundTrip) {
  AnalogyReport r{"sl", "LSTM1", "a", {1, 5},
                  {{"family", analogy::Kind::kSemantic, 3, 1, {{1, 1}, {5, 2}}}}};
  auto back = analogy_report_from_json(to_json(r));
  EXPECT_EQ(back.label, "LSTM1");
  EXPECT_EQ(back.topn, r.topn);
  ASSERT_EQ(back.categories.size(), 1u);
  EXPECT_EQ(back.categories[0].hits, r.categories[0].hits);
}

TEST(Layout, LabelStats) {
  std::vector<StatsEntry> e{{"Croatian", ner::label_stats(10241, 7445, 11216, 506457)}};
  EXPECT_EQ(render(label_stats_table(e), Format::kTsv),
            "Language\tPER\tLOC\tORG\tdensity\tN\n"
            "Croatian\t10241\t7445\t11216\t0.057\t506457\n");
}

TEST(Layout, SystemsWithGap) {
  std::vector<SystemScore> s{{"lt", "fastText", 0.44}, {"lt", "EMBEDDIA", 0.74},
                             {"sl", "fastText", 0.63}, {"sl", "EFML", 0.82},
                             {"sl", "EMBEDDIA", 0.85}};
  EXPECT_EQ(render(systems_table(s), Format::kTsv),
            "Language\tfastText\tEMBEDDIA\tEFML\n"
            "lt\t0.44\t0.74\tN/A\n"
            "sl\t0.63\t0.85\t0.82\n");
}

TEST(Format, Names) {
  EXPECT_EQ(parse_format("md"), Format::kMarkdown);
  EXPECT_EQ(parse_format("json"), Format::kJson);
  EXPECT_THROW(parse_format("xml"), ArgumentError);
}

}  // namespace
}  // namespace embeval::report
