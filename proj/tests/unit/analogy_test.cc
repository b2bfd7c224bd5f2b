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


#include "embeval/analogy.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "embeval/error.h"
#include "embeval/provider.h"
#include "oracles.h"
#include "test_util.h"

namespace embeval::analogy {
namespace {

std::vector<AnalogyQuestion> parse(const std::string &text,
                                   const KindTable &kinds = {}) {
  std::istringstream in(text);
  return parse_analogy_dataset(in, "test", kinds);
}

emb::StaticEmbeddings gender_space() {
  return emb::StaticEmbeddings({"man", "woman", "king", "queen"},
                               {1, 0, 0, 1, 1, 1, 0, 2}, 2);
}

AnalogyQuestion question(std::string a, std::string b, std::string c,
                         std::string d, std::string cat = "c") {
  return {std::move(a), std::move(b), std::move(c), std::move(d),
          std::move(cat), Kind::kSemantic};
}

TEST(Dataset, OneQuestion) {
  auto qs = parse(": capital-common-countries\nHelsinki Finland Stockholm Sweden\n");
  ASSERT_EQ(qs.size(), 1u);
  EXPECT_EQ(qs[0].category, "capital-common-countries");
  EXPECT_EQ(qs[0].d, "Sweden");
  EXPECT_EQ(qs[0].kind, Kind::kSemantic);
}

TEST(Dataset, Empty) { EXPECT_TRUE(parse("").empty()); }

TEST(Dataset, ThreeWordsIsError) {
  try {
    parse(": c\na b c\n");
    FAIL() << "expected FormatError";
  } catch (const FormatError &e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Dataset, QuestionBeforeHeader) {
  EXPECT_THROW(parse("a b c d\n"), FormatError);
}

TEST(Dataset, DefaultKindTable) {
  std::string text;
  for (int c = 0; c < 7; ++c) {
    text += ": cat" + std::to_string(c) + "\nw1 w2 w3 w4\n";
  }
  auto qs = parse(text);
  ASSERT_EQ(qs.size(), 7u);
  for (int c = 0; c < 5; ++c) EXPECT_EQ(qs[c].kind, Kind::kSemantic);
  EXPECT_EQ(qs[5].kind, Kind::kSyntactic);
  EXPECT_EQ(qs[6].kind, Kind::kSyntactic);

  KindTable kinds;
  kinds.overrides["cat6"] = Kind::kSemantic;
  kinds.semantic_categories = 1;
  auto qs2 = parse(text, kinds);
  EXPECT_EQ(qs2[1].kind, Kind::kSyntactic);
  EXPECT_EQ(qs2[6].kind, Kind::kSemantic);
}

TEST(MethodA, GenderExample) {
  auto e = gender_space();
  std::vector<AnalogyQuestion> qs{question("man", "king", "woman", "queen")};
  auto top = method_a_top(e, qs[0], 100, 1);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(top[0], "queen");
  const int ns[] = {1};
  auto r = method_a_evaluate(e, qs, 100, ns);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].accuracy(1), 1.0);
}

TEST(MethodA, OovIsSkippedNotMissed) {
  auto e = gender_space();
  std::vector<AnalogyQuestion> qs{question("man", "king", "woman", "queen"),
                                  question("man", "king", "woman", "empress")};
  const int ns[] = {1};
  auto r = method_a_evaluate(e, qs, 100, ns);
  EXPECT_EQ(r[0].asked, 2u);
  EXPECT_EQ(r[0].skipped_oov, 1u);
  EXPECT_EQ(r[0].hits.at(1), 1u);
  EXPECT_EQ(r[0].accuracy(1), 1.0);
}

TEST(MethodA, CandidateLimitMakesWordsOov) {
  auto e = gender_space();
  std::vector<AnalogyQuestion> qs{question("man", "king", "woman", "queen")};
  auto ranks = method_a_ranks(e, qs, 3);
  EXPECT_FALSE(ranks[0].has_value());
  EXPECT_THROW(method_a_ranks(e, qs, 0), ArgumentError);
}

TEST(MethodA, RanksMatchBruteForce) {
  std::mt19937_64 rng(21);
  std::normal_distribution<float> g;
  const std::size_t n = 30, d = 5;
  std::vector<std::string> words;
  std::vector<float> data;
  std::vector<oracle::Vec> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    words.push_back("w" + std::to_string(i));
    for (std::size_t k = 0; k < d; ++k) {
      data.push_back(g(rng));
      rows[i].push_back(data.back());
    }
  }
  emb::StaticEmbeddings e(words, data, d);
  std::vector<AnalogyQuestion> qs;
  std::vector<std::array<std::size_t, 4>> ids;
  while (qs.size() < 200) {
    std::array<std::size_t, 4> x{rng() % n, rng() % n, rng() % n, rng() % n};
    if (x[0] == x[1] || x[0] == x[2] || x[0] == x[3] || x[1] == x[2] ||
        x[1] == x[3] || x[2] == x[3]) {
      continue;
    }
    ids.push_back(x);
    qs.push_back(question(words[x[0]], words[x[1]], words[x[2]], words[x[3]]));
  }
  auto ranks = method_a_ranks(e, qs, n);
  for (std::size_t i = 0; i < qs.size(); ++i) {
    ASSERT_TRUE(ranks[i].has_value());
    EXPECT_EQ(*ranks[i],
              oracle::analogy_rank(rows, ids[i][0], ids[i][1], ids[i][2], ids[i][3]))
        << "question " << i;
  }
}

TEST(Template, PaperSentence) {
  auto set = TemplateSet::builtin("en");
  auto q = question("Rome", "Italy", "Paris", "France");
  auto s = build_template_sentence(q, set.for_category("capital-common-countries"));
  std::string joined;
  for (const auto &t : s.tokens) joined += (joined.empty() ? "" : " ") + t;
  EXPECT_EQ(joined,
            "If the word Rome corresponds to the word Italy , then the word "
            "Paris corresponds to the word France");
  EXPECT_EQ(s.tokens[s.d_slot()], "France");
  EXPECT_EQ(s.tokens[s.slots[0]], "Rome");
}

TEST(Template, WordsInsertedVerbatim) {
  auto set = TemplateSet::builtin("lv");
  auto q = question("Rīga", "Latvija", "Viļņa", "Lietuva");
  auto s = build_template_sentence(q, set.default_spec());
  EXPECT_EQ(s.tokens[s.slots[0]], "Rīga");
  EXPECT_EQ(s.tokens[s.slots[2]], "Viļņa");
  EXPECT_EQ(s.tokens[s.d_slot()], "Lietuva");
}

TEST(Template, MultiwordRejected) {
  TemplateSpec spec("en", "{A} {B} {C} {D}");
  EXPECT_THROW(build_template_sentence(question("New York", "b", "c", "d"), spec),
               ArgumentError);
}

TEST(Template, InvalidPatterns) {
  EXPECT_THROW(TemplateSpec("en", "{A} {B} {C}"), ArgumentError);
  EXPECT_THROW(TemplateSpec("en", "{A} {D} {C} {B}"), ArgumentError);
  EXPECT_THROW(TemplateSpec("en", "{A} {A} {B} {C} {D}"), ArgumentError);
}

TEST(Template, CategoryOverride) {
  auto set = TemplateSet::parse("en",
                                "# c\n{A} is to {B} as {C} is to {D}\n"
                                "family\t{A} {B} and {C} {D}\n");
  EXPECT_EQ(set.for_category("family").pattern(), "{A} {B} and {C} {D}");
  EXPECT_EQ(set.for_category("other").pattern(), "{A} is to {B} as {C} is to {D}");
}

emb::MatrixView<float> view(const std::vector<float> &data, std::size_t d) {
  return {data, data.size() / d, d};
}

TEST(Csls, HandComputedK1) {
  const std::vector<float> cands{1, 0, 0, 1, 1, 1};
  const std::vector<double> q{1, 0.3};
  const std::vector<std::vector<double>> query_set{q, {0.2, 1}};
  auto s = csls_scores(q, view(cands, 2), query_set, CslsConfig{1});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_NEAR(s[0], 0.0, 1e-12);
  EXPECT_NEAR(s[1], -1.3637111897793806, 1e-12);
  EXPECT_NEAR(s[2], -0.07735518529897611, 1e-12);
  EXPECT_EQ(rank_by_score(s), (std::vector<std::size_t>{0, 2, 1}));
}

TEST(Csls, EqualRTermsGiveCosineOrder) {
  // Single query with K = candidates - 1: r(q) is a constant and r(y) is
  // cos(y, q), so CSLS is cos - const.
  std::mt19937_64 rng(2);
  std::normal_distribution<float> g;
  std::vector<float> cands(6 * 3);
  for (auto &x : cands) x = g(rng);
  std::vector<double> q{0.5, -1, 2};
  auto order = csls_rank(q, view(cands, 3), CslsConfig{5});
  std::vector<double> cos;
  for (std::size_t j = 0; j < 6; ++j) {
    cos.push_back(oracle::cos(oracle::Vec(cands.begin() + 3 * j, cands.begin() + 3 * j + 3), q));
  }
  EXPECT_EQ(order, oracle::order_by(cos));
}

TEST(Csls, DuplicateCandidatesAdjacent) {
  const std::vector<float> cands{0, 1, 1, 1, 2, 0.5f, 1, 1};
  std::vector<double> q{1, 0.9};
  auto order = csls_rank(q, view(cands, 2), CslsConfig{2});
  auto it = std::find(order.begin(), order.end(), 1u);
  ASSERT_NE(it + 1, order.end());
  EXPECT_EQ(*(it + 1), 3u);
}

TEST(Csls, KOutOfRange) {
  const std::vector<float> cands{1, 0, 0, 1};
  std::vector<double> q{1, 1};
  EXPECT_THROW(csls_rank(q, view(cands, 2), CslsConfig{0}), ArgumentError);
  EXPECT_THROW(csls_rank(q, view(cands, 2), CslsConfig{2}), ArgumentError);
}

TEST(Csls, MatchesOracle) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + rng() % 7, d = 3;
    std::vector<float> cands(m * d);
    for (auto &x : cands) x = static_cast<float>(g(rng));
    std::vector<oracle::Vec> cand_rows;
    for (std::size_t j = 0; j < m; ++j) {
      cand_rows.emplace_back(cands.begin() + j * d, cands.begin() + (j + 1) * d);
    }
    std::vector<std::vector<double>> qs(1 + rng() % 3, std::vector<double>(d));
    for (auto &v : qs) for (auto &x : v) x = g(rng);
    const std::size_t k = 1 + rng() % (m - 1);
    auto s = csls_scores(qs[0], view(cands, d), qs, CslsConfig{k});
    auto want = oracle::csls(qs[0], cand_rows, qs, k);
    for (std::size_t j = 0; j < m; ++j) EXPECT_NEAR(s[j], want[j], 1e-12);
  }
}

TEST(MethodB, CandidateOrder) {
  std::vector<AnalogyQuestion> qs{question("a", "b", "c", "d")};
  std::vector<std::string> vocab{"x", "c", "y"};
  EXPECT_EQ(method_b_candidates(qs, vocab, 100, false),
            (std::vector<std::string>{"a", "b", "c", "d", "x", "y"}));
  EXPECT_EQ(method_b_candidates(qs, vocab, 5, false),
            (std::vector<std::string>{"a", "b", "c", "d", "x"}));
  EXPECT_EQ(method_b_candidates(qs, vocab, 2, true),
            (std::vector<std::string>{"x", "c"}));
}

TEST(MethodB, MockProviderMatchesMethodA) {
  auto qs = parse_analogy_dataset(testing::fixture("analogy_mini.txt"));
  auto cands = method_b_candidates(qs, {}, 200000, false);
  provider::HashingMockProvider mock(16, 3);
  std::vector<float> data;
  for (const auto &w : cands) {
    auto v = mock.token_vector(w, emb::Layer::kLstm1);
    data.insert(data.end(), v.begin(), v.end());
  }
  emb::StaticEmbeddings e(cands, data, 16);
  const int ns[] = {1, 5};
  auto a = method_a_evaluate(e, qs, cands.size(), ns);
  MethodBOptions opt;
  opt.ranking = Ranking::kCosine;
  opt.batch_sentences = 50;
  MethodBStats stats;
  auto b = method_b_evaluate(mock, qs, TemplateSet::builtin("en"), cands, opt, &stats);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].category, b[i].category);
    EXPECT_EQ(a[i].hits, b[i].hits);
  }
  EXPECT_EQ(stats.sentences_embedded, qs.size() * (1 + cands.size() - 3));
}

class WrongDimProvider : public provider::EmbeddingProvider {
 public:
  std::vector<provider::SentenceEmbedding> embed(
      std::span<const provider::TokenSentence> sentences) override {
    auto out = inner_.embed(sentences);
    if (calls_++ > 0) {
      for (auto &e : out) {
        e.dim = 3;
        for (auto &l : e.layers) l.resize(e.tokens * 3);
      }
    }
    return out;
  }

 private:
  provider::HashingMockProvider inner_{4, 0};
  int calls_ = 0;
};

TEST(MethodB, WrongDimensionIsProtocolError) {
  std::vector<AnalogyQuestion> qs{question("a", "b", "c", "d"),
                                  question("b", "a", "d", "c")};
  std::vector<std::string> cands{"a", "b", "c", "d", "e"};
  WrongDimProvider p;
  MethodBOptions opt;
  opt.batch_sentences = 1;
  opt.csls.k = 1;
  EXPECT_THROW(method_b_evaluate(p, qs, TemplateSet::builtin("en"), cands, opt),
               ProtocolError);
}

TEST(Aggregate, UnweightedMean) {
  CategoryResult x{"x", Kind::kSyntactic, 10, 0, {{1, 2}}};
  CategoryResult y{"y", Kind::kSyntactic, 5, 0, {{1, 2}}};
  std::vector<CategoryResult> rs{x, y};
  auto s = aggregate(rs, 1);
  EXPECT_FALSE(s.semantic.has_value());
  EXPECT_DOUBLE_EQ(*s.syntactic, 0.3);
}

TEST(Aggregate, SingleCategory) {
  std::vector<CategoryResult> rs{{"x", Kind::kSemantic, 4, 1, {{5, 2}}}};
  EXPECT_DOUBLE_EQ(*aggregate(rs, 5).semantic, 2.0 / 3.0);
  EXPECT_EQ(format_aggregate_row("sl", aggregate(rs, 5)), "sl | sem 0.67 | syn n/a");
}

TEST(Results, JsonRoundTrip) {
  std::vector<CategoryResult> rs{{"x", Kind::kSemantic, 4, 1, {{1, 2}, {5, 3}}},
                                 {"y", Kind::kSyntactic, 2, 0, {{1, 0}, {5, 1}}}};
  auto back = results_from_json(to_json(rs));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].kind, Kind::kSyntactic);
  EXPECT_EQ(back[0].hits, rs[0].hits);
  EXPECT_EQ(back[0].skipped_oov, 1u);
}

}  // namespace
}  // namespace embeval::analogy
