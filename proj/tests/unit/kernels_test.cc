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


#include "embeval/kernels.h"

#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "embeval/parallel.h"
#include "oracles.h"
#include "test_util.h"

namespace embeval {
namespace {

class KernelsTest : public ::testing::TestWithParam<int> {
 protected:
  void SetUp() override { set_max_threads(GetParam()); }
  void TearDown() override { set_max_threads(0); }
};

std::vector<std::vector<std::string>> random_units(std::mt19937_64 &rng,
                                                   std::size_t count) {
  std::vector<std::vector<std::string>> units(count);
  for (auto &u : units) {
    const std::size_t len = rng() % 30;
    for (std::size_t k = 0; k < len; ++k) u.push_back(testing::random_word(rng, 300));
  }
  return units;
}

TEST_P(KernelsTest, Shingles) {
  std::mt19937_64 rng(1);
  auto units = random_units(rng, 500);
  EXPECT_EQ(kernels::shingle_units(units, 3), reference::shingle_units(units, 3));
}

TEST_P(KernelsTest, Tokenize) {
  std::vector<corpus::Paragraph> a(200), b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i].text = "Dr. Smith paid 1.5 eur. Then, " + std::to_string(i) +
                " people left! Really?";
  }
  b = a;
  const auto &rules = corpus::RuleTables::builtin().rules("en");
  kernels::tokenize_paragraphs(a, rules);
  reference::tokenize_paragraphs(b, rules);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].sentences, b[i].sentences);
}

TEST_P(KernelsTest, Counts) {
  std::mt19937_64 rng(2);
  std::vector<std::string> lines;
  for (const auto &u : random_units(rng, 2000)) {
    std::string line;
    for (const auto &t : u) line += t + " ";
    lines.push_back(line);
  }
  vocab::TokenCounts a, b;
  kernels::count_tokens(lines, a);
  reference::count_tokens(lines, b);
  EXPECT_EQ(a, b);
}

TEST_P(KernelsTest, Accumulate) {
  std::mt19937_64 rng(3);
  std::normal_distribution<float> g;
  std::vector<emb::TokenEmbeddingRecord> rs(3000);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    rs[i].sentence_id = std::to_string(i / 7);
    rs[i].position = i % 7;
    rs[i].token = testing::random_word(rng, 150);
    rs[i].layer = static_cast<emb::Layer>(rng() % 3);
    rs[i].vector = {g(rng), g(rng), g(rng)};
  }
  emb::AccumulatorTable ta(5), tb(5);
  kernels::accumulate_by_token(rs, emb::Layer::kLstm1, nullptr, 10, ta);
  reference::accumulate_by_token(rs, emb::Layer::kLstm1, nullptr, 10, tb);
  ASSERT_EQ(ta.tokens(), tb.tokens());
  for (std::size_t s = 0; s < 5; ++s) {
    for (const auto &[tok, e] : ta.shard(s)) {
      const auto &o = tb.shard(s).at(tok);
      EXPECT_EQ(e.first_seen, o.first_seen);
      EXPECT_EQ(e.acc.finalize(), o.acc.finalize());
    }
  }
}

TEST_P(KernelsTest, Ranks) {
  std::mt19937_64 rng(4);
  std::normal_distribution<float> g;
  const std::size_t n = 60, d = 4;
  std::vector<float> data(n * d);
  for (auto &x : data) x = g(rng);
  // Duplicate rows exercise the tie rule.
  std::copy(data.begin(), data.begin() + d, data.begin() + 5 * d);
  emb::MatrixView<float> m{data, n, d};
  auto inv = emb::row_inverse_norms(m);
  std::vector<RankQuery> qs(300);
  for (auto &q : qs) {
    q.q = {g(rng), g(rng), g(rng), g(rng)};
    q.target = rng() % n;
    q.exclude = {rng() % n, rng() % n, rng() % n};
  }
  EXPECT_EQ(kernels::target_ranks(m, inv, qs), reference::target_ranks(m, inv, qs));
}

TEST_P(KernelsTest, Confusion) {
  std::mt19937_64 rng(5);
  std::vector<std::uint8_t> gold(5000), pred(5000);
  for (auto &x : gold) x = rng() % 4;
  for (auto &x : pred) x = rng() % 4;
  auto a = kernels::confusion_counts(gold, pred, 4);
  EXPECT_EQ(a, reference::confusion_counts(gold, pred, 4));
  std::uint64_t total = 0;
  for (auto x : a) total += x;
  EXPECT_EQ(total, 5000u);
}

INSTANTIATE_TEST_SUITE_P(Threads, KernelsTest, ::testing::Values(1, 2, 4));

}  // namespace
}  // namespace embeval
