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


#include "embeval/vocab.h"

#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "embeval/error.h"
#include "test_util.h"

namespace embeval::vocab {
namespace {

std::vector<std::string> tokens_of(const std::vector<VocabEntry> &v) {
  std::vector<std::string> out;
  for (const auto &e : v) out.push_back(e.token);
  return out;
}

TEST(Count, Simple) {
  std::vector<std::string> lines{"a a b"};
  auto c = count_tokens(lines);
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c["a"], 2u);
  EXPECT_EQ(c["b"], 1u);
}

TEST(Count, Empty) {
  std::vector<std::string> lines;
  EXPECT_TRUE(count_tokens(lines).empty());
  std::istringstream in("");
  EXPECT_TRUE(count_tokens(in).empty());
}

TEST(Count, StreamChunksAgree) {
  std::ostringstream text;
  for (int i = 0; i < 1000; ++i) text << "w" << i % 37 << " x" << i % 5 << "\n";
  std::istringstream a(text.str()), b(text.str());
  EXPECT_EQ(count_tokens(a, 7), count_tokens(b, 100000));
}

TEST(Build, MinCount) {
  TokenCounts c{{"a", 2}, {"b", 1}};
  EXPECT_EQ(tokens_of(build_vocab(c, 2)), (std::vector<std::string>{"a"}));
}

TEST(Build, TieBreakIsLexicographic) {
  TokenCounts c{{"b", 3}, {"a", 3}};
  auto v = build_vocab(c, 1);
  EXPECT_EQ(tokens_of(v), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(v[0].rank, 1u);
  EXPECT_EQ(v[1].rank, 2u);
}

TEST(Build, TruncationAfterTieBreak) {
  TokenCounts c{{"e", 10}, {"c", 10}, {"a", 10}, {"d", 10}, {"b", 10}};
  EXPECT_EQ(tokens_of(build_vocab(c, 1, 3)),
            (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Build, CountOrderFirst) {
  TokenCounts c{{"z", 5}, {"a", 1}, {"m", 3}};
  EXPECT_EQ(tokens_of(build_vocab(c, 1)),
            (std::vector<std::string>{"z", "m", "a"}));
}

TEST(Build, CodePointOrderForUtf8) {
  TokenCounts c{{"ž", 1}, {"z", 1}, {"č", 1}};
  EXPECT_EQ(tokens_of(build_vocab(c, 1)),
            (std::vector<std::string>{"z", "č", "ž"}));
}

TEST(Build, MinCountBelowOne) {
  EXPECT_THROW(build_vocab({}, 0), ArgumentError);
}

TEST(DefaultMinCount, Bounds) {
  EXPECT_EQ(default_min_count(0), 15u);
  EXPECT_EQ(default_min_count(99'999'999), 15u);
  EXPECT_EQ(default_min_count(1'000'000'000), 25u);
  EXPECT_EQ(default_min_count(5'000'000'000), 25u);
  const auto mid = default_min_count(550'000'000);
  EXPECT_GE(mid, 15u);
  EXPECT_LE(mid, 25u);
  for (std::uint64_t n = 100'000'000; n < 1'000'000'000; n += 50'000'000) {
    EXPECT_LE(default_min_count(n), default_min_count(n + 50'000'000));
  }
}

TEST(Io, WriteAndRead) {
  testing::TempDir dir;
  TokenCounts c{{"a", 3}, {"b", 1}};
  auto v = build_vocab(c, 1);
  write_vocab(v, dir / "v.tsv", true);
  EXPECT_EQ(testing::read_file(dir / "v.tsv"), "a\t3\nb\t1\n");
  EXPECT_EQ(read_vocab(dir / "v.tsv"), (std::vector<std::string>{"a", "b"}));
  write_vocab(v, dir / "plain.txt", false);
  EXPECT_EQ(testing::read_file(dir / "plain.txt"), "a\nb\n");
}

}  // namespace
}  // namespace embeval::vocab
