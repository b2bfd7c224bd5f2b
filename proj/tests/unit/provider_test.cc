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

#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "embeval/error.h"
#include "test_util.h"

namespace embeval::provider {
namespace {

std::string responses_for(const std::vector<TokenSentence> &ss,
                          EmbeddingProvider &p) {
  auto e = p.embed(ss);
  std::ostringstream out;
  write_responses(ss, e, out);
  return out.str();
}

TEST(Mock, ContextFree) {
  HashingMockProvider p(8, 1);
  std::vector<TokenSentence> ss{{"the", "cat"}, {"a", "big", "cat"}};
  auto e = p.embed(ss);
  const auto x = e[0].vector(emb::Layer::kLstm1, 1);
  const auto y = e[1].vector(emb::Layer::kLstm1, 2);
  EXPECT_TRUE(std::equal(x.begin(), x.end(), y.begin(), y.end()));
  const auto z = e[1].vector(emb::Layer::kCnn, 2);
  EXPECT_FALSE(std::equal(x.begin(), x.end(), z.begin(), z.end()));
}

TEST(Mock, RecordCount) {
  HashingMockProvider p(4);
  std::vector<TokenSentence> ss{{"a", "b", "c", "d"}};
  std::istringstream in(responses_for(ss, p));
  emb::RecordReader reader(in, "resp");
  emb::TokenEmbeddingRecord r;
  std::size_t n = 0;
  while (reader.next(r)) ++n;
  EXPECT_EQ(n, 12u);
}

TEST(Protocol, CollectResponses) {
  HashingMockProvider p(4);
  std::vector<TokenSentence> ss{{"a", "b"}, {"c"}};
  std::istringstream in(responses_for(ss, p));
  emb::RecordReader reader(in, "resp");
  auto got = collect_responses(reader, ss);
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0].tokens, 2u);
  EXPECT_EQ(got[1].dim, 4u);
  EXPECT_TRUE(got[1].has(emb::Layer::kLstm2));
}

TEST(Protocol, MissingTokenIsError) {
  HashingMockProvider p(4);
  std::vector<TokenSentence> asked{{"a", "b"}};
  std::vector<TokenSentence> answered{{"a"}};
  std::istringstream in(responses_for(answered, p));
  emb::RecordReader reader(in, "resp");
  EXPECT_THROW(collect_responses(reader, asked), ProtocolError);
}

TEST(Protocol, RequestsRoundTrip) {
  testing::TempDir dir;
  std::vector<TokenSentence> ss{{"If", "the", "word"}, {"ž", "."}};
  {
    std::ofstream out(dir / "req.txt");
    write_requests(ss, out);
  }
  EXPECT_EQ(testing::read_file(dir / "req.txt"), "If the word\nž .\n");
  EXPECT_EQ(read_requests(dir / "req.txt"), ss);
}

TEST(Protocol, ShellQuoting) {
  EXPECT_EQ(shell_quote_arg("a b"), "'a b'");
  EXPECT_EQ(shell_quote_arg("it's"), "'it'\\''s'");
}

TEST(Subprocess, RunsCliMock) {
  testing::TempDir dir;
  SubprocessProvider p(shell_quote_arg(EMBEVAL_CLI) + " emb mock-provide --dim 6",
                       dir.path());
  std::vector<TokenSentence> ss{{"x", "y"}, {"y"}};
  auto e = p.embed(ss);
  HashingMockProvider local(6);
  auto want = local.embed(ss);
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[1].layers, want[1].layers);
  EXPECT_EQ(p.calls(), 1u);
}

TEST(Subprocess, FailureIsProtocolError) {
  testing::TempDir dir;
  SubprocessProvider p("false", dir.path());
  std::vector<TokenSentence> ss{{"x"}};
  EXPECT_THROW(p.embed(ss), ProtocolError);
}

TEST(RecordFile, ServesByText) {
  testing::TempDir dir;
  HashingMockProvider mock(3);
  std::vector<TokenSentence> ss{{"a", "b"}, {"c", "d", "e"}};
  testing::write_file(dir / "r.tsv", responses_for(ss, mock));
  RecordFileProvider p(dir / "r.tsv");
  EXPECT_EQ(p.sentences(), 2u);
  std::vector<TokenSentence> ask{{"c", "d", "e"}};
  auto e = p.embed(ask);
  EXPECT_EQ(e[0].layers, mock.embed(ask)[0].layers);
  std::vector<TokenSentence> unknown{{"zzz"}};
  EXPECT_THROW(p.embed(unknown), ProtocolError);
}

}  // namespace
}  // namespace embeval::provider
