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


#include "embeval/corpus.h"

#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "embeval/error.h"
#include "test_util.h"

namespace embeval::corpus {
namespace {

using Tokens = std::vector<std::string>;

const LanguageRules &rules(const char *lang) {
  return RuleTables::builtin().rules(lang);
}

std::vector<Paragraph> read_all(const std::string &text, InputFormat format,
                                std::size_t *invalid = nullptr) {
  std::istringstream in(text);
  ParagraphReader reader(in, format);
  std::vector<Paragraph> out;
  while (auto p = reader.next()) out.push_back(std::move(*p));
  if (invalid) *invalid = reader.invalid_bytes();
  return out;
}

TEST(CorpusLoad, BlankLineSeparatesParagraphs) {
  auto ps = read_all("First line.\nstill first.\n\nSecond.\n",
                     InputFormat::kRawText);
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps[1].text, "Second.");
}

TEST(CorpusLoad, RunsOfBlankLinesAreOneSeparator) {
  auto ps = read_all("\n\na\n\n\n\nb\n\n", InputFormat::kRawText);
  EXPECT_EQ(ps.size(), 2u);
}

TEST(CorpusLoad, PretokenizedLinePassesThrough) {
  auto ps = read_all("a b .\n", InputFormat::kPretokenized);
  ASSERT_EQ(ps.size(), 1u);
  ASSERT_EQ(ps[0].sentences.size(), 1u);
  EXPECT_EQ(ps[0].sentences[0].tokens, (Tokens{"a", "b", "."}));
}

TEST(CorpusLoad, InvalidByteIsReplacedAndCounted) {
  std::size_t invalid = 0;
  auto ps = read_all("ab\xFF" "cd\n", InputFormat::kPretokenized, &invalid);
  EXPECT_EQ(invalid, 1u);
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(ps[0].sentences[0].tokens, (Tokens{"ab\xEF\xBF\xBD" "cd"}));
}

TEST(CorpusLoad, EmptyFileGivesNoDocuments) {
  testing::TempDir dir;
  testing::write_file(dir / "empty.txt", "");
  auto r = load_corpus(dir / "empty.txt", InputFormat::kRawText);
  EXPECT_TRUE(r.documents.empty());
}

TEST(CorpusLoad, MissingFileIsIoError) {
  EXPECT_THROW(load_corpus("/nonexistent/corpus.txt", InputFormat::kRawText),
               IoError);
}

TEST(Segment, UnambiguousBoundary) {
  EXPECT_EQ(segment_sentences("Prvi stavek. Drugi stavek.", "sl").size(), 2u);
}

TEST(Segment, AbbreviationDoesNotSplit) {
  auto s = segment_sentences("Dr. Novak je prišel.", "sl");
  EXPECT_EQ(s.size(), 1u);
}

TEST(Segment, NoTerminalPunctuation) {
  EXPECT_EQ(segment_sentences("just some words here", "en").size(), 1u);
}

TEST(Segment, InitialDoesNotSplit) {
  EXPECT_EQ(segment_sentences("J. Smith arrived. He sat.", "en").size(), 2u);
}

TEST(Segment, LowercaseContinuationDoesNotSplit) {
  EXPECT_EQ(segment_sentences("It costs 5 eur. per item.", "en").size(), 1u);
}

TEST(Segment, CroatianUsesSloveneTable) {
  auto r = RuleTables::builtin().resolve("hr");
  EXPECT_EQ(r.rules->language(), "sl");
  EXPECT_EQ(segment_sentences("Dr. Novak je prišel.", "hr").size(), 1u);
}

TEST(Segment, UnknownLanguageFallsBack) {
  auto r = RuleTables::builtin().resolve("xx");
  EXPECT_TRUE(r.fallback);
  EXPECT_EQ(segment_sentences("One. Two.", "xx").size(), 2u);
}

TEST(Tokenize, Punctuation) {
  EXPECT_EQ(tokenize("Hello, world!", "en").tokens,
            (Tokens{"Hello", ",", "world", "!"}));
}

TEST(Tokenize, PlainWord) {
  EXPECT_EQ(tokenize("abc", "en").tokens, (Tokens{"abc"}));
}

TEST(Tokenize, DecimalPointKept) {
  EXPECT_EQ(tokenize("1.5 %", "en").tokens, (Tokens{"1.5", "%"}));
}

TEST(Tokenize, AbbreviationKeepsPeriod) {
  EXPECT_EQ(tokenize("Dr. Smith", "en").tokens, (Tokens{"Dr.", "Smith"}));
}

TEST(Tokenize, EllipsisStaysTogether) {
  EXPECT_EQ(tokenize("wait...", "en").tokens, (Tokens{"wait", "..."}));
}

TEST(Tokenize, HyphenatedWord) {
  EXPECT_EQ(tokenize("well-known (e.g.)", "en").tokens,
            (Tokens{"well-known", "(", "e.g.", ")"}));
}

TEST(Tokenize, NonAsciiLetters) {
  EXPECT_EQ(tokenize("Šola, čaša.", "sl").tokens,
            (Tokens{"Šola", ",", "čaša", "."}));
}

Document make_doc(std::vector<std::vector<Tokens>> paragraphs) {
  Document d;
  for (auto &p : paragraphs) {
    Paragraph para;
    for (auto &s : p) para.sentences.push_back({std::move(s)});
    d.paragraphs.push_back(std::move(para));
  }
  return d;
}

TEST(Emit, CountsTokens) {
  std::vector<Document> docs{make_doc({{{"a", "b", "c"}, {"d", "e", "f"}}})};
  std::ostringstream out;
  EXPECT_EQ(emit_lines(docs, out), 6u);
  EXPECT_EQ(out.str(), "a b c\nd e f\n");
}

TEST(Emit, EmptyStream) {
  testing::TempDir dir;
  std::vector<Document> docs;
  EXPECT_EQ(emit_lines(docs, dir / "out.txt"), 0u);
  EXPECT_EQ(testing::read_file(dir / "out.txt"), "");
}

TEST(Emit, RoundTrip) {
  std::vector<Document> docs{
      make_doc({{{"Ena", "dva", "."}, {"Tri", "!"}}, {{"x"}}}),
      make_doc({{{"1.5", "%", "ž"}}})};
  testing::TempDir dir;
  emit_lines(docs, dir / "out.txt");
  auto back = load_corpus(dir / "out.txt", InputFormat::kPretokenized);
  std::vector<Sentence> want, got;
  for (const auto &d : docs)
    for (const auto &p : d.paragraphs)
      for (const auto &s : p.sentences) want.push_back(s);
  for (const auto &d : back.documents)
    for (const auto &p : d.paragraphs)
      for (const auto &s : p.sentences) got.push_back(s);
  EXPECT_EQ(got, want);
}

TEST(Emit, PretokenizedNormalizesWhitespace) {
  testing::TempDir dir;
  testing::write_file(dir / "in.txt", "a\t b  c   \n\n\nd\n");
  tokenize_file(dir / "in.txt", dir / "out.txt", InputFormat::kPretokenized,
                rules("en"));
  EXPECT_EQ(testing::read_file(dir / "out.txt"), "a b c\n\nd\n");
}

TEST(TokenizeFile, RawTextEndToEnd) {
  testing::TempDir dir;
  testing::write_file(dir / "in.txt",
                      "Hello, world! It works.\nReally.\n\nSecond one.\n");
  auto stats = tokenize_file(dir / "in.txt", dir / "out.txt",
                             InputFormat::kRawText, rules("en"), 1);
  EXPECT_EQ(stats.paragraphs, 2u);
  EXPECT_EQ(stats.sentences, 4u);
  EXPECT_EQ(testing::read_file(dir / "out.txt"),
            "Hello , world !\nIt works .\nReally .\n\nSecond one .\n");
}

TEST(SplitWhitespace, NeverEmpty) {
  auto parts = split_whitespace("  a b \t c  ");
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(parts[2], "c");
}

}  // namespace
}  // namespace embeval::corpus
