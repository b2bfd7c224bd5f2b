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

#ifndef EMBEVAL_CORPUS_H_
#define EMBEVAL_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace embeval::corpus {

enum class InputFormat {
  kRawText,       // free text; paragraphs are tokenized later
  kPretokenized,  // one sentence per line, tokens separated by whitespace
};

InputFormat parse_input_format(std::string_view name);

// Tokens never contain whitespace and are never empty.
struct Sentence {
  std::vector<std::string> tokens;

  bool operator==(const Sentence &) const = default;
};

// A block of text delimited by blank lines. In raw mode `text` holds the
// paragraph with its line breaks folded into spaces and `sentences` stays
// empty until tokenize_paragraph() runs. In pretokenized mode `sentences` is
// filled directly from the lines.
struct Paragraph {
  std::string text;
  std::vector<Sentence> sentences;
};

struct Document {
  std::string id;
  std::vector<Paragraph> paragraphs;
};

// Per-language rule set for the sentence splitter and tokenizer.
class LanguageRules {
 public:
  LanguageRules() = default;
  LanguageRules(std::string language, std::unordered_set<std::string> abbrevs)
      : language_(std::move(language)), abbreviations_(std::move(abbrevs)) {}

  const std::string &language() const { return language_; }

  // `word` is compared lowercased and must include its final period.
  bool is_abbreviation(std::string_view word) const;

  std::size_t size() const { return abbreviations_.size(); }

 private:
  std::string language_;
  std::unordered_set<std::string> abbreviations_;
};

// Abbreviation tables keyed by language code. Croatian resolves to the
// Slovene table; any other unknown code resolves to an empty default table.
class RuleTables {
 public:
  // Tables compiled in from data/abbrev.
  static const RuleTables &builtin();

  // Reads every <lang>.txt file in `dir`.
  static RuleTables from_directory(const std::filesystem::path &dir);

  // Parses one table: one abbreviation per line, '#' starts a comment.
  static LanguageRules parse_table(std::string language,
                                   std::string_view content);

  struct Resolved {
    const LanguageRules *rules;
    bool fallback;  // true when the code had no table of its own
  };

  // Logs a warning when falling back to the default rules.
  Resolved resolve(std::string_view language) const;
  const LanguageRules &rules(std::string_view language) const {
    return *resolve(language).rules;
  }

  bool has(std::string_view language) const;

 private:
  std::map<std::string, LanguageRules, std::less<>> tables_;
  LanguageRules default_rules_{"default", {}};
};

// Streams paragraphs from a corpus file. Ill-formed UTF-8 is replaced with
// U+FFFD and counted.
class ParagraphReader {
 public:
  ParagraphReader(const std::filesystem::path &path, InputFormat format);
  ParagraphReader(std::istream &in, InputFormat format);

  std::optional<Paragraph> next();

  std::size_t invalid_bytes() const { return invalid_bytes_; }

 private:
  std::unique_ptr<std::ifstream> owned_;
  std::istream *in_;
  InputFormat format_;
  std::size_t invalid_bytes_ = 0;
};

struct LoadResult {
  std::vector<Document> documents;
  std::size_t invalid_bytes = 0;
};

// Reads a whole file as one document whose id is the path. An empty file
// yields no documents.
LoadResult load_corpus(const std::filesystem::path &path, InputFormat format);

// Splits a paragraph into sentence spans. A boundary follows a token ending
// in . ! ? or an ellipsis (optionally followed by closing quotes or brackets)
// when the next token starts with an uppercase letter or a digit, unless the
// token is a known abbreviation or a single-letter initial.
std::vector<std::string> segment_sentences(std::string_view paragraph,
                                           const LanguageRules &rules);
std::vector<std::string> segment_sentences(std::string_view paragraph,
                                           std::string_view language);

// Splits a sentence span into tokens. Punctuation becomes standalone tokens
// except periods and commas between digits, hyphens and apostrophes between
// letters, periods inside dotted words, colons between digits, and the final
// period of a known abbreviation. Runs of one punctuation character stay
// together ("...").
Sentence tokenize(std::string_view span, const LanguageRules &rules);
Sentence tokenize(std::string_view span, std::string_view language);

// Fills paragraph.sentences from paragraph.text. No-op for paragraphs that
// already carry sentences.
void tokenize_paragraph(Paragraph &paragraph, const LanguageRules &rules);

std::string join_tokens(const Sentence &sentence);

// Splits on any Unicode whitespace; never returns empty pieces.
std::vector<std::string_view> split_whitespace(std::string_view text);

// Writes one sentence per line, tokens joined by single spaces, one blank
// line between paragraphs. Returns the number of tokens written.
std::size_t emit_lines(std::span<const Document> docs, std::ostream &out);
std::size_t emit_lines(std::span<const Document> docs,
                       const std::filesystem::path &path);

// Appends one paragraph to a stream being written with the same layout as
// emit_lines(). `first` tells whether a separator line is needed.
std::size_t emit_paragraph(const Paragraph &paragraph, std::ostream &out,
                           bool first);

struct TokenizeStats {
  std::size_t paragraphs = 0;
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t invalid_bytes = 0;
};

// File-to-file driver: streams paragraphs, tokenizes batches of them in
// parallel and writes them back in input order.
TokenizeStats tokenize_file(const std::filesystem::path &in,
                            const std::filesystem::path &out,
                            InputFormat format, const LanguageRules &rules,
                            std::size_t batch_paragraphs = 4096);

}  // namespace embeval::corpus

#endif  // EMBEVAL_CORPUS_H_
