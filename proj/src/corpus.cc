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

#include <spdlog/spdlog.h>

#include <algorithm>
#include <istream>
#include <ostream>

#include "embeval/builtin_data.h"
#include "embeval/error.h"
#include "embeval/kernels.h"
#include "embeval/utf8.h"

namespace embeval::corpus {

namespace {

struct CodePoint {
  char32_t cp;
  std::size_t begin;  // byte offsets into the source
  std::size_t end;
};

std::vector<CodePoint> decode_all(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t begin = pos;
    const char32_t cp = utf8::decode(text, pos);
    out.push_back({cp, begin, pos});
  }
  return out;
}

bool is_opener(char32_t cp) {
  switch (cp) {
    case '"': case '\'': case '(': case '[': case '{':
    case 0x201C: case 0x201E: case 0xAB: case 0x2018: case 0x201A:
    case 0x2039: case 0xBF: case 0xA1:
      return true;
    default:
      return false;
  }
}

bool is_closer(char32_t cp) {
  switch (cp) {
    case '"': case '\'': case ')': case ']': case '}':
    case 0x201D: case 0x2019: case 0xBB: case 0x203A:
      return true;
    default:
      return false;
  }
}

bool is_terminal(char32_t cp) {
  return cp == '.' || cp == '!' || cp == '?' || cp == 0x2026;
}

// "J." style initial: one uppercase letter and a period.
bool is_initial(std::string_view word) {
  std::size_t pos = 0;
  if (word.empty()) return false;
  const char32_t cp = utf8::decode(word, pos);
  return utf8::is_upper(cp) && pos + 1 == word.size() && word[pos] == '.';
}

bool is_blank(std::string_view line) {
  std::size_t pos = 0;
  while (pos < line.size()) {
    if (!utf8::is_space(utf8::decode(line, pos))) return false;
  }
  return true;
}

bool keeps_word_together(const LanguageRules &rules, std::string_view word) {
  return is_initial(word) || rules.is_abbreviation(utf8::to_lower(word));
}

}  // namespace

InputFormat parse_input_format(std::string_view name) {
  if (name == "raw" || name == "raw-text") return InputFormat::kRawText;
  if (name == "pretok" || name == "pretokenized" ||
      name == "pretokenized-lines") {
    return InputFormat::kPretokenized;
  }
  throw ArgumentError("unknown corpus format '" + std::string(name) +
                      "' (expected raw or pretok)");
}

bool LanguageRules::is_abbreviation(std::string_view word) const {
  return abbreviations_.find(std::string(word)) != abbreviations_.end();
}

LanguageRules RuleTables::parse_table(std::string language,
                                      std::string_view content) {
  std::unordered_set<std::string> words;
  for (std::size_t begin = 0; begin < content.size();) {
    std::size_t end = content.find('\n', begin);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(begin, end - begin);
    begin = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    for (std::string_view word : split_whitespace(line)) {
      words.insert(utf8::to_lower(word));
    }
  }
  return LanguageRules(std::move(language), std::move(words));
}

const RuleTables &RuleTables::builtin() {
  static const RuleTables tables = [] {
    RuleTables t;
    for (const auto &file : builtin::abbreviation_tables()) {
      std::string lang(file.name);
      t.tables_.emplace(lang, parse_table(lang, file.content));
    }
    return t;
  }();
  return tables;
}

RuleTables RuleTables::from_directory(const std::filesystem::path &dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("rule table directory not found: " + dir.string());
  }
  RuleTables t;
  std::vector<std::filesystem::path> files;
  for (const auto &entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto &path : files) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    std::string lang = path.stem().string();
    t.tables_.emplace(lang, parse_table(lang, content));
  }
  return t;
}

bool RuleTables::has(std::string_view language) const {
  return tables_.find(language) != tables_.end();
}

RuleTables::Resolved RuleTables::resolve(std::string_view language) const {
  if (auto it = tables_.find(language); it != tables_.end()) {
    return {&it->second, false};
  }
  // Croatian shares the Slovene conventions.
  if (language == "hr") {
    if (auto it = tables_.find("sl"); it != tables_.end()) {
      return {&it->second, false};
    }
  }
  spdlog::warn("no tokenizer rules for language '{}', using default rules",
               language);
  return {&default_rules_, true};
}

std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  std::size_t start = std::string_view::npos;
  while (pos < text.size()) {
    const std::size_t here = pos;
    const unsigned char c = static_cast<unsigned char>(text[pos]);
    bool space;
    if (c < 0x80) {
      space = c == ' ' || (c >= '\t' && c <= '\r');
      ++pos;
    } else {
      space = utf8::is_space(utf8::decode(text, pos));
    }
    if (space) {
      if (start != std::string_view::npos) {
        out.push_back(text.substr(start, here - start));
        start = std::string_view::npos;
      }
    } else if (start == std::string_view::npos) {
      start = here;
    }
  }
  if (start != std::string_view::npos) out.push_back(text.substr(start));
  return out;
}

ParagraphReader::ParagraphReader(const std::filesystem::path &path,
                                 InputFormat format)
    : owned_(std::make_unique<std::ifstream>(path, std::ios::binary)),
      in_(owned_.get()),
      format_(format) {
  if (!*owned_) throw IoError("cannot open " + path.string());
}

ParagraphReader::ParagraphReader(std::istream &in, InputFormat format)
    : in_(&in), format_(format) {}

std::optional<Paragraph> ParagraphReader::next() {
  Paragraph paragraph;
  bool any = false;
  std::string line;
  while (std::getline(*in_, line)) {
    invalid_bytes_ += utf8::repair(line);
    if (is_blank(line)) {
      if (any) break;
      continue;
    }
    any = true;
    if (format_ == InputFormat::kPretokenized) {
      Sentence sentence;
      for (std::string_view tok : split_whitespace(line)) {
        sentence.tokens.emplace_back(tok);
      }
      paragraph.sentences.push_back(std::move(sentence));
    }
    if (!paragraph.text.empty()) paragraph.text.push_back('\n');
    paragraph.text += line;
  }
  if (in_->bad()) throw IoError("read error");
  if (!any) return std::nullopt;
  return paragraph;
}

LoadResult load_corpus(const std::filesystem::path &path, InputFormat format) {
  ParagraphReader reader(path, format);
  LoadResult result;
  Document doc;
  doc.id = path.string();
  while (auto paragraph = reader.next()) {
    doc.paragraphs.push_back(std::move(*paragraph));
  }
  result.invalid_bytes = reader.invalid_bytes();
  if (result.invalid_bytes > 0) {
    spdlog::warn("{}: replaced {} invalid UTF-8 byte(s)", path.string(),
                 result.invalid_bytes);
  }
  if (!doc.paragraphs.empty()) result.documents.push_back(std::move(doc));
  return result;
}

std::vector<std::string> segment_sentences(std::string_view paragraph,
                                           const LanguageRules &rules) {
  const std::vector<std::string_view> words = split_whitespace(paragraph);
  std::vector<std::string> sentences;
  std::string current;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!current.empty()) current.push_back(' ');
    current.append(words[i]);
    if (i + 1 == words.size()) break;

    // Strip closing quotes and brackets after the terminal mark.
    const std::vector<CodePoint> cps = decode_all(words[i]);
    std::size_t end = cps.size();
    while (end > 0 && is_closer(cps[end - 1].cp)) --end;
    if (end == 0 || !is_terminal(cps[end - 1].cp)) continue;

    if (cps[end - 1].cp == '.' && !(end >= 2 && cps[end - 2].cp == '.')) {
      std::size_t begin = 0;
      while (begin < end && is_opener(cps[begin].cp)) ++begin;
      if (begin < end) {
        const std::string_view body = words[i].substr(
            cps[begin].begin, cps[end - 1].end - cps[begin].begin);
        if (keeps_word_together(rules, body)) continue;
      }
    }

    const std::vector<CodePoint> next = decode_all(words[i + 1]);
    std::size_t k = 0;
    while (k < next.size() && is_opener(next[k].cp)) ++k;
    if (k < next.size() &&
        (utf8::is_upper(next[k].cp) || utf8::is_digit(next[k].cp))) {
      sentences.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

std::vector<std::string> segment_sentences(std::string_view paragraph,
                                           std::string_view language) {
  return segment_sentences(paragraph, RuleTables::builtin().rules(language));
}

namespace {

// Emits runs of identical punctuation characters from cps[begin, end).
void emit_punct_runs(std::string_view chunk, const std::vector<CodePoint> &cps,
                     std::size_t begin, std::size_t end,
                     std::vector<std::string> &out) {
  std::size_t i = begin;
  while (i < end) {
    std::size_t j = i + 1;
    while (j < end && cps[j].cp == cps[i].cp) ++j;
    out.emplace_back(chunk.substr(cps[i].begin, cps[j - 1].end - cps[i].begin));
    i = j;
  }
}

bool keep_inside_word(char32_t prev, char32_t cp, char32_t next) {
  switch (cp) {
    case '.':
      return utf8::is_alnum(prev) && utf8::is_alnum(next);
    case ',':
    case ':':
      return utf8::is_digit(prev) && utf8::is_digit(next);
    case '-':
    case '\'':
    case 0x2019:
      return utf8::is_alnum(prev) && utf8::is_alnum(next);
    default:
      return false;
  }
}

void tokenize_chunk(std::string_view chunk, const LanguageRules &rules,
                    std::vector<std::string> &out) {
  const std::vector<CodePoint> cps = decode_all(chunk);
  const std::size_t n = cps.size();

  std::size_t lead = 0;
  while (lead < n && utf8::is_punct(cps[lead].cp)) ++lead;
  emit_punct_runs(chunk, cps, 0, lead, out);
  if (lead == n) return;

  // Abbreviation, possibly followed by more punctuation: "dr.", "e.g.,".
  std::size_t tail = n;
  while (tail > lead && utf8::is_punct(cps[tail - 1].cp)) --tail;
  for (std::size_t k = n; k > tail; --k) {
    if (cps[k - 1].cp != '.') continue;
    const std::string_view word =
        chunk.substr(cps[lead].begin, cps[k - 1].end - cps[lead].begin);
    if (keeps_word_together(rules, word)) {
      out.emplace_back(word);
      emit_punct_runs(chunk, cps, k, n, out);
      return;
    }
  }

  std::size_t word_begin = lead;  // index of first code point of the word
  std::size_t i = lead;
  while (i < n) {
    const char32_t cp = cps[i].cp;
    if (!utf8::is_punct(cp)) {
      ++i;
      continue;
    }
    if (i > word_begin && i + 1 < n &&
        keep_inside_word(cps[i - 1].cp, cp, cps[i + 1].cp)) {
      ++i;
      continue;
    }
    if (i > word_begin) {
      out.emplace_back(chunk.substr(cps[word_begin].begin,
                                    cps[i - 1].end - cps[word_begin].begin));
    }
    std::size_t j = i + 1;
    while (j < n && cps[j].cp == cp) ++j;
    out.emplace_back(chunk.substr(cps[i].begin, cps[j - 1].end - cps[i].begin));
    i = j;
    word_begin = j;
  }
  if (word_begin < n) {
    out.emplace_back(chunk.substr(cps[word_begin].begin));
  }
}

}  // namespace

Sentence tokenize(std::string_view span, const LanguageRules &rules) {
  Sentence sentence;
  for (std::string_view chunk : split_whitespace(span)) {
    tokenize_chunk(chunk, rules, sentence.tokens);
  }
  return sentence;
}

Sentence tokenize(std::string_view span, std::string_view language) {
  return tokenize(span, RuleTables::builtin().rules(language));
}

void tokenize_paragraph(Paragraph &paragraph, const LanguageRules &rules) {
  if (!paragraph.sentences.empty()) return;
  for (const std::string &span : segment_sentences(paragraph.text, rules)) {
    Sentence sentence = tokenize(span, rules);
    if (!sentence.tokens.empty()) {
      paragraph.sentences.push_back(std::move(sentence));
    }
  }
}

std::string join_tokens(const Sentence &sentence) {
  std::string line;
  for (const std::string &token : sentence.tokens) {
    if (!line.empty()) line.push_back(' ');
    line += token;
  }
  return line;
}

std::size_t emit_paragraph(const Paragraph &paragraph, std::ostream &out,
                           bool first) {
  std::size_t tokens = 0;
  bool wrote_separator = first;
  for (const Sentence &sentence : paragraph.sentences) {
    if (sentence.tokens.empty()) continue;
    if (!wrote_separator) {
      out << '\n';
      wrote_separator = true;
    }
    out << join_tokens(sentence) << '\n';
    tokens += sentence.tokens.size();
  }
  return tokens;
}

std::size_t emit_lines(std::span<const Document> docs, std::ostream &out) {
  std::size_t tokens = 0;
  bool first = true;
  for (const Document &doc : docs) {
    for (const Paragraph &paragraph : doc.paragraphs) {
      const std::size_t n = emit_paragraph(paragraph, out, first);
      if (n > 0) first = false;
      tokens += n;
    }
  }
  return tokens;
}

std::size_t emit_lines(std::span<const Document> docs,
                       const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  const std::size_t tokens = emit_lines(docs, out);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
  return tokens;
}

TokenizeStats tokenize_file(const std::filesystem::path &in,
                            const std::filesystem::path &out,
                            InputFormat format, const LanguageRules &rules,
                            std::size_t batch_paragraphs) {
  ParagraphReader reader(in, format);
  std::ofstream os(out, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + out.string());

  TokenizeStats stats;
  bool first = true;
  std::vector<Paragraph> batch;
  batch.reserve(batch_paragraphs);
  const auto flush = [&] {
    kernels::tokenize_paragraphs(batch, rules);
    for (const Paragraph &paragraph : batch) {
      const std::size_t n = emit_paragraph(paragraph, os, first);
      if (n == 0) continue;
      first = false;
      ++stats.paragraphs;
      stats.sentences += paragraph.sentences.size();
      stats.tokens += n;
    }
    batch.clear();
  };
  while (auto paragraph = reader.next()) {
    batch.push_back(std::move(*paragraph));
    if (batch.size() >= batch_paragraphs) flush();
  }
  flush();
  stats.invalid_bytes = reader.invalid_bytes();
  if (stats.invalid_bytes > 0) {
    spdlog::warn("{}: replaced {} invalid UTF-8 byte(s)", in.string(),
                 stats.invalid_bytes);
  }
  os.flush();
  if (!os) throw IoError("write failed: " + out.string());
  return stats;
}

}  // namespace embeval::corpus
