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

#ifndef EMBEVAL_UTF8_H_
#define EMBEVAL_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace embeval::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

// Replaces every byte that does not begin a well-formed UTF-8 sequence with
// U+FFFD. Overlong forms, surrogates and code points above U+10FFFF count as
// ill-formed. Returns the number of replacements made.
std::size_t repair(std::string &text);

// Decodes the code point starting at `pos` and advances `pos` past it.
// The input is assumed valid; a stray byte decodes as U+FFFD.
char32_t decode(std::string_view text, std::size_t &pos);

void append(std::string &out, char32_t cp);

// Character classes used by the tokenizer. These cover ASCII, Latin-1,
// Latin Extended-A/B, Greek and Cyrillic, which is enough for the shipped
// languages; everything else non-space and non-punctuation is a letter.
bool is_space(char32_t cp);
bool is_digit(char32_t cp);
bool is_punct(char32_t cp);
bool is_upper(char32_t cp);
bool is_letter(char32_t cp);
inline bool is_alnum(char32_t cp) { return is_letter(cp) || is_digit(cp); }

char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view text);

}  // namespace embeval::utf8

#endif  // EMBEVAL_UTF8_H_
