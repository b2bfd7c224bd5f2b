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

#include "embeval/utf8.h"

namespace embeval::utf8 {

namespace {

// Length of the well-formed sequence starting at text[pos], or 0.
std::size_t sequence_length(std::string_view text, std::size_t pos) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(text[i]);
  };
  const unsigned char lead = byte(pos);
  if (lead < 0x80) return 1;

  std::size_t len;
  char32_t min;
  if ((lead & 0xE0) == 0xC0) {
    len = 2;
    min = 0x80;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
    min = 0x800;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
    min = 0x10000;
  } else {
    return 0;
  }
  if (pos + len > text.size()) return 0;

  char32_t cp = lead & (0x7F >> len);
  for (std::size_t i = 1; i < len; ++i) {
    const unsigned char c = byte(pos + i);
    if ((c & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (c & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF) return 0;
  if (cp >= 0xD800 && cp <= 0xDFFF) return 0;
  return len;
}

}  // namespace

std::size_t repair(std::string &text) {
  std::size_t pos = 0;
  std::size_t bad = 0;
  // Fast path: nothing to rewrite unless an ill-formed byte shows up.
  while (pos < text.size()) {
    const std::size_t len = sequence_length(text, pos);
    if (len == 0) break;
    pos += len;
  }
  if (pos == text.size()) return 0;

  std::string out(text, 0, pos);
  while (pos < text.size()) {
    const std::size_t len = sequence_length(text, pos);
    if (len == 0) {
      append(out, kReplacement);
      ++bad;
      ++pos;
    } else {
      out.append(text, pos, len);
      pos += len;
    }
  }
  text = std::move(out);
  return bad;
}

char32_t decode(std::string_view text, std::size_t &pos) {
  const std::size_t len = sequence_length(text, pos);
  if (len == 0) {
    ++pos;
    return kReplacement;
  }
  const unsigned char lead = static_cast<unsigned char>(text[pos]);
  if (len == 1) {
    ++pos;
    return lead;
  }
  char32_t cp = lead & (0x7F >> len);
  for (std::size_t i = 1; i < len; ++i) {
    cp = (cp << 6) | (static_cast<unsigned char>(text[pos + i]) & 0x3F);
  }
  pos += len;
  return cp;
}

void append(std::string &out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_space(char32_t cp) {
  switch (cp) {
    case ' ':
    case '\t':
    case '\n':
    case '\v':
    case '\f':
    case '\r':
    case 0x85:
    case 0xA0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
    case 0xFEFF:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200B;
  }
}

bool is_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }

bool is_punct(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 0x21 && cp <= 0x2F && cp != '_') ||
           (cp >= 0x3A && cp <= 0x40) || (cp >= 0x5B && cp <= 0x60 && cp != '_') ||
           (cp >= 0x7B && cp <= 0x7E);
  }
  // Latin-1 punctuation and symbols.
  if (cp >= 0xA1 && cp <= 0xBF) {
    // Superscripts, ordinal indicators and fractions behave like letters.
    return cp != 0xAA && cp != 0xB2 && cp != 0xB3 && cp != 0xB5 &&
           cp != 0xB9 && cp != 0xBA && !(cp >= 0xBC && cp <= 0xBE);
  }
  if (cp == 0xD7 || cp == 0xF7) return true;
  // General Punctuation, currency symbols, arrows, math operators.
  if (cp >= 0x2010 && cp <= 0x205E) return true;
  if (cp >= 0x20A0 && cp <= 0x20CF) return true;
  if (cp >= 0x2190 && cp <= 0x22FF) return true;
  // CJK and fullwidth punctuation.
  if (cp >= 0x3001 && cp <= 0x3003) return true;
  if (cp >= 0x3008 && cp <= 0x3011) return true;
  if (cp >= 0xFF01 && cp <= 0xFF0F) return true;
  return false;
}

bool is_upper(char32_t cp) {
  if (cp < 0x80) return cp >= 'A' && cp <= 'Z';
  if (cp >= 0xC0 && cp <= 0xDE) return cp != 0xD7;
  if (cp >= 0x100 && cp <= 0x137) return cp % 2 == 0;
  if (cp >= 0x139 && cp <= 0x148) return cp % 2 == 1;
  if (cp >= 0x14A && cp <= 0x177) return cp % 2 == 0;
  if (cp == 0x178 || cp == 0x179 || cp == 0x17B || cp == 0x17D) return true;
  if (cp >= 0x391 && cp <= 0x3AB) return cp != 0x3A2;
  if (cp >= 0x400 && cp <= 0x42F) return true;
  return false;
}

bool is_letter(char32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z');
  return !is_space(cp) && !is_punct(cp) && cp != kReplacement;
}

char32_t to_lower(char32_t cp) {
  if (!is_upper(cp)) return cp;
  if (cp < 0x80) return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE) return cp + 0x20;
  if (cp == 0x178) return 0xFF;
  if (cp < 0x180) return cp + 1;
  if (cp >= 0x391 && cp <= 0x3AB) return cp + 0x20;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  return cp;
}

std::string to_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) append(out, to_lower(decode(text, pos)));
  return out;
}

}  // namespace embeval::utf8
