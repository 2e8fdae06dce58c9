// Copyright 2026 The Premise Authors.
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

#include "unicode.hpp"

namespace premise::unicode {

Decoded decode(std::string_view text, std::size_t pos) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(text[i]);
  };
  const unsigned char lead = byte(pos);
  if (lead < 0x80) return {lead, 1, true};

  std::size_t length = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((lead & 0xE0) == 0xC0) {
    length = 2, cp = lead & 0x1F, min = 0x80;
  } else if ((lead & 0xF0) == 0xE0) {
    length = 3, cp = lead & 0x0F, min = 0x800;
  } else if ((lead & 0xF8) == 0xF0) {
    length = 4, cp = lead & 0x07, min = 0x10000;
  } else {
    return {lead, 1, false};
  }
  if (pos + length > text.size()) return {lead, 1, false};
  for (std::size_t i = 1; i < length; ++i) {
    const unsigned char cont = byte(pos + i);
    if ((cont & 0xC0) != 0x80) return {lead, 1, false};
    cp = (cp << 6) | (cont & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return {lead, 1, false};
  }
  return {cp, length, true};
}

char32_t previous(std::string_view text, std::size_t pos) {
  if (pos == 0) return U'\0';
  std::size_t start = pos - 1;
  const std::size_t floor = pos >= 4 ? pos - 4 : 0;
  while (start > floor &&
         (static_cast<unsigned char>(text[start]) & 0xC0) == 0x80) {
    --start;
  }
  const Decoded d = decode(text, start);
  if (d.valid && start + d.length == pos) return d.cp;
  return static_cast<unsigned char>(text[pos - 1]);
}

void append_utf8(std::string& out, char32_t cp) {
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

namespace {

bool in(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

// Alternating upper/lower pairs starting at an even (or odd) code point.
char32_t pair_lower(char32_t cp, bool upper_is_even) {
  const bool even = (cp % 2) == 0;
  return even == upper_is_even ? cp + 1 : cp;
}

}  // namespace

char32_t to_lower(char32_t cp) {
  if (cp < 0x80) return in(cp, U'A', U'Z') ? cp + 0x20 : cp;
  if (in(cp, 0xC0, 0xDE) && cp != 0xD7) return cp + 0x20;
  if (cp == 0x130) return U'i';
  if (in(cp, 0x100, 0x137)) return pair_lower(cp, true);
  if (in(cp, 0x139, 0x148)) return pair_lower(cp, false);
  if (in(cp, 0x14A, 0x177)) return pair_lower(cp, true);
  if (cp == 0x178) return 0xFF;
  if (in(cp, 0x179, 0x17E)) return pair_lower(cp, false);
  if (cp == 0x386) return 0x3AC;
  if (in(cp, 0x388, 0x38A)) return cp + 0x25;
  if (cp == 0x38C) return 0x3CC;
  if (in(cp, 0x38E, 0x38F)) return cp + 0x3F;
  if (in(cp, 0x391, 0x3A9) && cp != 0x3A2) return cp + 0x20;
  if (in(cp, 0x400, 0x40F)) return cp + 0x50;
  if (in(cp, 0x410, 0x42F)) return cp + 0x20;
  if (in(cp, 0x460, 0x481)) return pair_lower(cp, true);
  if (in(cp, 0x48A, 0x4BF)) return pair_lower(cp, true);
  if (in(cp, 0x1E00, 0x1E95)) return pair_lower(cp, true);
  if (in(cp, 0x1EA0, 0x1EFF)) return pair_lower(cp, true);
  if (in(cp, 0xFF21, 0xFF3A)) return cp + 0x20;
  return cp;
}

bool is_space(char32_t cp) {
  switch (cp) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return in(cp, 0x2000, 0x200A);
  }
}

bool is_ascii_alnum(char32_t cp) {
  return in(cp, U'a', U'z') || in(cp, U'A', U'Z') || in(cp, U'0', U'9');
}

bool is_letter_or_digit(char32_t cp) {
  if (cp < 0x80) return is_ascii_alnum(cp);
  if (cp < 0xC0 || cp == 0xD7 || cp == 0xF7) return false;
  if (in(cp, 0x2000, 0x2BFF)) return false;  // punctuation, symbols, arrows
  if (in(cp, 0x3000, 0x303F)) return false;  // CJK punctuation
  if (in(cp, 0xE000, 0xF8FF)) return false;  // private use
  if (in(cp, 0xFE00, 0xFE0F)) return false;  // variation selectors
  if (in(cp, 0xFF00, 0xFF0F) || in(cp, 0xFF1A, 0xFF20) ||
      in(cp, 0xFF3B, 0xFF40) || in(cp, 0xFF5B, 0xFF65)) {
    return false;  // fullwidth punctuation
  }
  if (in(cp, 0xFFF0, 0xFFFF)) return false;
  if (cp >= 0x1F000 && cp <= 0x1FAFF) return false;  // emoji and pictographs
  return !is_space(cp);
}

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2019; }

}  // namespace premise::unicode
