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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace premise::unicode {

struct Decoded {
  char32_t cp;
  std::size_t length;  // bytes consumed, >= 1
  bool valid;
};

// Decodes one UTF-8 sequence at `pos`. Invalid or truncated sequences yield
// a single invalid byte.
Decoded decode(std::string_view text, std::size_t pos);

// Code point immediately before `pos`, or U+0000 at the start.
char32_t previous(std::string_view text, std::size_t pos);

void append_utf8(std::string& out, char32_t cp);

// Simple (1:1) lowercase mapping for Latin, Greek, Cyrillic and fullwidth
// Latin letters. Other code points map to themselves.
char32_t to_lower(char32_t cp);
inline bool is_upper(char32_t cp) { return to_lower(cp) != cp; }

bool is_space(char32_t cp);
bool is_ascii_alnum(char32_t cp);
bool is_letter_or_digit(char32_t cp);
bool is_apostrophe(char32_t cp);

}  // namespace premise::unicode
