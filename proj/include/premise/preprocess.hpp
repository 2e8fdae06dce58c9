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
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace premise {

struct Tweet;

enum class EntityKind { Mention, Hashtag, Url, Emoticon, Word, Whitespace, Other };

std::string_view entity_kind_name(EntityKind kind);

// Half-open byte range [start, end) of the input.
struct EntitySpan {
  EntityKind kind;
  std::size_t start;
  std::size_t end;

  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

inline constexpr std::string_view kUrlPlaceholder = "$URL$";
inline constexpr std::string_view kHashtagPlaceholder = "$HASHTAG$";

// Fixed set of emoticons, matched ASCII case-insensitively and longest
// first. Lexicon files hold one emoticon per line; lines starting with `#`
// and blank lines are skipped.
class EmoticonLexicon {
 public:
  explicit EmoticonLexicon(std::vector<std::string> entries);

  static const EmoticonLexicon& builtin();
  static EmoticonLexicon load(const std::filesystem::path& path);
  static EmoticonLexicon parse(std::string_view contents);

  // Byte lengths of every entry matching at `pos`, longest first.
  std::vector<std::size_t> candidates(std::string_view text,
                                      std::size_t pos) const;

  const std::vector<std::string>& entries() const { return entries_; }

 private:
  std::vector<std::string> entries_;  // longest first
};

// Total, ordered, non-overlapping cover of `raw`. Grammar, tried in order at
// each position:
//   Whitespace  run of ASCII/Unicode spaces
//   Url         http:// or https:// + non-space run, or a bare shortener
//               host (t.co/, bit.ly/, ...) or www. host at a word boundary
//   Mention     @ + [A-Za-z0-9_]+
//   Hashtag     # + word characters
//   Emoticon    lexicon entry, not glued to adjacent letters/digits
//   Word        maximal run of letters, digits and apostrophes
//   Other       a single code point (or a single invalid UTF-8 byte)
std::vector<EntitySpan> parse_entities(
    std::string_view raw,
    const EmoticonLexicon& lexicon = EmoticonLexicon::builtin());

struct NormalizedTweet {
  std::string text;
  std::string source_id;

  friend bool operator==(const NormalizedTweet&, const NormalizedTweet&) = default;
};

// Mentions, stray `@` and emoticons are deleted; URLs and hashtags become
// $URL$ and $HASHTAG$; everything else is lowercased; whitespace runs are
// collapsed to one space and the result is trimmed. Idempotent.
NormalizedTweet normalize(
    std::string_view raw,
    const EmoticonLexicon& lexicon = EmoticonLexicon::builtin());
NormalizedTweet normalize(const Tweet& tweet);

bool is_placeholder(std::string_view token);

// Locale-independent simple lowercase mapping of UTF-8 text.
std::string to_lower_utf8(std::string_view text);
bool contains_uppercase(std::string_view text);

}  // namespace premise
