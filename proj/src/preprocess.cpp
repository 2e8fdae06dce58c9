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

#include "premise/preprocess.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "premise/corpus.hpp"
#include "premise/error.hpp"
#include "unicode.hpp"

namespace premise {

namespace {

// Keep in sync with data/emoticons.txt; a unit test compares the two.
constexpr std::string_view kBuiltinLexicon = R"(
:)
:-)
:(
:-(
:D
:-D
;)
;-)
;D
:P
:-P
;P
;-P
:O
:-O
:/
:-/
:|
:-|
:'(
:')
:*
:-*
:S
:]
:[
:>
:<
=)
=(
=D
>:(
>:-(
<3
</3
XD
8)
8-)
B)
^_^
^^
-_-
T_T
o_O
O_o
)";

constexpr std::array<std::string_view, 8> kShortenerHosts = {
    "t.co/", "bit.ly/", "goo.gl/", "ow.ly/",
    "tinyurl.com/", "buff.ly/", "dlvr.it/", "ift.tt/"};

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool starts_with_ci(std::string_view text, std::size_t pos,
                    std::string_view prefix) {
  if (text.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (ascii_lower(text[pos + i]) != ascii_lower(prefix[i])) return false;
  }
  return true;
}

bool is_word_char(char32_t cp) {
  return unicode::is_letter_or_digit(cp) || unicode::is_apostrophe(cp);
}

bool is_hashtag_char(char32_t cp) {
  return unicode::is_letter_or_digit(cp) || cp == U'_';
}

bool is_handle_char(char32_t cp) {
  return unicode::is_ascii_alnum(cp) || cp == U'_';
}

// End of the run of code points satisfying `pred` that starts at `pos`.
template <class Pred>
std::size_t scan_while(std::string_view text, std::size_t pos, Pred pred) {
  while (pos < text.size()) {
    const unicode::Decoded d = unicode::decode(text, pos);
    if (!d.valid || !pred(d.cp)) break;
    pos += d.length;
  }
  return pos;
}

std::size_t scan_non_space(std::string_view text, std::size_t pos) {
  while (pos < text.size()) {
    const unicode::Decoded d = unicode::decode(text, pos);
    if (d.valid && unicode::is_space(d.cp)) break;
    pos += d.length;
  }
  return pos;
}

std::size_t match_url(std::string_view text, std::size_t pos) {
  for (std::string_view scheme : {"https://", "http://"}) {
    if (starts_with_ci(text, pos, scheme)) {
      const std::size_t end = scan_non_space(text, pos + scheme.size());
      return end > pos + scheme.size() ? end : 0;
    }
  }
  const char32_t prev = unicode::previous(text, pos);
  if (is_word_char(prev) || prev == U'_' || prev == U'.' || prev == U'/' ||
      prev == U'-' || prev == U'@' || prev == U'#') {
    return 0;
  }
  for (std::string_view host : kShortenerHosts) {
    if (starts_with_ci(text, pos, host)) {
      return scan_non_space(text, pos + host.size());
    }
  }
  if (starts_with_ci(text, pos, "www.")) {
    const std::size_t end = scan_non_space(text, pos + 4);
    return end > pos + 4 ? end : 0;
  }
  return 0;
}

std::size_t match_prefixed(std::string_view text, std::size_t pos,
                           char sigil, bool (*body)(char32_t)) {
  if (text[pos] != sigil) return 0;
  const std::size_t end = scan_while(text, pos + 1, body);
  return end > pos + 1 ? end : 0;
}

std::size_t match_emoticon(std::string_view text, std::size_t pos,
                           const EmoticonLexicon& lexicon) {
  const auto alnum = [](char c) {
    return unicode::is_ascii_alnum(static_cast<unsigned char>(c));
  };
  for (std::size_t length : lexicon.candidates(text, pos)) {
    if (alnum(text[pos]) && is_word_char(unicode::previous(text, pos))) {
      continue;
    }
    const std::size_t end = pos + length;
    if (alnum(text[end - 1]) && end < text.size()) {
      const unicode::Decoded next = unicode::decode(text, end);
      if (next.valid && is_word_char(next.cp)) continue;
    }
    return length;
  }
  return 0;
}

}  // namespace

std::string_view entity_kind_name(EntityKind kind) {
  switch (kind) {
    case EntityKind::Mention: return "Mention";
    case EntityKind::Hashtag: return "Hashtag";
    case EntityKind::Url: return "Url";
    case EntityKind::Emoticon: return "Emoticon";
    case EntityKind::Word: return "Word";
    case EntityKind::Whitespace: return "Whitespace";
    case EntityKind::Other: return "Other";
  }
  return "Other";
}

EmoticonLexicon::EmoticonLexicon(std::vector<std::string> entries)
    : entries_(std::move(entries)) {
  for (const std::string& entry : entries_) {
    if (entry.empty()) throw Error("emoticon lexicon: empty entry");
    for (char c : entry) {
      if (c == ' ' || c == '\t') {
        throw Error("emoticon lexicon: entry contains whitespace: " + entry);
      }
    }
  }
  std::stable_sort(entries_.begin(), entries_.end(),
                   [](const std::string& a, const std::string& b) {
                     return a.size() > b.size();
                   });
}

const EmoticonLexicon& EmoticonLexicon::builtin() {
  static const EmoticonLexicon lexicon = parse(kBuiltinLexicon);
  return lexicon;
}

EmoticonLexicon EmoticonLexicon::parse(std::string_view contents) {
  std::vector<std::string> entries;
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    std::string_view line = contents.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty() && line.front() != '#') entries.emplace_back(line);
    pos = eol + 1;
  }
  return EmoticonLexicon(std::move(entries));
}

EmoticonLexicon EmoticonLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open emoticon lexicon: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::vector<std::size_t> EmoticonLexicon::candidates(std::string_view text,
                                                     std::size_t pos) const {
  std::vector<std::size_t> lengths;
  for (const std::string& entry : entries_) {
    if (starts_with_ci(text, pos, entry)) lengths.push_back(entry.size());
  }
  return lengths;
}

std::vector<EntitySpan> parse_entities(std::string_view raw,
                                       const EmoticonLexicon& lexicon) {
  std::vector<EntitySpan> spans;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    const unicode::Decoded d = unicode::decode(raw, pos);
    EntityKind kind = EntityKind::Other;
    std::size_t end = 0;

    if (d.valid && unicode::is_space(d.cp)) {
      kind = EntityKind::Whitespace;
      end = scan_while(raw, pos, unicode::is_space);
    } else if ((end = match_url(raw, pos)) != 0) {
      kind = EntityKind::Url;
    } else if ((end = match_prefixed(raw, pos, '@', is_handle_char)) != 0) {
      kind = EntityKind::Mention;
    } else if ((end = match_prefixed(raw, pos, '#', is_hashtag_char)) != 0) {
      kind = EntityKind::Hashtag;
    } else if (std::size_t length = match_emoticon(raw, pos, lexicon)) {
      kind = EntityKind::Emoticon;
      end = pos + length;
    } else if (d.valid && is_word_char(d.cp)) {
      kind = EntityKind::Word;
      end = scan_while(raw, pos, is_word_char);
    } else {
      end = pos + d.length;
    }
    spans.push_back({kind, pos, end});
    pos = end;
  }
  return spans;
}

bool is_placeholder(std::string_view token) {
  return token == kUrlPlaceholder || token == kHashtagPlaceholder;
}

std::string to_lower_utf8(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const unicode::Decoded d = unicode::decode(text, pos);
    if (d.valid) {
      unicode::append_utf8(out, unicode::to_lower(d.cp));
    } else {
      out.push_back(text[pos]);
    }
    pos += d.length;
  }
  return out;
}

bool contains_uppercase(std::string_view text) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    const unicode::Decoded d = unicode::decode(text, pos);
    if (d.valid && unicode::is_upper(d.cp)) return true;
    pos += d.length;
  }
  return false;
}

NormalizedTweet normalize(std::string_view raw,
                          const EmoticonLexicon& lexicon) {
  const std::vector<EntitySpan> spans = parse_entities(raw, lexicon);
  const auto text_of = [&](const EntitySpan& s) {
    return raw.substr(s.start, s.end - s.start);
  };

  // Deleted entities leave a space behind so neighbours never fuse into a
  // new entity; the final pass collapses the extra spaces.
  std::string spaced;
  spaced.reserve(raw.size() + 16);
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const EntitySpan& span = spans[i];
    switch (span.kind) {
      case EntityKind::Mention:
      case EntityKind::Emoticon:
      case EntityKind::Whitespace:
        spaced += ' ';
        continue;
      case EntityKind::Url:
        spaced += ' ';
        spaced += kUrlPlaceholder;
        spaced += ' ';
        continue;
      case EntityKind::Hashtag:
        spaced += ' ';
        spaced += kHashtagPlaceholder;
        spaced += ' ';
        continue;
      case EntityKind::Word:
      case EntityKind::Other:
        break;
    }
    if (span.kind == EntityKind::Other && text_of(span) == "@") {
      spaced += ' ';
      continue;
    }
    if (i + 2 < spans.size() && text_of(span) == "$" &&
        spans[i + 1].kind == EntityKind::Word && text_of(spans[i + 2]) == "$") {
      const std::string_view candidate =
          raw.substr(span.start, spans[i + 2].end - span.start);
      if (is_placeholder(candidate)) {
        spaced += candidate;
        i += 2;
        continue;
      }
    }
    spaced += to_lower_utf8(text_of(span));
  }

  NormalizedTweet result;
  result.text.reserve(spaced.size());
  std::size_t pos = 0;
  while (pos < spaced.size()) {
    const std::size_t start = spaced.find_first_not_of(' ', pos);
    if (start == std::string::npos) break;
    std::size_t stop = spaced.find(' ', start);
    if (stop == std::string::npos) stop = spaced.size();
    if (!result.text.empty()) result.text += ' ';
    result.text.append(spaced, start, stop - start);
    pos = stop;
  }
  return result;
}

NormalizedTweet normalize(const Tweet& tweet) {
  NormalizedTweet result = normalize(tweet.raw_text);
  result.source_id = tweet.id;
  return result;
}

}  // namespace premise
