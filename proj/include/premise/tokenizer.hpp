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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace premise {

class Corpus;
struct NormalizedTweet;

using TokenId = std::int32_t;

inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kUnkId = 1;
inline constexpr TokenId kClsId = 2;
inline constexpr std::size_t kNumSpecials = 3;
inline constexpr std::size_t kDefaultMaxLen = 64;

// Word-level vocabulary. Ids are dense; the three specials occupy 0..2 and
// ordinary tokens follow in rank order.
class Vocabulary {
 public:
  Vocabulary();
  // `tokens` excludes the specials; they receive ids 3, 4, ...
  explicit Vocabulary(std::vector<std::string> tokens);

  std::size_t size() const { return id_to_token_.size(); }
  TokenId id_of(std::string_view token) const;  // kUnkId when absent
  bool contains(std::string_view token) const;
  const std::string& token(TokenId id) const;
  std::span<const std::string> tokens() const { return id_to_token_; }

  // One ordinary token per line; line i (0-based) holds id i + 3.
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.id_to_token_ == b.id_to_token_;
  }

 private:
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, TokenId> token_to_id_;
};

// Counts whitespace-separated tokens of normalized text, drops tokens seen
// fewer than `min_freq` times, ranks by frequency then lexicographically and
// keeps at most `max_size` ids including the specials.
Vocabulary build_vocab(std::span<const std::string> normalized_texts,
                       std::size_t min_freq, std::size_t max_size);
Vocabulary build_vocab(const Corpus& train, std::size_t min_freq,
                       std::size_t max_size);

struct TokenSequence {
  std::vector<TokenId> ids;
  std::vector<std::uint8_t> mask;  // 1 = real token, 0 = padding

  std::size_t length() const;  // number of real tokens

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

// [CLS] + token ids, truncated to `max_len` and padded with [PAD].
TokenSequence encode(std::string_view normalized_text, const Vocabulary& vocab,
                     std::size_t max_len = kDefaultMaxLen);
TokenSequence encode(const NormalizedTweet& tweet, const Vocabulary& vocab,
                     std::size_t max_len = kDefaultMaxLen);

// Inverse of encode for real, non-special positions.
std::vector<std::string> decode(const TokenSequence& sequence,
                                const Vocabulary& vocab);

}  // namespace premise
