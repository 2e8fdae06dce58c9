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

#include "premise/tokenizer.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "premise/corpus.hpp"
#include "premise/error.hpp"
#include "premise/preprocess.hpp"

namespace premise {

namespace {

const std::vector<std::string> kSpecialTokens = {"[PAD]", "[UNK]", "[CLS]"};

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  std::string word;
  while (in >> word) words.push_back(std::move(word));
  return words;
}

}  // namespace

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(std::vector<std::string> tokens) {
  id_to_token_ = kSpecialTokens;
  id_to_token_.reserve(kNumSpecials + tokens.size());
  for (std::string& token : tokens) {
    if (token.empty() || token.find_first_of(" \t\r\n") != std::string::npos) {
      throw Error("vocabulary token must be non-empty and contain no whitespace");
    }
    const auto id = static_cast<TokenId>(id_to_token_.size());
    if (!token_to_id_.emplace(token, id).second) {
      throw Error("duplicate vocabulary token: " + token);
    }
    id_to_token_.push_back(std::move(token));
  }
}

TokenId Vocabulary::id_of(std::string_view token) const {
  const auto it = token_to_id_.find(std::string(token));
  return it == token_to_id_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return token_to_id_.count(std::string(token)) != 0;
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size()) {
    throw Error("token id out of range: " + std::to_string(id));
  }
  return id_to_token_[static_cast<std::size_t>(id)];
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write vocabulary: " + path.string());
  for (std::size_t id = kNumSpecials; id < id_to_token_.size(); ++id) {
    out << id_to_token_[id] << '\n';
  }
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open vocabulary: " + path.string());
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  return Vocabulary(std::move(tokens));
}

Vocabulary build_vocab(std::span<const std::string> normalized_texts,
                       std::size_t min_freq, std::size_t max_size) {
  if (min_freq < 1) throw Error("min_freq must be at least 1");
  if (max_size <= kNumSpecials) throw Error("max_size must exceed 3");
  if (normalized_texts.empty()) throw Error("cannot build a vocabulary from an empty corpus");

  std::unordered_map<std::string, std::size_t> counts;
  for (const std::string& text : normalized_texts) {
    for (std::string& word : split_words(text)) ++counts[std::move(word)];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (auto& [word, count] : counts) {
    if (count >= min_freq) ranked.emplace_back(word, count);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > max_size - kNumSpecials) ranked.resize(max_size - kNumSpecials);

  std::vector<std::string> tokens;
  tokens.reserve(ranked.size());
  for (auto& entry : ranked) tokens.push_back(std::move(entry.first));
  return Vocabulary(std::move(tokens));
}

Vocabulary build_vocab(const Corpus& train, std::size_t min_freq,
                       std::size_t max_size) {
  std::vector<std::string> texts;
  texts.reserve(train.size());
  for (const Tweet& tweet : train) texts.push_back(normalize(tweet.raw_text).text);
  return build_vocab(texts, min_freq, max_size);
}

std::size_t TokenSequence::length() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
}

TokenSequence encode(std::string_view normalized_text, const Vocabulary& vocab,
                     std::size_t max_len) {
  if (max_len < 2) throw Error("max_len must be at least 2");
  TokenSequence seq;
  seq.ids.assign(max_len, kPadId);
  seq.mask.assign(max_len, 0);
  seq.ids[0] = kClsId;
  seq.mask[0] = 1;
  std::size_t pos = 1;
  for (const std::string& word : split_words(normalized_text)) {
    if (pos == max_len) break;
    seq.ids[pos] = vocab.id_of(word);
    seq.mask[pos] = 1;
    ++pos;
  }
  return seq;
}

TokenSequence encode(const NormalizedTweet& tweet, const Vocabulary& vocab,
                     std::size_t max_len) {
  return encode(tweet.text, vocab, max_len);
}

std::vector<std::string> decode(const TokenSequence& sequence,
                                const Vocabulary& vocab) {
  std::vector<std::string> words;
  for (std::size_t i = 0; i < sequence.ids.size(); ++i) {
    if (sequence.mask[i] == 0) break;
    if (sequence.ids[i] < static_cast<TokenId>(kNumSpecials)) continue;
    words.push_back(vocab.token(sequence.ids[i]));
  }
  return words;
}

}  // namespace premise
