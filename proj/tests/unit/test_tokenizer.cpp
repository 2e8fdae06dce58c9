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

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "premise/error.hpp"
#include "premise/tokenizer.hpp"

using namespace premise;

namespace {

Vocabulary mask_school() {
  const std::vector<std::string> texts = {"mask mask school"};
  return build_vocab(texts, 1, 10);
}

}  // namespace

TEST_CASE("build_vocab on a hand-counted corpus") {
  const Vocabulary v = mask_school();
  CHECK(v.size() == 5);
  CHECK(v.token(kPadId) == "[PAD]");
  CHECK(v.token(kUnkId) == "[UNK]");
  CHECK(v.token(kClsId) == "[CLS]");
  CHECK(v.id_of("mask") == 3);
  CHECK(v.id_of("school") == 4);
  CHECK(v.id_of("nope") == kUnkId);

  const std::vector<std::string> texts = {"mask mask school"};
  CHECK(build_vocab(texts, 3, 10).size() == 3);
  CHECK(build_vocab(texts, 1, 10) == build_vocab(texts, 1, 10));
  CHECK(build_vocab(texts, 1, 4).size() == 4);
}

TEST_CASE("build_vocab ranking and errors") {
  const std::vector<std::string> texts = {"b a c", "c b", "c"};
  const Vocabulary v = build_vocab(texts, 1, 100);
  CHECK(v.token(3) == "c");
  CHECK(v.token(4) == "b");
  CHECK(v.token(5) == "a");
  CHECK_THROWS_AS(build_vocab(texts, 0, 10), Error);
  CHECK_THROWS_AS(build_vocab(texts, 1, 3), Error);
  CHECK_THROWS_AS(build_vocab(std::vector<std::string>{}, 1, 10), Error);
}

TEST_CASE("build_vocab from a corpus normalizes first") {
  Tweet t;
  t.id = "1";
  t.raw_text = "MASK @joe #tag mask";
  const Vocabulary v = build_vocab(Corpus({t}, Provenance::Ingested), 1, 10);
  CHECK(v.contains("mask"));
  CHECK(v.contains("$HASHTAG$"));
  CHECK_FALSE(v.contains("MASK"));
  CHECK_THROWS_AS(build_vocab(Corpus{}, 1, 10), Error);
}

TEST_CASE("encode examples") {
  const Vocabulary v = mask_school();
  const TokenSequence s = encode("mask school", v, 5);
  CHECK(s.ids == std::vector<TokenId>{kClsId, 3, 4, kPadId, kPadId});
  CHECK(s.mask == std::vector<std::uint8_t>{1, 1, 1, 0, 0});
  CHECK(s.length() == 3);

  const TokenSequence empty = encode("", v, 4);
  CHECK(empty.ids == std::vector<TokenId>{kClsId, kPadId, kPadId, kPadId});
  CHECK(empty.mask == std::vector<std::uint8_t>{1, 0, 0, 0});

  const TokenSequence cut = encode("x y z", v, 2);
  CHECK(cut.ids == std::vector<TokenId>{kClsId, kUnkId});
  CHECK(cut.mask == std::vector<std::uint8_t>{1, 1});

  CHECK_THROWS_AS(encode("x", v, 1), Error);
}

TEST_CASE("encode and decode properties") {
  const std::vector<std::string> texts = {"the quick brown fox", "jumps over the lazy dog",
                                          "the end"};
  const Vocabulary v = build_vocab(texts, 1, 100);
  for (std::size_t max_len : {2u, 3u, 5u, 8u, 16u}) {
    for (const std::string& text : texts) {
      const TokenSequence s = encode(text, v, max_len);
      CHECK(s.ids.size() == max_len);
      CHECK(s.mask.size() == max_len);
      CHECK(s.ids[0] == kClsId);
      for (std::size_t i = 1; i < max_len; ++i) CHECK(s.mask[i] <= s.mask[i - 1]);
      for (std::size_t i = 0; i < max_len; ++i) CHECK((s.ids[i] == kPadId) == (s.mask[i] == 0));
    }
  }
  std::vector<std::string> words;
  std::istringstream in(texts[1]);
  for (std::string w; in >> w;) words.push_back(w);
  CHECK(decode(encode(texts[1], v, 16), v) == words);
}

TEST_CASE("vocabulary file round trip") {
  oracle::TempDir dir("vocab");
  const std::vector<std::string> texts = {"alpha beta beta", "ünïcode"};
  const Vocabulary v = build_vocab(texts, 1, 100);
  v.save(dir / "vocab.txt");
  CHECK(oracle::read_file(dir / "vocab.txt") == "beta\nalpha\nünïcode\n");
  CHECK(Vocabulary::load(dir / "vocab.txt") == v);
}

TEST_CASE("vocabulary invariants") {
  const std::vector<std::string> texts = {"a b c d e f g"};
  const Vocabulary v = build_vocab(texts, 1, 100);
  for (std::size_t id = kNumSpecials; id < v.size(); ++id) {
    CHECK(v.id_of(v.token(static_cast<TokenId>(id))) == static_cast<TokenId>(id));
  }
  // Special ids are never reachable from text.
  for (const char* special : {"[PAD]", "[UNK]", "[CLS]"}) CHECK(v.id_of(special) == kUnkId);
}
