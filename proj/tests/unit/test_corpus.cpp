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

#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "premise/corpus.hpp"
#include "premise/error.hpp"
#include "premise/preprocess.hpp"

using namespace premise;

namespace {

Corpus small_corpus(std::size_t n) {
  std::vector<Tweet> tweets;
  for (std::size_t i = 0; i < n; ++i) {
    Tweet t;
    t.id = "id" + std::to_string(i);
    t.raw_text = "tweet number " + std::to_string(i);
    t.claim = kAllClaims[i % 3];
    t.premise = static_cast<int>(i % 2);
    tweets.push_back(t);
  }
  return Corpus(std::move(tweets), Provenance::Ingested);
}

Corpus texts(const std::vector<std::string>& items) {
  std::vector<Tweet> tweets;
  for (std::size_t i = 0; i < items.size(); ++i) {
    Tweet t;
    t.id = std::to_string(i);
    t.raw_text = items[i];
    tweets.push_back(t);
  }
  return Corpus(std::move(tweets), Provenance::Ingested);
}

std::vector<Diagnostic> parse_errors(const std::string& contents) {
  std::istringstream in(contents);
  try {
    read_corpus(in);
  } catch (const ParseError& e) {
    return e.diagnostics();
  }
  return {};
}

}  // namespace

TEST_CASE("load_corpus reads a valid file in order") {
  oracle::TempDir dir("corpus");
  oracle::write_file(dir / "c.tsv",
                     "id\ttext\tclaim\tpremise\n"
                     "a\tWear masks\tface_masks\t1\n"
                     "b\tschools\\tclosed\tschool_closures\t0\n"
                     "c\tstay home\tstay_at_home_orders\t\n");
  const Corpus c = load_corpus(dir / "c.tsv");
  REQUIRE(c.size() == 3);
  CHECK(c[0].id == "a");
  CHECK(c[1].raw_text == "schools\tclosed");
  CHECK(c[1].claim == Claim::SchoolClosures);
  CHECK_FALSE(c[2].premise.has_value());
  CHECK(c.label_counts().positive == 1);
  CHECK(c.label_counts().negative == 1);
  CHECK(c.label_counts().unlabeled == 1);
  CHECK_FALSE(c.fully_labeled());
}

TEST_CASE("load_corpus error reporting") {
  SUBCASE("empty file") {
    const auto d = parse_errors("");
    REQUIRE(d.size() == 1);
    CHECK(d[0].message == "no records");
  }
  SUBCASE("header only") {
    const auto d = parse_errors("id\ttext\tclaim\tpremise\n");
    REQUIRE(d.size() == 1);
    CHECK(d[0].message == "no records");
  }
  SUBCASE("unknown claim names line 2") {
    const auto d = parse_errors(
        "id\ttext\tclaim\tpremise\n"
        "x\tsome text\tmasks\t1\n"
        "y\tother text\tface_masks\t0\n");
    REQUIRE(d.size() == 1);
    CHECK(d[0].line == 2);
    CHECK(d[0].message.find("masks") != std::string::npos);
  }
  SUBCASE("bad premise and duplicate id are all reported") {
    const auto d = parse_errors(
        "id\ttext\tclaim\tpremise\n"
        "x\tt\tface_masks\t2\n"
        "y\tt\tface_masks\t1\n"
        "y\tt\tface_masks\t1\n");
    REQUIRE(d.size() == 2);
    CHECK(d[0].line == 2);
    CHECK(d[1].line == 4);
  }
  SUBCASE("wrong field count") {
    const auto d = parse_errors("id\ttext\tclaim\tpremise\nx\tonly two\n");
    REQUIRE(d.size() == 1);
    CHECK(d[0].line == 2);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_corpus("/nonexistent/premise/corpus.tsv"), Error);
  }
  SUBCASE("the error message carries the line number") {
    std::istringstream in("id\ttext\tclaim\tpremise\nx\tt\tmasks\t1\n");
    CHECK_THROWS_WITH_AS(read_corpus(in), doctest::Contains("line 2"), ParseError);
  }
}

TEST_CASE("custom column mapping") {
  std::istringstream in("tweet_id\tbody\ttopic\tlabel\nq\thello\tface_masks\t1\n");
  ColumnMapping mapping{"tweet_id", "body", "topic", "label"};
  const Corpus c = read_corpus(in, mapping);
  REQUIRE(c.size() == 1);
  CHECK(c[0].raw_text == "hello");
}

TEST_CASE("write and read round trip with escapes") {
  std::vector<Tweet> tweets(2);
  tweets[0].id = "1";
  tweets[0].raw_text = "line\nbreak\ttab back\\slash";
  tweets[0].premise = 1;
  tweets[1].id = "2";
  tweets[1].raw_text = "plain";
  tweets[1].claim = Claim::FaceMasks;
  const Corpus c(tweets, Provenance::Ingested);
  std::stringstream buffer;
  write_corpus(buffer, c);
  const Corpus back = read_corpus(buffer);
  CHECK(back.tweets() == c.tweets());
  CHECK(unescape_field(escape_field("a\\tb\t")) == "a\\tb\t");
}

TEST_CASE("split_corpus sizes and partition") {
  const Corpus big = generate_synthetic(CorpusSpec{});
  const auto [train, test] = split_corpus(big, 17.0 / 20.0, 1);
  CHECK(train.size() == 3531);
  CHECK(test.size() == 624);

  const auto [t20, v20] = split_corpus(small_corpus(20), 17.0 / 20.0, 1);
  CHECK(t20.size() == 17);
  CHECK(v20.size() == 3);

  const Corpus c = small_corpus(50);
  const auto [a1, b1] = split_corpus(c, 0.6, 9);
  const auto [a2, b2] = split_corpus(c, 0.6, 9);
  CHECK(a1.tweets() == a2.tweets());
  CHECK(b1.tweets() == b2.tweets());
  std::multiset<std::string> ids;
  for (const auto& t : a1) {
    ids.insert(t.id);
    CHECK(t.split == Split::Train);
  }
  for (const auto& t : b1) {
    ids.insert(t.id);
    CHECK(t.split == Split::Test);
  }
  std::multiset<std::string> expected;
  for (const auto& t : c) expected.insert(t.id);
  CHECK(ids == expected);

  CHECK_THROWS_AS(split_corpus(c, 0.0, 1), Error);
  CHECK_THROWS_AS(split_corpus(c, 1.0, 1), Error);
  CHECK_THROWS_AS(split_corpus(a1, 0.5, 1), Error);
}

TEST_CASE("category_counts") {
  const auto empty = category_counts(Corpus{});
  CHECK(empty.size() == 3);
  for (const auto& [claim, n] : empty) CHECK(n == 0);
  const Corpus c = small_corpus(10);
  std::size_t sum = 0;
  for (const auto& [claim, n] : category_counts(c)) sum += n;
  CHECK(sum == 10);
}

TEST_CASE("top_k_words") {
  using Row = std::pair<std::string, std::size_t>;
  CHECK(top_k_words(texts({"mask mask school"}), 2) ==
        std::vector<Row>{{"mask", 2}, {"school", 1}});
  CHECK(top_k_words(Corpus{}, 5).empty());
  CHECK(top_k_words(texts({"a b", "b a"}), 3) == std::vector<Row>{{"a", 2}, {"b", 2}});
  CHECK(top_k_words(texts({"#x http://t.co/a word"}), 10) == std::vector<Row>{{"word", 1}});
  CHECK_THROWS_AS(top_k_words(texts({"a"}), 0), Error);

  const auto words = top_k_words(generate_synthetic(CorpusSpec{}), 10);
  CHECK(words.size() == 10);
  for (std::size_t i = 1; i < words.size(); ++i) {
    CHECK(words[i - 1].second >= words[i].second);
  }
  std::set<std::string> top;
  for (const auto& w : words) {
    CHECK_FALSE(is_placeholder(w.first));
    top.insert(w.first);
  }
  CHECK(top.count("mask") == 1);
  CHECK(top.count("school") == 1);
  CHECK(top.count("home") == 1);
}

TEST_CASE("generate_synthetic contract") {
  const Corpus c = generate_synthetic(CorpusSpec{});
  CHECK(c.size() == 4155);
  CHECK(c.label_counts().positive == 2445);
  CHECK(c.label_counts().negative == 1710);
  CHECK(category_counts(c).at(Claim::FaceMasks) == 1526);
  CHECK(c.provenance() == Provenance::Synthetic);

  CorpusSpec zero;
  zero.total = 0;
  zero.positives = 0;
  zero.per_category = {0, 0, 0};
  CHECK(generate_synthetic(zero).empty());

  CorpusSpec infeasible;
  infeasible.positives = 5000;
  CHECK_THROWS_AS(generate_synthetic(infeasible), Error);
  CorpusSpec bad_sum;
  bad_sum.per_category = {1, 2, 3};
  CHECK_THROWS_AS(generate_synthetic(bad_sum), Error);

  std::ostringstream first, second;
  write_corpus(first, generate_synthetic(CorpusSpec{}));
  write_corpus(second, generate_synthetic(CorpusSpec{}));
  CHECK(first.str() == second.str());

  CorpusSpec other;
  other.seed = 8;
  std::ostringstream third;
  write_corpus(third, generate_synthetic(other));
  CHECK(third.str() != first.str());
}

TEST_CASE("corpus construction rejects invalid records") {
  Tweet a;
  a.id = "x";
  a.raw_text = "t";
  CHECK_THROWS_AS(Corpus({a, a}, Provenance::Ingested), Error);
  Tweet blank = a;
  blank.raw_text = "  ";
  CHECK_THROWS_AS(Corpus({blank}, Provenance::Ingested), Error);
  Tweet bad = a;
  bad.premise = 3;
  CHECK_THROWS_AS(Corpus({bad}, Provenance::Ingested), Error);
}
