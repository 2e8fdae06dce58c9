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

#include "premise/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "premise/error.hpp"
#include "premise/preprocess.hpp"
#include "premise/random.hpp"

namespace premise {

std::string_view claim_name(Claim claim) {
  switch (claim) {
    case Claim::StayAtHomeOrders: return "stay_at_home_orders";
    case Claim::FaceMasks: return "face_masks";
    case Claim::SchoolClosures: return "school_closures";
  }
  return "stay_at_home_orders";
}

std::optional<Claim> parse_claim(std::string_view name) {
  for (Claim claim : kAllClaims) {
    if (claim_name(claim) == name) return claim;
  }
  return std::nullopt;
}

std::string_view split_name(Split split) {
  switch (split) {
    case Split::Train: return "train";
    case Split::Test: return "test";
    case Split::Unassigned: return "unassigned";
  }
  return "unassigned";
}

namespace {

bool is_blank(std::string_view text) {
  return text.find_first_not_of(" \t\r\n\v\f") == std::string_view::npos;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

}  // namespace

Corpus::Corpus(std::vector<Tweet> tweets, Provenance provenance)
    : tweets_(std::move(tweets)), provenance_(provenance) {
  std::unordered_set<std::string_view> ids;
  ids.reserve(tweets_.size());
  for (const Tweet& tweet : tweets_) {
    if (!ids.insert(tweet.id).second) {
      throw Error("duplicate tweet id: " + tweet.id);
    }
    if (is_blank(tweet.raw_text)) {
      throw Error("tweet " + tweet.id + " has empty text");
    }
    if (tweet.premise && *tweet.premise != 0 && *tweet.premise != 1) {
      throw Error("tweet " + tweet.id + " has a non-binary premise label");
    }
  }
}

LabelCounts Corpus::label_counts() const {
  LabelCounts counts;
  for (const Tweet& tweet : tweets_) {
    if (!tweet.premise) {
      ++counts.unlabeled;
    } else if (*tweet.premise == 1) {
      ++counts.positive;
    } else {
      ++counts.negative;
    }
  }
  return counts;
}

bool Corpus::fully_labeled() const {
  return std::all_of(tweets_.begin(), tweets_.end(),
                     [](const Tweet& t) { return t.premise.has_value(); });
}

std::string escape_field(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  return out;
}

std::string unescape_field(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '\\' || i + 1 == text.size()) {
      out += text[i];
      continue;
    }
    switch (text[i + 1]) {
      case 't': out += '\t'; ++i; break;
      case 'n': out += '\n'; ++i; break;
      case 'r': out += '\r'; ++i; break;
      case '\\': out += '\\'; ++i; break;
      default: out += '\\';
    }
  }
  return out;
}

Corpus read_corpus(std::istream& in, const ColumnMapping& schema) {
  std::vector<Diagnostic> diagnostics;
  std::string line;
  std::size_t line_no = 0;

  // Header: first non-blank line.
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    for (std::string_view field : split_tabs(line)) header.emplace_back(field);
    break;
  }
  if (header.empty()) throw ParseError({{0, "no records"}});

  const auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto id_col = column(schema.id);
  const auto text_col = column(schema.text);
  const auto claim_col = column(schema.claim);
  const auto premise_col = column(schema.premise);
  for (const auto& [col, name] : {std::pair{id_col, &schema.id},
                                  std::pair{text_col, &schema.text},
                                  std::pair{claim_col, &schema.claim}}) {
    if (!col) diagnostics.push_back({line_no, "missing column '" + *name + "'"});
  }
  if (!diagnostics.empty()) throw ParseError(std::move(diagnostics));

  std::vector<Tweet> tweets;
  std::unordered_map<std::string, std::size_t> first_seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    const std::vector<std::string_view> fields = split_tabs(line);
    if (fields.size() != header.size()) {
      diagnostics.push_back(
          {line_no, "expected " + std::to_string(header.size()) +
                        " fields, found " + std::to_string(fields.size())});
      continue;
    }

    Tweet tweet;
    bool ok = true;
    tweet.id = unescape_field(fields[*id_col]);
    tweet.raw_text = unescape_field(fields[*text_col]);
    if (tweet.id.empty()) {
      diagnostics.push_back({line_no, "empty id"});
      ok = false;
    }
    if (is_blank(tweet.raw_text)) {
      diagnostics.push_back({line_no, "empty text"});
      ok = false;
    }
    const std::string_view claim_text = fields[*claim_col];
    if (const auto claim = parse_claim(claim_text)) {
      tweet.claim = *claim;
    } else {
      diagnostics.push_back(
          {line_no, "unknown claim category '" + std::string(claim_text) + "'"});
      ok = false;
    }
    if (premise_col) {
      const std::string_view premise = fields[*premise_col];
      if (premise == "1") {
        tweet.premise = 1;
      } else if (premise == "0") {
        tweet.premise = 0;
      } else if (!premise.empty()) {
        diagnostics.push_back({line_no, "premise must be 0, 1 or empty, got '" +
                                            std::string(premise) + "'"});
        ok = false;
      }
    }
    if (!tweet.id.empty()) {
      const auto [it, inserted] = first_seen.emplace(tweet.id, line_no);
      if (!inserted) {
        diagnostics.push_back({line_no, "duplicate id '" + tweet.id +
                                            "' (first seen on line " +
                                            std::to_string(it->second) + ")"});
        ok = false;
      }
    }
    if (ok) tweets.push_back(std::move(tweet));
  }

  if (!diagnostics.empty()) throw ParseError(std::move(diagnostics));
  if (tweets.empty()) throw ParseError({{0, "no records"}});
  return Corpus(std::move(tweets), Provenance::Ingested);
}

Corpus load_corpus(const std::filesystem::path& path,
                   const ColumnMapping& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file: " + path.string());
  return read_corpus(in, schema);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  out << "id\ttext\tclaim\tpremise\n";
  for (const Tweet& tweet : corpus) {
    out << escape_field(tweet.id) << '\t' << escape_field(tweet.raw_text)
        << '\t' << claim_name(tweet.claim) << '\t';
    if (tweet.premise) out << *tweet.premise;
    out << '\n';
  }
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write corpus file: " + path.string());
  write_corpus(out, corpus);
}

std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus,
                                       double train_fraction,
                                       std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error("train fraction must lie in (0, 1)");
  }
  for (const Tweet& tweet : corpus) {
    if (tweet.split != Split::Unassigned) {
      throw Error("tweet " + tweet.id + " is already assigned to a split");
    }
  }

  const std::size_t n = corpus.size();
  // The epsilon keeps exact ratios such as 17/20 * 20 from flooring to 16.
  const auto n_train = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(n) + 1e-9));

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<bool> in_train(n, false);
  for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = true;

  std::vector<Tweet> train;
  std::vector<Tweet> test;
  train.reserve(n_train);
  test.reserve(n - n_train);
  for (std::size_t i = 0; i < n; ++i) {
    Tweet tweet = corpus[i];
    tweet.split = in_train[i] ? Split::Train : Split::Test;
    (in_train[i] ? train : test).push_back(std::move(tweet));
  }
  return {Corpus(std::move(train), corpus.provenance()),
          Corpus(std::move(test), corpus.provenance())};
}

std::map<Claim, std::size_t> category_counts(const Corpus& corpus) {
  std::map<Claim, std::size_t> counts;
  for (Claim claim : kAllClaims) counts[claim] = 0;
  for (const Tweet& tweet : corpus) ++counts[tweet.claim];
  return counts;
}

std::vector<std::pair<std::string, std::size_t>> top_k_words(
    const Corpus& corpus, std::size_t k, const Normalizer& normalizer) {
  if (k == 0) throw Error("k must be at least 1");
  std::unordered_map<std::string, std::size_t> counts;
  for (const Tweet& tweet : corpus) {
    std::istringstream words(normalizer(tweet.raw_text));
    std::string word;
    while (words >> word) {
      if (!is_placeholder(word)) ++counts[word];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(),
                                                          counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

std::vector<std::pair<std::string, std::size_t>> top_k_words(
    const Corpus& corpus, std::size_t k) {
  return top_k_words(corpus, k, [](std::string_view raw) {
    return normalize(raw).text;
  });
}

void write_frequency_report(
    std::ostream& out,
    const std::vector<std::pair<std::string, std::size_t>>& words) {
  out << "rank\tword\tcount\n";
  for (std::size_t i = 0; i < words.size(); ++i) {
    out << (i + 1) << '\t' << words[i].first << '\t' << words[i].second << '\n';
  }
}

namespace {

template <std::size_t N>
std::string_view pick(Rng& rng, const std::array<std::string_view, N>& pool) {
  return pool[rng.below(N)];
}

struct TopicPhrases {
  std::array<std::string_view, 4> subject;  // noun phrases, keyword inside
  std::array<std::string_view, 4> action;   // what a premise argues for
};

const TopicPhrases& phrases_for(Claim claim) {
  static const TopicPhrases home{
      {"stay at home orders", "staying home", "the home order", "home quarantine"},
      {"stay home", "keep the stay at home orders", "work from home",
       "stay home a few more weeks"}};
  static const TopicPhrases masks{
      {"face masks", "a mask", "the mask mandate", "wearing a mask"},
      {"wear a mask", "keep masks on indoors", "wear masks on the bus",
       "support the mask mandate"}};
  static const TopicPhrases schools{
      {"school closures", "closing the school", "the school district",
       "remote school"},
      {"keep schools closed", "close the school for now", "delay school reopening",
       "support school closures"}};
  switch (claim) {
    case Claim::StayAtHomeOrders: return home;
    case Claim::FaceMasks: return masks;
    case Claim::SchoolClosures: return schools;
  }
  return home;
}

constexpr std::array<std::string_view, 6> kArguedLeads = {
    "we should", "everyone must", "people need to", "it is right to",
    "we have to", "communities should"};
constexpr std::array<std::string_view, 6> kReasons = {
    "because it protects vulnerable people",
    "because the evidence shows fewer infections",
    "since studies prove it reduces transmission",
    "because hospitals are overwhelmed",
    "since doctors agree it saves lives",
    "because the data clearly supports it"};
constexpr std::array<std::string_view, 6> kNeutralFrames = {
    "update: officials announced news about {} today",
    "reading an article on {} this morning",
    "photo from the press briefing on {}",
    "the county posted a schedule for {}",
    "live coverage of {} starts at noon",
    "new report released on {} this week"};
constexpr std::array<std::string_view, 4> kHashtags = {
    "#COVID19", "#coronavirus", "#StayHome", "#pandemic"};
constexpr std::array<std::string_view, 4> kEmoticons = {":)", ":(", ";-)", ":D"};

std::string fill(std::string_view frame, std::string_view value) {
  std::string out(frame);
  const std::size_t at = out.find("{}");
  if (at != std::string::npos) out.replace(at, 2, value);
  return out;
}

std::string capitalize_first(std::string text) {
  if (!text.empty() && text[0] >= 'a' && text[0] <= 'z') text[0] -= 32;
  return text;
}

std::string synthesize_text(Rng& rng, Claim claim, bool premise) {
  const TopicPhrases& topic = phrases_for(claim);
  std::string text;
  if (rng.bernoulli(0.3)) {
    text += "@user" + std::to_string(rng.below(1000)) + " ";
  }
  if (premise) {
    text += capitalize_first(std::string(pick(rng, kArguedLeads)));
    text += ' ';
    text += pick(rng, topic.action);
    text += ' ';
    text += pick(rng, kReasons);
  } else {
    text += capitalize_first(fill(pick(rng, kNeutralFrames), pick(rng, topic.subject)));
  }
  if (rng.bernoulli(0.4)) {
    text += ' ';
    text += pick(rng, kHashtags);
  }
  if (rng.bernoulli(0.25)) {
    text += " https://t.co/";
    for (int i = 0; i < 6; ++i) {
      text += "abcdefghijklmnopqrstuvwxyz0123456789"[rng.below(36)];
    }
  }
  if (rng.bernoulli(0.15)) {
    text += ' ';
    text += pick(rng, kEmoticons);
  }
  return text;
}

}  // namespace

Corpus generate_synthetic(const CorpusSpec& spec) {
  if (spec.positives > spec.total) {
    throw Error("infeasible corpus spec: positives exceed total");
  }
  std::size_t category_sum = 0;
  for (std::size_t count : spec.per_category) category_sum += count;
  if (category_sum != spec.total) {
    throw Error("infeasible corpus spec: category counts sum to " +
                std::to_string(category_sum) + ", total is " +
                std::to_string(spec.total));
  }

  Rng rng(spec.seed);
  std::vector<Claim> claims;
  claims.reserve(spec.total);
  for (std::size_t c = 0; c < kAllClaims.size(); ++c) {
    claims.insert(claims.end(), spec.per_category[c], kAllClaims[c]);
  }
  rng.shuffle(claims);

  std::vector<int> labels(spec.total, 0);
  std::fill_n(labels.begin(), spec.positives, 1);
  rng.shuffle(labels);

  std::vector<Tweet> tweets;
  tweets.reserve(spec.total);
  for (std::size_t i = 0; i < spec.total; ++i) {
    Tweet tweet;
    char id[32];
    std::snprintf(id, sizeof id, "syn-%06zu", i + 1);
    tweet.id = id;
    tweet.claim = claims[i];
    tweet.premise = labels[i];
    tweet.raw_text = synthesize_text(rng, claims[i], labels[i] == 1);
    tweets.push_back(std::move(tweet));
  }
  return Corpus(std::move(tweets), Provenance::Synthetic);
}

}  // namespace premise
