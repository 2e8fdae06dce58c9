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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace premise {

enum class Claim { StayAtHomeOrders, FaceMasks, SchoolClosures };
enum class Split { Train, Test, Unassigned };
enum class Provenance { Ingested, Synthetic };

inline constexpr std::array<Claim, 3> kAllClaims = {
    Claim::StayAtHomeOrders, Claim::FaceMasks, Claim::SchoolClosures};

// TSV spelling: stay_at_home_orders, face_masks, school_closures.
std::string_view claim_name(Claim claim);
std::optional<Claim> parse_claim(std::string_view name);
std::string_view split_name(Split split);

struct Tweet {
  std::string id;
  std::string raw_text;
  std::optional<int> premise;  // 1 = premise present
  Claim claim = Claim::StayAtHomeOrders;
  Split split = Split::Unassigned;

  friend bool operator==(const Tweet&, const Tweet&) = default;
};

struct LabelCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t unlabeled = 0;
};

// An immutable, validated sequence of tweets. Construction enforces unique
// ids, non-blank text and binary labels; violations throw premise::Error.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Tweet> tweets, Provenance provenance);

  const std::vector<Tweet>& tweets() const { return tweets_; }
  Provenance provenance() const { return provenance_; }
  std::size_t size() const { return tweets_.size(); }
  bool empty() const { return tweets_.empty(); }
  const Tweet& operator[](std::size_t i) const { return tweets_[i]; }
  auto begin() const { return tweets_.begin(); }
  auto end() const { return tweets_.end(); }

  LabelCounts label_counts() const;
  bool fully_labeled() const;

 private:
  std::vector<Tweet> tweets_;
  Provenance provenance_ = Provenance::Ingested;
};

// Header names for the four TSV columns. Columns may appear in any order;
// the premise column is optional in the header.
struct ColumnMapping {
  std::string id = "id";
  std::string text = "text";
  std::string claim = "claim";
  std::string premise = "premise";
};

// Reads a tab-separated corpus with a header row. Every malformed row is
// reported (1-based physical line numbers) in a single ParseError.
Corpus load_corpus(const std::filesystem::path& path,
                   const ColumnMapping& schema = {});
Corpus read_corpus(std::istream& in, const ColumnMapping& schema = {});

// Canonical serialization: header `id text claim premise`, rows in corpus
// order, tabs/newlines/backslashes in text escaped.
void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

std::string escape_field(std::string_view text);
std::string unescape_field(std::string_view text);

// Deterministic unstratified split. The train side receives
// floor(train_fraction * N) tweets; both sides keep input order.
std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus,
                                       double train_fraction,
                                       std::uint64_t seed);

std::map<Claim, std::size_t> category_counts(const Corpus& corpus);

using Normalizer = std::function<std::string(std::string_view)>;

// Word frequencies over normalized text, placeholders excluded. Sorted by
// count descending, ties lexicographic.
std::vector<std::pair<std::string, std::size_t>> top_k_words(
    const Corpus& corpus, std::size_t k, const Normalizer& normalizer);
std::vector<std::pair<std::string, std::size_t>> top_k_words(
    const Corpus& corpus, std::size_t k);

void write_frequency_report(
    std::ostream& out,
    const std::vector<std::pair<std::string, std::size_t>>& words);

struct CorpusSpec {
  std::size_t total = 4155;
  std::size_t positives = 2445;
  std::array<std::size_t, 3> per_category = {1402, 1526, 1227};
  std::uint64_t seed = 7;
};

// Synthetic corpus whose label and category marginals equal the spec
// exactly. Positive tweets come from argumentative templates and negative
// ones from neutral templates so the classes are learnable.
Corpus generate_synthetic(const CorpusSpec& spec);

}  // namespace premise
