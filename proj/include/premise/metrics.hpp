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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "premise/corpus.hpp"

namespace premise {

// Class 1 (premise present) is the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

// Both arrays hold 0/1 values and must have equal, nonzero length.
double accuracy(std::span<const int> preds, std::span<const int> labels);
// Positive-class F1; 0 when there are no true positives.
double f1(std::span<const int> preds, std::span<const int> labels);
ConfusionMatrix confusion(std::span<const int> preds, std::span<const int> labels);

double accuracy(const ConfusionMatrix& m);
double f1(const ConfusionMatrix& m);

// 1-based ranks with ties sharing the mean of the ranks they span.
std::vector<double> midranks(std::span<const double> values);

// Rank-sum form of the area under the ROC curve; ties count one half.
// Throws when only one class is present.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

struct MetricTriple {
  double accuracy = 0.0;
  double f1 = 0.0;
  std::optional<double> roc_auc;  // absent when a class is missing

  friend bool operator==(const MetricTriple&, const MetricTriple&) = default;
};

MetricTriple evaluate(std::span<const double> scores, std::span<const int> preds,
                      std::span<const int> labels);

struct CategoryReport {
  Claim claim;
  ConfusionMatrix matrix;
  std::optional<MetricTriple> metrics;  // absent when the category is empty
};

struct EvalReport {
  std::string split;
  ConfusionMatrix matrix;
  MetricTriple overall;
  std::vector<CategoryReport> categories;  // in kAllClaims order
};

// `scores` and `preds` are aligned with `slice`; every tweet needs a label.
EvalReport per_category_report(std::span<const double> scores,
                               std::span<const int> preds, const Corpus& slice,
                               std::string split);

struct BaselineOutput {
  std::vector<int> preds;      // Bernoulli(0.5)
  std::vector<double> scores;  // U[0, 1)
};

// Label-agnostic random predictor; only the length of `labels` is used.
BaselineOutput random_baseline(std::span<const int> labels, std::uint64_t seed);

}  // namespace premise
