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

#include "premise/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "premise/error.hpp"
#include "premise/random.hpp"

namespace premise {

namespace {

void check_binary(std::span<const int> values, const char* what) {
  for (int v : values) {
    if (v != 0 && v != 1) throw Error(std::string(what) + " must be 0 or 1");
  }
}

void check_pair(std::span<const int> preds, std::span<const int> labels) {
  if (preds.size() != labels.size()) {
    throw Error("length mismatch: " + std::to_string(preds.size()) +
                " predictions vs " + std::to_string(labels.size()) + " labels");
  }
  if (preds.empty()) throw Error("metrics need at least one sample");
  check_binary(preds, "predictions");
  check_binary(labels, "labels");
}

}  // namespace

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  tn += other.tn;
  return *this;
}

ConfusionMatrix confusion(std::span<const int> preds, std::span<const int> labels) {
  if (preds.size() != labels.size()) {
    throw Error("length mismatch: " + std::to_string(preds.size()) +
                " predictions vs " + std::to_string(labels.size()) + " labels");
  }
  check_binary(preds, "predictions");
  check_binary(labels, "labels");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] == 1) {
      ++(labels[i] == 1 ? m.tp : m.fp);
    } else {
      ++(labels[i] == 1 ? m.fn : m.tn);
    }
  }
  return m;
}

double accuracy(const ConfusionMatrix& m) {
  if (m.total() == 0) throw Error("accuracy of an empty sample");
  return static_cast<double>(m.tp + m.tn) / static_cast<double>(m.total());
}

double f1(const ConfusionMatrix& m) {
  if (m.tp == 0) return 0.0;
  return 2.0 * static_cast<double>(m.tp) /
         static_cast<double>(2 * m.tp + m.fp + m.fn);
}

double accuracy(std::span<const int> preds, std::span<const int> labels) {
  check_pair(preds, labels);
  return accuracy(confusion(preds, labels));
}

double f1(std::span<const int> preds, std::span<const int> labels) {
  check_pair(preds, labels);
  return f1(confusion(preds, labels));
}

std::vector<double> midranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 (0-based) share ranks i+1..j.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = rank;
    i = j;
  }
  return ranks;
}

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error("length mismatch: " + std::to_string(scores.size()) +
                " scores vs " + std::to_string(labels.size()) + " labels");
  }
  check_binary(labels, "labels");
  for (double s : scores) {
    if (std::isnan(s)) throw Error("ROC AUC: scores contain NaN");
  }
  const auto positives =
      static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  const std::size_t negatives = labels.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw Error("AUC undefined: labels contain a single class");
  }
  const std::vector<double> ranks = midranks(scores);
  double positive_rank_sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) positive_rank_sum += ranks[i];
  }
  const double np = static_cast<double>(positives);
  const double nn = static_cast<double>(negatives);
  return (positive_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

MetricTriple evaluate(std::span<const double> scores, std::span<const int> preds,
                      std::span<const int> labels) {
  check_pair(preds, labels);
  MetricTriple out;
  const ConfusionMatrix m = confusion(preds, labels);
  out.accuracy = accuracy(m);
  out.f1 = f1(m);
  if (m.tp + m.fn > 0 && m.fp + m.tn > 0) out.roc_auc = roc_auc(scores, labels);
  return out;
}

EvalReport per_category_report(std::span<const double> scores,
                               std::span<const int> preds, const Corpus& slice,
                               std::string split) {
  if (scores.size() != slice.size() || preds.size() != slice.size()) {
    throw Error("report: scores/predictions do not match the corpus size");
  }
  if (slice.empty()) throw Error("report: empty corpus");
  std::vector<int> labels;
  labels.reserve(slice.size());
  for (const Tweet& tweet : slice) {
    if (!tweet.premise) throw Error("report: tweet " + tweet.id + " has no label");
    labels.push_back(*tweet.premise);
  }

  EvalReport report;
  report.split = std::move(split);
  report.matrix = confusion(preds, labels);
  report.overall = evaluate(scores, preds, labels);
  for (Claim claim : kAllClaims) {
    std::vector<double> s;
    std::vector<int> p;
    std::vector<int> y;
    for (std::size_t i = 0; i < slice.size(); ++i) {
      if (slice[i].claim != claim) continue;
      s.push_back(scores[i]);
      p.push_back(preds[i]);
      y.push_back(labels[i]);
    }
    CategoryReport category{claim, confusion(p, y), std::nullopt};
    if (!y.empty()) category.metrics = evaluate(s, p, y);
    report.categories.push_back(std::move(category));
  }
  return report;
}

BaselineOutput random_baseline(std::span<const int> labels, std::uint64_t seed) {
  if (labels.empty()) throw Error("random baseline needs at least one label");
  Rng rng(seed);
  BaselineOutput out;
  out.preds.reserve(labels.size());
  out.scores.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out.preds.push_back(rng.bernoulli(0.5) ? 1 : 0);
    out.scores.push_back(rng.uniform());
  }
  return out;
}

}  // namespace premise
