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
#include <iosfwd>
#include <optional>
#include <vector>

#include "premise/metrics.hpp"
#include "premise/model.hpp"

namespace premise {

class Corpus;
class Vocabulary;

// AdamW defaults follow the decoupled-weight-decay method: betas
// (0.9, 0.999), eps 1e-8, weight decay 0.01. The learning rate is constant.
struct TrainConfig {
  std::size_t epochs = 20;
  double learning_rate = 1e-4;
  std::size_t batch_size = 16;
  double weight_decay = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t seed = 1;
  double threshold = 0.5;

  void validate() const;  // throws premise::Error
};

struct OptimizerState {
  std::uint64_t step = 0;
  ModelParams first_moment;
  ModelParams second_moment;
};

OptimizerState make_optimizer_state(const ModelParams& params);

// One AdamW update. The step counter is incremented before use; the decay
// term scales the parameters directly and never enters the moments:
//   theta <- theta * (1 - lr * wd) - lr * m_hat / (sqrt(v_hat) + eps)
// Throws on shape mismatch or a non-finite gradient, leaving all inputs
// untouched.
void adamw_step(ModelParams& params, const Gradients& grads, OptimizerState& state,
                const TrainConfig& config);

struct EncodedDataset {
  std::vector<TokenSequence> sequences;
  std::vector<int> labels;  // empty unless labels were required
};

// Normalizes and encodes every tweet. With `require_labels` an unlabeled
// tweet is an error.
EncodedDataset encode_corpus(const Corpus& corpus, const Vocabulary& vocab,
                             std::size_t max_len, bool require_labels);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  MetricTriple train;
  std::optional<MetricTriple> valid;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;

  friend bool operator==(const TrainHistory&, const TrainHistory&) = default;
};

// TSV: epoch, train_loss, train_accuracy, train_f1, train_roc_auc and the
// valid_* triple ("NA" when absent).
void write_history(std::ostream& out, const TrainHistory& history);

struct TrainResult {
  ModelParams params;
  TrainHistory history;
};

// Mini-batch training with a seeded shuffle each epoch. Returns the
// final-epoch parameters. model_config.vocab_size must be 0 (filled from
// the vocabulary) or equal vocab.size().
TrainResult train(const TrainConfig& config, ModelConfig model_config,
                  const Vocabulary& vocab, const Corpus& train_corpus,
                  const Corpus* valid_corpus = nullptr);

struct GridSpec {
  std::vector<double> learning_rates;
  std::vector<std::size_t> batch_sizes;
};

struct GridResult {
  double learning_rate = 0.0;
  std::size_t batch_size = 0;
  MetricTriple train;
  MetricTriple valid;
};

// Validation F1 descending, then validation ROC AUC descending, then the
// lower learning rate, then the smaller batch.
bool ranks_before(const GridResult& a, const GridResult& b);

// Trains one model per (learning rate, batch size) pair, sequentially, and
// returns the rows ranked. With `resume_dir`, each finished combination is
// stored there and reused on the next invocation.
std::vector<GridResult> grid_search(const GridSpec& grid, const TrainConfig& base,
                                    const ModelConfig& model_config,
                                    const Vocabulary& vocab, const Corpus& train_corpus,
                                    const Corpus& valid_corpus,
                                    const std::optional<std::filesystem::path>& resume_dir =
                                        std::nullopt);

// TSV `lr batch split accuracy f1 roc_auc`, two rows (train, valid) per
// result, in the given order.
void write_grid_table(std::ostream& out, const std::vector<GridResult>& results);
std::vector<GridResult> read_grid_table(std::istream& in);

}  // namespace premise
