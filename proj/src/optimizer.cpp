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

#include "premise/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "premise/corpus.hpp"
#include "premise/error.hpp"
#include "premise/preprocess.hpp"
#include "premise/random.hpp"
#include "premise/report.hpp"
#include "premise/tokenizer.hpp"

namespace premise {

void TrainConfig::validate() const {
  if (epochs < 1) throw Error("train config: epochs must be at least 1");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw Error("train config: learning rate must be positive");
  }
  if (batch_size < 1) throw Error("train config: batch size must be at least 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw Error("train config: betas must lie in [0, 1)");
  }
  if (!(eps > 0.0)) throw Error("train config: eps must be positive");
  if (!(weight_decay >= 0.0)) throw Error("train config: weight decay must be non-negative");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error("train config: threshold must lie in (0, 1)");
  }
}

OptimizerState make_optimizer_state(const ModelParams& params) {
  return {0, zeros_like(params), zeros_like(params)};
}

void adamw_step(ModelParams& params, const Gradients& grads, OptimizerState& state,
                const TrainConfig& config) {
  const std::vector<Tensor*> theta = tensor_list(params);
  const std::vector<const Tensor*> g = tensor_list(grads);
  const std::vector<Tensor*> m = tensor_list(state.first_moment);
  const std::vector<Tensor*> v = tensor_list(state.second_moment);
  if (g.size() != theta.size() || m.size() != theta.size() || v.size() != theta.size()) {
    throw Error("adamw: parameter, gradient and state layouts differ");
  }
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!theta[i]->same_shape(*g[i]) || !theta[i]->same_shape(*m[i]) ||
        !theta[i]->same_shape(*v[i])) {
      throw Error("adamw: shape mismatch in tensor " + std::to_string(i));
    }
    if (!g[i]->all_finite()) throw Error("adamw: non-finite gradient");
  }

  const std::uint64_t t = ++state.step;
  const double lr = config.learning_rate;
  const double beta1 = config.beta1;
  const double beta2 = config.beta2;
  const double correction1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double correction2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  const double decay = 1.0 - lr * config.weight_decay;

  for (std::size_t i = 0; i < theta.size(); ++i) {
    const auto gi = g[i]->data();
    auto pi = theta[i]->data();
    auto mi = m[i]->data();
    auto vi = v[i]->data();
    for (std::size_t j = 0; j < pi.size(); ++j) {
      mi[j] = beta1 * mi[j] + (1.0 - beta1) * gi[j];
      vi[j] = beta2 * vi[j] + (1.0 - beta2) * gi[j] * gi[j];
      const double m_hat = mi[j] / correction1;
      const double v_hat = vi[j] / correction2;
      pi[j] = pi[j] * decay - lr * (m_hat / (std::sqrt(v_hat) + config.eps));
    }
  }
}

EncodedDataset encode_corpus(const Corpus& corpus, const Vocabulary& vocab,
                             std::size_t max_len, bool require_labels) {
  EncodedDataset data;
  data.sequences.reserve(corpus.size());
  for (const Tweet& tweet : corpus) {
    if (require_labels) {
      if (!tweet.premise) throw Error("unlabeled tweet encountered: " + tweet.id);
      data.labels.push_back(*tweet.premise);
    }
    data.sequences.push_back(encode(normalize(tweet), vocab, max_len));
  }
  return data;
}

void write_history(std::ostream& out, const TrainHistory& history) {
  out << "epoch\ttrain_loss\ttrain_accuracy\ttrain_f1\ttrain_roc_auc"
         "\tvalid_accuracy\tvalid_f1\tvalid_roc_auc\n";
  const auto triple = [&](const std::optional<MetricTriple>& m) {
    if (!m) {
      out << "\tNA\tNA\tNA";
      return;
    }
    out << '\t' << format_real(m->accuracy) << '\t' << format_real(m->f1) << '\t'
        << (m->roc_auc ? format_real(*m->roc_auc) : std::string("NA"));
  };
  for (const EpochRecord& record : history.epochs) {
    out << record.epoch << '\t' << format_real(record.train_loss);
    triple(record.train);
    triple(record.valid);
    out << '\n';
  }
}

namespace {

MetricTriple score(const ModelParams& params, const EncodedDataset& data,
                   double threshold) {
  const PredictionBatch predictions = forward(params, data.sequences);
  const std::vector<int> preds = predict_labels(predictions, threshold);
  return evaluate(predictions.probs, preds, data.labels);
}

}  // namespace

TrainResult train(const TrainConfig& config, ModelConfig model_config,
                  const Vocabulary& vocab, const Corpus& train_corpus,
                  const Corpus* valid_corpus) {
  config.validate();
  if (model_config.vocab_size == 0) model_config.vocab_size = vocab.size();
  if (model_config.vocab_size != vocab.size()) {
    throw Error("model vocab_size " + std::to_string(model_config.vocab_size) +
                " does not match vocabulary size " + std::to_string(vocab.size()));
  }
  model_config.validate();
  if (train_corpus.empty()) throw Error("training corpus is empty");

  const EncodedDataset train_data =
      encode_corpus(train_corpus, vocab, model_config.max_len, true);
  std::optional<EncodedDataset> valid_data;
  if (valid_corpus != nullptr) {
    valid_data = encode_corpus(*valid_corpus, vocab, model_config.max_len, true);
  }

  TrainResult result{init_params(model_config), {}};
  OptimizerState state = make_optimizer_state(result.params);
  Rng shuffle_rng(config.seed);
  Rng dropout_rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
  Rng* dropout = model_config.dropout > 0.0 ? &dropout_rng : nullptr;

  const std::size_t n = train_data.sequences.size();
  std::vector<std::size_t> order(n);
  std::vector<TokenSequence> batch;
  std::vector<int> labels;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    shuffle_rng.shuffle(order);

    double loss_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < n; start += config.batch_size, ++batch_index) {
      const std::size_t stop = std::min(n, start + config.batch_size);
      batch.clear();
      labels.clear();
      for (std::size_t i = start; i < stop; ++i) {
        batch.push_back(train_data.sequences[order[i]]);
        labels.push_back(train_data.labels[order[i]]);
      }
      const LossAndGradients step = backward(result.params, batch, labels, dropout);
      if (!std::isfinite(step.loss)) {
        throw Error("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                    std::to_string(batch_index));
      }
      loss_sum += step.loss * static_cast<double>(stop - start);
      adamw_step(result.params, step.gradients, state, config);
    }

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = loss_sum / static_cast<double>(n);
    record.train = score(result.params, train_data, config.threshold);
    if (valid_data && !valid_data->sequences.empty()) {
      record.valid = score(result.params, *valid_data, config.threshold);
    }
    result.history.epochs.push_back(std::move(record));
  }
  return result;
}

bool ranks_before(const GridResult& a, const GridResult& b) {
  if (a.valid.f1 != b.valid.f1) return a.valid.f1 > b.valid.f1;
  const double auc_a = a.valid.roc_auc.value_or(-1.0);
  const double auc_b = b.valid.roc_auc.value_or(-1.0);
  if (auc_a != auc_b) return auc_a > auc_b;
  if (a.learning_rate != b.learning_rate) return a.learning_rate < b.learning_rate;
  return a.batch_size < b.batch_size;
}

void write_grid_table(std::ostream& out, const std::vector<GridResult>& results) {
  out << "lr\tbatch\tsplit\taccuracy\tf1\troc_auc\n";
  for (const GridResult& r : results) {
    for (const auto& [split, m] : {std::pair{"train", &r.train}, std::pair{"valid", &r.valid}}) {
      out << format_real(r.learning_rate) << '\t' << r.batch_size << '\t' << split << '\t'
          << format_real(m->accuracy) << '\t' << format_real(m->f1) << '\t'
          << (m->roc_auc ? format_real(*m->roc_auc) : std::string("NA")) << '\n';
    }
  }
}

std::vector<GridResult> read_grid_table(std::istream& in) {
  std::vector<GridResult> results;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line_no == 1) continue;
    std::istringstream fields(line);
    std::string lr, batch, split, acc, f1_text, auc;
    if (!std::getline(fields, lr, '\t') || !std::getline(fields, batch, '\t') ||
        !std::getline(fields, split, '\t') || !std::getline(fields, acc, '\t') ||
        !std::getline(fields, f1_text, '\t') || !std::getline(fields, auc, '\t')) {
      throw ParseError({{line_no, "grid table row needs 6 fields"}});
    }
    MetricTriple m;
    try {
      m.accuracy = std::stod(acc);
      m.f1 = std::stod(f1_text);
      if (auc != "NA") m.roc_auc = std::stod(auc);
    } catch (const std::exception&) {
      throw ParseError({{line_no, "malformed metric value"}});
    }
    const double rate = std::stod(lr);
    const std::size_t size = std::stoul(batch);
    if (split == "train") {
      results.push_back({rate, size, m, {}});
    } else if (split == "valid" && !results.empty() &&
               results.back().learning_rate == rate && results.back().batch_size == size) {
      results.back().valid = m;
    } else {
      throw ParseError({{line_no, "grid table rows must come in train/valid pairs"}});
    }
  }
  return results;
}

std::vector<GridResult> grid_search(const GridSpec& grid, const TrainConfig& base,
                                    const ModelConfig& model_config,
                                    const Vocabulary& vocab, const Corpus& train_corpus,
                                    const Corpus& valid_corpus,
                                    const std::optional<std::filesystem::path>& resume_dir) {
  if (grid.learning_rates.empty() || grid.batch_sizes.empty()) {
    throw Error("grid search: the grid is empty");
  }
  if (valid_corpus.empty()) throw Error("grid search: a validation corpus is required");
  if (resume_dir) std::filesystem::create_directories(*resume_dir);

  std::vector<GridResult> results;
  for (double lr : grid.learning_rates) {
    for (std::size_t batch_size : grid.batch_sizes) {
      const std::string tag = "lr=" + format_real(lr) + " batch=" + std::to_string(batch_size);
      std::optional<std::filesystem::path> cell;
      if (resume_dir) {
        cell = *resume_dir / ("lr_" + format_real(lr) + "_bs_" + std::to_string(batch_size) + ".tsv");
        if (std::filesystem::exists(*cell)) {
          std::ifstream in(*cell);
          std::vector<GridResult> stored = read_grid_table(in);
          if (stored.size() == 1) {
            results.push_back(stored.front());
            continue;
          }
        }
      }

      TrainConfig config = base;
      config.learning_rate = lr;
      config.batch_size = batch_size;
      GridResult row{lr, batch_size, {}, {}};
      try {
        const TrainResult run = train(config, model_config, vocab, train_corpus, &valid_corpus);
        const EpochRecord& last = run.history.epochs.back();
        row.train = last.train;
        row.valid = *last.valid;
      } catch (const Error& e) {
        throw Error("grid combination " + tag + ": " + e.what());
      }
      if (cell) {
        // Written aside and renamed so an interrupted run never leaves a
        // partial result behind.
        std::filesystem::path partial = *cell;
        partial += ".partial";
        {
          std::ofstream out(partial);
          write_grid_table(out, {row});
        }
        std::filesystem::rename(partial, *cell);
      }
      results.push_back(row);
    }
  }
  std::stable_sort(results.begin(), results.end(), ranks_before);
  return results;
}

}  // namespace premise
