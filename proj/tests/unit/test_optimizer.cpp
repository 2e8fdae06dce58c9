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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "oracles.hpp"
#include "premise/error.hpp"
#include "premise/optimizer.hpp"

using namespace premise;

namespace {

Corpus tiny_corpus(std::size_t total, std::uint64_t seed) {
  CorpusSpec spec;
  spec.total = total;
  spec.positives = total / 2;
  spec.per_category = {total - 2 * (total / 3), total / 3, total / 3};
  spec.seed = seed;
  return generate_synthetic(spec);
}

ModelConfig tiny_model() {
  ModelConfig m;
  m.max_len = 24;
  m.d_model = 8;
  m.n_heads = 2;
  m.n_layers = 1;
  m.d_ff = 16;
  return m;
}

TrainConfig quick(std::size_t epochs) {
  TrainConfig c;
  c.epochs = epochs;
  c.learning_rate = 1e-3;
  c.batch_size = 8;
  return c;
}

}  // namespace

TEST_CASE("train config validation") {
  TrainConfig c;
  CHECK_NOTHROW(c.validate());
  c.epochs = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = TrainConfig{};
  c.learning_rate = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = TrainConfig{};
  c.batch_size = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = TrainConfig{};
  c.beta2 = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("adamw_step hand-evaluated single step") {
  ModelParams p = init_params(oracle::gradient_check_config());
  Gradients g = zeros_like(p);
  for (Tensor* t : tensor_list(p)) t->fill(1.0);
  for (Tensor* t : tensor_list(g)) t->fill(1.0);
  TrainConfig c;
  c.learning_rate = 0.1;
  c.weight_decay = 0.0;
  OptimizerState s = make_optimizer_state(p);
  adamw_step(p, g, s, c);
  CHECK(s.step == 1);
  // m = 0.1, v = 0.001, so both bias-corrected moments are 1.
  const double expected = 1.0 - 0.1 * (1.0 / (1.0 + 1e-8));
  for (const Tensor* t : tensor_list(p)) {
    for (double v : t->data()) CHECK(std::abs(v - expected) <= 1e-15);
  }
}

TEST_CASE("adamw_step with zero gradient") {
  ModelParams p = init_params(oracle::gradient_check_config());
  const ModelParams before = p;
  TrainConfig c;
  c.weight_decay = 0.0;
  OptimizerState s = make_optimizer_state(p);
  adamw_step(p, zeros_like(p), s, c);
  CHECK(p == before);

  c.weight_decay = 0.01;
  c.learning_rate = 0.5;
  adamw_step(p, zeros_like(p), s, c);
  const auto a = oracle::flatten(before);
  const auto b = oracle::flatten(p);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == a[i] * (1.0 - 0.5 * 0.01));
}

TEST_CASE("adamw_step reproduces Adam when weight decay is zero") {
  ModelParams p = init_params(oracle::gradient_check_config());
  TrainConfig c;
  c.learning_rate = 3e-3;
  c.weight_decay = 0.0;
  OptimizerState s = make_optimizer_state(p);
  oracle::ScalarAdam adam{c.learning_rate, c.beta1, c.beta2, c.eps, {}, {}};
  std::vector<double> theta = oracle::flatten(p);
  Rng rng(31);
  for (int step = 0; step < 100; ++step) {
    Gradients g = zeros_like(p);
    for (Tensor* t : tensor_list(g)) {
      for (double& v : t->data()) v = rng.uniform(-3, 3);
    }
    adamw_step(p, g, s, c);
    adam.step(theta, oracle::flatten(g));
  }
  const auto got = oracle::flatten(p);
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - theta[i]) <= 1e-12);
}

TEST_CASE("adamw_step rejects bad gradients and leaves state untouched") {
  ModelParams p = init_params(oracle::gradient_check_config());
  const ModelParams before = p;
  OptimizerState s = make_optimizer_state(p);
  Gradients g = zeros_like(p);
  g.layers[1].ff_in.bias[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(adamw_step(p, g, s, TrainConfig{}), Error);
  CHECK(s.step == 0);
  CHECK(p == before);

  ModelConfig other = oracle::gradient_check_config();
  other.d_ff = 8;
  CHECK_THROWS_AS(adamw_step(p, zeros_like(other), s, TrainConfig{}), Error);
}

TEST_CASE("encode_corpus requires labels when asked") {
  Tweet t;
  t.id = "u1";
  t.raw_text = "no label here";
  const Corpus c({t}, Provenance::Ingested);
  const std::vector<std::string> texts = {"no label here"};
  const Vocabulary v = build_vocab(texts, 1, 10);
  CHECK_THROWS_WITH_AS(encode_corpus(c, v, 8, true), doctest::Contains("u1"), Error);
  CHECK(encode_corpus(c, v, 8, false).sequences.size() == 1);
}

TEST_CASE("training is deterministic and records history") {
  const Corpus corpus = tiny_corpus(48, 5);
  const Corpus valid = tiny_corpus(24, 6);
  const Vocabulary vocab = build_vocab(corpus, 1, 1000);
  const TrainResult a = train(quick(3), tiny_model(), vocab, corpus, &valid);
  const TrainResult b = train(quick(3), tiny_model(), vocab, corpus, &valid);
  CHECK(a.history == b.history);
  CHECK(a.params == b.params);
  REQUIRE(a.history.epochs.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a.history.epochs[i].epoch == i + 1);
    CHECK(a.history.epochs[i].valid.has_value());
  }
  CHECK(a.params.config.vocab_size == vocab.size());

  TrainConfig reseeded = quick(3);
  reseeded.seed = 2;
  CHECK_FALSE(train(reseeded, tiny_model(), vocab, corpus).params == a.params);

  std::ostringstream history;
  write_history(history, train(quick(2), tiny_model(), vocab, corpus).history);
  std::istringstream lines(history.str());
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(header.rfind("epoch\ttrain_loss", 0) == 0);
  CHECK(row.ends_with("NA\tNA\tNA"));
}

TEST_CASE("training with dropout is still deterministic") {
  const Corpus corpus = tiny_corpus(24, 5);
  const Vocabulary vocab = build_vocab(corpus, 1, 1000);
  ModelConfig m = tiny_model();
  m.dropout = 0.2;
  CHECK(train(quick(2), m, vocab, corpus).params == train(quick(2), m, vocab, corpus).params);
}

TEST_CASE("training errors") {
  const Corpus corpus = tiny_corpus(12, 5);
  const Vocabulary vocab = build_vocab(corpus, 1, 1000);
  CHECK_THROWS_AS(train(quick(0), tiny_model(), vocab, corpus), Error);
  ModelConfig wrong = tiny_model();
  wrong.vocab_size = vocab.size() + 1;
  CHECK_THROWS_AS(train(quick(1), wrong, vocab, corpus), Error);
  Tweet t;
  t.id = "nolabel";
  t.raw_text = "text";
  CHECK_THROWS_WITH_AS(train(quick(1), tiny_model(), vocab, Corpus({t}, Provenance::Ingested)),
                       doctest::Contains("unlabeled"), Error);
  TrainConfig exploding = quick(1);
  exploding.learning_rate = std::numeric_limits<double>::max();
  CHECK_THROWS_WITH_AS(train(exploding, tiny_model(), vocab, corpus),
                       doctest::Contains("epoch 1"), Error);
}

TEST_CASE("grid search ranking and table") {
  const Corpus corpus = tiny_corpus(30, 5);
  const Corpus valid = tiny_corpus(15, 9);
  const Vocabulary vocab = build_vocab(corpus, 1, 1000);

  const auto single = grid_search({{1e-3}, {8}}, quick(1), tiny_model(), vocab, corpus, valid);
  REQUIRE(single.size() == 1);
  CHECK(single[0].learning_rate == 1e-3);

  const auto four =
      grid_search({{1e-2, 1e-3}, {4, 16}}, quick(2), tiny_model(), vocab, corpus, valid);
  REQUIRE(four.size() == 4);
  std::stringstream table;
  write_grid_table(table, four);
  const auto reread = read_grid_table(table);
  REQUIRE(reread.size() == 4);
  for (std::size_t i = 0; i + 1 < reread.size(); ++i) {
    CHECK_FALSE(ranks_before(reread[i + 1], reread[i]));
  }

  const auto five_batches =
      grid_search({{1e-3}, {4, 8, 16, 32, 48}}, quick(1), tiny_model(), vocab, corpus, valid);
  CHECK(five_batches.size() == 5);

  CHECK_THROWS_AS(grid_search({{}, {8}}, quick(1), tiny_model(), vocab, corpus, valid), Error);
  CHECK_THROWS_AS(grid_search({{1e-3}, {8}}, quick(1), tiny_model(), vocab, corpus, Corpus{}),
                  Error);
  TrainConfig bad = quick(1);
  CHECK_THROWS_WITH_AS(
      grid_search({{1e-3}, {0}}, bad, tiny_model(), vocab, corpus, valid),
      doctest::Contains("grid combination lr=0.001 batch=0"), Error);
}

TEST_CASE("ranks_before tie-breaks") {
  GridResult a{1e-3, 8, {}, {0.8, 0.7, 0.9}};
  GridResult b{1e-4, 8, {}, {0.8, 0.7, 0.9}};
  GridResult c{1e-3, 8, {}, {0.8, 0.7, 0.95}};
  GridResult d{1e-3, 4, {}, {0.8, 0.7, 0.9}};
  GridResult e{1e-2, 4, {}, {0.1, 0.9, std::nullopt}};
  CHECK(ranks_before(e, a));
  CHECK(ranks_before(c, a));
  CHECK(ranks_before(b, a));
  CHECK(ranks_before(d, a));
  CHECK_FALSE(ranks_before(a, a));
}

TEST_CASE("grid search resumes from stored combinations") {
  oracle::TempDir dir("grid");
  const Corpus corpus = tiny_corpus(30, 5);
  const Corpus valid = tiny_corpus(15, 9);
  const Vocabulary vocab = build_vocab(corpus, 1, 1000);
  {
    std::ofstream out(dir / "lr_0.001_bs_8.tsv");
    write_grid_table(out, {GridResult{1e-3, 8, {0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}}});
  }
  const auto results =
      grid_search({{1e-3}, {8, 16}}, quick(1), tiny_model(), vocab, corpus, valid, dir.path());
  REQUIRE(results.size() == 2);
  const auto stored = std::find_if(results.begin(), results.end(),
                                   [](const GridResult& r) { return r.batch_size == 8; });
  CHECK(stored->valid.f1 == 0.5);
  CHECK(std::filesystem::exists(dir / "lr_0.001_bs_16.tsv"));
  CHECK_FALSE(std::filesystem::exists(dir / "lr_0.001_bs_16.tsv.partial"));
}
