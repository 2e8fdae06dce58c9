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
#include <vector>

#include "oracles.hpp"
#include "premise/error.hpp"
#include "premise/model.hpp"

using namespace premise;

namespace {

PredictionBatch labeled(std::vector<double> probs, std::vector<int> labels) {
  PredictionBatch p;
  p.probs = std::move(probs);
  p.labels = std::move(labels);
  return p;
}

TokenSequence with_length(const TokenSequence& seq, std::size_t total) {
  TokenSequence out = seq;
  out.ids.resize(total, kPadId);
  out.mask.resize(total, 0);
  return out;
}

}  // namespace

TEST_CASE("config validation") {
  ModelConfig c = oracle::gradient_check_config();
  CHECK_NOTHROW(c.validate());
  c.n_heads = 3;
  CHECK_THROWS_AS(init_params(c), Error);
  c = oracle::gradient_check_config();
  c.n_layers = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = oracle::gradient_check_config();
  c.dropout = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("parameter count by formula and by enumeration") {
  const ModelConfig c = oracle::gradient_check_config();
  // Embeddings: 50*8 + 16*8. Per layer: four 8x8 projections with bias,
  // two norms, 8x16 and 16x8 feed-forward with bias. Head: 8x2 + 2.
  const std::size_t per_layer = 4 * (64 + 8) + 2 * 16 + (128 + 16) + (128 + 8);
  const std::size_t expected = 400 + 128 + 2 * per_layer + 18;
  CHECK(expected == 1746);
  CHECK(parameter_count(c) == expected);
  CHECK(parameter_count(init_params(c)) == expected);

  ModelConfig deep = c;
  deep.head_layers = 3;
  CHECK(parameter_count(deep) == expected + 2 * 72);
  CHECK(parameter_count(init_params(deep)) == parameter_count(deep));
}

TEST_CASE("init_params is deterministic and follows the scheme") {
  const ModelConfig c = oracle::gradient_check_config();
  const ModelParams a = init_params(c);
  CHECK(a == init_params(c));
  ModelConfig other = c;
  other.seed = 4;
  CHECK_FALSE(a == init_params(other));
  for_each_tensor(a, [&](const std::string& name, const Tensor& t) {
    CHECK(t.all_finite());
    if (name.ends_with(".gain")) {
      for (double v : t.data()) CHECK(v == 1.0);
    } else if (name.ends_with(".bias")) {
      for (double v : t.data()) CHECK(v == 0.0);
    } else if (name.ends_with(".weight")) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(t.rows()));
      for (double v : t.data()) CHECK(std::abs(v) <= bound);
    }
  });
}

TEST_CASE("forward matches the straight-line reference") {
  ModelConfig c = oracle::gradient_check_config();
  for (std::size_t head_layers : {1u, 2u}) {
    c.head_layers = head_layers;
    const ModelParams p = init_params(c);
    Rng rng(21);
    const auto batch = oracle::random_batch(c, 8, rng);
    const PredictionBatch pred = forward(p, batch);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      const auto ref = oracle::reference_probs(p, batch[i]);
      CHECK(std::abs(pred.probs[i] - ref[1]) <= 1e-12);
      CHECK(pred.probs[i] > 0.0);
      CHECK(pred.probs[i] < 1.0);
    }
  }
}

TEST_CASE("softmax and attention rows are normalized") {
  const ModelConfig c = oracle::gradient_check_config();
  const ModelParams p = init_params(c);
  Rng rng(5);
  for (const TokenSequence& seq : oracle::random_batch(c, 6, rng)) {
    const EncoderTrace t = trace(p, seq);
    CHECK(std::abs(t.probs[0] + t.probs[1] - 1.0) <= 1e-12);
    CHECK(t.length == seq.length());
    for (const auto& layer : t.attention) {
      for (const Tensor& head : layer) {
        CHECK(head.rows() == t.length);
        for (std::size_t r = 0; r < head.rows(); ++r) {
          double sum = 0.0;
          for (double w : head.row(r)) sum += w;
          CHECK(std::abs(sum - 1.0) <= 1e-12);
        }
      }
    }
  }
  const auto s = softmax2({1000.0, -1000.0});
  CHECK(s[0] == 1.0);
  CHECK(std::isfinite(s[1]));
}

TEST_CASE("zeroed head gives exactly one half") {
  const ModelConfig c = oracle::gradient_check_config();
  ModelParams p = init_params(c);
  for (auto& layer : p.head) {
    layer.weight.fill(0.0);
    layer.bias.fill(0.0);
  }
  Rng rng(2);
  for (double prob : forward(p, oracle::random_batch(c, 5, rng)).probs) CHECK(prob == 0.5);
}

TEST_CASE("padding invariance") {
  ModelConfig c = oracle::gradient_check_config();
  const ModelParams p = init_params(c);
  Rng rng(8);
  for (const TokenSequence& seq : oracle::random_batch(c, 6, rng)) {
    const std::size_t len = seq.length();
    const TokenSequence shortest = with_length(seq, len);
    const double base = forward(p, std::vector{shortest}).probs[0];
    for (std::size_t total = len; total <= c.max_len; ++total) {
      const double padded = forward(p, std::vector{with_length(seq, total)}).probs[0];
      CHECK(std::abs(padded - base) <= 1e-10);
    }
  }
}

TEST_CASE("invalid sequences are rejected") {
  const ModelConfig c = oracle::gradient_check_config();
  const ModelParams p = init_params(c);
  TokenSequence seq;
  seq.ids = {kClsId, 60};
  seq.mask = {1, 1};
  CHECK_THROWS_AS(forward(p, std::vector{seq}), Error);
  seq.ids = {kClsId, 5, 5};
  seq.mask = {1, 0, 1};
  CHECK_THROWS_AS(forward(p, std::vector{seq}), Error);
  seq.ids.assign(17, kClsId);
  seq.mask.assign(17, 1);
  CHECK_THROWS_AS(forward(p, std::vector{seq}), Error);
}

TEST_CASE("bce_loss values") {
  CHECK(bce_loss(labeled({1.0}, {1})) <= 1e-11);
  CHECK(bce_loss(labeled({0.5, 0.5}, {1, 0})) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(bce_loss(labeled({0.25}, {1})) == doctest::Approx(1.386294361119890).epsilon(1e-12));
  CHECK(bce_loss(labeled({0.0}, {1})) == doctest::Approx(-std::log(1e-12)));
  CHECK_THROWS_AS(bce_loss(PredictionBatch{{0.5}, std::nullopt}), Error);
  CHECK_THROWS_AS(bce_loss(labeled({0.5, 0.5}, {1})), Error);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    CHECK(bce_loss(labeled({rng.uniform()}, {static_cast<int>(rng.below(2))})) >= 0.0);
  }
}

TEST_CASE("analytic gradients match finite differences") {
  ModelConfig c = oracle::gradient_check_config();
  c.head_layers = 2;
  const ModelParams p = init_params(c);
  Rng rng(13);
  const auto batch = oracle::random_batch(c, 3, rng);
  const std::vector<int> labels = {0, 1, 1};
  const LossAndGradients g = backward(p, batch, labels);
  CHECK(g.loss == doctest::Approx(oracle::reference_loss(p, batch, labels)).epsilon(1e-12));
  const auto grads = tensor_list(g.gradients);
  Rng pick(4);
  for (std::size_t t = 0; t < grads.size(); ++t) {
    for (int s = 0; s < 6; ++s) {
      const std::size_t e = pick.below(grads[t]->size());
      const double fd = oracle::finite_difference(p, t, e, batch, labels, 1e-5);
      const double a = grads[t]->data()[e];
      CHECK(std::abs(a - fd) / std::max(1.0, std::abs(a)) <= 1e-4);
    }
  }
}

TEST_CASE("PAD embedding gradient is zero when PAD is always masked") {
  const ModelConfig c = oracle::gradient_check_config();
  const ModelParams p = init_params(c);
  Rng rng(6);
  const auto batch = oracle::random_batch(c, 4, rng);
  const LossAndGradients g = backward(p, batch, std::vector{1, 0, 1, 0});
  for (double v : g.gradients.token_embeddings.row(kPadId)) CHECK(v == 0.0);
}

TEST_CASE("batch of identical examples has the single-example gradient") {
  const ModelConfig c = oracle::gradient_check_config();
  const ModelParams p = init_params(c);
  Rng rng(9);
  const auto one = oracle::random_batch(c, 1, rng);
  const std::vector<TokenSequence> three(3, one[0]);
  const LossAndGradients a = backward(p, one, std::vector{1});
  const LossAndGradients b = backward(p, three, std::vector{1, 1, 1});
  CHECK(b.loss == doctest::Approx(a.loss).epsilon(1e-14));
  const auto ga = tensor_list(a.gradients);
  const auto gb = tensor_list(b.gradients);
  for (std::size_t t = 0; t < ga.size(); ++t) {
    for (std::size_t e = 0; e < ga[t]->size(); ++e) {
      CHECK(std::abs(ga[t]->data()[e] - gb[t]->data()[e]) <= 1e-14);
    }
  }
}

TEST_CASE("permuting the batch permutes predictions") {
  const ModelConfig c = oracle::gradient_check_config();
  const ModelParams p = init_params(c);
  Rng rng(10);
  auto batch = oracle::random_batch(c, 6, rng);
  std::vector<int> labels = {1, 0, 0, 1, 1, 0};
  const LossAndGradients base = backward(p, batch, labels);
  std::vector<std::size_t> order = {3, 0, 5, 1, 4, 2};
  std::vector<TokenSequence> permuted;
  std::vector<int> permuted_labels;
  for (std::size_t i : order) {
    permuted.push_back(batch[i]);
    permuted_labels.push_back(labels[i]);
  }
  const LossAndGradients moved = backward(p, permuted, permuted_labels);
  for (std::size_t i = 0; i < order.size(); ++i) {
    CHECK(moved.predictions.probs[i] == base.predictions.probs[order[i]]);
  }
  CHECK(std::abs(moved.loss - base.loss) <= 1e-12);
}

TEST_CASE("dropout only acts when a generator is supplied") {
  ModelConfig c = oracle::gradient_check_config();
  c.dropout = 0.3;
  const ModelParams p = init_params(c);
  Rng rng(12);
  const auto batch = oracle::random_batch(c, 3, rng);
  const std::vector<int> labels = {1, 0, 1};
  const LossAndGradients plain = backward(p, batch, labels);
  CHECK(plain.predictions.probs == forward(p, batch).probs);
  Rng d1(5), d2(5);
  const LossAndGradients noisy1 = backward(p, batch, labels, &d1);
  const LossAndGradients noisy2 = backward(p, batch, labels, &d2);
  CHECK(noisy1.loss == noisy2.loss);
  CHECK(noisy1.loss != plain.loss);
}

TEST_CASE("predict_labels") {
  CHECK(predict_labels(PredictionBatch{{0.9, 0.1}, std::nullopt}) == std::vector{1, 0});
  CHECK(predict_labels(PredictionBatch{{0.5}, std::nullopt}, 0.5) == std::vector{1});
  CHECK_THROWS_AS(predict_labels(PredictionBatch{{0.5}, std::nullopt}, 1.0), Error);
  Rng rng(14);
  for (int i = 0; i < 1000; ++i) {
    const Logits logits = {rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const auto probs = softmax2(logits);
    const int argmax = logits[1] >= logits[0] ? 1 : 0;
    CHECK(predict_labels(PredictionBatch{{probs[1]}, std::nullopt})[0] == argmax);
  }
}
