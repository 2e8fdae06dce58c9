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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "premise/tensor.hpp"
#include "premise/tokenizer.hpp"

namespace premise {

class Rng;

// Encoder classifier architecture. Defaults describe a small model; the
// tokenizer determines vocab_size.
struct ModelConfig {
  std::size_t vocab_size = 0;
  std::size_t max_len = kDefaultMaxLen;
  std::size_t d_model = 32;
  std::size_t n_heads = 4;
  std::size_t n_layers = 2;
  std::size_t d_ff = 64;
  std::size_t head_layers = 1;  // affine layers in the classifier head
  double dropout = 0.0;         // applied only while training
  std::uint64_t seed = 1;

  void validate() const;  // throws premise::Error

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

inline constexpr double kLayerNormEps = 1e-5;
inline constexpr double kProbabilityClamp = 1e-12;

// y = x W + b with W stored [in x out].
struct DenseParams {
  Tensor weight;
  Tensor bias;
};

struct LayerNormParams {
  Tensor gain;
  Tensor bias;
};

struct EncoderLayerParams {
  DenseParams query, key, value, output;
  LayerNormParams attention_norm;
  DenseParams ff_in, ff_out;
  LayerNormParams ff_norm;
};

struct ModelParams {
  ModelConfig config;
  Tensor token_embeddings;     // [vocab_size x d_model]
  Tensor position_embeddings;  // [max_len x d_model]
  std::vector<EncoderLayerParams> layers;
  std::vector<DenseParams> head;  // hidden [d x d] tanh layers, then [d x 2]

  friend bool operator==(const ModelParams& a, const ModelParams& b);
};

// Gradients share the parameter layout.
using Gradients = ModelParams;

// Visits every tensor in a fixed order with a dotted name such as
// "layers.1.ff_in.weight".
template <class Params, class Fn>
void for_each_tensor(Params& params, Fn&& fn) {
  fn(std::string("token_embeddings"), params.token_embeddings);
  fn(std::string("position_embeddings"), params.position_embeddings);
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    auto& layer = params.layers[l];
    const std::string prefix = "layers." + std::to_string(l) + ".";
    const auto dense = [&](const char* name, auto& d) {
      fn(prefix + name + ".weight", d.weight);
      fn(prefix + name + ".bias", d.bias);
    };
    const auto norm = [&](const char* name, auto& n) {
      fn(prefix + name + ".gain", n.gain);
      fn(prefix + name + ".bias", n.bias);
    };
    dense("query", layer.query);
    dense("key", layer.key);
    dense("value", layer.value);
    dense("output", layer.output);
    norm("attention_norm", layer.attention_norm);
    dense("ff_in", layer.ff_in);
    dense("ff_out", layer.ff_out);
    norm("ff_norm", layer.ff_norm);
  }
  for (std::size_t h = 0; h < params.head.size(); ++h) {
    const std::string prefix = "head." + std::to_string(h) + ".";
    fn(prefix + "weight", params.head[h].weight);
    fn(prefix + "bias", params.head[h].bias);
  }
}

std::vector<Tensor*> tensor_list(ModelParams& params);
std::vector<const Tensor*> tensor_list(const ModelParams& params);

// Closed-form parameter count for a configuration.
std::size_t parameter_count(const ModelConfig& config);
std::size_t parameter_count(const ModelParams& params);

// Allocates tensors with every entry zero (layer-norm gains included).
ModelParams zeros_like(const ModelConfig& config);
ModelParams zeros_like(const ModelParams& params);

// Weights ~ U(-1/sqrt(fan_in), 1/sqrt(fan_in)) from a generator seeded with
// config.seed; embeddings use fan_in = d_model. Biases are zero and
// layer-norm gains one.
ModelParams init_params(const ModelConfig& config);

struct PredictionBatch {
  std::vector<double> probs;  // P(premise = 1) per input
  std::optional<std::vector<int>> labels;
};

using Logits = std::array<double, 2>;

std::array<double, 2> softmax2(const Logits& logits);

// Per-sequence view of the forward pass, for inspection and tests.
struct EncoderTrace {
  std::size_t length = 0;                     // real tokens processed
  std::vector<std::vector<Tensor>> attention;  // [layer][head] -> [L x L]
  std::vector<double> pooled;                 // final CLS vector
  Logits logits{};
  std::array<double, 2> probs{};
};

// Sequences must have length <= max_len, a mask made of a run of ones
// followed by zeros and ids inside the vocabulary. Only the unmasked prefix
// is processed, so padding never reaches the CLS representation.
EncoderTrace trace(const ModelParams& params, const TokenSequence& sequence);
std::vector<Logits> forward_logits(const ModelParams& params,
                                   std::span<const TokenSequence> batch);
PredictionBatch forward(const ModelParams& params,
                        std::span<const TokenSequence> batch);

// Mean binary cross-entropy over the batch with probabilities clamped to
// [kProbabilityClamp, 1 - kProbabilityClamp].
double bce_loss(const PredictionBatch& predictions);

struct LossAndGradients {
  double loss = 0.0;
  Gradients gradients;
  PredictionBatch predictions;
};

// Exact gradients of bce_loss with respect to every parameter. Examples are
// reduced in batch order. When `dropout_rng` is given and config.dropout > 0
// the residual branches use inverted dropout with masks drawn from it.
LossAndGradients backward(const ModelParams& params,
                          std::span<const TokenSequence> batch,
                          std::span<const int> labels,
                          Rng* dropout_rng = nullptr);

// Label 1 iff probability >= threshold, 0 < threshold < 1.
std::vector<int> predict_labels(const PredictionBatch& predictions,
                                double threshold = 0.5);

}  // namespace premise
