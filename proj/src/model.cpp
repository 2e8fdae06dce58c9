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

#include "premise/model.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>

#include "premise/error.hpp"
#include "premise/kernels.hpp"
#include "premise/random.hpp"

namespace premise {

void ModelConfig::validate() const {
  if (vocab_size < 1 || max_len < 1 || d_model < 1 || n_heads < 1 ||
      n_layers < 1 || d_ff < 1 || head_layers < 1) {
    throw Error("model config: every dimension must be at least 1");
  }
  if (d_model % n_heads != 0) {
    throw Error("model config: d_model (" + std::to_string(d_model) +
                ") is not divisible by n_heads (" + std::to_string(n_heads) + ")");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw Error("model config: dropout must lie in [0, 1)");
  }
}

bool operator==(const ModelParams& a, const ModelParams& b) {
  if (!(a.config == b.config)) return false;
  const auto ta = tensor_list(a);
  const auto tb = tensor_list(b);
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (!(*ta[i] == *tb[i])) return false;
  }
  return true;
}

std::vector<Tensor*> tensor_list(ModelParams& params) {
  std::vector<Tensor*> list;
  for_each_tensor(params, [&](const std::string&, Tensor& t) { list.push_back(&t); });
  return list;
}

std::vector<const Tensor*> tensor_list(const ModelParams& params) {
  std::vector<const Tensor*> list;
  for_each_tensor(params,
                  [&](const std::string&, const Tensor& t) { list.push_back(&t); });
  return list;
}

std::size_t parameter_count(const ModelConfig& c) {
  const std::size_t d = c.d_model;
  const std::size_t per_layer = 4 * (d * d + d)         // q, k, v, output
                                + (d * c.d_ff + c.d_ff)  // ff_in
                                + (c.d_ff * d + d)       // ff_out
                                + 2 * (2 * d);           // two layer norms
  const std::size_t head = (c.head_layers - 1) * (d * d + d) + (d * 2 + 2);
  return c.vocab_size * d + c.max_len * d + c.n_layers * per_layer + head;
}

std::size_t parameter_count(const ModelParams& params) {
  std::size_t total = 0;
  for (const Tensor* t : tensor_list(params)) total += t->size();
  return total;
}

namespace {

DenseParams dense(std::size_t in, std::size_t out) {
  return {Tensor::matrix(in, out), Tensor::vector(out)};
}

LayerNormParams norm(std::size_t d) {
  return {Tensor::vector(d), Tensor::vector(d)};
}

bool ends_with(std::string_view text, std::string_view suffix) {
  return text.size() >= suffix.size() &&
         text.substr(text.size() - suffix.size()) == suffix;
}

}  // namespace

ModelParams zeros_like(const ModelConfig& config) {
  config.validate();
  const std::size_t d = config.d_model;
  ModelParams p;
  p.config = config;
  p.token_embeddings = Tensor::matrix(config.vocab_size, d);
  p.position_embeddings = Tensor::matrix(config.max_len, d);
  p.layers.resize(config.n_layers);
  for (EncoderLayerParams& layer : p.layers) {
    layer.query = dense(d, d);
    layer.key = dense(d, d);
    layer.value = dense(d, d);
    layer.output = dense(d, d);
    layer.attention_norm = norm(d);
    layer.ff_in = dense(d, config.d_ff);
    layer.ff_out = dense(config.d_ff, d);
    layer.ff_norm = norm(d);
  }
  for (std::size_t h = 0; h + 1 < config.head_layers; ++h) p.head.push_back(dense(d, d));
  p.head.push_back(dense(d, 2));
  return p;
}

ModelParams zeros_like(const ModelParams& params) { return zeros_like(params.config); }

ModelParams init_params(const ModelConfig& config) {
  ModelParams p = zeros_like(config);
  Rng rng(config.seed);
  const double embedding_bound = 1.0 / std::sqrt(static_cast<double>(config.d_model));
  for_each_tensor(p, [&](const std::string& name, Tensor& t) {
    if (ends_with(name, "embeddings")) {
      for (double& x : t.data()) x = rng.uniform(-embedding_bound, embedding_bound);
    } else if (ends_with(name, ".weight")) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(t.rows()));
      for (double& x : t.data()) x = rng.uniform(-bound, bound);
    } else if (ends_with(name, ".gain")) {
      t.fill(1.0);
    }
  });
  return p;
}

std::array<double, 2> softmax2(const Logits& logits) {
  const double top = std::max(logits[0], logits[1]);
  const double e0 = std::exp(logits[0] - top);
  const double e1 = std::exp(logits[1] - top);
  const double sum = e0 + e1;
  return {e0 / sum, e1 / sum};
}

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x * kInvSqrt2)); }

double gelu_grad(double x) {
  return 0.5 * (1.0 + std::erf(x * kInvSqrt2)) +
         x * kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

void add_in_place(Tensor& a, const Tensor& b) {
  kernels::axpy(1.0, b.data(), a.data());
}

void multiply_in_place(Tensor& a, const Tensor& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
}

Tensor dense_forward(const Tensor& x, const DenseParams& p) {
  const std::size_t rows = x.rows();
  const std::size_t in = p.weight.rows();
  const std::size_t out = p.weight.cols();
  Tensor y = Tensor::matrix(rows, out);
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy(p.bias.data().begin(), p.bias.data().end(), y.row(r).begin());
  }
  kernels::gemm_nn(rows, in, out, x.data(), p.weight.data(), y.data());
  return y;
}

// Accumulates parameter gradients into `grad` and, when given, the input
// gradient into `dx`.
void dense_backward(const Tensor& dy, const Tensor& x, const DenseParams& p,
                    DenseParams& grad, Tensor* dx) {
  const std::size_t rows = x.rows();
  const std::size_t in = p.weight.rows();
  const std::size_t out = p.weight.cols();
  kernels::gemm_tn(rows, in, out, x.data(), dy.data(), grad.weight.data());
  for (std::size_t r = 0; r < rows; ++r) kernels::axpy(1.0, dy.row(r), grad.bias.data());
  if (dx != nullptr) {
    kernels::gemm_nt(rows, out, in, dy.data(), p.weight.data(), dx->data());
  }
}

struct NormCache {
  Tensor xhat;
  std::vector<double> inv_std;
};

Tensor layer_norm_forward(const Tensor& x, const LayerNormParams& p,
                          NormCache& cache) {
  const std::size_t rows = x.rows();
  const std::size_t d = x.cols();
  cache.xhat = Tensor::matrix(rows, d);
  cache.inv_std.assign(rows, 0.0);
  Tensor y = Tensor::matrix(rows, d);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto in = x.row(r);
    double mean = 0.0;
    for (double v : in) mean += v;
    mean /= static_cast<double>(d);
    double var = 0.0;
    for (double v : in) var += (v - mean) * (v - mean);
    var /= static_cast<double>(d);
    const double inv_std = 1.0 / std::sqrt(var + kLayerNormEps);
    cache.inv_std[r] = inv_std;
    for (std::size_t c = 0; c < d; ++c) {
      const double xh = (in[c] - mean) * inv_std;
      cache.xhat(r, c) = xh;
      y(r, c) = p.gain[c] * xh + p.bias[c];
    }
  }
  return y;
}

Tensor layer_norm_backward(const Tensor& dy, const NormCache& cache,
                           const LayerNormParams& p, LayerNormParams& grad) {
  const std::size_t rows = dy.rows();
  const std::size_t d = dy.cols();
  Tensor dx = Tensor::matrix(rows, d);
  std::vector<double> dxhat(d);
  for (std::size_t r = 0; r < rows; ++r) {
    double mean_dxhat = 0.0;
    double mean_dxhat_xhat = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      const double g = dy(r, c);
      const double xh = cache.xhat(r, c);
      grad.gain[c] += g * xh;
      grad.bias[c] += g;
      dxhat[c] = g * p.gain[c];
      mean_dxhat += dxhat[c];
      mean_dxhat_xhat += dxhat[c] * xh;
    }
    mean_dxhat /= static_cast<double>(d);
    mean_dxhat_xhat /= static_cast<double>(d);
    for (std::size_t c = 0; c < d; ++c) {
      dx(r, c) = cache.inv_std[r] *
                 (dxhat[c] - mean_dxhat - cache.xhat(r, c) * mean_dxhat_xhat);
    }
  }
  return dx;
}

Tensor head_slice(const Tensor& m, std::size_t head, std::size_t width) {
  Tensor out = Tensor::matrix(m.rows(), width);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto src = m.row(r).subspan(head * width, width);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

void add_head_slice(Tensor& m, const Tensor& part, std::size_t head) {
  const std::size_t width = part.cols();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    kernels::axpy(1.0, part.row(r), m.row(r).subspan(head * width, width));
  }
}

void softmax_rows(Tensor& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    const double top = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (double& v : row) {
      v = std::exp(v - top);
      sum += v;
    }
    for (double& v : row) v /= sum;
  }
}

Tensor dropout_mask(Rng& rng, std::size_t rows, std::size_t cols, double rate) {
  Tensor mask = Tensor::matrix(rows, cols);
  const double keep_scale = 1.0 / (1.0 - rate);
  for (double& m : mask.data()) m = rng.uniform() < rate ? 0.0 : keep_scale;
  return mask;
}

struct LayerCache {
  Tensor input;
  Tensor q, k, v;
  std::vector<Tensor> attention;  // per head, [L x L]
  Tensor context;
  Tensor attention_dropout;       // empty without dropout
  NormCache norm1;
  Tensor norm1_out;
  Tensor ff_pre, ff_act;
  Tensor ff_dropout;
  NormCache norm2;
};

struct SequenceCache {
  std::size_t length = 0;
  std::vector<LayerCache> layers;
  Tensor output;
  std::vector<std::vector<double>> head_inputs;
  Logits logits{};
  std::array<double, 2> probs{};
};

std::size_t check_sequence(const ModelConfig& config, const TokenSequence& seq) {
  if (seq.ids.size() != seq.mask.size()) {
    throw Error("token sequence: ids and mask differ in length");
  }
  if (seq.ids.empty() || seq.ids.size() > config.max_len) {
    throw Error("token sequence: length must lie in [1, max_len]");
  }
  std::size_t length = 0;
  while (length < seq.mask.size() && seq.mask[length] == 1) ++length;
  if (length == 0) throw Error("token sequence: mask must start with a real token");
  for (std::size_t i = length; i < seq.mask.size(); ++i) {
    if (seq.mask[i] != 0) {
      throw Error("token sequence: mask must be ones followed by zeros");
    }
  }
  for (std::size_t i = 0; i < length; ++i) {
    if (seq.ids[i] < 0 || static_cast<std::size_t>(seq.ids[i]) >= config.vocab_size) {
      throw Error("token id " + std::to_string(seq.ids[i]) +
                  " out of range for vocabulary of size " +
                  std::to_string(config.vocab_size));
    }
  }
  return length;
}

SequenceCache run_forward(const ModelParams& p, const TokenSequence& seq,
                          Rng* dropout_rng) {
  const ModelConfig& cfg = p.config;
  const std::size_t length = check_sequence(cfg, seq);
  const std::size_t d = cfg.d_model;
  const std::size_t dh = d / cfg.n_heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  const bool use_dropout = dropout_rng != nullptr && cfg.dropout > 0.0;

  SequenceCache cache;
  cache.length = length;
  Tensor x = Tensor::matrix(length, d);
  for (std::size_t t = 0; t < length; ++t) {
    const auto tok = p.token_embeddings.row(static_cast<std::size_t>(seq.ids[t]));
    const auto pos = p.position_embeddings.row(t);
    for (std::size_t c = 0; c < d; ++c) x(t, c) = tok[c] + pos[c];
  }

  cache.layers.reserve(p.layers.size());
  for (const EncoderLayerParams& layer : p.layers) {
    LayerCache lc;
    lc.q = dense_forward(x, layer.query);
    lc.k = dense_forward(x, layer.key);
    lc.v = dense_forward(x, layer.value);
    lc.context = Tensor::matrix(length, d);
    for (std::size_t h = 0; h < cfg.n_heads; ++h) {
      const Tensor qh = head_slice(lc.q, h, dh);
      const Tensor kh = head_slice(lc.k, h, dh);
      const Tensor vh = head_slice(lc.v, h, dh);
      Tensor weights = Tensor::matrix(length, length);
      kernels::gemm_nt(length, dh, length, qh.data(), kh.data(), weights.data());
      for (double& s : weights.data()) s *= scale;
      softmax_rows(weights);
      Tensor ctx = Tensor::matrix(length, dh);
      kernels::gemm_nn(length, length, dh, weights.data(), vh.data(), ctx.data());
      add_head_slice(lc.context, ctx, h);
      lc.attention.push_back(std::move(weights));
    }

    Tensor attended = dense_forward(lc.context, layer.output);
    if (use_dropout) {
      lc.attention_dropout = dropout_mask(*dropout_rng, length, d, cfg.dropout);
      multiply_in_place(attended, lc.attention_dropout);
    }
    add_in_place(attended, x);
    lc.norm1_out = layer_norm_forward(attended, layer.attention_norm, lc.norm1);

    lc.ff_pre = dense_forward(lc.norm1_out, layer.ff_in);
    lc.ff_act = lc.ff_pre;
    for (double& v : lc.ff_act.data()) v = gelu(v);
    Tensor ff = dense_forward(lc.ff_act, layer.ff_out);
    if (use_dropout) {
      lc.ff_dropout = dropout_mask(*dropout_rng, length, d, cfg.dropout);
      multiply_in_place(ff, lc.ff_dropout);
    }
    add_in_place(ff, lc.norm1_out);

    lc.input = std::move(x);
    x = layer_norm_forward(ff, layer.ff_norm, lc.norm2);
    cache.layers.push_back(std::move(lc));
  }
  cache.output = std::move(x);

  const auto pooled = cache.output.row(0);
  std::vector<double> z(pooled.begin(), pooled.end());
  for (std::size_t h = 0; h < p.head.size(); ++h) {
    const DenseParams& layer = p.head[h];
    std::vector<double> out(layer.bias.data().begin(), layer.bias.data().end());
    kernels::gemm_nn(1, z.size(), out.size(), z, layer.weight.data(), out);
    cache.head_inputs.push_back(std::move(z));
    if (h + 1 < p.head.size()) {
      for (double& v : out) v = std::tanh(v);
    }
    z = std::move(out);
  }
  cache.logits = {z[0], z[1]};
  cache.probs = softmax2(cache.logits);
  return cache;
}

void run_backward(const ModelParams& p, const TokenSequence& seq,
                  const SequenceCache& cache, const Logits& dlogits,
                  Gradients& g) {
  const ModelConfig& cfg = p.config;
  const std::size_t length = cache.length;
  const std::size_t d = cfg.d_model;
  const std::size_t dh = d / cfg.n_heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  std::vector<double> dz(dlogits.begin(), dlogits.end());
  for (std::size_t h = p.head.size(); h-- > 0;) {
    const std::vector<double>& in = cache.head_inputs[h];
    const DenseParams& layer = p.head[h];
    DenseParams& grad = g.head[h];
    kernels::gemm_tn(1, in.size(), dz.size(), in, dz, grad.weight.data());
    kernels::axpy(1.0, dz, grad.bias.data());
    std::vector<double> din(in.size(), 0.0);
    kernels::gemm_nt(1, dz.size(), in.size(), dz, layer.weight.data(), din);
    if (h > 0) {
      // `in` is the tanh output of the previous head layer.
      for (std::size_t i = 0; i < din.size(); ++i) din[i] *= 1.0 - in[i] * in[i];
    }
    dz = std::move(din);
  }

  Tensor dx = Tensor::matrix(length, d);
  std::copy(dz.begin(), dz.end(), dx.row(0).begin());

  for (std::size_t l = p.layers.size(); l-- > 0;) {
    const LayerCache& lc = cache.layers[l];
    const EncoderLayerParams& layer = p.layers[l];
    EncoderLayerParams& grad = g.layers[l];

    const Tensor dr2 = layer_norm_backward(dx, lc.norm2, layer.ff_norm, grad.ff_norm);
    Tensor dff = dr2;
    if (lc.ff_dropout.size() != 0) multiply_in_place(dff, lc.ff_dropout);
    Tensor dact = Tensor::matrix(length, cfg.d_ff);
    dense_backward(dff, lc.ff_act, layer.ff_out, grad.ff_out, &dact);
    for (std::size_t i = 0; i < dact.size(); ++i) dact[i] *= gelu_grad(lc.ff_pre[i]);
    Tensor dnorm1 = dr2;
    dense_backward(dact, lc.norm1_out, layer.ff_in, grad.ff_in, &dnorm1);

    const Tensor dr1 =
        layer_norm_backward(dnorm1, lc.norm1, layer.attention_norm, grad.attention_norm);
    Tensor dattended = dr1;
    if (lc.attention_dropout.size() != 0) multiply_in_place(dattended, lc.attention_dropout);
    Tensor dcontext = Tensor::matrix(length, d);
    dense_backward(dattended, lc.context, layer.output, grad.output, &dcontext);

    Tensor dq = Tensor::matrix(length, d);
    Tensor dk = Tensor::matrix(length, d);
    Tensor dv = Tensor::matrix(length, d);
    for (std::size_t h = 0; h < cfg.n_heads; ++h) {
      const Tensor& weights = lc.attention[h];
      const Tensor qh = head_slice(lc.q, h, dh);
      const Tensor kh = head_slice(lc.k, h, dh);
      const Tensor vh = head_slice(lc.v, h, dh);
      const Tensor dctx = head_slice(dcontext, h, dh);

      Tensor dweights = Tensor::matrix(length, length);
      kernels::gemm_nt(length, dh, length, dctx.data(), vh.data(), dweights.data());
      Tensor dvh = Tensor::matrix(length, dh);
      kernels::gemm_tn(length, length, dh, weights.data(), dctx.data(), dvh.data());

      Tensor dscores = Tensor::matrix(length, length);
      for (std::size_t i = 0; i < length; ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < length; ++j) dot += dweights(i, j) * weights(i, j);
        for (std::size_t j = 0; j < length; ++j) {
          dscores(i, j) = weights(i, j) * (dweights(i, j) - dot) * scale;
        }
      }
      Tensor dqh = Tensor::matrix(length, dh);
      kernels::gemm_nn(length, length, dh, dscores.data(), kh.data(), dqh.data());
      Tensor dkh = Tensor::matrix(length, dh);
      kernels::gemm_tn(length, length, dh, dscores.data(), qh.data(), dkh.data());

      add_head_slice(dq, dqh, h);
      add_head_slice(dk, dkh, h);
      add_head_slice(dv, dvh, h);
    }

    Tensor dinput = dr1;
    dense_backward(dq, lc.input, layer.query, grad.query, &dinput);
    dense_backward(dk, lc.input, layer.key, grad.key, &dinput);
    dense_backward(dv, lc.input, layer.value, grad.value, &dinput);
    dx = std::move(dinput);
  }

  for (std::size_t t = 0; t < length; ++t) {
    kernels::axpy(1.0, dx.row(t),
                  g.token_embeddings.row(static_cast<std::size_t>(seq.ids[t])));
    kernels::axpy(1.0, dx.row(t), g.position_embeddings.row(t));
  }
}

void check_labels(std::span<const int> labels, std::size_t expected) {
  if (labels.size() != expected) {
    throw Error("label count " + std::to_string(labels.size()) +
                " does not match batch size " + std::to_string(expected));
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw Error("labels must be 0 or 1");
  }
}

double clamp_probability(double p) {
  return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
}

}  // namespace

EncoderTrace trace(const ModelParams& params, const TokenSequence& sequence) {
  SequenceCache cache = run_forward(params, sequence, nullptr);
  EncoderTrace out;
  out.length = cache.length;
  for (LayerCache& layer : cache.layers) out.attention.push_back(std::move(layer.attention));
  const auto pooled = cache.output.row(0);
  out.pooled.assign(pooled.begin(), pooled.end());
  out.logits = cache.logits;
  out.probs = cache.probs;
  return out;
}

std::vector<Logits> forward_logits(const ModelParams& params,
                                   std::span<const TokenSequence> batch) {
  std::vector<Logits> logits;
  logits.reserve(batch.size());
  for (const TokenSequence& seq : batch) {
    logits.push_back(run_forward(params, seq, nullptr).logits);
  }
  return logits;
}

PredictionBatch forward(const ModelParams& params,
                        std::span<const TokenSequence> batch) {
  PredictionBatch out;
  out.probs.reserve(batch.size());
  for (const TokenSequence& seq : batch) {
    out.probs.push_back(run_forward(params, seq, nullptr).probs[1]);
  }
  return out;
}

double bce_loss(const PredictionBatch& predictions) {
  if (!predictions.labels) throw Error("bce_loss: labels are required");
  const std::vector<int>& labels = *predictions.labels;
  check_labels(labels, predictions.probs.size());
  if (labels.empty()) throw Error("bce_loss: empty batch");
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double p = clamp_probability(predictions.probs[i]);
    total += labels[i] == 1 ? -std::log(p) : -std::log(1.0 - p);
  }
  return total / static_cast<double>(labels.size());
}

LossAndGradients backward(const ModelParams& params,
                          std::span<const TokenSequence> batch,
                          std::span<const int> labels, Rng* dropout_rng) {
  if (batch.empty()) throw Error("backward: empty batch");
  check_labels(labels, batch.size());

  LossAndGradients result;
  result.gradients = zeros_like(params);
  result.predictions.probs.reserve(batch.size());
  result.predictions.labels = std::vector<int>(labels.begin(), labels.end());
  const double weight = 1.0 / static_cast<double>(batch.size());

  for (std::size_t i = 0; i < batch.size(); ++i) {
    const SequenceCache cache = run_forward(params, batch[i], dropout_rng);
    const double prob = cache.probs[1];
    result.predictions.probs.push_back(prob);

    // d(loss)/d(logit_1) = p - y inside the clamp; the clamp is flat outside.
    double dlogit = 0.0;
    if (prob > kProbabilityClamp && prob < 1.0 - kProbabilityClamp) {
      dlogit = (prob - static_cast<double>(labels[i])) * weight;
    }
    run_backward(params, batch[i], cache, {-dlogit, dlogit}, result.gradients);
  }
  result.loss = bce_loss(result.predictions);
  return result;
}

std::vector<int> predict_labels(const PredictionBatch& predictions,
                                double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error("threshold must lie in (0, 1)");
  }
  std::vector<int> labels;
  labels.reserve(predictions.probs.size());
  for (double p : predictions.probs) labels.push_back(p >= threshold ? 1 : 0);
  return labels;
}

}  // namespace premise
