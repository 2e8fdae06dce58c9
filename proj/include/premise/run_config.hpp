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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "premise/model.hpp"
#include "premise/optimizer.hpp"

namespace premise {

// Everything a training run needs, read from a plain-text file of
// `key = value` lines. `#` starts a comment. Recognised keys:
//   epochs, lr (or learning_rate), batch_size, weight_decay, beta1, beta2,
//   eps, threshold, seed, max_len, d_model, n_heads, n_layers, d_ff,
//   head_layers, dropout, min_freq, max_vocab
// `seed` drives both parameter initialisation and batch shuffling.
struct RunConfig {
  TrainConfig train;
  ModelConfig model;
  std::size_t min_freq = 1;
  std::size_t max_vocab = 20000;
};

std::map<std::string, std::string> parse_key_values(std::istream& in);

RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::filesystem::path& path);
void write_run_config(std::ostream& out, const RunConfig& config);

// Model-only subset, used for the checkpoint sidecar. Includes vocab_size.
ModelConfig parse_model_config(std::istream& in);
void write_model_config(std::ostream& out, const ModelConfig& config);

}  // namespace premise
