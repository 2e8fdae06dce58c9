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

#include "premise/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "premise/error.hpp"
#include "premise/report.hpp"

namespace premise {

namespace {

std::string trim(const std::string& text) {
  const std::size_t first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const std::size_t last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

// Applies known keys and reports unknown or malformed ones.
class Binder {
 public:
  explicit Binder(const std::map<std::string, std::string>& values) : values_(values) {}

  template <class T>
  void bind(const std::string& key, T& target) {
    const auto it = values_.find(key);
    if (it == values_.end()) return;
    used_.push_back(key);
    const std::string& text = it->second;
    T parsed{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), parsed);
    if (ec != std::errc() || end != text.data() + text.size()) {
      diagnostics_.push_back({0, "invalid value for '" + key + "': " + text});
      return;
    }
    target = parsed;
  }

  void finish() {
    for (const auto& [key, value] : values_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        diagnostics_.push_back({0, "unknown config key '" + key + "'"});
      }
    }
    if (!diagnostics_.empty()) throw ParseError(diagnostics_);
  }

 private:
  const std::map<std::string, std::string>& values_;
  std::vector<std::string> used_;
  std::vector<Diagnostic> diagnostics_;
};

void bind_model(Binder& b, ModelConfig& model) {
  b.bind("max_len", model.max_len);
  b.bind("d_model", model.d_model);
  b.bind("n_heads", model.n_heads);
  b.bind("n_layers", model.n_layers);
  b.bind("d_ff", model.d_ff);
  b.bind("head_layers", model.head_layers);
  b.bind("dropout", model.dropout);
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> values;
  std::vector<Diagnostic> diagnostics;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      diagnostics.push_back({line_no, "expected 'key = value'"});
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      diagnostics.push_back({line_no, "expected 'key = value'"});
      continue;
    }
    if (!values.emplace(key, value).second) {
      diagnostics.push_back({line_no, "duplicate key '" + key + "'"});
    }
  }
  if (!diagnostics.empty()) throw ParseError(std::move(diagnostics));
  return values;
}

RunConfig parse_run_config(std::istream& in) {
  std::map<std::string, std::string> values = parse_key_values(in);
  if (values.count("lr") && values.count("learning_rate")) {
    throw ParseError({{0, "both 'lr' and 'learning_rate' given"}});
  }
  if (auto it = values.find("learning_rate"); it != values.end()) {
    values["lr"] = it->second;
    values.erase(it);
  }

  RunConfig config;
  Binder b(values);
  b.bind("epochs", config.train.epochs);
  b.bind("lr", config.train.learning_rate);
  b.bind("batch_size", config.train.batch_size);
  b.bind("weight_decay", config.train.weight_decay);
  b.bind("beta1", config.train.beta1);
  b.bind("beta2", config.train.beta2);
  b.bind("eps", config.train.eps);
  b.bind("threshold", config.train.threshold);
  b.bind("seed", config.train.seed);
  bind_model(b, config.model);
  b.bind("min_freq", config.min_freq);
  b.bind("max_vocab", config.max_vocab);
  b.finish();
  config.model.seed = config.train.seed;
  config.train.validate();
  // vocab_size is filled in from the vocabulary at training time.
  ModelConfig shape = config.model;
  if (shape.vocab_size == 0) shape.vocab_size = 1;
  shape.validate();
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path.string());
  return parse_run_config(in);
}

void write_run_config(std::ostream& out, const RunConfig& c) {
  out << "epochs = " << c.train.epochs << '\n'
      << "lr = " << format_real(c.train.learning_rate) << '\n'
      << "batch_size = " << c.train.batch_size << '\n'
      << "weight_decay = " << format_real(c.train.weight_decay) << '\n'
      << "beta1 = " << format_real(c.train.beta1) << '\n'
      << "beta2 = " << format_real(c.train.beta2) << '\n'
      << "eps = " << format_real(c.train.eps) << '\n'
      << "threshold = " << format_real(c.train.threshold) << '\n'
      << "seed = " << c.train.seed << '\n'
      << "max_len = " << c.model.max_len << '\n'
      << "d_model = " << c.model.d_model << '\n'
      << "n_heads = " << c.model.n_heads << '\n'
      << "n_layers = " << c.model.n_layers << '\n'
      << "d_ff = " << c.model.d_ff << '\n'
      << "head_layers = " << c.model.head_layers << '\n'
      << "dropout = " << format_real(c.model.dropout) << '\n'
      << "min_freq = " << c.min_freq << '\n'
      << "max_vocab = " << c.max_vocab << '\n';
}

ModelConfig parse_model_config(std::istream& in) {
  const std::map<std::string, std::string> values = parse_key_values(in);
  ModelConfig config;
  Binder b(values);
  b.bind("vocab_size", config.vocab_size);
  bind_model(b, config);
  b.bind("seed", config.seed);
  b.finish();
  config.validate();
  return config;
}

void write_model_config(std::ostream& out, const ModelConfig& c) {
  out << "vocab_size = " << c.vocab_size << '\n'
      << "max_len = " << c.max_len << '\n'
      << "d_model = " << c.d_model << '\n'
      << "n_heads = " << c.n_heads << '\n'
      << "n_layers = " << c.n_layers << '\n'
      << "d_ff = " << c.d_ff << '\n'
      << "head_layers = " << c.head_layers << '\n'
      << "dropout = " << format_real(c.dropout) << '\n'
      << "seed = " << c.seed << '\n';
}

}  // namespace premise
