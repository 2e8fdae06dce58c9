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

// premise: command-line driver for the premise classification pipeline.
//
//   premise ingest       validate a TSV corpus (or generate a synthetic one)
//   premise train        train an encoder classifier from a config file
//   premise grid         learning-rate x batch-size grid search
//   premise evaluate     Accuracy / F1 / ROC AUC report with per-category
//                        confusion matrices
//   premise significance Mann-Whitney U test over two score files
//   premise freq         top-k word frequencies after normalization

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "manifest.hpp"
#include "premise/checkpoint.hpp"
#include "premise/corpus.hpp"
#include "premise/error.hpp"
#include "premise/mann_whitney.hpp"
#include "premise/metrics.hpp"
#include "premise/optimizer.hpp"
#include "premise/report.hpp"
#include "premise/run_config.hpp"
#include "premise/tokenizer.hpp"

namespace fs = std::filesystem;
using namespace premise;

namespace {

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> config;
  fs::path out = ".";
};

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void write_summary(std::ostream& out, const Corpus& corpus) {
  const LabelCounts labels = corpus.label_counts();
  out << "statistic\tcount\n"
      << "total\t" << corpus.size() << '\n'
      << "premise_positive\t" << labels.positive << '\n'
      << "premise_negative\t" << labels.negative << '\n'
      << "unlabeled\t" << labels.unlabeled << '\n';
  for (const auto& [claim, count] : category_counts(corpus)) {
    out << claim_name(claim) << '\t' << count << '\n';
  }
}

RunConfig require_config(const GlobalOptions& global) {
  if (!global.config) throw Error("--config is required for this command");
  RunConfig config = load_run_config(*global.config);
  if (global.seed) {
    config.train.seed = *global.seed;
    config.model.seed = *global.seed;
  }
  return config;
}

std::map<std::string, std::string> config_entries(const RunConfig& config) {
  std::ostringstream text;
  write_run_config(text, config);
  std::istringstream in(text.str());
  return parse_key_values(in);
}

std::vector<double> read_sample(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open sample file: " + path.string());
  std::vector<double> values;
  std::vector<Diagnostic> diagnostics;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const std::size_t last = line.find_last_not_of(" \t\r");
    const std::string field = line.substr(first, last - first + 1);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != field.size() || !std::isfinite(value)) {
      diagnostics.push_back({line_no, "not a finite real number: '" + field + "'"});
      continue;
    }
    values.push_back(value);
  }
  if (!diagnostics.empty()) throw ParseError(std::move(diagnostics));
  if (values.empty()) throw Error("sample file is empty: " + path.string());
  return values;
}

// ---------------------------------------------------------------- ingest

struct IngestOptions {
  std::optional<fs::path> input;
  bool synthetic = false;
  CorpusSpec spec;
  std::optional<double> train_fraction;
};

void run_ingest(const GlobalOptions& global, const IngestOptions& opts) {
  if (opts.input.has_value() == opts.synthetic) {
    throw Error("ingest needs exactly one of --input or --synthetic");
  }
  cli::RunManifest manifest;
  manifest.command = "ingest";
  Corpus corpus;
  if (opts.synthetic) {
    CorpusSpec spec = opts.spec;
    if (global.seed) spec.seed = *global.seed;
    corpus = generate_synthetic(spec);
    manifest.seeds["synthetic"] = std::to_string(spec.seed);
    manifest.config["total"] = std::to_string(spec.total);
    manifest.config["positives"] = std::to_string(spec.positives);
    manifest.config["per_category"] = std::to_string(spec.per_category[0]) + "," +
                                      std::to_string(spec.per_category[1]) + "," +
                                      std::to_string(spec.per_category[2]);
  } else {
    corpus = load_corpus(*opts.input);
    manifest.inputs["corpus"] = opts.input->string();
  }

  fs::create_directories(global.out);
  const fs::path corpus_path = global.out / "corpus.tsv";
  const fs::path summary_path = global.out / "summary.tsv";
  {
    auto out = open_output(corpus_path);
    write_corpus(out, corpus);
  }
  {
    auto out = open_output(summary_path);
    write_summary(out, corpus);
  }
  write_summary(std::cout, corpus);
  manifest.outputs = {corpus_path, summary_path};

  if (opts.train_fraction) {
    const std::uint64_t split_seed = global.seed.value_or(opts.spec.seed);
    const auto [train, test] = split_corpus(corpus, *opts.train_fraction, split_seed);
    const fs::path train_path = global.out / "train.tsv";
    const fs::path test_path = global.out / "test.tsv";
    {
      auto out = open_output(train_path);
      write_corpus(out, train);
    }
    {
      auto out = open_output(test_path);
      write_corpus(out, test);
    }
    std::cout << "split\ttrain=" << train.size() << "\ttest=" << test.size() << '\n';
    manifest.config["train_fraction"] = format_real(*opts.train_fraction);
    manifest.seeds["split"] = std::to_string(split_seed);
    manifest.outputs.push_back(train_path);
    manifest.outputs.push_back(test_path);
  }
  manifest.write(global.out);
}

// ----------------------------------------------------------------- train

struct TrainOptions {
  fs::path train;
  std::optional<fs::path> valid;
};

void run_train(const GlobalOptions& global, const TrainOptions& opts) {
  const RunConfig config = require_config(global);
  const Corpus train_corpus = load_corpus(opts.train);
  std::optional<Corpus> valid_corpus;
  if (opts.valid) valid_corpus = load_corpus(*opts.valid);

  const Vocabulary vocab = build_vocab(train_corpus, config.min_freq, config.max_vocab);
  const TrainResult result =
      train(config.train, config.model, vocab, train_corpus,
            valid_corpus ? &*valid_corpus : nullptr);

  fs::create_directories(global.out);
  const fs::path checkpoint = global.out / "model.ckpt";
  const fs::path vocab_path = global.out / "vocab.txt";
  const fs::path history_path = global.out / "history.tsv";
  save_checkpoint(checkpoint, result.params);
  vocab.save(vocab_path);
  {
    auto out = open_output(history_path);
    write_history(out, result.history);
  }
  write_history(std::cout, result.history);

  cli::RunManifest manifest;
  manifest.command = "train";
  manifest.config = config_entries(config);
  manifest.inputs["config"] = global.config->string();
  manifest.inputs["train"] = opts.train.string();
  if (opts.valid) manifest.inputs["valid"] = opts.valid->string();
  manifest.seeds["train"] = std::to_string(config.train.seed);
  manifest.outputs = {checkpoint, sidecar_path(checkpoint), vocab_path, history_path};
  manifest.write(global.out);
}

// ------------------------------------------------------------------ grid

struct GridOptions {
  fs::path train;
  fs::path valid;
  std::vector<double> learning_rates = {1e-3, 1e-4, 1e-5};
  std::vector<std::size_t> batch_sizes = {4, 8, 16, 32, 48};
};

void run_grid(const GlobalOptions& global, const GridOptions& opts) {
  const RunConfig config = require_config(global);
  const Corpus train_corpus = load_corpus(opts.train);
  const Corpus valid_corpus = load_corpus(opts.valid);
  const Vocabulary vocab = build_vocab(train_corpus, config.min_freq, config.max_vocab);

  fs::create_directories(global.out);
  const fs::path runs_dir = global.out / "runs";
  const std::vector<GridResult> results =
      grid_search({opts.learning_rates, opts.batch_sizes}, config.train, config.model, vocab,
                  train_corpus, valid_corpus, runs_dir);

  const fs::path table_path = global.out / "grid.tsv";
  {
    auto out = open_output(table_path);
    write_grid_table(out, results);
  }
  write_grid_table(std::cout, results);

  cli::RunManifest manifest;
  manifest.command = "grid";
  manifest.config = config_entries(config);
  std::string lrs, batches;
  for (double lr : opts.learning_rates) lrs += (lrs.empty() ? "" : ",") + format_real(lr);
  for (std::size_t b : opts.batch_sizes) {
    batches += (batches.empty() ? "" : ",") + std::to_string(b);
  }
  manifest.config["grid_lrs"] = lrs;
  manifest.config["grid_batch_sizes"] = batches;
  manifest.inputs["config"] = global.config->string();
  manifest.inputs["train"] = opts.train.string();
  manifest.inputs["valid"] = opts.valid.string();
  manifest.seeds["train"] = std::to_string(config.train.seed);
  manifest.outputs = {table_path};
  for (const auto& entry : fs::directory_iterator(runs_dir)) {
    if (entry.path().extension() == ".tsv") manifest.outputs.push_back(entry.path());
  }
  std::sort(manifest.outputs.begin(), manifest.outputs.end());
  manifest.write(global.out);
}

// -------------------------------------------------------------- evaluate

struct EvaluateOptions {
  std::optional<fs::path> model;
  fs::path corpus;
  std::string split = "test";
  bool random_baseline = false;
  double threshold = 0.5;
};

void run_evaluate(const GlobalOptions& global, const EvaluateOptions& opts) {
  const Corpus corpus = load_corpus(opts.corpus);
  std::vector<int> labels;
  for (const Tweet& tweet : corpus) {
    if (!tweet.premise) throw Error("evaluation needs labels; tweet " + tweet.id + " has none");
    labels.push_back(*tweet.premise);
  }

  cli::RunManifest manifest;
  manifest.command = "evaluate";
  manifest.inputs["corpus"] = opts.corpus.string();
  manifest.config["threshold"] = format_real(opts.threshold);

  std::vector<double> scores;
  std::vector<int> preds;
  std::string row_label = opts.split;
  if (opts.random_baseline) {
    const std::uint64_t seed = global.seed.value_or(0);
    BaselineOutput baseline = random_baseline(labels, seed);
    scores = std::move(baseline.scores);
    preds = std::move(baseline.preds);
    row_label = "Random";
    manifest.seeds["random_baseline"] = std::to_string(seed);
  } else {
    if (!opts.model) throw Error("evaluate needs --model unless --random-baseline is set");
    const ModelParams params = load_checkpoint(*opts.model / "model.ckpt");
    const Vocabulary vocab = Vocabulary::load(*opts.model / "vocab.txt");
    if (vocab.size() != params.config.vocab_size) {
      throw Error("checkpoint expects a vocabulary of " +
                  std::to_string(params.config.vocab_size) + " entries, vocab.txt has " +
                  std::to_string(vocab.size()));
    }
    const EncodedDataset data = encode_corpus(corpus, vocab, params.config.max_len, true);
    const PredictionBatch predictions = forward(params, data.sequences);
    scores = predictions.probs;
    preds = predict_labels(predictions, opts.threshold);
    manifest.inputs["model"] = opts.model->string();
  }

  const EvalReport report = per_category_report(scores, preds, corpus, row_label);
  fs::create_directories(global.out);
  const fs::path report_path = global.out / "report.tsv";
  {
    auto out = open_output(report_path);
    write_eval_report(out, {report});
  }
  write_eval_report(std::cout, {report});
  manifest.config["split"] = row_label;
  manifest.outputs = {report_path};
  manifest.write(global.out);
}

// ---------------------------------------------------------- significance

struct SignificanceOptions {
  fs::path sample_a;
  fs::path sample_b;
  std::string mode = "auto";
};

void run_significance(const GlobalOptions& global, const SignificanceOptions& opts) {
  const std::vector<double> a = read_sample(opts.sample_a);
  const std::vector<double> b = read_sample(opts.sample_b);
  UTestMode mode = UTestMode::Auto;
  if (opts.mode == "exact") {
    mode = UTestMode::Exact;
  } else if (opts.mode == "normal") {
    mode = UTestMode::NormalApprox;
  }
  const UTestResult result = mann_whitney_u(a, b, mode);

  std::ostringstream text;
  text << "n_a\t" << a.size() << '\n'
       << "n_b\t" << b.size() << '\n'
       << "U\t" << format_real(result.u_statistic) << '\n'
       << "p_value\t" << format_real(result.p_value) << '\n'
       << "method\t" << method_name(result.method) << '\n'
       << "verdict\t"
       << (result.reject_at_005
               ? "reject the null hypothesis that both samples come from the same "
                 "distribution (p <= 0.05)"
               : "fail to reject the null hypothesis that both samples come from the "
                 "same distribution (p > 0.05)")
       << '\n';
  std::cout << text.str();

  fs::create_directories(global.out);
  const fs::path result_path = global.out / "significance.tsv";
  {
    auto out = open_output(result_path);
    out << text.str();
  }
  cli::RunManifest manifest;
  manifest.command = "significance";
  manifest.inputs["sample_a"] = opts.sample_a.string();
  manifest.inputs["sample_b"] = opts.sample_b.string();
  manifest.config["mode"] = opts.mode;
  manifest.outputs = {result_path};
  manifest.write(global.out);
}

// ------------------------------------------------------------------ freq

struct FreqOptions {
  fs::path corpus;
  std::size_t k = 10;
};

void run_freq(const GlobalOptions& global, const FreqOptions& opts) {
  // An empty corpus yields an empty table; only a missing file is an error.
  Corpus corpus;
  try {
    corpus = load_corpus(opts.corpus);
  } catch (const ParseError& e) {
    const auto& d = e.diagnostics();
    if (!(d.size() == 1 && d.front().message == "no records")) throw;
  }
  const auto words = top_k_words(corpus, opts.k);

  fs::create_directories(global.out);
  const fs::path table_path = global.out / "freq.tsv";
  {
    auto out = open_output(table_path);
    write_frequency_report(out, words);
  }
  write_frequency_report(std::cout, words);
  cli::RunManifest manifest;
  manifest.command = "freq";
  manifest.inputs["corpus"] = opts.corpus.string();
  manifest.config["k"] = std::to_string(opts.k);
  manifest.outputs = {table_path};
  manifest.write(global.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Premise classification pipeline for short social-media texts"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Seed for every stochastic step of the command");
  app.add_option("--config", global.config, "Training config file (key = value)");
  app.add_option("--out", global.out, "Output directory")->capture_default_str();

  IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Validate a corpus or generate a synthetic one");
  ingest_cmd->add_option("--input", ingest.input, "TSV corpus with header id/text/claim/premise");
  ingest_cmd->add_flag("--synthetic", ingest.synthetic, "Generate a synthetic corpus");
  ingest_cmd->add_option("--total", ingest.spec.total, "Synthetic: number of tweets")
      ->capture_default_str();
  ingest_cmd->add_option("--positives", ingest.spec.positives, "Synthetic: premise=1 count")
      ->capture_default_str();
  ingest_cmd
      ->add_option("--per-category", ingest.spec.per_category,
                   "Synthetic: stay_at_home_orders,face_masks,school_closures counts")
      ->delimiter(',');
  ingest_cmd->add_option("--train-fraction", ingest.train_fraction,
                         "Also write train.tsv/test.tsv with this train share");

  TrainOptions train_opts;
  auto* train_cmd = app.add_subcommand("train", "Train a classifier");
  train_cmd->add_option("--train", train_opts.train, "Training corpus")->required();
  train_cmd->add_option("--valid", train_opts.valid, "Validation corpus");

  GridOptions grid;
  auto* grid_cmd = app.add_subcommand("grid", "Grid search over learning rate and batch size");
  grid_cmd->add_option("--train", grid.train, "Training corpus")->required();
  grid_cmd->add_option("--valid", grid.valid, "Validation corpus")->required();
  grid_cmd->add_option("--lrs", grid.learning_rates, "Learning rates")
      ->delimiter(',')
      ->capture_default_str();
  grid_cmd->add_option("--batch-sizes", grid.batch_sizes, "Batch sizes")
      ->delimiter(',')
      ->capture_default_str();

  EvaluateOptions evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a trained model or the random baseline");
  evaluate_cmd->add_option("--model", evaluate.model, "Directory written by `train`");
  evaluate_cmd->add_option("--corpus", evaluate.corpus, "Labeled corpus")->required();
  evaluate_cmd->add_option("--split", evaluate.split, "Row label for the report")
      ->capture_default_str();
  evaluate_cmd->add_flag("--random-baseline", evaluate.random_baseline,
                         "Score with a seeded random predictor instead of a model");
  evaluate_cmd->add_option("--threshold", evaluate.threshold, "Decision threshold")
      ->capture_default_str();

  SignificanceOptions significance;
  auto* significance_cmd =
      app.add_subcommand("significance", "Mann-Whitney U test over two score files");
  significance_cmd->add_option("sample_a", significance.sample_a, "First sample, one real per line")
      ->required();
  significance_cmd->add_option("sample_b", significance.sample_b, "Second sample")->required();
  significance_cmd->add_option("--mode", significance.mode, "auto, exact or normal")
      ->check(CLI::IsMember({"auto", "exact", "normal"}))
      ->capture_default_str();

  FreqOptions freq;
  auto* freq_cmd = app.add_subcommand("freq", "Top-k word frequencies after normalization");
  freq_cmd->add_option("--corpus", freq.corpus, "Corpus")->required();
  freq_cmd->add_option("-k", freq.k, "Number of words")->capture_default_str()->check(
      CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest_cmd) run_ingest(global, ingest);
    if (*train_cmd) run_train(global, train_opts);
    if (*grid_cmd) run_grid(global, grid);
    if (*evaluate_cmd) run_evaluate(global, evaluate);
    if (*significance_cmd) run_significance(global, significance);
    if (*freq_cmd) run_freq(global, freq);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
