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

#include <sstream>

#include "premise/error.hpp"
#include "premise/run_config.hpp"

using namespace premise;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in);
}

}  // namespace

TEST_CASE("run config parsing") {
  const RunConfig c = parse(
      "# tiny run\n"
      "epochs = 5\n"
      "lr = 0.001\n"
      "batch_size=8\n"
      "weight_decay = 0\n"
      "seed = 42\n"
      "d_model = 16\n"
      "n_heads = 2\n"
      "dropout = 0.1\n"
      "min_freq = 2\n");
  CHECK(c.train.epochs == 5);
  CHECK(c.train.learning_rate == 0.001);
  CHECK(c.train.batch_size == 8);
  CHECK(c.train.weight_decay == 0.0);
  CHECK(c.train.seed == 42);
  CHECK(c.model.seed == 42);
  CHECK(c.model.d_model == 16);
  CHECK(c.model.dropout == 0.1);
  CHECK(c.min_freq == 2);
  CHECK(c.model.n_layers == ModelConfig{}.n_layers);
  CHECK(parse("learning_rate = 0.5\n").train.learning_rate == 0.5);
}

TEST_CASE("run config errors") {
  CHECK_THROWS_AS(parse("epochs = 0\n"), Error);
  CHECK_THROWS_AS(parse("colour = blue\n"), Error);
  CHECK_THROWS_AS(parse("epochs = five\n"), Error);
  CHECK_THROWS_AS(parse("epochs 5\n"), Error);
  CHECK_THROWS_AS(parse("epochs = 5\nepochs = 6\n"), Error);
  CHECK_THROWS_AS(parse("d_model = 10\nn_heads = 4\n"), Error);
  CHECK_THROWS_AS(load_run_config("/nonexistent/run.cfg"), Error);
  CHECK_THROWS_WITH_AS(parse("epochs = 5\n\nbogus\n"), doctest::Contains("line 3"), Error);
}

TEST_CASE("run config and model sidecar round trip") {
  RunConfig c;
  c.train.epochs = 7;
  c.train.learning_rate = 3e-5;
  c.train.threshold = 0.4;
  c.model.d_ff = 48;
  c.max_vocab = 500;
  std::stringstream buffer;
  write_run_config(buffer, c);
  const RunConfig back = parse_run_config(buffer);
  CHECK(back.train.epochs == 7);
  CHECK(back.train.learning_rate == 3e-5);
  CHECK(back.train.threshold == 0.4);
  CHECK(back.model == c.model);
  CHECK(back.max_vocab == 500);

  ModelConfig m;
  m.vocab_size = 123;
  m.seed = 99;
  m.head_layers = 3;
  std::stringstream side;
  write_model_config(side, m);
  CHECK(parse_model_config(side) == m);
}
