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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace premise::cli {

std::string sha256_file(const std::filesystem::path& path);

// One manifest.json per command run, written last, into the output
// directory. Keys are emitted in sorted order and no timestamps are
// recorded, so identical runs produce identical manifests.
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> seeds;
  std::vector<std::filesystem::path> outputs;  // checksummed when written

  void write(const std::filesystem::path& out_dir) const;
};

}  // namespace premise::cli
