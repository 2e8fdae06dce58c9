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

#include "premise/model.hpp"

namespace premise {

// Binary checkpoint layout (all integers and reals little-endian):
//   "PREMCKPT"                          8-byte magic
//   u32 version (1), u32 tensor count
//   per tensor: u32 name length, name bytes, u32 rank, u64 dims[rank],
//               u64 byte offset into the data section
//   u64 data section size in bytes
//   data section: f64 values, tensors back to back in manifest order
// The architecture lives in a plain-text sidecar next to the checkpoint
// (same path with extension ".cfg").
void save_checkpoint(const std::filesystem::path& path, const ModelParams& params);
ModelParams load_checkpoint(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& checkpoint);

}  // namespace premise
