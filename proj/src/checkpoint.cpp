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

#include "premise/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "premise/error.hpp"
#include "premise/run_config.hpp"

namespace premise {

namespace {

constexpr char kMagic[8] = {'P', 'R', 'E', 'M', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

template <class T>
T to_little(T value) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    std::memcpy(&value, bytes, sizeof(T));
  }
  return value;
}

class Writer {
 public:
  void u32(std::uint32_t v) { raw(to_little(v)); }
  void u64(std::uint64_t v) { raw(to_little(v)); }
  void f64(double v) { raw(to_little(std::bit_cast<std::uint64_t>(v))); }
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const char*>(data);
    buffer_.insert(buffer_.end(), p, p + n);
  }
  const std::vector<char>& buffer() const { return buffer_; }

 private:
  template <class T>
  void raw(T v) { bytes(&v, sizeof v); }
  std::vector<char> buffer_;
};

class Reader {
 public:
  explicit Reader(std::vector<char> data) : data_(std::move(data)) {}
  std::uint32_t u32() { return to_little(raw<std::uint32_t>()); }
  std::uint64_t u64() { return to_little(raw<std::uint64_t>()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string text(std::size_t n) {
    need(n);
    std::string s(data_.data() + pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw Error("checkpoint is truncated");
  }
  template <class T>
  T raw() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::vector<char> data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& checkpoint) {
  std::filesystem::path sidecar = checkpoint;
  sidecar.replace_extension(".cfg");
  return sidecar;
}

void save_checkpoint(const std::filesystem::path& path, const ModelParams& params) {
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.u32(kVersion);
  std::uint32_t count = 0;
  for_each_tensor(params, [&](const std::string&, const Tensor&) { ++count; });
  w.u32(count);
  std::uint64_t offset = 0;
  for_each_tensor(params, [&](const std::string& name, const Tensor& t) {
    w.u32(static_cast<std::uint32_t>(name.size()));
    w.bytes(name.data(), name.size());
    w.u32(static_cast<std::uint32_t>(t.shape().size()));
    for (std::size_t dim : t.shape()) w.u64(dim);
    w.u64(offset);
    offset += t.size() * sizeof(double);
  });
  w.u64(offset);
  for_each_tensor(params, [&](const std::string&, const Tensor& t) {
    for (double v : t.data()) w.f64(v);
  });

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write checkpoint: " + path.string());
  out.write(w.buffer().data(), static_cast<std::streamsize>(w.buffer().size()));
  std::ofstream sidecar(sidecar_path(path));
  if (!sidecar) throw Error("cannot write checkpoint config: " + sidecar_path(path).string());
  write_model_config(sidecar, params.config);
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream sidecar(sidecar_path(path));
  if (!sidecar) throw Error("cannot open checkpoint config: " + sidecar_path(path).string());
  ModelParams params = zeros_like(parse_model_config(sidecar));

  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint: " + path.string());
  Reader r(std::vector<char>(std::istreambuf_iterator<char>(in), {}));
  if (r.text(sizeof kMagic) != std::string(kMagic, sizeof kMagic)) {
    throw Error("not a checkpoint file: " + path.string());
  }
  if (r.u32() != kVersion) throw Error("unsupported checkpoint version");

  const std::vector<Tensor*> tensors = tensor_list(params);
  std::vector<std::string> names;
  for_each_tensor(params, [&](const std::string& name, Tensor&) { names.push_back(name); });
  if (r.u32() != tensors.size()) {
    throw Error("checkpoint tensor count does not match its config");
  }
  std::vector<std::uint64_t> offsets;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const std::string name = r.text(r.u32());
    if (name != names[i]) {
      throw Error("checkpoint tensor " + std::to_string(i) + " is '" + name +
                  "', expected '" + names[i] + "'");
    }
    std::vector<std::size_t> shape(r.u32());
    for (std::size_t& dim : shape) dim = r.u64();
    if (shape != tensors[i]->shape()) {
      throw Error("checkpoint tensor '" + name + "' has a shape inconsistent with its config");
    }
    offsets.push_back(r.u64());
  }
  const std::uint64_t data_size = r.u64();
  if (r.remaining() != data_size) throw Error("checkpoint data section has the wrong size");
  std::uint64_t expected_offset = 0;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    if (offsets[i] != expected_offset) throw Error("checkpoint offsets are not contiguous");
    for (double& v : tensors[i]->data()) v = r.f64();
    expected_offset += tensors[i]->size() * sizeof(double);
  }
  if (expected_offset != data_size) throw Error("checkpoint data section has the wrong size");
  return params;
}

}  // namespace premise
