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

#include <atomic>
#include <string>

#include "premise/error.hpp"
#include "premise/kernels.hpp"

namespace premise::kernels {

namespace {

constexpr KernelTable kScalar{Isa::Scalar, scalar::axpy, scalar::gemm_nn,
                              scalar::gemm_tn, scalar::gemm_nt};
#if defined(PREMISE_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2, avx2::axpy, avx2::gemm_nn, avx2::gemm_tn,
                            avx2::gemm_nt};
#endif

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> selected{&table(best_supported())};
  return selected;
}

void require(std::size_t have, std::size_t need, const char* what) {
  if (have < need) {
    throw Error(std::string("kernel operand too small: ") + what);
  }
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "scalar";
}

bool supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(PREMISE_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) {
    throw Error("kernel ISA not supported on this machine: " +
                std::string(isa_name(isa)));
  }
#if defined(PREMISE_HAVE_AVX2)
  if (isa == Isa::Avx2) return kAvx2;
#endif
  return kScalar;
}

Isa best_supported() {
  return supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Isa isa) { current().store(&table(isa), std::memory_order_release); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require(y.size(), x.size(), "axpy y");
  active().axpy(x.size(), alpha, x.data(), y.data());
}

void gemm_nn(std::size_t m, std::size_t k, std::size_t n,
             std::span<const double> a, std::span<const double> b,
             std::span<double> c) {
  require(a.size(), m * k, "gemm_nn A");
  require(b.size(), k * n, "gemm_nn B");
  require(c.size(), m * n, "gemm_nn C");
  active().gemm_nn(m, k, n, a.data(), b.data(), c.data());
}

void gemm_tn(std::size_t m, std::size_t k, std::size_t n,
             std::span<const double> a, std::span<const double> b,
             std::span<double> c) {
  require(a.size(), m * k, "gemm_tn A");
  require(b.size(), m * n, "gemm_tn B");
  require(c.size(), k * n, "gemm_tn C");
  active().gemm_tn(m, k, n, a.data(), b.data(), c.data());
}

void gemm_nt(std::size_t m, std::size_t k, std::size_t n,
             std::span<const double> a, std::span<const double> b,
             std::span<double> c) {
  require(a.size(), m * k, "gemm_nt A");
  require(b.size(), n * k, "gemm_nt B");
  require(c.size(), m * n, "gemm_nt C");
  active().gemm_nt(m, k, n, a.data(), b.data(), c.data());
}

}  // namespace premise::kernels
