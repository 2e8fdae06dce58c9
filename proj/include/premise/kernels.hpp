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
#include <span>
#include <string_view>

// Dense double-precision kernels behind the encoder. Each kernel has a
// scalar reference implementation and, on x86-64, an AVX2 variant chosen at
// runtime. Every variant accumulates each output element in the same order
// and never fuses multiply-add, so all variants produce bit-identical
// results and training stays reproducible across machines.
namespace premise::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

// All matrices are row-major and contiguous. The gemm kernels accumulate
// into C.
struct KernelTable {
  Isa isa;
  // y += alpha * x
  void (*axpy)(std::size_t n, double alpha, const double* x, double* y);
  // C[m x n] += A[m x k] * B[k x n]
  void (*gemm_nn)(std::size_t m, std::size_t k, std::size_t n, const double* a,
                  const double* b, double* c);
  // C[k x n] += A[m x k]^T * B[m x n]
  void (*gemm_tn)(std::size_t m, std::size_t k, std::size_t n, const double* a,
                  const double* b, double* c);
  // C[m x n] += A[m x k] * B[n x k]^T
  void (*gemm_nt)(std::size_t m, std::size_t k, std::size_t n, const double* a,
                  const double* b, double* c);
};

bool supported(Isa isa);
const KernelTable& table(Isa isa);  // throws premise::Error if unsupported

// Best supported ISA unless overridden with select().
const KernelTable& active();
void select(Isa isa);
Isa best_supported();

// Span wrappers over active(), with size checks.
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void gemm_nn(std::size_t m, std::size_t k, std::size_t n,
             std::span<const double> a, std::span<const double> b,
             std::span<double> c);
void gemm_tn(std::size_t m, std::size_t k, std::size_t n,
             std::span<const double> a, std::span<const double> b,
             std::span<double> c);
void gemm_nt(std::size_t m, std::size_t k, std::size_t n,
             std::span<const double> a, std::span<const double> b,
             std::span<double> c);

namespace scalar {
void axpy(std::size_t n, double alpha, const double* x, double* y);
void gemm_nn(std::size_t m, std::size_t k, std::size_t n, const double* a,
             const double* b, double* c);
void gemm_tn(std::size_t m, std::size_t k, std::size_t n, const double* a,
             const double* b, double* c);
void gemm_nt(std::size_t m, std::size_t k, std::size_t n, const double* a,
             const double* b, double* c);
}  // namespace scalar

#if defined(PREMISE_HAVE_AVX2)
namespace avx2 {
void axpy(std::size_t n, double alpha, const double* x, double* y);
void gemm_nn(std::size_t m, std::size_t k, std::size_t n, const double* a,
             const double* b, double* c);
void gemm_tn(std::size_t m, std::size_t k, std::size_t n, const double* a,
             const double* b, double* c);
void gemm_nt(std::size_t m, std::size_t k, std::size_t n, const double* a,
             const double* b, double* c);
}  // namespace avx2
#endif

}  // namespace premise::kernels
