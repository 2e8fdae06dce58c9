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

// Compiled with -mavx2 only. Products and sums are separate instructions
// (no FMA) and each C element sees its terms in the scalar order.

#include <immintrin.h>

#include <vector>

#include "premise/kernels.hpp"

namespace premise::kernels::avx2 {

namespace {

constexpr std::size_t kLanes = 4;
constexpr std::size_t kBlock = 4 * kLanes;  // columns kept in registers

inline __m256d madd(__m256d acc, __m256d a, const double* b) {
  return _mm256_add_pd(acc, _mm256_mul_pd(a, _mm256_loadu_pd(b)));
}

// crow[j0 .. j0+kBlock) += sum_p coef(p) * rows(p)[j0 ..], p ascending.
template <class Coef, class Row>
inline void accumulate_block(std::size_t count, std::size_t j0, Coef coef,
                             Row row, double* crow) {
  __m256d c0 = _mm256_loadu_pd(crow + j0);
  __m256d c1 = _mm256_loadu_pd(crow + j0 + 4);
  __m256d c2 = _mm256_loadu_pd(crow + j0 + 8);
  __m256d c3 = _mm256_loadu_pd(crow + j0 + 12);
  for (std::size_t p = 0; p < count; ++p) {
    const __m256d av = _mm256_set1_pd(coef(p));
    const double* src = row(p) + j0;
    c0 = madd(c0, av, src);
    c1 = madd(c1, av, src + 4);
    c2 = madd(c2, av, src + 8);
    c3 = madd(c3, av, src + 12);
  }
  _mm256_storeu_pd(crow + j0, c0);
  _mm256_storeu_pd(crow + j0 + 4, c1);
  _mm256_storeu_pd(crow + j0 + 8, c2);
  _mm256_storeu_pd(crow + j0 + 12, c3);
}

template <class Coef, class Row>
inline void accumulate_row(std::size_t count, std::size_t n, Coef coef, Row row,
                           double* crow) {
  std::size_t j = 0;
  for (; j + kBlock <= n; j += kBlock) accumulate_block(count, j, coef, row, crow);
  for (; j + kLanes <= n; j += kLanes) {
    __m256d acc = _mm256_loadu_pd(crow + j);
    for (std::size_t p = 0; p < count; ++p) {
      acc = madd(acc, _mm256_set1_pd(coef(p)), row(p) + j);
    }
    _mm256_storeu_pd(crow + j, acc);
  }
  for (; j < n; ++j) {
    double acc = crow[j];
    for (std::size_t p = 0; p < count; ++p) acc += coef(p) * row(p)[j];
    crow[j] = acc;
  }
}

}  // namespace

void axpy(std::size_t n, double alpha, const double* x, double* y) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
    _mm256_storeu_pd(y + i, madd(_mm256_loadu_pd(y + i), av, x + i));
    _mm256_storeu_pd(y + i + 4, madd(_mm256_loadu_pd(y + i + 4), av, x + i + 4));
  }
  for (; i + kLanes <= n; i += kLanes) {
    _mm256_storeu_pd(y + i, madd(_mm256_loadu_pd(y + i), av, x + i));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemm_nn(std::size_t m, std::size_t k, std::size_t n, const double* a,
             const double* b, double* c) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    accumulate_row(
        k, n, [arow](std::size_t p) { return arow[p]; },
        [b, n](std::size_t p) { return b + p * n; }, c + i * n);
  }
}

void gemm_tn(std::size_t m, std::size_t k, std::size_t n, const double* a,
             const double* b, double* c) {
  for (std::size_t p = 0; p < k; ++p) {
    accumulate_row(
        m, n, [a, k, p](std::size_t r) { return a[r * k + p]; },
        [b, n](std::size_t r) { return b + r * n; }, c + p * n);
  }
}

void gemm_nt(std::size_t m, std::size_t k, std::size_t n, const double* a,
             const double* b, double* c) {
  thread_local std::vector<double> bt;
  bt.resize(k * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t p = 0; p < k; ++p) bt[p * n + j] = b[j * k + p];
  }
  gemm_nn(m, k, n, a, bt.data(), c);
}

}  // namespace premise::kernels::avx2
