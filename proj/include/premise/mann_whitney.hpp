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
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace premise {

enum class UTestMode { Auto, Exact, NormalApprox };
enum class UTestMethod { Exact, NormalApprox };

std::string_view method_name(UTestMethod method);

struct UTestResult {
  double u_statistic = 0.0;  // U of the first sample, in [0, n*m]
  double p_value = 1.0;      // two-sided
  UTestMethod method = UTestMethod::Exact;
  bool reject_at_005 = false;
};

inline constexpr double kSignificanceLevel = 0.05;

// Two-sided Mann-Whitney U test. Auto uses the exact null distribution when
// max(n, m) <= 8 and the pooled sample has no ties, and the tie-corrected
// normal approximation with continuity correction otherwise. Exact mode
// rejects tied data.
UTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                           UTestMode mode = UTestMode::Auto);

// Number of rank arrangements giving each U = 0..n*m under the null.
// Limited to n + m <= kMaxExactPooledSize so counts fit in 64 bits.
inline constexpr std::size_t kMaxExactPooledSize = 60;
std::vector<std::uint64_t> exact_u_counts(std::size_t n, std::size_t m);

// Two-sided exact p-value: min(1, 2 * min(P(U <= u), P(U >= u))).
double exact_p_value(double u, std::size_t n, std::size_t m);

// `tie_term` is the sum over tie groups of t^3 - t.
double normal_p_value(double u, std::size_t n, std::size_t m, double tie_term = 0.0);

}  // namespace premise
