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

#include "premise/mann_whitney.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "premise/error.hpp"
#include "premise/metrics.hpp"

namespace premise {

std::string_view method_name(UTestMethod method) {
  return method == UTestMethod::Exact ? "exact" : "normal-approx";
}

std::vector<std::uint64_t> exact_u_counts(std::size_t n, std::size_t m) {
  if (n + m > kMaxExactPooledSize) {
    throw Error("exact null distribution limited to n + m <= " +
                std::to_string(kMaxExactPooledSize));
  }
  // counts(i, j)[u]: arrangements of i first-sample and j second-sample
  // items with statistic u. The largest pooled item either belongs to the
  // first sample (beating all j others) or to the second sample:
  //   counts(i, j)[u] = counts(i-1, j)[u-j] + counts(i, j-1)[u].
  std::vector<std::vector<std::vector<std::uint64_t>>> counts(
      n + 1, std::vector<std::vector<std::uint64_t>>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      std::vector<std::uint64_t>& cell = counts[i][j];
      cell.assign(i * j + 1, 0);
      if (i == 0 || j == 0) {
        cell[0] = 1;
        continue;
      }
      const auto& take_first = counts[i - 1][j];
      const auto& take_second = counts[i][j - 1];
      for (std::size_t u = 0; u < take_first.size(); ++u) cell[u + j] += take_first[u];
      for (std::size_t u = 0; u < take_second.size(); ++u) cell[u] += take_second[u];
    }
  }
  return counts[n][m];
}

double exact_p_value(double u, std::size_t n, std::size_t m) {
  const std::vector<std::uint64_t> counts = exact_u_counts(n, m);
  std::uint64_t total = 0;
  std::uint64_t at_most = 0;
  std::uint64_t at_least = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double value = static_cast<double>(k);
    total += counts[k];
    if (value <= u) at_most += counts[k];
    if (value >= u) at_least += counts[k];
  }
  const double tail = static_cast<double>(std::min(at_most, at_least));
  return std::min(1.0, 2.0 * tail / static_cast<double>(total));
}

double normal_p_value(double u, std::size_t n, std::size_t m, double tie_term) {
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  const double pooled = nn + mm;
  double variance = nn * mm / 12.0 * (pooled + 1.0);
  if (pooled > 1.0) variance -= nn * mm / 12.0 * tie_term / (pooled * (pooled - 1.0));
  if (!(variance > 0.0)) return 1.0;
  const double deviation = std::max(0.0, std::abs(u - nn * mm / 2.0) - 0.5);
  const double z = deviation / std::sqrt(variance);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

UTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                           UTestMode mode) {
  if (a.empty() || b.empty()) throw Error("Mann-Whitney U: both samples must be non-empty");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  for (double v : pooled) {
    if (std::isnan(v)) throw Error("Mann-Whitney U: samples contain NaN");
  }

  const std::vector<double> ranks = midranks(pooled);
  double rank_sum_a = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) rank_sum_a += ranks[i];
  const double n = static_cast<double>(a.size());

  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  bool has_ties = false;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    if (j - i > 1) has_ties = true;
    tie_term += t * t * t - t;
    i = j;
  }

  UTestResult result;
  result.u_statistic = rank_sum_a - n * (n + 1.0) / 2.0;

  bool exact = false;
  switch (mode) {
    case UTestMode::Exact:
      if (has_ties) throw Error("Mann-Whitney U: exact mode requires samples without ties");
      exact = true;
      break;
    case UTestMode::NormalApprox:
      exact = false;
      break;
    case UTestMode::Auto:
      exact = !has_ties && std::max(a.size(), b.size()) <= 8;
      break;
  }

  if (exact) {
    result.method = UTestMethod::Exact;
    result.p_value = exact_p_value(result.u_statistic, a.size(), b.size());
  } else {
    result.method = UTestMethod::NormalApprox;
    result.p_value = normal_p_value(result.u_statistic, a.size(), b.size(), tie_term);
  }
  result.reject_at_005 = result.p_value <= kSignificanceLevel;
  return result;
}

}  // namespace premise
