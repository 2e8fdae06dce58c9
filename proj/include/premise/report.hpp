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

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "premise/metrics.hpp"

namespace premise {

// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

// Four decimals, the precision used in published result tables; "NA" for
// a missing value.
std::string format_metric(std::optional<double> value);

// "<label>\t<Accuracy>\t<F1>\t<ROC AUC>"
std::string format_metrics_row(std::string_view label, const MetricTriple& metrics);

// Two sections: a summary table with one row per split and columns
// `split Accuracy F1 ROC AUC`, then per-category confusion matrices with
// columns `split category n tp fp fn tn Accuracy F1 ROC AUC`.
void write_eval_report(std::ostream& out, const std::vector<EvalReport>& reports);

}  // namespace premise
