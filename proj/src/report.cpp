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

#include "premise/report.hpp"

#include <charconv>
#include <cstdio>
#include <ostream>

namespace premise {

std::string format_real(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return ec == std::errc() ? std::string(buffer, end) : std::string("nan");
}

std::string format_metric(std::optional<double> value) {
  if (!value) return "NA";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.4f", *value);
  return buffer;
}

std::string format_metrics_row(std::string_view label, const MetricTriple& metrics) {
  std::string row(label);
  row += '\t' + format_metric(metrics.accuracy);
  row += '\t' + format_metric(metrics.f1);
  row += '\t' + format_metric(metrics.roc_auc);
  return row;
}

void write_eval_report(std::ostream& out, const std::vector<EvalReport>& reports) {
  out << "split\tAccuracy\tF1\tROC AUC\n";
  for (const EvalReport& report : reports) {
    out << format_metrics_row(report.split, report.overall) << '\n';
  }
  out << '\n';
  out << "split\tcategory\tn\ttp\tfp\tfn\ttn\tAccuracy\tF1\tROC AUC\n";
  for (const EvalReport& report : reports) {
    for (const CategoryReport& category : report.categories) {
      const ConfusionMatrix& m = category.matrix;
      out << report.split << '\t' << claim_name(category.claim) << '\t' << m.total()
          << '\t' << m.tp << '\t' << m.fp << '\t' << m.fn << '\t' << m.tn;
      if (category.metrics) {
        out << '\t' << format_metric(category.metrics->accuracy) << '\t'
            << format_metric(category.metrics->f1) << '\t'
            << format_metric(category.metrics->roc_auc);
      } else {
        out << "\tNA\tNA\tNA";
      }
      out << '\n';
    }
    const ConfusionMatrix& m = report.matrix;
    out << report.split << "\tall\t" << m.total() << '\t' << m.tp << '\t' << m.fp << '\t'
        << m.fn << '\t' << m.tn << '\t' << format_metric(report.overall.accuracy) << '\t'
        << format_metric(report.overall.f1) << '\t'
        << format_metric(report.overall.roc_auc) << '\n';
  }
}

}  // namespace premise
