// Copyright 2026 The Privacy Watchdog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "watchdog/utility.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "absl/strings/str_cat.h"
#include "watchdog/status.h"

namespace watchdog {
namespace {

// p(Q) H(q) written as sum_x p(x) ln(p(Q)/p(x)); every term is non-negative,
// so the loss is monotone in Q term by term.
double RandomizationLoss(const JointDistribution& joint,
                         absl::Span<const int> subset, double* p_q_out) {
  double p_q = 0.0;
  for (int x : subset) p_q += joint.p_x()[x];
  double loss = 0.0;
  for (int x : subset) {
    const double p = joint.p_x()[x];
    loss += p * std::log(p_q / p);
  }
  if (p_q_out != nullptr) *p_q_out = p_q / joint.total();
  return loss / joint.total();
}

absl::Status CheckIndices(const JointDistribution& joint,
                          absl::Span<const int> subset) {
  std::vector<bool> seen(joint.num_x(), false);
  for (int x : subset) {
    if (x < 0 || x >= joint.num_x()) {
      return MakeError(ErrorKind::kIndexOutOfRange,
                       absl::StrCat("x index ", x, " out of range"));
    }
    if (seen[x]) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("x index ", x, " listed twice"));
    }
    seen[x] = true;
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<double> Entropy(absl::Span<const double> dist) {
  double sum = 0.0;
  for (double p : dist) {
    if (!std::isfinite(p) || p < 0.0) {
      return MakeError(ErrorKind::kInvalidDistribution,
                       absl::StrCat("entry ", p, " is not a probability"));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    return MakeError(ErrorKind::kInvalidDistribution,
                     absl::StrCat("distribution sums to ", sum));
  }
  double h = 0.0;
  for (double p : dist) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double EntropyX(const JointDistribution& joint) {
  double h = 0.0;
  for (double p : joint.p_x()) h += p * std::log(joint.total() / p);
  return h / joint.total();
}

double MutualInformation(const JointDistribution& joint,
                         const Channel& channel) {
  const int n = channel.size();
  std::vector<double> p_y(n, 0.0);
  for (int x = 0; x < n; ++x) {
    const double p_x = joint.p_x()[x] / joint.total();
    for (int y = 0; y < n; ++y) p_y[y] += channel.at(x, y) * p_x;
  }
  double mi = 0.0;
  for (int x = 0; x < n; ++x) {
    const double p_x = joint.p_x()[x] / joint.total();
    for (int y = 0; y < n; ++y) {
      const double w = channel.at(x, y);
      if (w <= 0.0) continue;
      mi += p_x * w * std::log(w / p_y[y]);
    }
  }
  return std::max(mi, 0.0);
}

absl::StatusOr<double> Nmil(const JointDistribution& joint,
                            absl::Span<const int> subset) {
  if (absl::Status st = CheckIndices(joint, subset); !st.ok()) return st;
  const double h_x = EntropyX(joint);
  if (h_x <= 0.0) {
    return MakeError(ErrorKind::kDegenerateX, "H(X) = 0");
  }
  if (subset.size() < 2) return 0.0;
  return std::clamp(RandomizationLoss(joint, subset, nullptr) / h_x, 0.0, 1.0);
}

absl::StatusOr<UtilityReport> ComputeUtility(const JointDistribution& joint,
                                             const Partition& partition) {
  absl::StatusOr<double> nmil = Nmil(joint, partition.randomized);
  if (!nmil.ok()) return nmil.status();
  UtilityReport report;
  report.h_x = EntropyX(joint);
  const double loss =
      RandomizationLoss(joint, partition.randomized, &report.p_qc);
  report.h_q = report.p_qc > 0.0 ? loss / report.p_qc : 0.0;
  report.mi_xy = report.h_x - loss;
  report.nmil = *nmil;
  return report;
}

}  // namespace watchdog
