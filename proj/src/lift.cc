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

#include "watchdog/lift.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "watchdog/status.h"

namespace watchdog {

double LogLift(double p_sq, double p_s, double p_q, double total) {
  if (p_sq <= 0.0) return -HUGE_VAL;
  return std::log((p_sq / p_s) / (p_q / total));
}

LiftTable ComputeLiftTable(const JointDistribution& joint) {
  LiftTable table;
  table.num_s = joint.num_s();
  table.num_x = joint.num_x();
  table.lift.resize(table.num_s * table.num_x);
  table.eps_x.assign(table.num_x, 0.0);
  for (int s = 0; s < table.num_s; ++s) {
    for (int x = 0; x < table.num_x; ++x) {
      const double lift = LogLift(joint.prob(s, x), joint.p_s()[s],
                                  joint.p_x()[x], joint.total());
      table.lift[s * table.num_x + x] = lift;
      table.eps_x[x] = std::max(table.eps_x[x], std::abs(lift));
    }
  }
  return table;
}

absl::StatusOr<Partition> Partition::FromRandomized(int num_x,
                                                    std::vector<int> randomized) {
  std::sort(randomized.begin(), randomized.end());
  std::vector<bool> in_randomized(num_x, false);
  for (std::size_t i = 0; i < randomized.size(); ++i) {
    const int x = randomized[i];
    if (x < 0 || x >= num_x) {
      return MakeError(ErrorKind::kIndexOutOfRange,
                       absl::StrCat("x index ", x, " not in [0, ", num_x, ")"));
    }
    if (i > 0 && randomized[i - 1] == x) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("x index ", x, " listed twice"));
    }
    in_randomized[x] = true;
  }
  Partition partition;
  for (int x = 0; x < num_x; ++x) {
    if (!in_randomized[x]) partition.kept.push_back(x);
  }
  partition.randomized = std::move(randomized);
  return partition;
}

absl::StatusOr<std::vector<int>> CanonicalSubset(const JointDistribution& joint,
                                                 absl::Span<const int> subset) {
  if (subset.empty()) {
    return MakeError(ErrorKind::kEmptySubset, "subset of X must be non-empty");
  }
  std::vector<int> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.front() < 0 || sorted.back() >= joint.num_x()) {
    return MakeError(ErrorKind::kIndexOutOfRange,
                     absl::StrCat("subset index outside [0, ", joint.num_x(),
                                  ")"));
  }
  return sorted;
}

absl::StatusOr<std::vector<double>> SubsetLifts(const JointDistribution& joint,
                                                absl::Span<const int> subset) {
  absl::StatusOr<std::vector<int>> canonical = CanonicalSubset(joint, subset);
  if (!canonical.ok()) return canonical.status();
  double p_q = 0.0;
  for (int x : *canonical) p_q += joint.p_x()[x];
  std::vector<double> lifts(joint.num_s());
  for (int s = 0; s < joint.num_s(); ++s) {
    double p_sq = 0.0;
    for (int x : *canonical) p_sq += joint.prob(s, x);
    lifts[s] = LogLift(p_sq, joint.p_s()[s], p_q, joint.total());
  }
  return lifts;
}

absl::StatusOr<double> SubsetLift(const JointDistribution& joint,
                                  absl::Span<const int> subset, int s) {
  if (s < 0 || s >= joint.num_s()) {
    return MakeError(ErrorKind::kIndexOutOfRange,
                     absl::StrCat("s index ", s, " not in [0, ", joint.num_s(),
                                  ")"));
  }
  absl::StatusOr<std::vector<double>> lifts = SubsetLifts(joint, subset);
  if (!lifts.ok()) return lifts.status();
  return (*lifts)[s];
}

absl::StatusOr<double> EpsilonOfSubset(const JointDistribution& joint,
                                       absl::Span<const int> subset) {
  absl::StatusOr<std::vector<double>> lifts = SubsetLifts(joint, subset);
  if (!lifts.ok()) return lifts.status();
  double eps = 0.0;
  for (double lift : *lifts) eps = std::max(eps, std::abs(lift));
  return eps;
}

Partition WatchdogPartition(const JointDistribution& joint, double eps) {
  const LiftTable table = ComputeLiftTable(joint);
  Partition partition;
  for (int x = 0; x < joint.num_x(); ++x) {
    if (table.eps_x[x] <= eps + kLiftTolerance) {
      partition.kept.push_back(x);
    } else {
      partition.randomized.push_back(x);
    }
  }
  return partition;
}

CriticalLadder CriticalEpsilons(const JointDistribution& joint) {
  const LiftTable table = ComputeLiftTable(joint);
  CriticalLadder ladder;
  for (int x = 0; x < joint.num_x(); ++x) ladder.push_back({x, table.eps_x[x]});
  std::stable_sort(ladder.begin(), ladder.end(),
                   [](const LadderEntry& a, const LadderEntry& b) {
                     return a.eps > b.eps;
                   });
  return ladder;
}

double EffectiveEpsilon(const JointDistribution& joint,
                        const Partition& partition) {
  const LiftTable table = ComputeLiftTable(joint);
  double eps = 0.0;
  for (int x : partition.kept) eps = std::max(eps, table.eps_x[x]);
  if (!partition.randomized.empty()) {
    eps = std::max(eps, *EpsilonOfSubset(joint, partition.randomized));
  }
  return eps;
}

std::string LiftTableToCsv(const JointDistribution& joint,
                           const LiftTable& table) {
  std::string out = "s,x,lift\n";
  for (int s = 0; s < table.num_s; ++s) {
    for (int x = 0; x < table.num_x; ++x) {
      absl::StrAppend(&out, joint.s_labels()[s], ",", joint.x_labels()[x],
                      absl::StrFormat(",%.12g\n", table.at(s, x)));
    }
  }
  return out;
}

}  // namespace watchdog
