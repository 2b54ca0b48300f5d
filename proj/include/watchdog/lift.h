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

#ifndef WATCHDOG_LIFT_H_
#define WATCHDOG_LIFT_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "watchdog/distributions.h"

namespace watchdog {

// Slack used whenever a lift is compared against a threshold, so that
// boundary symbols land on the same side on every platform.
inline constexpr double kLiftTolerance = 1e-12;

// Log-lifts in nats. Zero cells give -inf lifts and +inf per-symbol maxima;
// no entry is ever NaN.
struct LiftTable {
  int num_s = 0;
  int num_x = 0;
  std::vector<double> lift;   // row-major |S| x |X|, i(s,x)
  std::vector<double> eps_x;  // max_s |i(s,x)|

  double at(int s, int x) const { return lift[s * num_x + x]; }
};

LiftTable ComputeLiftTable(const JointDistribution& joint);

// ln(p_sq / p_s) - ln(p_q / total), the shared lift kernel. Every lift in the
// library, per-symbol, per-subset or realized on a channel output, goes
// through this so that identical inputs give bit-identical values.
double LogLift(double p_sq, double p_s, double p_q, double total);

// (kept, randomized) bi-partition of the X alphabet; both sorted ascending.
struct Partition {
  std::vector<int> kept;
  std::vector<int> randomized;

  // Builds the partition whose randomized side is `randomized`. Errors:
  // IndexOutOfRange, InvalidArgument on duplicates.
  static absl::StatusOr<Partition> FromRandomized(int num_x,
                                                  std::vector<int> randomized);

  friend bool operator==(const Partition&, const Partition&) = default;
};

// Sorted, deduplicated copy of `subset` after range checks. Errors:
// EmptySubset, IndexOutOfRange.
absl::StatusOr<std::vector<int>> CanonicalSubset(const JointDistribution& joint,
                                                 absl::Span<const int> subset);

// i(s, Q) = ln(p(Q|s) / p(Q)). Errors: EmptySubset, IndexOutOfRange.
absl::StatusOr<double> SubsetLift(const JointDistribution& joint,
                                  absl::Span<const int> subset, int s);

// Lifts i(s, Q) for every s.
absl::StatusOr<std::vector<double>> SubsetLifts(const JointDistribution& joint,
                                                absl::Span<const int> subset);

// max_s |i(s, Q)|. Errors: EmptySubset, IndexOutOfRange.
absl::StatusOr<double> EpsilonOfSubset(const JointDistribution& joint,
                                       absl::Span<const int> subset);

// kept = {x : eps(x) <= eps + kLiftTolerance}, randomized = the rest.
Partition WatchdogPartition(const JointDistribution& joint, double eps);

struct LadderEntry {
  int x = 0;
  double eps = 0.0;
};

// Per-symbol maxima sorted non-increasing; equal values keep ascending index
// order. For eps in [ladder[j].eps, ladder[j-1].eps) the watchdog randomizes
// exactly the first j entries.
using CriticalLadder = std::vector<LadderEntry>;

CriticalLadder CriticalEpsilons(const JointDistribution& joint);

// max( max_{x in kept} eps(x), eps(randomized) ), with each term 0 when its
// side is empty.
double EffectiveEpsilon(const JointDistribution& joint,
                        const Partition& partition);

// Delimited export: one "s_label,x_label,lift" line per cell, with header.
std::string LiftTableToCsv(const JointDistribution& joint,
                           const LiftTable& table);

}  // namespace watchdog

#endif  // WATCHDOG_LIFT_H_
