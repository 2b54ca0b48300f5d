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

#ifndef WATCHDOG_RELAXATION_H_
#define WATCHDOG_RELAXATION_H_

#include <cmath>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "watchdog/distributions.h"
#include "watchdog/lift.h"
#include "watchdog/utility.h"

namespace watchdog {

inline constexpr double kDeltaTolerance = 1e-12;
inline constexpr double kNmilTolerance = 1e-12;

// Brute force visits 2^|X| partitions; beyond this many symbols a run takes
// seconds to minutes.
inline constexpr int kBruteForceWarnAlphabet = 16;

struct RelaxationParams {
  double eps = 0.0;
  double delta = 0.0;
  // Hard cap on any abs-lift, +inf for none.
  double eps_bar = HUGE_VAL;

  // Requires eps >= 0, 0 < delta < 1, eps_bar > eps.
  absl::Status Validate() const;
};

struct GreedyStep {
  int candidate = 0;
  bool accepted = false;
  // "accepted", "nmil_not_improved", "delta_exceeded" or "eps_bar_exceeded".
  std::string reason;
  double nmil_after = 0.0;
  double delta_total_after = 0.0;
  double eps_eff_after = 0.0;
};

struct PrivacyReport {
  Partition partition;
  double eps = 0.0;
  double delta = 0.0;
  double eps_bar = HUGE_VAL;
  double eps_eff = 0.0;
  double eps_c = 0.0;  // eps of the randomized set, 0 if empty
  double delta_total = 0.0;
  double delta0 = 0.0;
  UtilityReport utility;
  bool feasible = false;  // delta_total <= delta
  std::vector<GreedyStep> trace;
};

// Delta(eps, Q): mass p(s, Q) of the sensitive symbols whose subset lift
// breaches eps. Errors: EmptySubset, IndexOutOfRange.
absl::StatusOr<double> DeltaOfSubset(const JointDistribution& joint, double eps,
                                     absl::Span<const int> subset);

// Sum of singleton Deltas over the kept side plus Delta of the randomized
// side (0 when it is empty). A singleton randomized side is counted at its
// full per-symbol breach, since randomizing one symbol changes nothing.
double DeltaTotal(const JointDistribution& joint, double eps,
                  const Partition& partition);

// DeltaTotal at the pure watchdog partition.
double Delta0(const JointDistribution& joint, double eps);

// Candidates the greedy pass may move back to the kept side: the watchdog's
// randomized symbols minus those with Delta(eps,{x}) > delta or eps(x) >
// eps_bar, ordered by ascending Delta then index.
std::vector<int> RefineCandidates(const JointDistribution& joint,
                                  const RelaxationParams& params);

// Evaluates every report field for an arbitrary partition.
absl::StatusOr<PrivacyReport> MakeReport(const JointDistribution& joint,
                                         const Partition& partition,
                                         const RelaxationParams& params);

// Greedy (eps, delta)-partitioning. Starting from the watchdog partition it
// walks the refined candidates and moves a symbol to the kept side when NMIL
// strictly improves, DeltaTotal stays <= delta and the effective eps stays
// <= eps_bar.
//
// Errors: DeltaNotAboveDelta0 when delta <= delta0 (the message carries
// delta0), DegenerateX, Infeasible when the final partition still breaks the
// eps_bar cap (only possible when the watchdog start already does and no move
// repairs it).
absl::StatusOr<PrivacyReport> GreedyPartition(const JointDistribution& joint,
                                              const RelaxationParams& params);

struct BruteForceOptions {
  int max_alphabet = 20;
  // Also require eps_eff <= eps_bar, so the oracle searches the same family
  // the greedy pass does. Off gives the plain delta-feasible family.
  bool cap_eps_bar = true;
  // Worker threads; results do not depend on this.
  int jobs = 1;
};

// Exhaustive search over all 2^|X| bi-partitions for the feasible one with
// least NMIL; ties go to fewer randomized symbols, then the lexicographically
// smallest randomized index list. Cost grows as 2^|X|, see
// kBruteForceWarnAlphabet. Errors: AlphabetTooLarge, Infeasible.
absl::StatusOr<PrivacyReport> BruteForcePartition(
    const JointDistribution& joint, const RelaxationParams& params,
    const BruteForceOptions& options = {});

}  // namespace watchdog

#endif  // WATCHDOG_RELAXATION_H_
