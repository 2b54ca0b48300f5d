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

#ifndef WATCHDOG_UTILITY_H_
#define WATCHDOG_UTILITY_H_

#include "absl/status/statusor.h"
#include "absl/types/span.h"
#include "watchdog/distributions.h"
#include "watchdog/lift.h"
#include "watchdog/mechanism.h"

namespace watchdog {

// All quantities are in nats.
struct UtilityReport {
  double h_x = 0.0;
  double mi_xy = 0.0;
  double p_qc = 0.0;  // mass of the randomized set
  double h_q = 0.0;   // entropy of p(x) renormalized on the randomized set
  double nmil = 0.0;
};

// -sum p ln p with 0 ln 0 = 0. Errors: InvalidDistribution (negative entry or
// sum off by more than kSumTolerance).
absl::StatusOr<double> Entropy(absl::Span<const double> dist);

// H(X) of the (normalized) X marginal.
double EntropyX(const JointDistribution& joint);

// I(X;Y) evaluated directly from the channel matrix.
double MutualInformation(const JointDistribution& joint, const Channel& channel);

// Normalized mutual information loss of randomizing `subset`:
// p(subset) H(q) / H(X). Zero for an empty or singleton subset.
// Errors: DegenerateX, IndexOutOfRange.
absl::StatusOr<double> Nmil(const JointDistribution& joint,
                            absl::Span<const int> subset);

// Closed-form utility of any X-invariant mechanism built on `partition`:
// I(X;Y) = H(X) - p(randomized) H(q). Errors: DegenerateX.
absl::StatusOr<UtilityReport> ComputeUtility(const JointDistribution& joint,
                                             const Partition& partition);

}  // namespace watchdog

#endif  // WATCHDOG_UTILITY_H_
