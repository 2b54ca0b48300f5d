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

#ifndef WATCHDOG_MECHANISM_H_
#define WATCHDOG_MECHANISM_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "watchdog/distributions.h"
#include "watchdog/lift.h"
#include "watchdog/random.h"

namespace watchdog {

inline constexpr double kRowSumTolerance = 1e-12;

// A square row-stochastic matrix p(y|x) whose output alphabet is the X
// alphabet itself.
class Channel {
 public:
  // Errors: InvalidArgument when the matrix is not |X|x|X|, has a negative
  // entry or a row whose sum is off by more than kRowSumTolerance.
  static absl::StatusOr<Channel> Create(int size, std::vector<double> entries);
  static Channel Identity(int size);

  int size() const { return size_; }
  double at(int x, int y) const { return entries_[x * size_ + y]; }
  absl::Span<const double> row(int x) const {
    return absl::MakeConstSpan(entries_).subspan(x * size_, size_);
  }

 private:
  Channel(int size, std::vector<double> entries)
      : size_(size), entries_(std::move(entries)) {}

  int size_ = 0;
  std::vector<double> entries_;
};

enum class RMode { kUniform, kMerge, kCustom };

// The watchdog release channel: kept symbols pass through unchanged and
// every randomized symbol is mapped to y with the same probability r(y),
// supported on the randomized set.
struct Mechanism {
  Partition partition;
  // r[i] is the mass placed on partition.randomized[i].
  std::vector<double> r;
  Channel channel = Channel::Identity(0);
};

// kUniform puts 1/|randomized| on every randomized symbol; kMerge puts all
// mass on the lowest-index randomized symbol; kCustom uses `custom_r`
// (indexed like partition.randomized). Errors: InvalidR, IndexOutOfRange.
absl::StatusOr<Mechanism> BuildMechanism(const JointDistribution& joint,
                                         const Partition& partition,
                                         RMode mode,
                                         absl::Span<const double> custom_r = {});

// Output-side statistics of Y under the chain S -> X -> Y.
struct OutputStats {
  std::vector<double> p_y;
  // Realized lifts i(s,y), row-major |S| x |Y|. Entries for unreachable y
  // (p(y) = 0) are left at 0 and flagged false in `reachable`.
  std::vector<double> i_sy;
  std::vector<bool> reachable;
  // p(s,y) = p(y|s) p(s), row-major, normalized to the table total.
  std::vector<double> p_sy;
  // max |i(s,y)| over s and reachable y in the randomized set (0 if none).
  double max_abs_lift_randomized = 0.0;
  // max |i(s,y)| over every s and reachable y.
  double max_abs_lift = 0.0;

  double lift(int s, int y) const { return i_sy[s * p_y.size() + y]; }
};

OutputStats ComputeOutputStats(const JointDistribution& joint,
                               const Channel& channel,
                               absl::Span<const int> randomized);
OutputStats ComputeOutputStats(const JointDistribution& joint,
                               const Mechanism& mechanism);

// Sum of p(s,y) over reachable (s,y) with |i(s,y)| > eps: the realized
// probability of an eps breach, computed from the distributions.
double RealizedBreachProbability(const JointDistribution& joint,
                                 const OutputStats& stats, double eps);

// Whether some channel on the subset keeps every |i(s,y)| within eps_prime,
// i.e. max_s |i(s, subset)| <= eps_prime. Errors: EmptySubset.
absl::StatusOr<bool> Attainable(const JointDistribution& joint,
                                absl::Span<const int> subset,
                                double eps_prime);

// The smallest abs-lift any randomization of the watchdog's randomized set
// can reach: max_s |i(s, X_eps^c)|, or 0 when nothing is randomized.
double EpsilonC(const JointDistribution& joint, double eps);

// A channel equal to the identity on kept symbols whose randomized-block rows
// are given explicitly; rows[i] is the distribution of partition.randomized[i]
// over partition.randomized.
absl::StatusOr<Channel> BlockChannel(const Partition& partition,
                                     absl::Span<const std::vector<double>> rows);

// Empirical probe of the optimality of EpsilonC. Samples `n_channels`
// channels whose randomized-block rows are i.i.d. flat on the simplex,
// returns the smallest realized max abs-lift over the randomized outputs.
// This is evidence, not proof. Errors: SingletonOrEmptyRandomizedSet,
// InvalidArgument for n_channels < 1.
absl::StatusOr<double> FalsifyOptimality(const JointDistribution& joint,
                                         double eps, int n_channels,
                                         std::uint64_t seed);

// Delimited export "x,y,probability" of every channel cell, with header.
std::string MechanismToCsv(const JointDistribution& joint,
                           const Channel& channel);

// A channel read back from MechanismToCsv output, with its label alphabet in
// first-appearance order.
struct LabeledChannel {
  std::vector<std::string> labels;
  Channel channel = Channel::Identity(0);
};

absl::StatusOr<LabeledChannel> ParseMechanismCsv(absl::string_view text);

// Draws y ~ p(.|x) for a stream of inputs. Deterministic given the seed.
class Sanitizer {
 public:
  Sanitizer(Channel channel, std::uint64_t seed);

  int Apply(int x);

 private:
  Channel channel_;
  Rng rng_;
};

}  // namespace watchdog

#endif  // WATCHDOG_MECHANISM_H_
