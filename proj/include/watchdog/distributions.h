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

#ifndef WATCHDOG_DISTRIBUTIONS_H_
#define WATCHDOG_DISTRIBUTIONS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"

namespace watchdog {

// Tolerance on |sum(p) - 1| accepted when a joint table is constructed.
inline constexpr double kSumTolerance = 1e-9;

// A validated finite joint distribution p(s, x) over a sensitive alphabet S
// (rows) and a useful alphabet X (columns). Immutable once created.
//
// The marginals are the row and column sums of the stored table, computed in
// index order. total() is the sum of p_x() in index order; all derived
// quantities (lifts, subset probabilities, entropies) are normalized by it, so
// tables that sum to 1 only within kSumTolerance still behave as
// distributions and the full-alphabet subset lift is exactly zero.
class JointDistribution {
 public:
  // Errors: NegativeEntry, SumNotOne, ZeroMarginal, DuplicateLabel, and
  // InvalidArgument for ragged or undersized tables (fewer than 1x2).
  static absl::StatusOr<JointDistribution> Create(
      std::vector<std::string> s_labels, std::vector<std::string> x_labels,
      std::vector<std::vector<double>> probs);

  int num_s() const { return static_cast<int>(s_labels_.size()); }
  int num_x() const { return static_cast<int>(x_labels_.size()); }

  const std::vector<std::string>& s_labels() const { return s_labels_; }
  const std::vector<std::string>& x_labels() const { return x_labels_; }

  double prob(int s, int x) const { return probs_[s * num_x() + x]; }
  absl::Span<const double> row(int s) const {
    return absl::MakeConstSpan(probs_).subspan(s * num_x(), num_x());
  }
  absl::Span<const double> p_s() const { return p_s_; }
  absl::Span<const double> p_x() const { return p_x_; }
  double total() const { return total_; }

  // p(x|s) = p(s,x) / p(s). Errors: IndexOutOfRange.
  absl::StatusOr<std::vector<double>> ConditionalXGivenS(int s) const;

  // Returns the index of a label, or -1.
  int FindX(const std::string& label) const;
  int FindS(const std::string& label) const;

 private:
  JointDistribution() = default;

  std::vector<std::string> s_labels_;
  std::vector<std::string> x_labels_;
  std::vector<double> probs_;  // row-major |S| x |X|
  std::vector<double> p_s_;
  std::vector<double> p_x_;
  double total_ = 0.0;
};

struct DistributionSpec {
  int n_s = 1;
  int n_x = 2;
  std::uint64_t seed = 0;

  absl::Status Validate() const;
};

// Draws i.i.d. Uniform(0,1) cells and normalizes them to sum to one. Labels
// are "s0".."s{n_s-1}" and "x0".."x{n_x-1}". Deterministic in the spec.
absl::StatusOr<JointDistribution> RandomJoint(const DistributionSpec& spec);

// Product distribution p(s)p(x); handy for independence checks.
absl::StatusOr<JointDistribution> ProductJoint(absl::Span<const double> p_s,
                                               absl::Span<const double> p_x);

// Parsing and serialization. The delimited format has a header row of X
// labels (first cell blank) followed by one row per S symbol. The structured
// format is a JSON object {"s_labels": [...], "x_labels": [...], "probs":
// [[...], ...]}. Both writers emit 17 significant digits.
absl::StatusOr<JointDistribution> ParseJointCsv(absl::string_view text);
absl::StatusOr<JointDistribution> ParseJointJson(absl::string_view text);
std::string JointToCsv(const JointDistribution& joint);
std::string JointToJson(const JointDistribution& joint);

// Picks the format from the first non-blank character ('{' means JSON).
absl::StatusOr<JointDistribution> ParseJoint(absl::string_view text);
absl::StatusOr<JointDistribution> LoadJointFile(const std::string& path);

}  // namespace watchdog

#endif  // WATCHDOG_DISTRIBUTIONS_H_
