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

#include "watchdog/distributions.h"

#include <cmath>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "watchdog/random.h"
#include "watchdog/status.h"

namespace watchdog {
namespace {

absl::Status CheckUnique(const std::vector<std::string>& labels,
                         absl::string_view axis) {
  std::set<std::string> seen;
  for (const std::string& label : labels) {
    if (!seen.insert(label).second) {
      return MakeError(ErrorKind::kDuplicateLabel,
                       absl::StrCat("duplicate ", axis, " label '", label, "'"));
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<JointDistribution> JointDistribution::Create(
    std::vector<std::string> s_labels, std::vector<std::string> x_labels,
    std::vector<std::vector<double>> probs) {
  if (s_labels.empty() || x_labels.size() < 2) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "joint table must be at least 1x2");
  }
  if (probs.size() != s_labels.size()) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("expected ", s_labels.size(), " rows, got ",
                                  probs.size()));
  }
  if (absl::Status st = CheckUnique(s_labels, "S"); !st.ok()) return st;
  if (absl::Status st = CheckUnique(x_labels, "X"); !st.ok()) return st;

  JointDistribution joint;
  const std::size_t n_x = x_labels.size();
  joint.probs_.reserve(probs.size() * n_x);
  for (std::size_t s = 0; s < probs.size(); ++s) {
    if (probs[s].size() != n_x) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("row ", s, " has ", probs[s].size(),
                                    " entries, expected ", n_x));
    }
    for (std::size_t x = 0; x < n_x; ++x) {
      const double p = probs[s][x];
      if (!std::isfinite(p) || p < 0.0) {
        return MakeError(ErrorKind::kNegativeEntry,
                         absl::StrCat("p(", s_labels[s], ",", x_labels[x],
                                      ") = ", p));
      }
      joint.probs_.push_back(p);
    }
  }

  joint.p_s_.assign(s_labels.size(), 0.0);
  joint.p_x_.assign(n_x, 0.0);
  for (std::size_t s = 0; s < s_labels.size(); ++s) {
    for (std::size_t x = 0; x < n_x; ++x) {
      joint.p_s_[s] += joint.probs_[s * n_x + x];
    }
  }
  for (std::size_t x = 0; x < n_x; ++x) {
    for (std::size_t s = 0; s < s_labels.size(); ++s) {
      joint.p_x_[x] += joint.probs_[s * n_x + x];
    }
  }
  for (double p : joint.p_x_) joint.total_ += p;

  if (std::abs(joint.total_ - 1.0) > kSumTolerance) {
    return MakeError(ErrorKind::kSumNotOne,
                     absl::StrCat("table sums to ", joint.total_));
  }
  for (std::size_t s = 0; s < s_labels.size(); ++s) {
    if (joint.p_s_[s] <= 0.0) {
      return MakeError(ErrorKind::kZeroMarginal,
                       absl::StrCat("p(", s_labels[s], ") = 0"));
    }
  }
  for (std::size_t x = 0; x < n_x; ++x) {
    if (joint.p_x_[x] <= 0.0) {
      return MakeError(ErrorKind::kZeroMarginal,
                       absl::StrCat("p(", x_labels[x], ") = 0"));
    }
  }
  joint.s_labels_ = std::move(s_labels);
  joint.x_labels_ = std::move(x_labels);
  return joint;
}

absl::StatusOr<std::vector<double>> JointDistribution::ConditionalXGivenS(
    int s) const {
  if (s < 0 || s >= num_s()) {
    return MakeError(ErrorKind::kIndexOutOfRange,
                     absl::StrCat("s index ", s, " not in [0, ", num_s(), ")"));
  }
  std::vector<double> cond(num_x());
  for (int x = 0; x < num_x(); ++x) cond[x] = prob(s, x) / p_s_[s];
  return cond;
}

int JointDistribution::FindX(const std::string& label) const {
  for (int x = 0; x < num_x(); ++x) {
    if (x_labels_[x] == label) return x;
  }
  return -1;
}

int JointDistribution::FindS(const std::string& label) const {
  for (int s = 0; s < num_s(); ++s) {
    if (s_labels_[s] == label) return s;
  }
  return -1;
}

absl::Status DistributionSpec::Validate() const {
  if (n_s < 1) {
    return MakeError(ErrorKind::kInvalidArgument, "n_s must be at least 1");
  }
  if (n_x < 2) {
    return MakeError(ErrorKind::kInvalidArgument, "n_x must be at least 2");
  }
  return absl::OkStatus();
}

absl::StatusOr<JointDistribution> RandomJoint(const DistributionSpec& spec) {
  if (absl::Status st = spec.Validate(); !st.ok()) return st;
  Rng rng(spec.seed);
  std::vector<std::vector<double>> probs(spec.n_s,
                                         std::vector<double>(spec.n_x));
  double total = 0.0;
  for (auto& row : probs) {
    for (double& p : row) {
      p = rng.Uniform();
      total += p;
    }
  }
  for (auto& row : probs) {
    for (double& p : row) p /= total;
  }
  std::vector<std::string> s_labels, x_labels;
  for (int s = 0; s < spec.n_s; ++s) s_labels.push_back(absl::StrCat("s", s));
  for (int x = 0; x < spec.n_x; ++x) x_labels.push_back(absl::StrCat("x", x));
  return JointDistribution::Create(std::move(s_labels), std::move(x_labels),
                                   std::move(probs));
}

absl::StatusOr<JointDistribution> ProductJoint(absl::Span<const double> p_s,
                                               absl::Span<const double> p_x) {
  std::vector<std::vector<double>> probs(p_s.size(),
                                         std::vector<double>(p_x.size()));
  std::vector<std::string> s_labels, x_labels;
  for (std::size_t s = 0; s < p_s.size(); ++s) {
    s_labels.push_back(absl::StrCat("s", s));
    for (std::size_t x = 0; x < p_x.size(); ++x) probs[s][x] = p_s[s] * p_x[x];
  }
  for (std::size_t x = 0; x < p_x.size(); ++x) {
    x_labels.push_back(absl::StrCat("x", x));
  }
  return JointDistribution::Create(std::move(s_labels), std::move(x_labels),
                                   std::move(probs));
}

}  // namespace watchdog
