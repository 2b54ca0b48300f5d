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

#include "watchdog/relaxation.h"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <thread>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "watchdog/mechanism.h"
#include "watchdog/status.h"

namespace watchdog {
namespace {

// Singleton Delta for every x, read off the per-cell lifts.
std::vector<double> SingletonDeltas(const JointDistribution& joint,
                                    const LiftTable& table, double eps) {
  std::vector<double> deltas(joint.num_x(), 0.0);
  for (int x = 0; x < joint.num_x(); ++x) {
    double breach = 0.0;
    for (int s = 0; s < joint.num_s(); ++s) {
      if (std::abs(table.at(s, x)) > eps + kLiftTolerance) {
        breach += joint.prob(s, x);
      }
    }
    deltas[x] = breach / joint.total();
  }
  return deltas;
}

// Candidate of the exhaustive search, ordered by (nmil, size, indices).
struct Candidate {
  double nmil = 0.0;
  std::vector<int> randomized;

  bool BetterThan(const Candidate& other) const {
    if (nmil != other.nmil) return nmil < other.nmil;
    if (randomized.size() != other.randomized.size()) {
      return randomized.size() < other.randomized.size();
    }
    return randomized < other.randomized;
  }
};

// Evaluates partitions given as bit masks with the same arithmetic, in the
// same summation order, as DeltaTotal / EffectiveEpsilon / Nmil.
class MaskEvaluator {
 public:
  MaskEvaluator(const JointDistribution& joint, const RelaxationParams& params,
                bool cap_eps_bar)
      : joint_(joint),
        params_(params),
        cap_eps_bar_(cap_eps_bar),
        table_(ComputeLiftTable(joint)),
        singleton_delta_(SingletonDeltas(joint, table_, params.eps)),
        h_x_(EntropyX(joint)) {}

  // Returns the NMIL of the randomized side when the partition is feasible.
  std::optional<double> Evaluate(std::uint64_t mask) {
    const int n_x = joint_.num_x();
    double delta_total = 0.0;
    double eps_eff = 0.0;
    for (int x = 0; x < n_x; ++x) {
      if (mask >> x & 1) continue;
      delta_total += singleton_delta_[x];
      eps_eff = std::max(eps_eff, table_.eps_x[x]);
    }
    if (mask == 0) {
      return Feasible(delta_total, eps_eff) ? std::optional<double>(0.0)
                                            : std::nullopt;
    }
    double p_q = 0.0;
    int count = 0;
    for (int x = 0; x < n_x; ++x) {
      if (mask >> x & 1) {
        p_q += joint_.p_x()[x];
        ++count;
      }
    }
    double breach = 0.0;
    for (int s = 0; s < joint_.num_s(); ++s) {
      double p_sq = 0.0;
      for (int x = 0; x < n_x; ++x) {
        if (mask >> x & 1) p_sq += joint_.prob(s, x);
      }
      const double lift = LogLift(p_sq, joint_.p_s()[s], p_q, joint_.total());
      if (std::abs(lift) > params_.eps + kLiftTolerance) breach += p_sq;
      eps_eff = std::max(eps_eff, std::abs(lift));
    }
    delta_total += breach / joint_.total();
    if (!Feasible(delta_total, eps_eff)) return std::nullopt;
    if (count < 2) return 0.0;
    double loss = 0.0;
    for (int x = 0; x < n_x; ++x) {
      if (mask >> x & 1) {
        const double p = joint_.p_x()[x];
        loss += p * std::log(p_q / p);
      }
    }
    return std::clamp(loss / joint_.total() / h_x_, 0.0, 1.0);
  }

 private:
  bool Feasible(double delta_total, double eps_eff) const {
    if (delta_total > params_.delta + kDeltaTolerance) return false;
    return !cap_eps_bar_ || eps_eff <= params_.eps_bar + kLiftTolerance;
  }

  const JointDistribution& joint_;
  RelaxationParams params_;
  bool cap_eps_bar_;
  LiftTable table_;
  std::vector<double> singleton_delta_;
  double h_x_;
};

std::vector<int> MaskToIndices(std::uint64_t mask, int n_x) {
  std::vector<int> indices;
  for (int x = 0; x < n_x; ++x) {
    if (mask >> x & 1) indices.push_back(x);
  }
  return indices;
}

std::optional<Candidate> SearchRange(const JointDistribution& joint,
                                     const RelaxationParams& params,
                                     bool cap_eps_bar, std::uint64_t begin,
                                     std::uint64_t end) {
  MaskEvaluator evaluator(joint, params, cap_eps_bar);
  std::optional<Candidate> best;
  for (std::uint64_t mask = begin; mask < end; ++mask) {
    std::optional<double> nmil = evaluator.Evaluate(mask);
    if (!nmil.has_value()) continue;
    Candidate candidate{*nmil, MaskToIndices(mask, joint.num_x())};
    if (!best.has_value() || candidate.BetterThan(*best)) {
      best = std::move(candidate);
    }
  }
  return best;
}

}  // namespace

absl::Status RelaxationParams::Validate() const {
  if (!(eps >= 0.0) || std::isinf(eps)) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "eps must be a finite non-negative number");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("delta must lie in (0, 1), got ", delta));
  }
  if (!(eps_bar > eps)) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("eps_bar (", eps_bar,
                                  ") must exceed eps (", eps, ")"));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> DeltaOfSubset(const JointDistribution& joint, double eps,
                                     absl::Span<const int> subset) {
  absl::StatusOr<std::vector<int>> canonical = CanonicalSubset(joint, subset);
  if (!canonical.ok()) return canonical.status();
  double p_q = 0.0;
  for (int x : *canonical) p_q += joint.p_x()[x];
  double breach = 0.0;
  for (int s = 0; s < joint.num_s(); ++s) {
    double p_sq = 0.0;
    for (int x : *canonical) p_sq += joint.prob(s, x);
    const double lift = LogLift(p_sq, joint.p_s()[s], p_q, joint.total());
    if (std::abs(lift) > eps + kLiftTolerance) breach += p_sq;
  }
  return breach / joint.total();
}

double DeltaTotal(const JointDistribution& joint, double eps,
                  const Partition& partition) {
  const std::vector<double> singleton =
      SingletonDeltas(joint, ComputeLiftTable(joint), eps);
  double total = 0.0;
  for (int x : partition.kept) total += singleton[x];
  if (!partition.randomized.empty()) {
    total += *DeltaOfSubset(joint, eps, partition.randomized);
  }
  return total;
}

double Delta0(const JointDistribution& joint, double eps) {
  return DeltaTotal(joint, eps, WatchdogPartition(joint, eps));
}

std::vector<int> RefineCandidates(const JointDistribution& joint,
                                  const RelaxationParams& params) {
  const LiftTable table = ComputeLiftTable(joint);
  const std::vector<double> singleton =
      SingletonDeltas(joint, table, params.eps);
  std::vector<int> candidates;
  for (int x : WatchdogPartition(joint, params.eps).randomized) {
    if (singleton[x] > params.delta + kDeltaTolerance) continue;
    if (table.eps_x[x] > params.eps_bar + kLiftTolerance) continue;
    candidates.push_back(x);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](int a, int b) { return singleton[a] < singleton[b]; });
  return candidates;
}

absl::StatusOr<PrivacyReport> MakeReport(const JointDistribution& joint,
                                         const Partition& partition,
                                         const RelaxationParams& params) {
  absl::StatusOr<UtilityReport> utility = ComputeUtility(joint, partition);
  if (!utility.ok()) return utility.status();
  PrivacyReport report;
  report.partition = partition;
  report.eps = params.eps;
  report.delta = params.delta;
  report.eps_bar = params.eps_bar;
  report.eps_eff = EffectiveEpsilon(joint, partition);
  report.eps_c = partition.randomized.empty()
                     ? 0.0
                     : *EpsilonOfSubset(joint, partition.randomized);
  report.delta_total = DeltaTotal(joint, params.eps, partition);
  report.delta0 = Delta0(joint, params.eps);
  report.utility = *utility;
  report.feasible = report.delta_total <= params.delta + kDeltaTolerance;
  return report;
}

absl::StatusOr<PrivacyReport> GreedyPartition(const JointDistribution& joint,
                                              const RelaxationParams& params) {
  if (absl::Status st = params.Validate(); !st.ok()) return st;
  const double delta0 = Delta0(joint, params.eps);
  if (params.delta <= delta0) {
    return MakeError(ErrorKind::kDeltaNotAboveDelta0,
                     absl::StrFormat("delta = %.12g must exceed delta0 = %.12g",
                                     params.delta, delta0));
  }

  Partition current = WatchdogPartition(joint, params.eps);
  absl::StatusOr<double> nmil = Nmil(joint, current.randomized);
  if (!nmil.ok()) return nmil.status();
  double current_nmil = *nmil;

  std::vector<GreedyStep> trace;
  for (int candidate : RefineCandidates(joint, params)) {
    std::vector<int> remaining;
    for (int x : current.randomized) {
      if (x != candidate) remaining.push_back(x);
    }
    absl::StatusOr<Partition> next =
        Partition::FromRandomized(joint.num_x(), std::move(remaining));
    if (!next.ok()) return next.status();

    GreedyStep step;
    step.candidate = candidate;
    absl::StatusOr<double> next_nmil = Nmil(joint, next->randomized);
    if (!next_nmil.ok()) return next_nmil.status();
    step.nmil_after = *next_nmil;
    step.delta_total_after = DeltaTotal(joint, params.eps, *next);
    step.eps_eff_after = EffectiveEpsilon(joint, *next);

    if (!(step.nmil_after < current_nmil - kNmilTolerance)) {
      step.reason = "nmil_not_improved";
    } else if (step.delta_total_after > params.delta + kDeltaTolerance) {
      step.reason = "delta_exceeded";
    } else if (step.eps_eff_after > params.eps_bar + kLiftTolerance) {
      step.reason = "eps_bar_exceeded";
    } else {
      step.accepted = true;
      step.reason = "accepted";
      current = *std::move(next);
      current_nmil = step.nmil_after;
    }
    trace.push_back(std::move(step));
  }

  absl::StatusOr<PrivacyReport> report = MakeReport(joint, current, params);
  if (!report.ok()) return report.status();
  if (report->eps_eff > params.eps_bar + kLiftTolerance) {
    return MakeError(
        ErrorKind::kInfeasible,
        absl::StrFormat("effective eps %.12g exceeds eps_bar %.12g and no "
                        "candidate move repairs it",
                        report->eps_eff, params.eps_bar));
  }
  if (!report->feasible) {
    return MakeError(ErrorKind::kInternal,
                     "greedy output violates the delta constraint");
  }
  report->trace = std::move(trace);
  return report;
}

absl::StatusOr<PrivacyReport> BruteForcePartition(
    const JointDistribution& joint, const RelaxationParams& params,
    const BruteForceOptions& options) {
  if (absl::Status st = params.Validate(); !st.ok()) return st;
  const int n_x = joint.num_x();
  if (n_x > options.max_alphabet || n_x > 62) {
    return MakeError(ErrorKind::kAlphabetTooLarge,
                     absl::StrCat("|X| = ", n_x, " exceeds the cap of ",
                                  options.max_alphabet));
  }
  if (EntropyX(joint) <= 0.0) {
    return MakeError(ErrorKind::kDegenerateX, "H(X) = 0");
  }

  const std::uint64_t n_masks = std::uint64_t{1} << n_x;
  const int jobs = static_cast<int>(std::clamp<std::uint64_t>(
      static_cast<std::uint64_t>(std::max(options.jobs, 1)), 1, n_masks));
  std::vector<std::optional<Candidate>> partial(jobs);
  auto work = [&](int job) {
    const std::uint64_t begin = n_masks * job / jobs;
    const std::uint64_t end = n_masks * (job + 1) / jobs;
    partial[job] =
        SearchRange(joint, params, options.cap_eps_bar, begin, end);
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> workers;
    for (int job = 0; job < jobs; ++job) workers.emplace_back(work, job);
    for (std::thread& worker : workers) worker.join();
  }

  std::optional<Candidate> best;
  for (std::optional<Candidate>& candidate : partial) {
    if (!candidate.has_value()) continue;
    if (!best.has_value() || candidate->BetterThan(*best)) {
      best = std::move(candidate);
    }
  }
  if (!best.has_value()) {
    return MakeError(ErrorKind::kInfeasible,
                     "no bi-partition meets the delta and eps_bar constraints");
  }
  absl::StatusOr<Partition> partition =
      Partition::FromRandomized(n_x, best->randomized);
  if (!partition.ok()) return partition.status();
  return MakeReport(joint, *partition, params);
}

}  // namespace watchdog
