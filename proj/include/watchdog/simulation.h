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

#ifndef WATCHDOG_SIMULATION_H_
#define WATCHDOG_SIMULATION_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "watchdog/distributions.h"

namespace watchdog {

// Sorted sample with the usual right-continuous step CDF.
class EmpiricalCdf {
 public:
  EmpiricalCdf() = default;
  static EmpiricalCdf FromSamples(std::vector<double> samples);

  const std::vector<double>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  // Fraction of samples <= t.
  double Evaluate(double t) const;

  // Smallest sample v with Evaluate(v) >= q. Errors: EmptySample,
  // InvalidArgument for q outside [0, 1].
  absl::StatusOr<double> Quantile(double q) const;

 private:
  std::vector<double> samples_;
};

enum class Metric { kMaxLiftBefore, kEpsCAfter, kNmil };

absl::string_view MetricName(Metric metric);
absl::StatusOr<Metric> ParseMetric(absl::string_view name);

// delta == 0 runs the pure watchdog, anything else the greedy relaxation.
struct Scenario {
  std::string id;
  double eps = 1.0;
  double delta = 0.0;
  double eps_bar = HUGE_VAL;

  bool relaxed() const { return delta > 0.0; }
};

// Parses "eps:delta[:eps_bar]"; eps_bar may be "inf". The id is the input
// text itself.
absl::StatusOr<Scenario> ParseScenario(absl::string_view text);

struct ExperimentConfig {
  int n_trials = 1;
  DistributionSpec dist_spec;  // dist_spec.seed is the master seed
  std::vector<Scenario> scenarios;
  std::vector<Metric> metrics = {Metric::kMaxLiftBefore, Metric::kEpsCAfter,
                                 Metric::kNmil};
  int jobs = 1;

  absl::Status Validate() const;
};

// Values recorded for one trial under one scenario.
struct TrialValues {
  // max |i(s,x)| over x in the watchdog's randomized set; nullopt when that
  // set is empty. May be +inf for tables with zero cells.
  std::optional<double> max_lift_before;
  // eps of the randomized set of the scenario's final partition.
  double eps_c_after = 0.0;
  // NMIL of the scenario's final partition.
  double nmil = 0.0;
};

struct ScenarioResult {
  Scenario scenario;
  std::vector<TrialValues> trials;  // indexed by trial
  EmpiricalCdf max_lift_before;     // finite values only
  int empty_before = 0;
  int infinite_before = 0;
  EmpiricalCdf eps_c_after;
  EmpiricalCdf nmil;
  double fraction_eps_c_below_eps = 0.0;
  double mean_nmil = 0.0;

  const EmpiricalCdf& cdf(Metric metric) const;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ScenarioResult> scenarios;
};

// Seed of trial `trial` under `master`; see DeriveSeed.
std::uint64_t TrialSeed(std::uint64_t master, int trial);

absl::StatusOr<TrialValues> EvaluateTrial(const JointDistribution& joint,
                                          const Scenario& scenario);

// Draws config.n_trials joints from RandomJoint with per-trial seeds and
// evaluates every scenario on each. Output is identical for any jobs value.
// A failing trial aborts the run; the error names the trial index.
absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config);

// Same, with trial joints supplied by `source` (used to inject fixtures).
using JointSource =
    std::function<absl::StatusOr<JointDistribution>(int trial)>;
absl::StatusOr<ExperimentResult> RunExperimentWith(
    const ExperimentConfig& config, const JointSource& source);

// "scenario_id,value,cumulative_fraction" rows sorted by value. With a cap,
// max_lift_before values above it (including +inf) are written as the cap;
// without one, infinite values stay out of the file.
std::string CdfToCsv(const ExperimentResult& result, Metric metric,
                     std::optional<double> cap = std::nullopt);

// Per-scenario quantiles (0.01, 0.05, 0.5, 0.95, 0.99) of every selected
// metric, the fraction of trials with eps_c < eps, and the mean NMIL.
std::string SummaryToJson(const ExperimentResult& result);

}  // namespace watchdog

#endif  // WATCHDOG_SIMULATION_H_
