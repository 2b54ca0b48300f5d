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

#include "watchdog/simulation.h"

#include <algorithm>
#include <cmath>
#include <thread>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "watchdog/lift.h"
#include "watchdog/mechanism.h"
#include "watchdog/random.h"
#include "watchdog/relaxation.h"
#include "watchdog/status.h"
#include "watchdog/utility.h"

namespace watchdog {
namespace {

constexpr double kSummaryQuantiles[] = {0.01, 0.05, 0.5, 0.95, 0.99};

absl::StatusOr<double> ParseExtendedReal(absl::string_view text) {
  if (text == "inf" || text == "Inf" || text == "infinity") return HUGE_VAL;
  double value = 0.0;
  if (!absl::SimpleAtod(text, &value)) {
    return MakeError(ErrorKind::kParseError,
                     absl::StrCat("not a number: '", text, "'"));
  }
  return value;
}

nlohmann::json JsonValue(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

}  // namespace

EmpiricalCdf EmpiricalCdf::FromSamples(std::vector<double> samples) {
  EmpiricalCdf cdf;
  std::sort(samples.begin(), samples.end());
  cdf.samples_ = std::move(samples);
  return cdf;
}

double EmpiricalCdf::Evaluate(double t) const {
  if (samples_.empty()) return 0.0;
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), t);
  return static_cast<double>(it - samples_.begin()) /
         static_cast<double>(samples_.size());
}

absl::StatusOr<double> EmpiricalCdf::Quantile(double q) const {
  if (samples_.empty()) {
    return MakeError(ErrorKind::kEmptySample, "quantile of an empty sample");
  }
  if (!(q >= 0.0 && q <= 1.0)) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("quantile level ", q, " not in [0, 1]"));
  }
  // Smallest k with k / n >= q, i.e. the k-th order statistic.
  const double n = static_cast<double>(samples_.size());
  std::size_t k = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
  k = std::clamp<std::size_t>(k, 1, samples_.size());
  return samples_[k - 1];
}

absl::string_view MetricName(Metric metric) {
  switch (metric) {
    case Metric::kMaxLiftBefore:
      return "max_lift_before";
    case Metric::kEpsCAfter:
      return "eps_c_after";
    case Metric::kNmil:
      return "nmil";
  }
  return "";
}

absl::StatusOr<Metric> ParseMetric(absl::string_view name) {
  for (Metric m : {Metric::kMaxLiftBefore, Metric::kEpsCAfter, Metric::kNmil}) {
    if (MetricName(m) == name) return m;
  }
  return MakeError(ErrorKind::kInvalidArgument,
                   absl::StrCat("unknown metric '", name, "'"));
}

absl::StatusOr<Scenario> ParseScenario(absl::string_view text) {
  std::vector<absl::string_view> parts = absl::StrSplit(text, ':');
  if (parts.size() < 2 || parts.size() > 3) {
    return MakeError(ErrorKind::kParseError,
                     absl::StrCat("scenario '", text,
                                  "' is not eps:delta[:eps_bar]"));
  }
  Scenario scenario;
  scenario.id = std::string(text);
  absl::StatusOr<double> eps = ParseExtendedReal(parts[0]);
  if (!eps.ok()) return eps.status();
  absl::StatusOr<double> delta = ParseExtendedReal(parts[1]);
  if (!delta.ok()) return delta.status();
  scenario.eps = *eps;
  scenario.delta = *delta;
  if (parts.size() == 3) {
    absl::StatusOr<double> eps_bar = ParseExtendedReal(parts[2]);
    if (!eps_bar.ok()) return eps_bar.status();
    scenario.eps_bar = *eps_bar;
  }
  return scenario;
}

absl::Status ExperimentConfig::Validate() const {
  if (n_trials < 1) {
    return MakeError(ErrorKind::kInvalidArgument, "n_trials must be >= 1");
  }
  if (absl::Status st = dist_spec.Validate(); !st.ok()) return st;
  if (scenarios.empty()) {
    return MakeError(ErrorKind::kInvalidArgument, "no scenarios given");
  }
  for (const Scenario& scenario : scenarios) {
    if (!(scenario.eps > 0.0) || std::isinf(scenario.eps)) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("scenario ", scenario.id,
                                    ": eps must be positive and finite"));
    }
    if (scenario.relaxed()) {
      RelaxationParams params{scenario.eps, scenario.delta, scenario.eps_bar};
      if (absl::Status st = params.Validate(); !st.ok()) {
        return MakeError(ErrorKind::kInvalidArgument,
                         absl::StrCat("scenario ", scenario.id, ": ",
                                      st.message()));
      }
    } else if (scenario.delta < 0.0) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("scenario ", scenario.id,
                                    ": delta must be >= 0"));
    }
  }
  return absl::OkStatus();
}

const EmpiricalCdf& ScenarioResult::cdf(Metric metric) const {
  switch (metric) {
    case Metric::kMaxLiftBefore:
      return max_lift_before;
    case Metric::kEpsCAfter:
      return eps_c_after;
    case Metric::kNmil:
      break;
  }
  return nmil;
}

std::uint64_t TrialSeed(std::uint64_t master, int trial) {
  return DeriveSeed(master, static_cast<std::uint64_t>(trial));
}

absl::StatusOr<TrialValues> EvaluateTrial(const JointDistribution& joint,
                                          const Scenario& scenario) {
  const LiftTable table = ComputeLiftTable(joint);
  const Partition watchdog = WatchdogPartition(joint, scenario.eps);
  TrialValues values;
  if (!watchdog.randomized.empty()) {
    double before = 0.0;
    for (int x : watchdog.randomized) before = std::max(before, table.eps_x[x]);
    values.max_lift_before = before;
  }

  Partition final_partition = watchdog;
  if (scenario.relaxed()) {
    absl::StatusOr<PrivacyReport> report = GreedyPartition(
        joint, {scenario.eps, scenario.delta, scenario.eps_bar});
    if (!report.ok()) return report.status();
    final_partition = report->partition;
  }
  if (!final_partition.randomized.empty()) {
    values.eps_c_after = *EpsilonOfSubset(joint, final_partition.randomized);
  }
  absl::StatusOr<double> nmil = Nmil(joint, final_partition.randomized);
  if (!nmil.ok()) return nmil.status();
  values.nmil = *nmil;
  return values;
}

absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config) {
  const DistributionSpec base = config.dist_spec;
  return RunExperimentWith(config, [base](int trial) {
    DistributionSpec spec = base;
    spec.seed = TrialSeed(base.seed, trial);
    return RandomJoint(spec);
  });
}

absl::StatusOr<ExperimentResult> RunExperimentWith(
    const ExperimentConfig& config, const JointSource& source) {
  if (absl::Status st = config.Validate(); !st.ok()) return st;
  const int n_trials = config.n_trials;
  const std::size_t n_scenarios = config.scenarios.size();

  // values[trial][scenario]
  std::vector<std::vector<TrialValues>> values(
      n_trials, std::vector<TrialValues>(n_scenarios));
  std::vector<absl::Status> errors(n_trials);
  auto run_trial = [&](int trial) {
    absl::StatusOr<JointDistribution> joint = source(trial);
    if (!joint.ok()) {
      errors[trial] = joint.status();
      return;
    }
    for (std::size_t k = 0; k < n_scenarios; ++k) {
      absl::StatusOr<TrialValues> v = EvaluateTrial(*joint, config.scenarios[k]);
      if (!v.ok()) {
        errors[trial] = v.status();
        return;
      }
      values[trial][k] = *v;
    }
  };
  const int jobs = std::clamp(config.jobs, 1, n_trials);
  if (jobs == 1) {
    for (int trial = 0; trial < n_trials; ++trial) run_trial(trial);
  } else {
    std::vector<std::thread> workers;
    for (int job = 0; job < jobs; ++job) {
      workers.emplace_back([&, job] {
        for (int trial = job; trial < n_trials; trial += jobs) run_trial(trial);
      });
    }
    for (std::thread& worker : workers) worker.join();
  }
  for (int trial = 0; trial < n_trials; ++trial) {
    if (!errors[trial].ok()) {
      const std::optional<ErrorKind> kind = GetErrorKind(errors[trial]);
      return MakeError(kind.value_or(ErrorKind::kInternal),
                       absl::StrCat("trial ", trial, ": ",
                                    errors[trial].message()));
    }
  }

  ExperimentResult result;
  result.config = config;
  for (std::size_t k = 0; k < n_scenarios; ++k) {
    ScenarioResult sr;
    sr.scenario = config.scenarios[k];
    std::vector<double> before, eps_c, nmil;
    int below = 0;
    double nmil_sum = 0.0;
    for (int trial = 0; trial < n_trials; ++trial) {
      const TrialValues& v = values[trial][k];
      sr.trials.push_back(v);
      if (!v.max_lift_before.has_value()) {
        ++sr.empty_before;
      } else if (std::isinf(*v.max_lift_before)) {
        ++sr.infinite_before;
      } else {
        before.push_back(*v.max_lift_before);
      }
      eps_c.push_back(v.eps_c_after);
      if (v.eps_c_after < sr.scenario.eps) ++below;
      nmil.push_back(v.nmil);
      nmil_sum += v.nmil;
    }
    sr.max_lift_before = EmpiricalCdf::FromSamples(std::move(before));
    sr.eps_c_after = EmpiricalCdf::FromSamples(std::move(eps_c));
    sr.nmil = EmpiricalCdf::FromSamples(std::move(nmil));
    sr.fraction_eps_c_below_eps = static_cast<double>(below) / n_trials;
    sr.mean_nmil = nmil_sum / n_trials;
    result.scenarios.push_back(std::move(sr));
  }
  return result;
}

std::string CdfToCsv(const ExperimentResult& result, Metric metric,
                     std::optional<double> cap) {
  std::string out = "scenario_id,value,cumulative_fraction\n";
  for (const ScenarioResult& sr : result.scenarios) {
    std::vector<double> samples = sr.cdf(metric).samples();
    if (metric == Metric::kMaxLiftBefore && cap.has_value()) {
      for (double& v : samples) v = std::min(v, *cap);
      samples.insert(samples.end(), sr.infinite_before, *cap);
    }
    const EmpiricalCdf cdf = EmpiricalCdf::FromSamples(std::move(samples));
    for (double v : cdf.samples()) {
      absl::StrAppend(&out, sr.scenario.id,
                      absl::StrFormat(",%.12g,%.12g\n", v, cdf.Evaluate(v)));
    }
  }
  return out;
}

std::string SummaryToJson(const ExperimentResult& result) {
  nlohmann::json doc;
  doc["n_trials"] = result.config.n_trials;
  doc["n_s"] = result.config.dist_spec.n_s;
  doc["n_x"] = result.config.dist_spec.n_x;
  doc["seed"] = result.config.dist_spec.seed;
  nlohmann::json scenarios = nlohmann::json::array();
  for (const ScenarioResult& sr : result.scenarios) {
    nlohmann::json entry;
    entry["id"] = sr.scenario.id;
    entry["eps"] = JsonValue(sr.scenario.eps);
    entry["delta"] = JsonValue(sr.scenario.delta);
    entry["eps_bar"] = JsonValue(sr.scenario.eps_bar);
    entry["fraction_eps_c_below_eps"] = sr.fraction_eps_c_below_eps;
    entry["mean_nmil"] = sr.mean_nmil;
    entry["empty_before"] = sr.empty_before;
    entry["infinite_before"] = sr.infinite_before;
    nlohmann::json metrics = nlohmann::json::object();
    for (Metric metric : result.config.metrics) {
      const EmpiricalCdf& cdf = sr.cdf(metric);
      nlohmann::json m;
      m["count"] = cdf.size();
      nlohmann::json quantiles = nlohmann::json::object();
      for (double q : kSummaryQuantiles) {
        absl::StatusOr<double> value = cdf.Quantile(q);
        quantiles[absl::StrFormat("%g", q)] =
            value.ok() ? JsonValue(*value) : nlohmann::json(nullptr);
      }
      m["quantiles"] = std::move(quantiles);
      metrics[std::string(MetricName(metric))] = std::move(m);
    }
    entry["metrics"] = std::move(metrics);
    scenarios.push_back(std::move(entry));
  }
  doc["scenarios"] = std::move(scenarios);
  return doc.dump(2) + "\n";
}

}  // namespace watchdog
