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

#include "cli.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "watchdog/lift.h"
#include "watchdog/mechanism.h"
#include "watchdog/simulation.h"
#include "watchdog/status.h"
#include "watchdog/utility.h"

namespace watchdog::cli {
namespace {

using nlohmann::json;

// Thrown by flag parsing helpers; turned into exit code 2.
struct UsageError {
  std::string message;
};

struct Options {
  std::string input;
  std::string output;
  double epsilon = 0.0;
  double delta = 0.0;
  std::string epsilon_bar = "inf";
  std::string mode = "uniform";
  std::string format;
  std::string randomized;
  bool has_randomized = false;
  bool no_eps_bar_cap = false;
  int max_alphabet = 20;
  int jobs = 1;
  int trials = 5000;
  int ns = 15;
  int nx = 20;
  std::uint64_t seed = 1;
  std::string scenarios = "2:0";
  std::string metrics = "max_lift_before,eps_c_after,nmil";
  std::string out_dir = ".";
  double cap = 0.0;
  bool has_cap = false;
  std::string mechanism;
};

int ExitCodeFor(const absl::Status& status) {
  const std::optional<ErrorKind> kind = GetErrorKind(status);
  if (!kind.has_value()) return kExitInternal;
  switch (*kind) {
    case ErrorKind::kInfeasible:
    case ErrorKind::kDeltaNotAboveDelta0:
      return kExitInfeasible;
    case ErrorKind::kInternal:
      return kExitInternal;
    default:
      return kExitData;
  }
}

int ReportError(const absl::Status& status, std::ostream& err) {
  const std::optional<ErrorKind> kind = GetErrorKind(status);
  json doc;
  doc["error"] = kind.has_value() ? std::string(ErrorKindName(*kind))
                                  : std::string("Internal");
  doc["message"] = std::string(status.message());
  err << doc.dump() << "\n";
  return ExitCodeFor(status);
}

double ParseEpsilonBar(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "infinity") return HUGE_VAL;
  double value = 0.0;
  if (!absl::SimpleAtod(text, &value)) {
    throw UsageError{absl::StrCat("--epsilon-bar: not a number: ", text)};
  }
  return value;
}

std::vector<std::string> Labels(const JointDistribution& joint,
                                const std::vector<int>& indices) {
  std::vector<std::string> labels;
  for (int x : indices) labels.push_back(joint.x_labels()[x]);
  return labels;
}

json NumberArray(absl::Span<const double> values) {
  json array = json::array();
  for (double v : values) array.push_back(Number(v));
  return array;
}

absl::StatusOr<std::vector<int>> ResolveLabels(const JointDistribution& joint,
                                               const std::string& list) {
  std::vector<int> indices;
  for (absl::string_view label : absl::StrSplit(list, ',', absl::SkipEmpty())) {
    const int x = joint.FindX(std::string(absl::StripAsciiWhitespace(label)));
    if (x < 0) {
      return MakeError(ErrorKind::kIndexOutOfRange,
                       absl::StrCat("unknown X label '", label, "'"));
    }
    indices.push_back(x);
  }
  return indices;
}

class Command {
 public:
  Command(const Options& opts, std::istream& in, std::ostream& out)
      : opts_(opts), in_(in), out_(out) {}

  absl::Status Validate() {
    if (absl::Status st = LoadJoint(); !st.ok()) return st;
    json doc;
    doc["s_labels"] = joint_->s_labels();
    doc["x_labels"] = joint_->x_labels();
    doc["p_s"] = NumberArray(joint_->p_s());
    doc["p_x"] = NumberArray(joint_->p_x());
    doc["total"] = Number(joint_->total());
    return Emit(doc.dump(2) + "\n");
  }

  absl::Status Lift() {
    if (absl::Status st = LoadJoint(); !st.ok()) return st;
    const LiftTable table = ComputeLiftTable(*joint_);
    if (opts_.format == "csv") return Emit(LiftTableToCsv(*joint_, table));
    json doc;
    json rows = json::array();
    for (int s = 0; s < table.num_s; ++s) {
      for (int x = 0; x < table.num_x; ++x) {
        rows.push_back({{"s", joint_->s_labels()[s]},
                        {"x", joint_->x_labels()[x]},
                        {"lift", Number(table.at(s, x))}});
      }
    }
    doc["lift"] = std::move(rows);
    json eps_x = json::object();
    for (int x = 0; x < table.num_x; ++x) {
      eps_x[joint_->x_labels()[x]] = Number(table.eps_x[x]);
    }
    doc["eps_x"] = std::move(eps_x);
    json ladder = json::array();
    for (const LadderEntry& entry : CriticalEpsilons(*joint_)) {
      ladder.push_back(
          {{"x", joint_->x_labels()[entry.x]}, {"eps", Number(entry.eps)}});
    }
    doc["ladder"] = std::move(ladder);
    return Emit(doc.dump(2) + "\n");
  }

  absl::Status PartitionCmd() {
    if (absl::Status st = LoadJoint(); !st.ok()) return st;
    const Partition partition = WatchdogPartition(*joint_, opts_.epsilon);
    json doc;
    doc["epsilon"] = Number(opts_.epsilon);
    doc["kept"] = Labels(*joint_, partition.kept);
    doc["randomized"] = Labels(*joint_, partition.randomized);
    return Emit(doc.dump(2) + "\n");
  }

  absl::Status MechanismCmd() {
    if (absl::Status st = LoadJoint(); !st.ok()) return st;
    RMode mode;
    if (opts_.mode == "uniform") {
      mode = RMode::kUniform;
    } else if (opts_.mode == "merge") {
      mode = RMode::kMerge;
    } else {
      throw UsageError{absl::StrCat("--mode must be uniform or merge, got ",
                                    opts_.mode)};
    }
    absl::StatusOr<Mechanism> mech = BuildMechanism(
        *joint_, WatchdogPartition(*joint_, opts_.epsilon), mode);
    if (!mech.ok()) return mech.status();
    if (opts_.format == "json") {
      const OutputStats stats = ComputeOutputStats(*joint_, *mech);
      json doc;
      doc["epsilon"] = Number(opts_.epsilon);
      doc["mode"] = opts_.mode;
      doc["kept"] = Labels(*joint_, mech->partition.kept);
      doc["randomized"] = Labels(*joint_, mech->partition.randomized);
      doc["r"] = NumberArray(mech->r);
      json channel = json::array();
      for (int x = 0; x < mech->channel.size(); ++x) {
        channel.push_back(NumberArray(mech->channel.row(x)));
      }
      doc["channel"] = std::move(channel);
      doc["p_y"] = NumberArray(stats.p_y);
      doc["max_abs_lift_randomized"] = Number(stats.max_abs_lift_randomized);
      doc["max_abs_lift"] = Number(stats.max_abs_lift);
      return Emit(doc.dump(2) + "\n");
    }
    return Emit(MechanismToCsv(*joint_, mech->channel));
  }

  absl::Status Report() {
    if (absl::Status st = LoadJoint(); !st.ok()) return st;
    Partition partition = WatchdogPartition(*joint_, opts_.epsilon);
    if (opts_.has_randomized) {
      absl::StatusOr<std::vector<int>> indices =
          ResolveLabels(*joint_, opts_.randomized);
      if (!indices.ok()) return indices.status();
      absl::StatusOr<Partition> custom =
          Partition::FromRandomized(joint_->num_x(), *indices);
      if (!custom.ok()) return custom.status();
      partition = *custom;
    }
    const RelaxationParams params{opts_.epsilon, opts_.delta,
                                  ParseEpsilonBar(opts_.epsilon_bar)};
    absl::StatusOr<PrivacyReport> report =
        MakeReport(*joint_, partition, params);
    if (!report.ok()) return report.status();
    return Emit(ReportToJson(*joint_, *report).dump(2) + "\n");
  }

  absl::Status Greedy() {
    if (absl::Status st = LoadJoint(); !st.ok()) return st;
    const RelaxationParams params{opts_.epsilon, opts_.delta,
                                  ParseEpsilonBar(opts_.epsilon_bar)};
    absl::StatusOr<PrivacyReport> report = GreedyPartition(*joint_, params);
    if (!report.ok()) return report.status();
    return Emit(ReportToJson(*joint_, *report).dump(2) + "\n");
  }

  absl::Status BruteForce(std::ostream& err) {
    if (absl::Status st = LoadJoint(); !st.ok()) return st;
    const RelaxationParams params{opts_.epsilon, opts_.delta,
                                  ParseEpsilonBar(opts_.epsilon_bar)};
    BruteForceOptions options;
    options.cap_eps_bar = !opts_.no_eps_bar_cap;
    options.max_alphabet = opts_.max_alphabet;
    options.jobs = opts_.jobs;
    if (joint_->num_x() > kBruteForceWarnAlphabet &&
        joint_->num_x() <= options.max_alphabet) {
      err << "warning: enumerating 2^" << joint_->num_x()
          << " partitions; this may take a while\n";
    }
    absl::StatusOr<PrivacyReport> report =
        BruteForcePartition(*joint_, params, options);
    if (!report.ok()) return report.status();
    return Emit(ReportToJson(*joint_, *report).dump(2) + "\n");
  }

  absl::Status Simulate() {
    ExperimentConfig config;
    config.n_trials = opts_.trials;
    config.dist_spec = {opts_.ns, opts_.nx, opts_.seed};
    config.jobs = opts_.jobs;
    for (absl::string_view text :
         absl::StrSplit(opts_.scenarios, ',', absl::SkipEmpty())) {
      absl::StatusOr<Scenario> scenario = ParseScenario(text);
      if (!scenario.ok()) return scenario.status();
      config.scenarios.push_back(*scenario);
    }
    config.metrics.clear();
    for (absl::string_view name :
         absl::StrSplit(opts_.metrics, ',', absl::SkipEmpty())) {
      absl::StatusOr<Metric> metric = ParseMetric(name);
      if (!metric.ok()) return metric.status();
      config.metrics.push_back(*metric);
    }
    absl::StatusOr<ExperimentResult> result = RunExperiment(config);
    if (!result.ok()) return result.status();

    std::error_code ec;
    std::filesystem::create_directories(opts_.out_dir, ec);
    const std::optional<double> cap =
        opts_.has_cap ? std::optional<double>(opts_.cap) : std::nullopt;
    for (Metric metric : config.metrics) {
      const std::filesystem::path path =
          std::filesystem::path(opts_.out_dir) /
          absl::StrCat("cdf_", MetricName(metric), ".csv");
      if (absl::Status st = WriteFile(path.string(),
                                      CdfToCsv(*result, metric, cap));
          !st.ok()) {
        return st;
      }
    }
    const std::string summary = SummaryToJson(*result);
    if (absl::Status st = WriteFile(
            (std::filesystem::path(opts_.out_dir) / "summary.json").string(),
            summary);
        !st.ok()) {
      return st;
    }
    out_ << summary;
    return absl::OkStatus();
  }

  absl::Status Sanitize() {
    std::string text;
    if (absl::Status st = ReadFile(opts_.mechanism, &text); !st.ok()) return st;
    absl::StatusOr<LabeledChannel> labeled = ParseMechanismCsv(text);
    if (!labeled.ok()) return labeled.status();
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < labeled->labels.size(); ++i) {
      index[labeled->labels[i]] = static_cast<int>(i);
    }

    std::unique_ptr<std::ifstream> file;
    std::istream* stream = &in_;
    if (!opts_.input.empty() && opts_.input != "-") {
      file = std::make_unique<std::ifstream>(opts_.input);
      if (!*file) {
        return MakeError(ErrorKind::kParseError,
                         absl::StrCat("cannot open '", opts_.input, "'"));
      }
      stream = file.get();
    }
    Sanitizer sanitizer(labeled->channel, opts_.seed);
    std::string output;
    std::string line;
    int line_no = 0;
    while (std::getline(*stream, line)) {
      ++line_no;
      const std::string label(absl::StripAsciiWhitespace(line));
      if (label.empty()) continue;
      auto it = index.find(label);
      if (it == index.end()) {
        return MakeError(ErrorKind::kParseError,
                         absl::StrCat("line ", line_no, ": unknown symbol '",
                                      label, "'"));
      }
      absl::StrAppend(&output, labeled->labels[sanitizer.Apply(it->second)],
                      "\n");
    }
    return Emit(output);
  }

 private:
  // Loads the joint named by --input into joint_.
  absl::Status LoadJoint() {
    if (opts_.input.empty() || opts_.input == "-") {
      std::stringstream buffer;
      buffer << in_.rdbuf();
      absl::StatusOr<JointDistribution> joint = ParseJoint(buffer.str());
      if (!joint.ok()) return joint.status();
      joint_ = *std::move(joint);
      return absl::OkStatus();
    }
    absl::StatusOr<JointDistribution> joint = LoadJointFile(opts_.input);
    if (!joint.ok()) return joint.status();
    joint_ = *std::move(joint);
    return absl::OkStatus();
  }

  absl::Status Emit(const std::string& text) {
    if (opts_.output.empty() || opts_.output == "-") {
      out_ << text;
      return absl::OkStatus();
    }
    return WriteFile(opts_.output, text);
  }

  static absl::Status WriteFile(const std::string& path,
                                const std::string& text) {
    std::ofstream file(path);
    file << text;
    if (!file) {
      return MakeError(ErrorKind::kInternal,
                       absl::StrCat("cannot write '", path, "'"));
    }
    return absl::OkStatus();
  }

  static absl::Status ReadFile(const std::string& path, std::string* text) {
    std::ifstream file(path);
    if (!file) {
      return MakeError(ErrorKind::kParseError,
                       absl::StrCat("cannot open '", path, "'"));
    }
    std::stringstream buffer;
    buffer << file.rdbuf();
    *text = buffer.str();
    return absl::OkStatus();
  }

  const Options& opts_;
  std::istream& in_;
  std::ostream& out_;
  std::optional<JointDistribution> joint_;
};

}  // namespace

json Number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  double rounded = 0.0;
  (void)absl::SimpleAtod(absl::StrFormat("%.12g", value), &rounded);
  return rounded;
}

json ReportToJson(const JointDistribution& joint, const PrivacyReport& report) {
  json doc;
  doc["kept"] = Labels(joint, report.partition.kept);
  doc["randomized"] = Labels(joint, report.partition.randomized);
  doc["eps"] = Number(report.eps);
  doc["delta"] = Number(report.delta);
  doc["eps_bar"] = Number(report.eps_bar);
  doc["eps_eff"] = Number(report.eps_eff);
  doc["eps_c"] = Number(report.eps_c);
  doc["delta_total"] = Number(report.delta_total);
  doc["delta0"] = Number(report.delta0);
  doc["h_x"] = Number(report.utility.h_x);
  doc["mi_xy"] = Number(report.utility.mi_xy);
  doc["nmil"] = Number(report.utility.nmil);
  doc["feasible"] = report.feasible;
  json trace = json::array();
  for (const GreedyStep& step : report.trace) {
    trace.push_back({{"candidate", joint.x_labels()[step.candidate]},
                     {"accepted", step.accepted},
                     {"reason", step.reason},
                     {"nmil_after", Number(step.nmil_after)},
                     {"delta_total_after", Number(step.delta_total_after)},
                     {"eps_eff_after", Number(step.eps_eff_after)}});
  }
  doc["trace"] = std::move(trace);
  return doc;
}

int Run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  CLI::App app{"Log-lift privacy watchdog toolkit", "watchdog"};
  app.require_subcommand(1);
  Options opts;

  auto add_io = [&](CLI::App* sub) {
    sub->add_option("-i,--input", opts.input,
                    "Joint distribution file (CSV or JSON); '-' for stdin");
    sub->add_option("-o,--output", opts.output, "Output file (default stdout)");
  };
  auto add_relaxation = [&](CLI::App* sub) {
    sub->add_option("--epsilon", opts.epsilon, "Target abs-log-lift (nats)")
        ->required()
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--delta", opts.delta, "Breach probability budget")
        ->required();
    sub->add_option("--epsilon-bar", opts.epsilon_bar,
                    "Hard abs-log-lift cap, a number or 'inf'")
        ->capture_default_str();
  };

  CLI::App* validate = app.add_subcommand("validate", "Check a joint table");
  add_io(validate);

  CLI::App* lift = app.add_subcommand("lift", "Lift table and critical ladder");
  add_io(lift);
  lift->add_option("--format", opts.format, "json (default) or csv");

  CLI::App* partition =
      app.add_subcommand("partition", "Watchdog partition for an epsilon");
  add_io(partition);
  partition->add_option("--epsilon", opts.epsilon)
      ->required()
      ->check(CLI::NonNegativeNumber);

  CLI::App* mechanism =
      app.add_subcommand("mechanism", "X-invariant release channel");
  add_io(mechanism);
  mechanism->add_option("--epsilon", opts.epsilon)
      ->required()
      ->check(CLI::NonNegativeNumber);
  mechanism->add_option("--mode", opts.mode, "uniform or merge")
      ->capture_default_str();
  mechanism->add_option("--format", opts.format, "csv (default) or json");

  CLI::App* report = app.add_subcommand("report", "Privacy report");
  add_io(report);
  report->add_option("--epsilon", opts.epsilon)
      ->required()
      ->check(CLI::NonNegativeNumber);
  report->add_option("--delta", opts.delta)->capture_default_str();
  report->add_option("--epsilon-bar", opts.epsilon_bar)->capture_default_str();
  report->add_option("--randomized", opts.randomized,
                     "Comma-separated X labels to randomize (default: "
                     "watchdog partition)");

  CLI::App* greedy =
      app.add_subcommand("greedy", "Greedy (epsilon, delta) partitioning");
  add_io(greedy);
  add_relaxation(greedy);

  CLI::App* bruteforce =
      app.add_subcommand("bruteforce", "Exhaustive optimal partition");
  add_io(bruteforce);
  add_relaxation(bruteforce);
  bruteforce->add_flag("--no-eps-bar-cap", opts.no_eps_bar_cap,
                       "Search the delta-feasible family without the cap");
  bruteforce->add_option("--max-alphabet", opts.max_alphabet)
      ->capture_default_str();
  bruteforce->add_option("--jobs", opts.jobs)->check(CLI::PositiveNumber);

  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo CDF experiment");
  simulate->add_option("--trials", opts.trials)
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--ns", opts.ns)->capture_default_str();
  simulate->add_option("--nx", opts.nx)->capture_default_str();
  simulate->add_option("--seed", opts.seed)->capture_default_str();
  simulate->add_option("--scenarios", opts.scenarios,
                       "Comma-separated eps:delta[:eps_bar] triples")
      ->capture_default_str();
  simulate->add_option("--metrics", opts.metrics)->capture_default_str();
  simulate->add_option("--out-dir", opts.out_dir)->capture_default_str();
  simulate->add_option("--cap", opts.cap,
                       "Cap max_lift_before values in the CDF file");
  simulate->add_option("--jobs", opts.jobs)->check(CLI::PositiveNumber);

  CLI::App* sanitize =
      app.add_subcommand("sanitize", "Apply a stored mechanism to X symbols");
  sanitize->add_option("--mechanism", opts.mechanism,
                       "Channel file written by 'mechanism'")
      ->required();
  sanitize->add_option("-i,--input", opts.input,
                       "One X label per line (default stdin)");
  sanitize->add_option("-o,--output", opts.output);
  sanitize->add_option("--seed", opts.seed)->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    json doc;
    doc["error"] = "Usage";
    doc["message"] = e.what();
    err << doc.dump() << "\n";
    return kExitUsage;
  }
  opts.has_randomized = report->count("--randomized") > 0;
  opts.has_cap = simulate->count("--cap") > 0;

  Command command(opts, in, out);
  absl::Status status;
  try {
    if (validate->parsed()) {
      status = command.Validate();
    } else if (lift->parsed()) {
      status = command.Lift();
    } else if (partition->parsed()) {
      status = command.PartitionCmd();
    } else if (mechanism->parsed()) {
      status = command.MechanismCmd();
    } else if (report->parsed()) {
      status = command.Report();
    } else if (greedy->parsed()) {
      status = command.Greedy();
    } else if (bruteforce->parsed()) {
      status = command.BruteForce(err);
    } else if (simulate->parsed()) {
      status = command.Simulate();
    } else if (sanitize->parsed()) {
      status = command.Sanitize();
    }
  } catch (const UsageError& e) {
    json doc;
    doc["error"] = "Usage";
    doc["message"] = e.message;
    err << doc.dump() << "\n";
    return kExitUsage;
  }
  if (!status.ok()) return ReportError(status, err);
  return kExitOk;
}

}  // namespace watchdog::cli
