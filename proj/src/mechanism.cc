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

#include "watchdog/mechanism.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "watchdog/status.h"

namespace watchdog {

absl::StatusOr<Channel> Channel::Create(int size, std::vector<double> entries) {
  if (size < 0 || entries.size() != static_cast<std::size_t>(size) * size) {
    return MakeError(ErrorKind::kInvalidArgument,
                     absl::StrCat("channel must be ", size, "x", size));
  }
  for (int x = 0; x < size; ++x) {
    double sum = 0.0;
    for (int y = 0; y < size; ++y) {
      const double p = entries[x * size + y];
      if (!std::isfinite(p) || p < 0.0) {
        return MakeError(ErrorKind::kInvalidArgument,
                         absl::StrCat("negative channel entry in row ", x));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      return MakeError(ErrorKind::kInvalidArgument,
                       absl::StrCat("channel row ", x, " sums to ", sum));
    }
  }
  return Channel(size, std::move(entries));
}

Channel Channel::Identity(int size) {
  std::vector<double> entries(static_cast<std::size_t>(size) * size, 0.0);
  for (int x = 0; x < size; ++x) entries[x * size + x] = 1.0;
  return Channel(size, std::move(entries));
}

absl::StatusOr<Mechanism> BuildMechanism(const JointDistribution& joint,
                                         const Partition& partition, RMode mode,
                                         absl::Span<const double> custom_r) {
  const int n = joint.num_x();
  if (partition.kept.size() + partition.randomized.size() !=
      static_cast<std::size_t>(n)) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "partition does not cover the X alphabet");
  }
  const std::size_t m = partition.randomized.size();
  std::vector<double> r;
  switch (mode) {
    case RMode::kUniform:
      r.assign(m, m == 0 ? 0.0 : 1.0 / static_cast<double>(m));
      break;
    case RMode::kMerge:
      r.assign(m, 0.0);
      if (m > 0) r.front() = 1.0;
      break;
    case RMode::kCustom: {
      if (custom_r.size() != m) {
        return MakeError(ErrorKind::kInvalidR,
                         absl::StrCat("R has ", custom_r.size(),
                                      " entries, randomized set has ", m));
      }
      double sum = 0.0;
      for (double p : custom_r) {
        if (!std::isfinite(p) || p < 0.0) {
          return MakeError(ErrorKind::kInvalidR, "R has a negative entry");
        }
        sum += p;
      }
      if (m > 0 && std::abs(sum - 1.0) > kRowSumTolerance) {
        return MakeError(ErrorKind::kInvalidR,
                         absl::StrCat("R sums to ", sum));
      }
      r.assign(custom_r.begin(), custom_r.end());
      break;
    }
  }

  std::vector<double> entries(static_cast<std::size_t>(n) * n, 0.0);
  for (int x : partition.kept) {
    if (x < 0 || x >= n) {
      return MakeError(ErrorKind::kIndexOutOfRange, "kept index out of range");
    }
    entries[x * n + x] = 1.0;
  }
  for (int x : partition.randomized) {
    if (x < 0 || x >= n) {
      return MakeError(ErrorKind::kIndexOutOfRange,
                       "randomized index out of range");
    }
    for (std::size_t i = 0; i < m; ++i) {
      entries[x * n + partition.randomized[i]] = r[i];
    }
  }
  absl::StatusOr<Channel> channel = Channel::Create(n, std::move(entries));
  if (!channel.ok()) {
    return MakeError(ErrorKind::kInvalidArgument, channel.status().message());
  }
  return Mechanism{partition, std::move(r), *std::move(channel)};
}

OutputStats ComputeOutputStats(const JointDistribution& joint,
                               const Channel& channel,
                               absl::Span<const int> randomized) {
  const int n_s = joint.num_s();
  const int n = channel.size();
  OutputStats stats;
  stats.p_y.assign(n, 0.0);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) stats.p_y[y] += channel.at(x, y) * joint.p_x()[x];
  }
  stats.reachable.assign(n, false);
  for (int y = 0; y < n; ++y) stats.reachable[y] = stats.p_y[y] > 0.0;

  std::vector<bool> in_randomized(n, false);
  for (int x : randomized) in_randomized[x] = true;

  stats.i_sy.assign(static_cast<std::size_t>(n_s) * n, 0.0);
  stats.p_sy.assign(static_cast<std::size_t>(n_s) * n, 0.0);
  for (int s = 0; s < n_s; ++s) {
    for (int y = 0; y < n; ++y) {
      double p_sy = 0.0;
      for (int x = 0; x < n; ++x) p_sy += channel.at(x, y) * joint.prob(s, x);
      stats.p_sy[s * n + y] = p_sy / joint.total();
      if (!stats.reachable[y]) continue;
      const double lift =
          LogLift(p_sy, joint.p_s()[s], stats.p_y[y], joint.total());
      stats.i_sy[s * n + y] = lift;
      stats.max_abs_lift = std::max(stats.max_abs_lift, std::abs(lift));
      if (in_randomized[y]) {
        stats.max_abs_lift_randomized =
            std::max(stats.max_abs_lift_randomized, std::abs(lift));
      }
    }
  }
  return stats;
}

OutputStats ComputeOutputStats(const JointDistribution& joint,
                               const Mechanism& mechanism) {
  return ComputeOutputStats(joint, mechanism.channel,
                            mechanism.partition.randomized);
}

double RealizedBreachProbability(const JointDistribution& joint,
                                 const OutputStats& stats, double eps) {
  const int n = static_cast<int>(stats.p_y.size());
  double breach = 0.0;
  for (int s = 0; s < joint.num_s(); ++s) {
    for (int y = 0; y < n; ++y) {
      if (stats.reachable[y] &&
          std::abs(stats.lift(s, y)) > eps + kLiftTolerance) {
        breach += stats.p_sy[s * n + y];
      }
    }
  }
  return breach;
}

absl::StatusOr<bool> Attainable(const JointDistribution& joint,
                                absl::Span<const int> subset,
                                double eps_prime) {
  absl::StatusOr<double> eps = EpsilonOfSubset(joint, subset);
  if (!eps.ok()) return eps.status();
  return *eps <= eps_prime + kLiftTolerance;
}

double EpsilonC(const JointDistribution& joint, double eps) {
  const Partition partition = WatchdogPartition(joint, eps);
  if (partition.randomized.empty()) return 0.0;
  return *EpsilonOfSubset(joint, partition.randomized);
}

absl::StatusOr<Channel> BlockChannel(
    const Partition& partition, absl::Span<const std::vector<double>> rows) {
  const int n =
      static_cast<int>(partition.kept.size() + partition.randomized.size());
  const std::size_t m = partition.randomized.size();
  if (rows.size() != m) {
    return MakeError(ErrorKind::kInvalidArgument,
                     "one row per randomized symbol is required");
  }
  std::vector<double> entries(static_cast<std::size_t>(n) * n, 0.0);
  for (int x : partition.kept) entries[x * n + x] = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != m) {
      return MakeError(ErrorKind::kInvalidArgument,
                       "block rows must be supported on the randomized set");
    }
    for (std::size_t j = 0; j < m; ++j) {
      entries[partition.randomized[i] * n + partition.randomized[j]] =
          rows[i][j];
    }
  }
  return Channel::Create(n, std::move(entries));
}

absl::StatusOr<double> FalsifyOptimality(const JointDistribution& joint,
                                         double eps, int n_channels,
                                         std::uint64_t seed) {
  if (n_channels < 1) {
    return MakeError(ErrorKind::kInvalidArgument, "n_channels must be >= 1");
  }
  const Partition partition = WatchdogPartition(joint, eps);
  const int m = static_cast<int>(partition.randomized.size());
  if (m < 2) {
    return MakeError(
        ErrorKind::kSingletonOrEmptyRandomizedSet,
        absl::StrCat("randomized set has ", m, " symbols; need at least 2"));
  }
  double best = HUGE_VAL;
  for (int trial = 0; trial < n_channels; ++trial) {
    Rng rng(DeriveSeed(seed, trial));
    std::vector<std::vector<double>> rows;
    rows.reserve(m);
    for (int i = 0; i < m; ++i) rows.push_back(rng.FlatSimplex(m));
    absl::StatusOr<Channel> channel = BlockChannel(partition, rows);
    if (!channel.ok()) return channel.status();
    const OutputStats stats =
        ComputeOutputStats(joint, *channel, partition.randomized);
    best = std::min(best, stats.max_abs_lift_randomized);
  }
  return best;
}

std::string MechanismToCsv(const JointDistribution& joint,
                           const Channel& channel) {
  std::string out = "x,y,probability\n";
  for (int x = 0; x < channel.size(); ++x) {
    for (int y = 0; y < channel.size(); ++y) {
      absl::StrAppend(&out, joint.x_labels()[x], ",", joint.x_labels()[y],
                      absl::StrFormat(",%.17g\n", channel.at(x, y)));
    }
  }
  return out;
}

absl::StatusOr<LabeledChannel> ParseMechanismCsv(absl::string_view text) {
  std::vector<std::string> labels;
  std::map<std::string, int> index;
  auto intern = [&](std::string label) {
    auto [it, inserted] = index.emplace(label, static_cast<int>(labels.size()));
    if (inserted) labels.push_back(std::move(label));
    return it->second;
  };
  struct Cell {
    int x, y;
    double p;
  };
  std::vector<Cell> cells;
  bool header_seen = false;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<absl::string_view> parts = absl::StrSplit(line, ',');
    if (parts.size() != 3) {
      return MakeError(ErrorKind::kParseError,
                       absl::StrCat("line ", line_no, ": expected x,y,p"));
    }
    if (!header_seen) {
      header_seen = true;
      if (absl::StripAsciiWhitespace(parts[0]) == "x") continue;
    }
    absl::string_view value = absl::StripAsciiWhitespace(parts[2]);
    double p = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), p);
    if (value.empty() || ec != std::errc() ||
        ptr != value.data() + value.size()) {
      return MakeError(ErrorKind::kParseError,
                       absl::StrCat("line ", line_no, ": bad probability"));
    }
    const int x = intern(std::string(absl::StripAsciiWhitespace(parts[0])));
    const int y = intern(std::string(absl::StripAsciiWhitespace(parts[1])));
    cells.push_back({x, y, p});
  }
  const int n = static_cast<int>(labels.size());
  std::vector<double> entries(static_cast<std::size_t>(n) * n, 0.0);
  for (const Cell& cell : cells) entries[cell.x * n + cell.y] = cell.p;
  absl::StatusOr<Channel> channel = Channel::Create(n, std::move(entries));
  if (!channel.ok()) {
    return MakeError(ErrorKind::kParseError, channel.status().message());
  }
  return LabeledChannel{std::move(labels), *std::move(channel)};
}

Sanitizer::Sanitizer(Channel channel, std::uint64_t seed)
    : channel_(std::move(channel)), rng_(seed) {}

int Sanitizer::Apply(int x) {
  const double u = rng_.Uniform();
  double cumulative = 0.0;
  int last_positive = x;
  for (int y = 0; y < channel_.size(); ++y) {
    const double p = channel_.at(x, y);
    if (p <= 0.0) continue;
    cumulative += p;
    last_positive = y;
    if (u < cumulative) return y;
  }
  return last_positive;
}

}  // namespace watchdog
