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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracle.h"
#include "test_util.h"
#include "watchdog/status.h"

namespace watchdog {
namespace {

using testing::D1;

Mechanism Build(const JointDistribution& joint, double eps, RMode mode,
                std::vector<double> r = {}) {
  absl::StatusOr<Mechanism> mech =
      BuildMechanism(joint, WatchdogPartition(joint, eps), mode, r);
  EXPECT_TRUE(mech.ok()) << mech.status();
  return *mech;
}

TEST(BuildMechanismTest, UniformBlockStructure) {
  const Mechanism mech = Build(D1(), 0.5, RMode::kUniform);
  const double expected[4][4] = {{0.5, 0.5, 0, 0},
                                 {0.5, 0.5, 0, 0},
                                 {0, 0, 1, 0},
                                 {0, 0, 0, 1}};
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) EXPECT_EQ(mech.channel.at(x, y), expected[x][y]);
  }
  EXPECT_EQ(mech.r, (std::vector<double>{0.5, 0.5}));
}

TEST(BuildMechanismTest, MergeTargetsLowestIndex) {
  const Mechanism mech = Build(D1(), 0.5, RMode::kMerge);
  EXPECT_EQ(mech.channel.at(0, 0), 1.0);
  EXPECT_EQ(mech.channel.at(1, 0), 1.0);
  EXPECT_EQ(mech.channel.at(1, 1), 0.0);
}

TEST(BuildMechanismTest, EmptyRandomizedIsIdentity) {
  const Mechanism mech = Build(D1(), 2.0, RMode::kUniform);
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      EXPECT_EQ(mech.channel.at(x, y), x == y ? 1.0 : 0.0);
    }
  }
}

TEST(BuildMechanismTest, CustomR) {
  const Mechanism mech = Build(D1(), 0.5, RMode::kCustom, {0.3, 0.7});
  EXPECT_EQ(mech.channel.at(1, 0), 0.3);
  EXPECT_EQ(mech.channel.at(0, 1), 0.7);
  JointDistribution joint = D1();
  const Partition p = WatchdogPartition(joint, 0.5);
  for (const std::vector<double>& bad :
       {std::vector<double>{0.5, 0.6}, std::vector<double>{-0.1, 1.1},
        std::vector<double>{1.0}}) {
    absl::StatusOr<Mechanism> mech2 =
        BuildMechanism(joint, p, RMode::kCustom, bad);
    EXPECT_EQ(GetErrorKind(mech2.status()), ErrorKind::kInvalidR);
  }
}

TEST(OutputStatsTest, D1Uniform) {
  JointDistribution joint = D1();
  const OutputStats stats =
      ComputeOutputStats(joint, Build(joint, 0.5, RMode::kUniform));
  for (int y : {0, 1}) {
    EXPECT_NEAR(stats.lift(0, y), 0.08701, 1e-5);
    EXPECT_NEAR(stats.lift(1, y), -0.09531, 1e-5);
  }
  EXPECT_NEAR(stats.max_abs_lift_randomized, 0.09531, 1e-5);
  double total = 0;
  for (double p : stats.p_y) total += p;
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(OutputStatsTest, IdentityReproducesLiftTable) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    JointDistribution joint = testing::RandomSparse(4, 6, seed);
    const OutputStats stats =
        ComputeOutputStats(joint, Channel::Identity(6), {});
    const LiftTable table = ComputeLiftTable(joint);
    for (int s = 0; s < 4; ++s) {
      for (int x = 0; x < 6; ++x) EXPECT_EQ(stats.lift(s, x), table.at(s, x));
    }
  }
}

TEST(OutputStatsTest, MergeHasSameRealizedLift) {
  JointDistribution joint = D1();
  const OutputStats stats =
      ComputeOutputStats(joint, Build(joint, 0.5, RMode::kMerge));
  EXPECT_TRUE(stats.reachable[0]);
  EXPECT_FALSE(stats.reachable[1]);
  EXPECT_NEAR(stats.lift(0, 0), 0.08701, 1e-5);
  EXPECT_NEAR(stats.lift(1, 0), -0.09531, 1e-5);
  EXPECT_NEAR(stats.max_abs_lift_randomized, 0.09531, 1e-5);
}

TEST(AttainableTest, D1) {
  JointDistribution joint = D1();
  EXPECT_TRUE(*Attainable(joint, {0, 1}, 0.1));
  EXPECT_FALSE(*Attainable(joint, {0, 1}, 0.05));
  EXPECT_TRUE(*Attainable(joint, {0, 1, 2, 3}, 0.0));
  EXPECT_EQ(GetErrorKind(Attainable(joint, {}, 1).status()),
            ErrorKind::kEmptySubset);
}

TEST(EpsilonCTest, D1) {
  EXPECT_NEAR(EpsilonC(D1(), 0.5), 0.09531, 1e-5);
  EXPECT_EQ(EpsilonC(D1(), 2.0), 0.0);
}

TEST(EpsilonCTest, AchievedByUniformMechanism) {
  JointDistribution joint = testing::Random(15, 20, 1);
  const OutputStats stats =
      ComputeOutputStats(joint, Build(joint, 2.0, RMode::kUniform));
  EXPECT_NEAR(stats.max_abs_lift_randomized, EpsilonC(joint, 2.0), 1e-9);
}

TEST(EpsilonCTest, SingletonRandomizedSetIsItsOwnEps) {
  JointDistribution joint = D1();
  // eps in [eps_2, eps_1) leaves x0 alone on the randomized side.
  EXPECT_EQ(WatchdogPartition(joint, 1.0).randomized, (std::vector<int>{0}));
  EXPECT_EQ(EpsilonC(joint, 1.0), ComputeLiftTable(joint).eps_x[0]);
}

TEST(FalsifyOptimalityTest, D1) {
  absl::StatusOr<double> best = FalsifyOptimality(D1(), 0.5, 500, 3);
  ASSERT_TRUE(best.ok()) << best.status();
  EXPECT_GE(*best, 0.09531017980432477 - 1e-9);
}

TEST(FalsifyOptimalityTest, XInvariantChannelAttainsBound) {
  JointDistribution joint = D1();
  const Partition p = WatchdogPartition(joint, 0.5);
  const std::vector<std::vector<double>> rows = {{0.2, 0.8}, {0.2, 0.8}};
  const Channel channel = *BlockChannel(p, rows);
  const OutputStats stats = ComputeOutputStats(joint, channel, p.randomized);
  EXPECT_NEAR(stats.max_abs_lift_randomized, EpsilonC(joint, 0.5), 1e-12);
}

TEST(FalsifyOptimalityTest, RandomBatchAtSecondCriticalValue) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    JointDistribution joint = testing::Random(6, 8, seed);
    const double eps = CriticalEpsilons(joint)[1].eps;
    // At the 2nd critical value only x_1 is randomized; use the 3rd so the
    // block has two symbols when ties do not intervene.
    const double eps3 = CriticalEpsilons(joint)[2].eps;
    for (double e : {eps, eps3}) {
      if (WatchdogPartition(joint, e).randomized.size() < 2) continue;
      absl::StatusOr<double> best = FalsifyOptimality(joint, e, 200, seed);
      ASSERT_TRUE(best.ok());
      EXPECT_GE(*best, EpsilonC(joint, e) - 1e-9) << seed;
    }
  }
}

TEST(FalsifyOptimalityTest, NeedsTwoRandomizedSymbols) {
  EXPECT_EQ(GetErrorKind(FalsifyOptimality(D1(), 1.0, 10, 1).status()),
            ErrorKind::kSingletonOrEmptyRandomizedSet);
  EXPECT_EQ(GetErrorKind(FalsifyOptimality(D1(), 2.0, 10, 1).status()),
            ErrorKind::kSingletonOrEmptyRandomizedSet);
}

// Equivalence on small blocks: a channel keeping every realized
// lift on the block within eps' exists exactly when the subset predicate
// holds. Sufficiency is witnessed by X-invariant channels on a grid;
// necessity is probed with random channels.
TEST(AttainableTest, AgreesWithChannelSearch) {
  Rng rng(2024);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    JointDistribution joint = testing::Random(3, 6, seed + 100);
    const int m = 2 + static_cast<int>(seed % 3);
    std::vector<int> subset;
    for (int x = 0; x < m; ++x) subset.push_back(x);
    const Partition p = *Partition::FromRandomized(6, subset);
    const double eps_q = *EpsilonOfSubset(joint, subset);
    for (double eps_prime : {eps_q * 1.05 + 1e-9, eps_q * 0.9}) {
      const bool predicate = *Attainable(joint, subset, eps_prime);
      bool found = false;
      // Grid over X-invariant R on the block.
      for (int a = 1; a < 10 && !found; ++a) {
        std::vector<double> r(m, (1.0 - a / 10.0) / (m - 1));
        r[0] = a / 10.0;
        std::vector<std::vector<double>> rows(m, r);
        const OutputStats stats =
            ComputeOutputStats(joint, *BlockChannel(p, rows), p.randomized);
        found = stats.max_abs_lift_randomized <= eps_prime + kLiftTolerance;
      }
      for (int trial = 0; trial < 300 && !found; ++trial) {
        std::vector<std::vector<double>> rows;
        for (int i = 0; i < m; ++i) rows.push_back(rng.FlatSimplex(m));
        const OutputStats stats =
            ComputeOutputStats(joint, *BlockChannel(p, rows), p.randomized);
        found = stats.max_abs_lift_randomized <= eps_prime + kLiftTolerance;
      }
      EXPECT_EQ(found, predicate) << "seed " << seed << " eps' " << eps_prime;
    }
  }
}

TEST(MechanismPropertyTest, AchievabilityAndKeptSide) {
  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    JointDistribution joint = testing::Random(4, 7, seed);
    const CriticalLadder ladder = CriticalEpsilons(joint);
    const double eps = ladder[seed % 7].eps;
    const Partition p = WatchdogPartition(joint, eps);
    if (p.randomized.empty()) continue;
    const double eps_c = EpsilonC(joint, eps);
    std::vector<Mechanism> mechanisms = {Build(joint, eps, RMode::kUniform),
                                         Build(joint, eps, RMode::kMerge)};
    mechanisms.push_back(Build(joint, eps, RMode::kCustom,
                               rng.FlatSimplex(p.randomized.size())));
    const LiftTable table = ComputeLiftTable(joint);
    for (const Mechanism& mech : mechanisms) {
      for (int x = 0; x < 7; ++x) {
        double row = 0;
        for (double v : mech.channel.row(x)) row += v;
        ASSERT_NEAR(row, 1.0, 1e-12);
      }
      const OutputStats stats = ComputeOutputStats(joint, mech);
      ASSERT_NEAR(stats.max_abs_lift_randomized, eps_c, 1e-9);
      for (int y : p.kept) {
        for (int s = 0; s < 4; ++s) ASSERT_EQ(stats.lift(s, y), table.at(s, y));
      }
    }
  }
}

TEST(MechanismCsvTest, RoundTripAndIdentitySanitizer) {
  JointDistribution joint = D1();
  const Mechanism mech = Build(joint, 0.5, RMode::kUniform);
  absl::StatusOr<LabeledChannel> back =
      ParseMechanismCsv(MechanismToCsv(joint, mech.channel));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->labels, joint.x_labels());
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      EXPECT_EQ(back->channel.at(x, y), mech.channel.at(x, y));
    }
  }

  Sanitizer identity(Channel::Identity(4), 11);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(identity.Apply(i % 4), i % 4);
}

TEST(MechanismCsvTest, RejectsBadRows) {
  EXPECT_FALSE(ParseMechanismCsv("x,y,probability\na,a,0.5\n").ok());
  EXPECT_FALSE(ParseMechanismCsv("x,y,probability\na,a\n").ok());
  EXPECT_FALSE(ParseMechanismCsv("x,y,probability\na,a,zz\n").ok());
}

TEST(SanitizerTest, EmpiricalJointConvergesToAnalytic) {
  JointDistribution joint = testing::Random(3, 5, 77);
  const Mechanism mech = Build(joint, CriticalEpsilons(joint)[2].eps,
                               RMode::kUniform);
  const OutputStats stats = ComputeOutputStats(joint, mech);

  // Draw (s, x) pairs from p(s,x) and release Y.
  Rng rng(123);
  Sanitizer sanitizer(mech.channel, 456);
  const int n = 100000;
  std::vector<double> counts(3 * 5, 0.0);
  for (int i = 0; i < n; ++i) {
    double u = rng.Uniform(), acc = 0;
    int cell = 14;
    for (int c = 0; c < 15; ++c) {
      acc += joint.prob(c / 5, c % 5);
      if (u < acc) {
        cell = c;
        break;
      }
    }
    const int y = sanitizer.Apply(cell % 5);
    counts[(cell / 5) * 5 + y] += 1.0;
  }
  double tv = 0;
  for (int c = 0; c < 15; ++c) tv += std::abs(counts[c] / n - stats.p_sy[c]);
  EXPECT_LT(tv / 2, 0.02);
}

}  // namespace
}  // namespace watchdog
