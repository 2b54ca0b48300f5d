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

#include "watchdog/utility.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracle.h"
#include "test_util.h"
#include "watchdog/mechanism.h"
#include "watchdog/status.h"

namespace watchdog {
namespace {

using testing::D1;

TEST(EntropyTest, Examples) {
  EXPECT_NEAR(*Entropy(std::vector<double>{0.5, 0.5}), std::log(2.0), 1e-15);
  EXPECT_EQ(*Entropy(std::vector<double>{1.0, 0.0}), 0.0);
  EXPECT_NEAR(*Entropy(D1().p_x()), 1.37890, 1e-5);
  EXPECT_NEAR(EntropyX(D1()), 1.37890, 1e-5);
}

TEST(EntropyTest, Errors) {
  EXPECT_EQ(GetErrorKind(Entropy(std::vector<double>{0.6, 0.6}).status()),
            ErrorKind::kInvalidDistribution);
  EXPECT_EQ(GetErrorKind(Entropy(std::vector<double>{1.2, -0.2}).status()),
            ErrorKind::kInvalidDistribution);
  EXPECT_EQ(GetErrorKind(Entropy(std::vector<double>{}).status()),
            ErrorKind::kInvalidDistribution);
}

TEST(MutualInformationTest, D1) {
  JointDistribution joint = D1();
  const Partition p = WatchdogPartition(joint, 0.5);
  const Mechanism uniform = *BuildMechanism(joint, p, RMode::kUniform);
  const Mechanism merge = *BuildMechanism(joint, p, RMode::kMerge);
  EXPECT_NEAR(MutualInformation(joint, uniform.channel), 0.99994, 1e-5);
  EXPECT_NEAR(MutualInformation(joint, merge.channel),
              MutualInformation(joint, uniform.channel), 1e-12);
  EXPECT_NEAR(MutualInformation(joint, Channel::Identity(4)), EntropyX(joint),
              1e-12);
}

TEST(NmilTest, D1) {
  JointDistribution joint = D1();
  EXPECT_NEAR(*Nmil(joint, {0, 1}), 0.27483, 1e-5);
  EXPECT_EQ(*Nmil(joint, {0}), 0.0);
  EXPECT_EQ(*Nmil(joint, {}), 0.0);
  EXPECT_NEAR(*Nmil(joint, {0, 1, 2, 3}), 1.0, 1e-12);
  EXPECT_EQ(GetErrorKind(Nmil(joint, {0, 4}).status()),
            ErrorKind::kIndexOutOfRange);
}

TEST(ComputeUtilityTest, D1) {
  JointDistribution joint = D1();
  const UtilityReport report =
      *ComputeUtility(joint, WatchdogPartition(joint, 0.5));
  EXPECT_NEAR(report.h_x, 1.37890, 1e-5);
  EXPECT_NEAR(report.mi_xy, 0.99994, 1e-5);
  EXPECT_NEAR(report.p_qc, 0.55, 1e-12);
  EXPECT_NEAR(report.nmil, 0.27483, 1e-5);
  EXPECT_NEAR(report.h_x - report.p_qc * report.h_q, report.mi_xy, 1e-12);
}

TEST(UtilityPropertyTest, MatchesOracle) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    JointDistribution joint = testing::RandomSparse(3, 7, seed);
    const oracle::Table t = testing::ToTable(joint);
    std::vector<int> q;
    for (int x = 0; x < 7; ++x) {
      if ((seed >> (x % 5)) & 1 || x == static_cast<int>(seed % 7)) {
        q.push_back(x);
      }
    }
    const double expected = q.size() < 2 ? 0.0 : oracle::Nmil(t, q);
    ASSERT_NEAR(*Nmil(joint, q), expected, 1e-12);
  }
}

TEST(UtilityPropertyTest, MonotoneInSubset) {
  Rng rng(17);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    JointDistribution joint = testing::Random(3, 9, seed);
    std::vector<int> q;
    double prev = 0.0;
    for (int x = 0; x < 9; ++x) {
      if (rng.Uniform() < 0.3) continue;
      q.push_back(x);
      const double now = *Nmil(joint, q);
      ASSERT_GE(now, prev - 1e-15);
      ASSERT_GE(now, 0.0);
      ASSERT_LE(now, 1.0);
      prev = now;
    }
  }
}

TEST(UtilityPropertyTest, ClosedFormMatchesChannelForAnyR) {
  Rng rng(99);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    JointDistribution joint = testing::Random(4, 8, seed);
    const double eps = CriticalEpsilons(joint)[seed % 8].eps;
    const Partition p = WatchdogPartition(joint, eps);
    const UtilityReport report = *ComputeUtility(joint, p);
    std::vector<Mechanism> mechanisms = {
        *BuildMechanism(joint, p, RMode::kUniform),
        *BuildMechanism(joint, p, RMode::kMerge)};
    if (!p.randomized.empty()) {
      mechanisms.push_back(*BuildMechanism(
          joint, p, RMode::kCustom, rng.FlatSimplex(p.randomized.size())));
    }
    for (const Mechanism& mech : mechanisms) {
      const double from_channel = MutualInformation(joint, mech.channel);
      ASSERT_NEAR(from_channel, report.mi_xy, 1e-9);
      std::vector<double> flat;
      for (int x = 0; x < 8; ++x) {
        flat.insert(flat.end(), mech.channel.row(x).begin(),
                    mech.channel.row(x).end());
      }
      ASSERT_NEAR(from_channel,
                  static_cast<double>(oracle::MutualInformation(
                      testing::ToTable(joint), flat)),
                  1e-12);
    }
    ASSERT_NEAR(report.nmil, 1.0 - report.mi_xy / report.h_x, 1e-12);
  }
}

}  // namespace
}  // namespace watchdog
