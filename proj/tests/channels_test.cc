// Copyright 2026 The pridec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pridec/channels.h"

#include <cmath>
#include <limits>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "pridec/error.h"

namespace pridec {
namespace {

const FiniteSpace kZ = FiniteSpace::Indexed(4, "z");

TEST(DpLevelTest, UniformIsZero) {
  EXPECT_DOUBLE_EQ(DpLevel(Channel::Uniform(kZ, FiniteSpace::Indexed(3))), 0.0);
}

TEST(DpLevelTest, DeterministicIsInfinite) {
  const Channel c(FiniteSpace::Indexed(2), FiniteSpace::Indexed(2), {{1, 0}, {0, 1}});
  EXPECT_EQ(DpLevel(c), std::numeric_limits<double>::infinity());
}

TEST(DpLevelTest, RejectsBadKernel) {
  EXPECT_THROW(Channel(FiniteSpace::Indexed(2), FiniteSpace::Indexed(2), {{0.6, 0.6}, {0, 1}}),
               Error);
}

TEST(BinaryChannelTest, ConstantZeroIsFair) {
  const Channel c = BinaryChannel(ScalarFn(kZ, {0, 0, 0, 0}), 1.0);
  for (int z = 0; z < 4; ++z) EXPECT_DOUBLE_EQ(c(z, 1), 0.5);
}

TEST(BinaryChannelTest, LnTwoGivesThreeQuarters) {
  const Channel c = BinaryChannel(ScalarFn(kZ, {1, 0, 0, 0}), std::log(2.0));
  EXPECT_NEAR(c(0, 1), 0.75, 1e-15);
}

TEST(BinaryChannelTest, ExtremalLevelIsAlpha) {
  for (double alpha : {0.1, 1.0, 3.0}) {
    EXPECT_NEAR(DpLevel(BinaryChannel(ScalarFn(kZ, {0, 0.3, 1, 0.5}), alpha)), alpha, 1e-9);
  }
}

TEST(ApplyTest, BinaryMarginalIsRademacher) {
  const ScalarFn l(kZ, {0.1, 0.9, 0.4, 0.0});
  const FiniteDist p(kZ, {0.1, 0.2, 0.3, 0.4});
  const double alpha = 0.7;
  const FiniteDist out = Apply(BinaryChannel(l, alpha), p);
  EXPECT_NEAR(out[1], Rad(CAlpha(alpha) * p.Expect(l.values()))[1], 1e-15);
}

TEST(ApplyTest, IdenticalRows) {
  const Channel c(kZ, FiniteSpace::Indexed(2),
                  {{0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}});
  const FiniteDist out = Apply(c, FiniteDist(kZ, {0.7, 0.1, 0.1, 0.1}));
  EXPECT_DOUBLE_EQ(out[0], 0.3);
}

TEST(SdpiDecomposeTest, BinaryChannel) {
  const double alpha = 0.8;
  const ScalarFn l(kZ, {0, 0.25, 0.5, 1.0});
  const SdpiDecomposition d = SdpiDecompose(BinaryChannel(l, alpha), alpha);
  ASSERT_EQ(d.outcomes.size(), 2u);
  EXPECT_EQ(d.outcomes[1], 1);
  EXPECT_NEAR(d.floor[1], 0.5, 1e-15);
  for (int z = 0; z < 4; ++z) {
    EXPECT_NEAR(d.fns[1](z), std::exp(-alpha) * l(z), 1e-14);
  }
}

TEST(SdpiDecomposeTest, IdenticalRowsGiveZeroFunctions) {
  const Channel c(kZ, FiniteSpace::Indexed(2),
                  {{0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}});
  const SdpiDecomposition d = SdpiDecompose(c, 0.5);
  for (const ScalarFn& f : d.fns) EXPECT_DOUBLE_EQ(f.Max(), 0.0);
}

TEST(SdpiDecomposeTest, ReconstructsRandomChannels) {
  CounterRng rng(3);
  for (int i = 0; i < 20; ++i) {
    const double alpha = 0.2 + rng.Uniform();
    const Channel c = RandomDpChannel(5, 4, alpha, rng);
    const SdpiDecomposition d = SdpiDecompose(c, alpha);
    for (size_t k = 0; k < d.outcomes.size(); ++k) {
      for (int z = 0; z < 5; ++z) {
        EXPECT_NEAR(d.Reconstruct(static_cast<int>(k), z), c(z, d.outcomes[k]), 1e-14);
      }
    }
  }
}

TEST(SdpiDecomposeTest, RejectsNonPrivate) {
  const Channel c(FiniteSpace::Indexed(2), FiniteSpace::Indexed(2), {{1, 0}, {0.5, 0.5}});
  try {
    SdpiDecompose(c, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotDp);
  }
}

TEST(SdpiCheckTest, EqualInputsGiveZero) {
  const FiniteDist p(kZ, {0.1, 0.2, 0.3, 0.4});
  const SdpiReport r = SdpiCheck(BinaryChannel(ScalarFn(kZ, {0, 1, 0, 1}), 1.0), p, p, 1.0);
  EXPECT_NEAR(r.hellinger_sq, 0.0, 1e-15);
  EXPECT_NEAR(r.kl, 0.0, 1e-15);
  EXPECT_NEAR(r.chi_sq, 0.0, 1e-15);
  EXPECT_NEAR(r.expected_l_sq, 0.0, 1e-15);
}

TEST(SdpiCheckTest, BinaryExample) {
  const FiniteSpace s = FiniteSpace::Indexed(2);
  const SdpiReport r = SdpiCheck(BinaryChannel(ScalarFn(s, {1, 0}), 1.0),
                                 FiniteDist(s, {0.8, 0.2}), FiniteDist(s, {0.3, 0.7}), 1.0);
  EXPECT_GE(r.MinSlack(), -1e-12);
  EXPECT_GT(r.hellinger_sq, 0.0);
}

TEST(SdpiCheckTest, RandomChannelsHold) {
  CounterRng rng(5);
  const Channel c = RandomDpChannel(6, 4, 1.0, rng);
  for (int i = 0; i < 200; ++i) {
    const FiniteDist p1(c.input(), oracle::RandomInterior(rng, 6));
    const FiniteDist p2(c.input(), oracle::RandomInterior(rng, 6));
    EXPECT_GE(SdpiCheck(c, p1, p2, 1.0).MinSlack(), -1e-9);
  }
}

}  // namespace
}  // namespace pridec
