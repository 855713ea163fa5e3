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

#include "pridec/lp.h"

#include <vector>

#include "gtest/gtest.h"

namespace pridec {
namespace {

using Sense = LinearConstraint::Sense;

TEST(SolveLpTest, SmallMaximization) {
  // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x <= 3.
  LpProblem lp;
  lp.num_vars = 2;
  lp.objective = {-3, -2};
  lp.AddConstraint({1, 1}, Sense::kLe, 4);
  lp.AddConstraint({1, 3}, Sense::kLe, 6);
  lp.AddConstraint({1, 0}, Sense::kLe, 3);
  const LpSolution s = SolveLp(lp);
  ASSERT_EQ(s.status, LpSolution::Status::kOptimal);
  EXPECT_NEAR(s.objective, -11.0, 1e-9);
  EXPECT_NEAR(s.x[0], 3.0, 1e-9);
  EXPECT_NEAR(s.x[1], 1.0, 1e-9);
}

TEST(SolveLpTest, EqualityAndFreeVariable) {
  // min t s.t. t >= x - 1, t >= 1 - x, x = 0.25, t free.
  LpProblem lp;
  lp.num_vars = 2;
  lp.objective = {0, 1};
  lp.free_vars = {false, true};
  lp.AddConstraint({-1, 1}, Sense::kGe, -1);
  lp.AddConstraint({1, 1}, Sense::kGe, 1);
  lp.AddConstraint({1, 0}, Sense::kEq, 0.25);
  const LpSolution s = SolveLp(lp);
  ASSERT_EQ(s.status, LpSolution::Status::kOptimal);
  EXPECT_NEAR(s.objective, 0.75, 1e-9);
}

TEST(SolveLpTest, Infeasible) {
  LpProblem lp;
  lp.num_vars = 1;
  lp.objective = {1};
  lp.AddConstraint({1}, Sense::kGe, 2);
  lp.AddConstraint({1}, Sense::kLe, 1);
  EXPECT_EQ(SolveLp(lp).status, LpSolution::Status::kInfeasible);
}

TEST(SolveLpTest, Unbounded) {
  LpProblem lp;
  lp.num_vars = 1;
  lp.objective = {-1};
  lp.AddConstraint({1}, Sense::kGe, 0);
  EXPECT_EQ(SolveLp(lp).status, LpSolution::Status::kUnbounded);
}

TEST(MinMaxGameTest, MatchingPennies) {
  const GameSolution g = SolveMinMaxGame({{1, 0}, {0, 1}}, {0, 0}, {2}, true);
  EXPECT_NEAR(g.value, 0.5, 1e-12);
  EXPECT_NEAR(g.x[0], 0.5, 1e-12);
  EXPECT_NEAR(g.mu[0], 0.5, 1e-12);
}

TEST(MinMaxGameTest, ProductOfSimplices) {
  // max(x1 + x3, x1 + x2 - 1/2) is minimized at x1 = 0, x2 = 3/4.
  const GameSolution g =
      SolveMinMaxGame({{0, 1, 0, 1}, {0, 1, 1, 0}}, {0.0, -0.5}, {2, 2});
  EXPECT_NEAR(g.value, 0.25, 1e-12);
  EXPECT_NEAR(g.x[0], 1.0, 1e-12);
  EXPECT_NEAR(g.x[2], 0.75, 1e-12);
}

TEST(CleanBlocksTest, Renormalizes) {
  std::vector<double> x = {0.5, -1e-12, 0.5, 0.2, 0.2};
  CleanBlocks(x, {3, 2});
  EXPECT_DOUBLE_EQ(x[1], 0.0);
  EXPECT_DOUBLE_EQ(x[3], 0.5);
}

}  // namespace
}  // namespace pridec
