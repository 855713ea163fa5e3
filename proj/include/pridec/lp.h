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

// Dense two-phase simplex with Bland's rule, plus a helper for min-max games
// over products of simplices.

#ifndef PRIDEC_LP_H_
#define PRIDEC_LP_H_

#include <vector>

namespace pridec {

inline constexpr double kLpTolerance = 1e-9;

struct LinearConstraint {
  enum class Sense { kLe, kEq, kGe };
  std::vector<double> coeffs;
  Sense sense = Sense::kLe;
  double rhs = 0.0;
};

// minimize objective . x subject to constraints; x >= 0 unless free.
struct LpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;
  std::vector<bool> free_vars;  // empty means none free

  void AddConstraint(std::vector<double> coeffs, LinearConstraint::Sense sense,
                     double rhs);
};

struct LpSolution {
  enum class Status { kOptimal, kInfeasible, kUnbounded };
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  int pivots = 0;
};

LpSolution SolveLp(const LpProblem& problem);

// min over x in a product of simplices of max_i (a[i] . x + b[i]). Blocks are
// consecutive variable ranges with the given sizes.
struct GameSolution {
  double value = 0.0;
  std::vector<double> x;
  // Optimal mixed strategy of the maximizing player over rows; filled only
  // when requested.
  std::vector<double> mu;
};

GameSolution SolveMinMaxGame(const std::vector<std::vector<double>>& a,
                             const std::vector<double>& b,
                             const std::vector<int>& blocks,
                             bool want_dual = false);

// Clips negatives, renormalizes each block in place.
void CleanBlocks(std::vector<double>& x, const std::vector<int>& blocks);

}  // namespace pridec

#endif  // PRIDEC_LP_H_
