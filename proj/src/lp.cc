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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pridec/error.h"

namespace pridec {

namespace {

constexpr int kMaxPivots = 200000;

using Sense = LinearConstraint::Sense;

class Tableau {
 public:
  // rows: constraint rows with rhs >= 0; basis: initial basic column per row.
  Tableau(std::vector<std::vector<double>> rows, std::vector<int> basis,
          int num_cols)
      : rows_(std::move(rows)), basis_(std::move(basis)), num_cols_(num_cols),
        allowed_(num_cols, true) {}

  int num_rows() const { return static_cast<int>(rows_.size()); }
  double rhs(int r) const { return rows_[r][num_cols_]; }
  double at(int r, int c) const { return rows_[r][c]; }
  int basis(int r) const { return basis_[r]; }
  void Disallow(int c) { allowed_[c] = false; }
  int pivots() const { return pivots_; }

  // Sets the cost row to the reduced costs of `cost`.
  void SetCost(const std::vector<double>& cost) {
    cost_.assign(num_cols_ + 1, 0.0);
    for (int c = 0; c < num_cols_; ++c) cost_[c] = cost[c];
    for (int r = 0; r < num_rows(); ++r) {
      const double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (int c = 0; c <= num_cols_; ++c) cost_[c] -= cb * rows_[r][c];
    }
  }

  // Objective value of the current basic solution.
  double Objective() const { return -cost_[num_cols_]; }

  // Runs Bland's rule to optimality. Returns false when unbounded.
  bool Optimize() {
    while (true) {
      int enter = -1;
      for (int c = 0; c < num_cols_; ++c) {
        if (allowed_[c] && cost_[c] < -kLpTolerance) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int r = 0; r < num_rows(); ++r) {
        const double a = rows_[r][enter];
        if (a <= kLpTolerance) continue;
        const double ratio = rows_[r][num_cols_] / a;
        if (leave < 0 || ratio < best - 1e-12) {
          best = ratio;
          leave = r;
        } else if (ratio <= best + 1e-12 && basis_[r] < basis_[leave]) {
          best = std::min(best, ratio);
          leave = r;
        }
      }
      if (leave < 0) return false;
      Pivot(leave, enter);
    }
  }

  void Pivot(int r, int c) {
    if (++pivots_ > kMaxPivots) {
      throw Error(ErrorCode::kNonConvergence, "simplex pivot limit reached");
    }
    std::vector<double>& pr = rows_[r];
    const double inv = 1.0 / pr[c];
    for (double& v : pr) v *= inv;
    pr[c] = 1.0;
    auto eliminate = [&](std::vector<double>& row) {
      const double f = row[c];
      if (f == 0.0) return;
      for (int k = 0; k <= num_cols_; ++k) row[k] -= f * pr[k];
      row[c] = 0.0;
    };
    for (int i = 0; i < num_rows(); ++i) {
      if (i != r) eliminate(rows_[i]);
    }
    if (!cost_.empty()) eliminate(cost_);
    basis_[r] = c;
  }

  void RemoveRow(int r) {
    rows_.erase(rows_.begin() + r);
    basis_.erase(basis_.begin() + r);
  }

  std::vector<double> Solution() const {
    std::vector<double> x(num_cols_, 0.0);
    for (int r = 0; r < num_rows(); ++r) x[basis_[r]] = rows_[r][num_cols_];
    return x;
  }

 private:
  std::vector<std::vector<double>> rows_;
  std::vector<int> basis_;
  std::vector<double> cost_;
  int num_cols_;
  std::vector<bool> allowed_;
  int pivots_ = 0;
};

}  // namespace

void LpProblem::AddConstraint(std::vector<double> coeffs,
                              LinearConstraint::Sense sense, double rhs) {
  coeffs.resize(num_vars, 0.0);
  constraints.push_back({std::move(coeffs), sense, rhs});
}

LpSolution SolveLp(const LpProblem& problem) {
  const int n = problem.num_vars;
  if (static_cast<int>(problem.objective.size()) != n) {
    throw Error(ErrorCode::kRange, "objective length differs from num_vars");
  }
  // Column layout: structural (free ones split), slacks/surplus, artificials.
  std::vector<int> pos_col(n), neg_col(n, -1);
  int cols = 0;
  for (int j = 0; j < n; ++j) {
    pos_col[j] = cols++;
    if (!problem.free_vars.empty() && problem.free_vars[j]) neg_col[j] = cols++;
  }
  const int structural = cols;
  const int m = static_cast<int>(problem.constraints.size());
  int num_slack = 0;
  int num_art = 0;
  for (const auto& con : problem.constraints) {
    Sense s = con.sense;
    if (con.rhs < 0.0) {
      s = s == Sense::kLe ? Sense::kGe : (s == Sense::kGe ? Sense::kLe : s);
    }
    if (s != Sense::kEq) ++num_slack;
    if (s != Sense::kLe) ++num_art;
  }
  const int art_start = structural + num_slack;
  const int total = art_start + num_art;

  std::vector<std::vector<double>> rows(m, std::vector<double>(total + 1, 0.0));
  std::vector<int> basis(m);
  int slack = structural;
  int art = art_start;
  for (int i = 0; i < m; ++i) {
    const auto& con = problem.constraints[i];
    if (static_cast<int>(con.coeffs.size()) != n) {
      throw Error(ErrorCode::kRange, "constraint length differs from num_vars");
    }
    const double sign = con.rhs < 0.0 ? -1.0 : 1.0;
    Sense s = con.sense;
    if (sign < 0.0) {
      s = s == Sense::kLe ? Sense::kGe : (s == Sense::kGe ? Sense::kLe : s);
    }
    auto& row = rows[i];
    for (int j = 0; j < n; ++j) {
      row[pos_col[j]] = sign * con.coeffs[j];
      if (neg_col[j] >= 0) row[neg_col[j]] = -sign * con.coeffs[j];
    }
    row[total] = sign * con.rhs;
    if (s == Sense::kLe) {
      row[slack] = 1.0;
      basis[i] = slack++;
    } else if (s == Sense::kGe) {
      row[slack++] = -1.0;
      row[art] = 1.0;
      basis[i] = art++;
    } else {
      row[art] = 1.0;
      basis[i] = art++;
    }
  }

  Tableau tab(std::move(rows), std::move(basis), total);
  LpSolution out;
  if (num_art > 0) {
    std::vector<double> phase1(total, 0.0);
    for (int c = art_start; c < total; ++c) phase1[c] = 1.0;
    tab.SetCost(phase1);
    tab.Optimize();
    if (tab.Objective() > 1e-7) {
      out.status = LpSolution::Status::kInfeasible;
      out.pivots = tab.pivots();
      return out;
    }
    // Drive artificials out of the basis; drop redundant rows.
    for (int r = tab.num_rows() - 1; r >= 0; --r) {
      if (tab.basis(r) < art_start) continue;
      int enter = -1;
      for (int c = 0; c < art_start; ++c) {
        if (std::abs(tab.at(r, c)) > kLpTolerance) {
          enter = c;
          break;
        }
      }
      if (enter >= 0) {
        tab.Pivot(r, enter);
      } else {
        tab.RemoveRow(r);
      }
    }
    for (int c = art_start; c < total; ++c) tab.Disallow(c);
  }

  std::vector<double> cost(total, 0.0);
  for (int j = 0; j < n; ++j) {
    cost[pos_col[j]] = problem.objective[j];
    if (neg_col[j] >= 0) cost[neg_col[j]] = -problem.objective[j];
  }
  tab.SetCost(cost);
  if (!tab.Optimize()) {
    out.status = LpSolution::Status::kUnbounded;
    out.pivots = tab.pivots();
    return out;
  }
  const std::vector<double> sol = tab.Solution();
  out.status = LpSolution::Status::kOptimal;
  out.x.assign(n, 0.0);
  double obj = 0.0;
  for (int j = 0; j < n; ++j) {
    out.x[j] = sol[pos_col[j]] - (neg_col[j] >= 0 ? sol[neg_col[j]] : 0.0);
    obj += problem.objective[j] * out.x[j];
  }
  out.objective = obj;
  out.pivots = tab.pivots();
  return out;
}

void CleanBlocks(std::vector<double>& x, const std::vector<int>& blocks) {
  int start = 0;
  for (int size : blocks) {
    double total = 0.0;
    for (int j = start; j < start + size; ++j) {
      x[j] = std::max(0.0, x[j]);
      total += x[j];
    }
    for (int j = start; j < start + size; ++j) {
      x[j] = total > 0.0 ? x[j] / total : 1.0 / size;
    }
    start += size;
  }
}

GameSolution SolveMinMaxGame(const std::vector<std::vector<double>>& a,
                             const std::vector<double>& b,
                             const std::vector<int>& blocks, bool want_dual) {
  const int rows = static_cast<int>(a.size());
  if (rows == 0) throw Error(ErrorCode::kEmptyClass, "game has no rows");
  const int vars = std::accumulate(blocks.begin(), blocks.end(), 0);

  // Variables: x (vars), then t (free).
  LpProblem lp;
  lp.num_vars = vars + 1;
  lp.objective.assign(vars + 1, 0.0);
  lp.objective[vars] = 1.0;
  lp.free_vars.assign(vars + 1, false);
  lp.free_vars[vars] = true;
  for (int i = 0; i < rows; ++i) {
    std::vector<double> c(a[i]);
    c.resize(vars + 1, 0.0);
    c[vars] = -1.0;
    lp.AddConstraint(std::move(c), Sense::kLe, -b[i]);
  }
  int start = 0;
  for (int size : blocks) {
    std::vector<double> c(vars + 1, 0.0);
    for (int j = start; j < start + size; ++j) c[j] = 1.0;
    lp.AddConstraint(std::move(c), Sense::kEq, 1.0);
    start += size;
  }
  LpSolution sol = SolveLp(lp);
  if (sol.status != LpSolution::Status::kOptimal) {
    throw Error(ErrorCode::kInfeasible, "game LP did not reach optimality");
  }
  GameSolution out;
  out.x.assign(sol.x.begin(), sol.x.begin() + vars);
  CleanBlocks(out.x, blocks);
  out.value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < rows; ++i) {
    double v = b[i];
    for (int j = 0; j < vars; ++j) v += a[i][j] * out.x[j];
    out.value = std::max(out.value, v);
  }

  if (want_dual) {
    // max sum_i mu_i b_i + sum_k v_k  s.t.  v_k <= sum_i mu_i a_ij (j in k).
    const int nb = static_cast<int>(blocks.size());
    LpProblem dual;
    dual.num_vars = rows + nb;
    dual.objective.assign(rows + nb, 0.0);
    for (int i = 0; i < rows; ++i) dual.objective[i] = -b[i];
    for (int k = 0; k < nb; ++k) dual.objective[rows + k] = -1.0;
    dual.free_vars.assign(rows + nb, false);
    for (int k = 0; k < nb; ++k) dual.free_vars[rows + k] = true;
    int s = 0;
    for (int k = 0; k < nb; ++k) {
      for (int j = s; j < s + blocks[k]; ++j) {
        std::vector<double> c(rows + nb, 0.0);
        for (int i = 0; i < rows; ++i) c[i] = -a[i][j];
        c[rows + k] = 1.0;
        dual.AddConstraint(std::move(c), Sense::kLe, 0.0);
      }
      s += blocks[k];
    }
    std::vector<double> c(rows + nb, 0.0);
    for (int i = 0; i < rows; ++i) c[i] = 1.0;
    dual.AddConstraint(std::move(c), Sense::kEq, 1.0);
    LpSolution ds = SolveLp(dual);
    if (ds.status != LpSolution::Status::kOptimal) {
      throw Error(ErrorCode::kInfeasible, "dual game LP failed");
    }
    out.mu.assign(ds.x.begin(), ds.x.begin() + rows);
    CleanBlocks(out.mu, {rows});
  }
  return out;
}

}  // namespace pridec
