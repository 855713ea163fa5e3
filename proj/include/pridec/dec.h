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

// Decision-estimation coefficients on finite instances.
//
// Every quantity is reduced to a DecTable: a loss table over (model,
// decision) and a divergence table over (model, column), where a column is
// whatever the learner randomizes over for exploration (a (decision,
// dictionary entry) pair, a bare decision, or a query). Solvers return
// certificates that re-evaluate to their value.

#ifndef PRIDEC_DEC_H_
#define PRIDEC_DEC_H_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pridec/models.h"
#include "pridec/prob.h"

namespace pridec {

struct DecTable {
  std::vector<std::vector<double>> loss;  // [model][decision]
  std::vector<std::vector<double>> div;   // [model][column]
  // Decision index of each column, or -1 when columns are not decisions.
  std::vector<int> column_decision;
  std::vector<std::string> column_labels;

  int num_models() const { return static_cast<int>(loss.size()); }
  int num_decisions() const {
    return loss.empty() ? 0 : static_cast<int>(loss.front().size());
  }
  int num_columns() const {
    return div.empty() ? 0 : static_cast<int>(div.front().size());
  }
  void Validate(bool needs_decisions) const;
};

// Columns (pi, l) over Pi x dictionary; div = D_l(M(pi), ref(pi))^2.
DecTable LdpTable(const ModelClass& cls, const Model& ref);
// Columns pi; div = HellingerSq(M(pi), ref(pi)).
DecTable HellingerTable(const ModelClass& cls, const Model& ref);
// Columns pi; div = HuberHellinger(M(pi), ref(pi), beta).
DecTable RobustTable(const ModelClass& cls, const Model& ref, double beta);

enum class CertMode { kExactLp, kExactEnum, kHeuristicUpper };
const char* CertModeName(CertMode mode);

struct DecCertificate {
  double value = 0.0;
  std::vector<double> p;  // over decisions
  std::vector<double> q;  // over columns
  int witness = -1;       // argmax model, lowest index on ties
  CertMode mode = CertMode::kExactLp;
  // Restricting exploration to a finite dictionary can only raise the
  // minimax value, so values are upper bounds on the unrestricted ones.
  bool upper_bound_only = true;
};

// sup_M E_p L(M,.) - gamma E_q div(M,.). Writes the argmax to *witness.
double OffsetObjective(const DecTable& table, double gamma,
                       const std::vector<double>& p,
                       const std::vector<double>& q, int* witness = nullptr);
// Same with p the decision marginal of q.
double OffsetRegObjective(const DecTable& table, double gamma,
                          const std::vector<double>& q,
                          int* witness = nullptr);
// Max of E_p L over models with E_q div <= eps^2; 0 if none qualifies.
double ConstrainedObjective(const DecTable& table, double eps,
                            const std::vector<double>& p,
                            const std::vector<double>& q,
                            int* witness = nullptr);
// Decision marginal of a distribution over columns.
std::vector<double> DecisionMarginal(const DecTable& table,
                                     const std::vector<double>& q);

DecCertificate SolveOffsetPac(const DecTable& table, double gamma);
DecCertificate SolveOffsetReg(const DecTable& table, double gamma);

struct SearchConfig {
  int restarts = 8;
  int steps = 500;
  double step_scale = 0.5;
  // Feasible-set enumeration is exact up to this many models.
  int exact_model_cap = 12;
  int quantile_grid = 40;
  uint64_t seed = 0x5eed;
};

DecCertificate SolveConstrained(const DecTable& table, double eps,
                                const SearchConfig& cfg = {});

// sup{D : P_{pi ~ p}(loss[pi] >= D) >= delta}.
double QuantileLoss(const std::vector<double>& p,
                    const std::vector<double>& loss, double delta);
double QuantileObjective(const DecTable& table, double eps, double delta,
                         const std::vector<double>& p,
                         const std::vector<double>& q,
                         int* witness = nullptr);
DecCertificate SolveQuantile(const DecTable& table, double eps, double delta,
                             const SearchConfig& cfg = {});

// Class-level entry points.
DecCertificate OffsetPacDecLdp(const ModelClass& cls, const Model& ref,
                               double gamma);
DecCertificate OffsetRegDecLdp(const ModelClass& cls, const Model& ref,
                               double gamma);
DecCertificate OffsetDecHellinger(const ModelClass& cls, const Model& ref,
                                  double gamma, bool regret);
DecCertificate RobustOffsetDec(const ModelClass& cls, const Model& ref,
                               double gamma, double beta, bool regret);
DecCertificate ConstrainedPacDecLdp(const ModelClass& cls, const Model& ref,
                                    double eps, const SearchConfig& cfg = {});
DecCertificate QuantilePacDec(const ModelClass& cls, const Model& ref,
                              double eps, double delta,
                              const SearchConfig& cfg = {});

// Maximum over M1 with sup_pi TV(M1(pi), M0(pi)) <= eps of
// min_pi L(M1,pi) + L(M0,pi).
double LocalDec(const ModelClass& cls, int m0, double eps);
// Maximum of |F(M1) - F(M0)| under the same constraint.
double TvModulus(const ModelClass& cls, int m0, double eps,
                 const std::vector<double>& functional);

struct CoveringResult {
  double n_frac = std::numeric_limits<double>::infinity();
  std::vector<double> p_star;
};
CoveringResult FractionalCovering(const ModelClass& cls, double delta);

// Columns are queries; div = P_{v ~ ref(query)}(|M(query) - v| > tau).
DecTable SqTable(const QueryModelClass& cls, const RandomizedQueryModel& ref,
                 double tau);
DecCertificate SqDec(const QueryModelClass& cls,
                     const RandomizedQueryModel& ref, double eps, double tau,
                     const SearchConfig& cfg = {});

// rho_D(D1, D2) = E_D (dD1/dD - 1)(dD2/dD - 1).
double PairwiseCorrelation(const FiniteDist& d1, const FiniteDist& d2,
                           const FiniteDist& ref);

struct CorrelationReport {
  int reference = -1;         // index into the candidate list
  std::vector<int> family;    // class members of the best family
  std::vector<std::vector<double>> pairwise;  // over the family
  double eps_correlated_at = std::numeric_limits<double>::infinity();
  bool decision_coverage_ok = false;
};
// Statistical classes only (the law under decision 0 is used). Families are
// enumerated exhaustively when the class has at most subset_cap members;
// otherwise only the full class is tried.
CorrelationReport MinCorrelation(const ModelClass& cls, double delta,
                                 const std::vector<FiniteDist>& refs,
                                 int subset_cap = 12);

struct FixedPointResult {
  std::vector<std::vector<double>> u;
  double lambda0 = 0.0;
  double residual = 0.0;
  double trace_expect = 0.0;  // E ||U x||
  int iterations = 0;
  bool converged = false;
};
// Solves E_nu U x x^T U / ||U x|| + lambda0 U = I by damped iteration.
FixedPointResult SolveFixedPointU(const std::vector<std::vector<double>>& points,
                                  const std::vector<double>& weights,
                                  double lambda0, int max_iterations = 100000);

// n functions l_w(z) = ||f(z)|| 1{<f(z), w> >= 0} with w ~ N(0, I_D).
LDictionary GaussianHalfspaceDictionary(
    const FiniteSpace& obs, const std::vector<std::vector<double>>& f, int n,
    uint64_t seed);

}  // namespace pridec

#endif  // PRIDEC_DEC_H_
