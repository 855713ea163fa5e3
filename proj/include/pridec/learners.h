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

// Interactive learners. A learner is driven one round at a time: Next()
// emits an action, Observe() consumes the environment's reply. All internal
// randomness is keyed by (seed, round), so a learner rebuilt from its seed
// and fed the recorded observations reproduces every recorded action.

#ifndef PRIDEC_LEARNERS_H_
#define PRIDEC_LEARNERS_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pridec/channels.h"
#include "pridec/dec.h"
#include "pridec/estimators.h"
#include "pridec/models.h"

namespace pridec {

struct Action {
  // Decision whose observation law generates z. -1 for pure queries.
  int decision = -1;
  // Learner-specific column (dictionary pair or query index).
  int column = -1;
  // Privatizing channel applied to z; absent when z is observed directly.
  std::optional<Channel> channel;
  // Statistical query index; -1 when the action is not a query.
  int query = -1;

  bool operator==(const Action& other) const;
};

struct Observation {
  // Index of the observed symbol in the channel output space, or of z.
  int symbol = -1;
  // Response vector for queries.
  std::vector<double> response;
};

struct RoundRecord {
  int round = 0;
  std::string phase;
  Action action;
  Observation obs;
  std::vector<double> p;
  std::vector<double> q;
  double cert = 0.0;
};

struct Transcript {
  std::string algorithm;
  uint64_t seed = 0;
  int horizon = 0;
  double alpha = 0.0;  // 0 when the learner emits no channels
  std::vector<RoundRecord> rounds;
  std::vector<double> p_hat;
  double cert_value = 0.0;
  std::map<std::string, double> extras;
};

class Learner {
 public:
  virtual ~Learner() = default;

  virtual bool Done() const = 0;
  virtual Action Next() = 0;
  virtual void Observe(const Observation& obs) = 0;
  // Valid once Done() is true.
  virtual const Transcript& transcript() const = 0;
};

// Sign of a Signs() index.
inline int SignOf(int symbol) { return symbol == 1 ? 1 : -1; }

// ---------------------------------------------------------------- LDP-E2D

struct E2dConfig {
  int horizon = 0;
  double delta = 0.1;
  double alpha = 1.0;
  // Est = est_scale * oracle bound shape at (N, delta / (4K)).
  double est_scale = 1.0;
  // "exact" solves the constrained objective through feasible-set search;
  // "sweep" takes the best offset solution over a geometric gamma grid.
  std::string solver = "exact";
  SearchConfig search;
  uint64_t seed = 0;
};

struct E2dSchedule {
  int k = 0;
  int n = 0;
  double est = 0.0;
  double eps_bar = 0.0;
};

// Throws ConfigError when horizon < 2 (K + 1).
E2dSchedule MakeE2dSchedule(const E2dConfig& cfg, const EstimationOracle& oracle);

std::unique_ptr<Learner> MakeE2dLearner(const ModelClass& cls,
                                        const E2dConfig& cfg,
                                        const EstimationOracle& oracle);

// ------------------------------------------------------------------ ExO+

struct InfoSetStructure {
  std::string kind;
  std::vector<std::vector<int>> sets;  // class members of each M_psi
  std::vector<int> anchors;            // pi_psi
  std::vector<double> prior;           // w^1

  // Throws StructureError when ill-formed for a class of the given size.
  void Validate(int num_models, int num_decisions) const;
};

InfoSetStructure ModelBasedInfoSets(const ModelClass& cls);
// Psi = decisions, M_pi = {M : L(M, pi) <= delta}; empty sets are dropped.
InfoSetStructure PolicyBasedInfoSets(const ModelClass& cls, double delta);
// Psi = distinct value functions f_M(pi) = V^M(pi), M_f = models with
// max_pi |f_M(pi) - f(pi)| <= delta, anchor argmax f.
InfoSetStructure ValueBasedInfoSets(const ModelClass& cls, double delta);
// Greedy delta-cover of the value functions under the same metric.
InfoSetStructure ContextualInfoSets(const ModelClass& cls, double delta);

struct ExoConfig {
  int horizon = 0;
  double gamma = 1.0;
  double clip = 0.0;  // A; non-positive means ln(horizon)
  bool regret_option = true;
  // Observe through binary channels over the class dictionary.
  bool private_observations = false;
  double alpha = 1.0;
  int max_alternations = 50;
  uint64_t seed = 0;
};

// Observation laws of every model under every exploration column.
struct ExoColumns {
  std::vector<int> decision;                    // [column]
  std::vector<int> fn;                          // dictionary index or -1
  std::vector<std::vector<std::vector<double>>> law;  // [model][column][o]
};
ExoColumns MakeExoColumns(const ModelClass& cls, const ExoConfig& cfg);

// xi[column][o][psi].
using XiTable = std::vector<std::vector<std::vector<double>>>;

// sup over (M, psi) with M in M_psi of Gamma_{w, gamma}(p, q, xi; M, psi),
// by direct enumeration.
double ExoObjective(const ModelClass& cls, const InfoSetStructure& info,
                    const ExoColumns& cols, const std::vector<double>& w,
                    double gamma, const std::vector<double>& p,
                    const std::vector<double>& q, const XiTable& xi);

std::unique_ptr<Learner> MakeExoLearner(const ModelClass& cls,
                                        const InfoSetStructure& info,
                                        const ExoConfig& cfg);

// T * delta_info + sum_cert + 2 gamma (ln(1 / w1(E*)) + ln(1 / delta)) with
// E* = {psi : realized models lie in M_psi and the anchor is delta_info-good
// for their average}. Infinite when E* is empty.
double ExoRegretBound(const ModelClass& cls, const InfoSetStructure& info,
                      double delta_info, double gamma, double delta,
                      const std::vector<int>& realized, double sum_cert);

// ----------------------------------------------------------- Brute force

struct BruteForceConfig {
  int horizon = 0;
  double delta_gap = 0.5;  // Delta
  double delta = 0.05;
  double alpha = 1.0;
  uint64_t seed = 0;
};

struct BruteForceSchedule {
  double n_frac = 0.0;
  int n = 0;
  int j = 0;
  std::vector<double> p_star;
};

BruteForceSchedule MakeBruteForceSchedule(const ModelClass& cls,
                                          const BruteForceConfig& cfg);
std::unique_ptr<Learner> MakeBruteForceLearner(const ModelClass& cls,
                                               const BruteForceConfig& cfg);

// ----------------------------------------------------------------- SQ-E2D

struct SqE2dConfig {
  int horizon = 0;
  double delta = 0.1;
  double tau = 0.1;
  double c0 = 16.0;
  SearchConfig search;
  uint64_t seed = 0;
};

struct SqE2dSchedule {
  int k = 0;
  int t0 = 0;
  int n = 0;
  double gamma_bar = 0.0;
};

SqE2dSchedule MakeSqE2dSchedule(int num_models, const SqE2dConfig& cfg);
std::unique_ptr<Learner> MakeSqE2dLearner(const QueryModelClass& cls,
                                          const SqE2dConfig& cfg);

}  // namespace pridec

#endif  // PRIDEC_LEARNERS_H_
