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

// Finite model classes M subset (Pi -> Delta(Z)) with their losses, and the
// named constructions used by the experiments.

#ifndef PRIDEC_MODELS_H_
#define PRIDEC_MODELS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pridec/prob.h"

namespace pridec {

inline constexpr int kDefaultPolicyCap = 4096;

class Model {
 public:
  // dist[pi] is the observation distribution under decision pi.
  Model(FiniteSpace decisions, FiniteSpace obs,
        std::vector<std::vector<double>> dist);

  // A model whose observation law ignores the decision.
  static Model Statistical(FiniteSpace decisions, const FiniteDist& d);
  // Convex combination sum_i w_i models[i].
  static Model Mixture(std::span<const Model* const> models,
                       std::span<const double> weights);

  const FiniteSpace& decisions() const { return decisions_; }
  const FiniteSpace& obs() const { return obs_; }
  int num_decisions() const { return decisions_.size(); }
  const std::vector<double>& at(int pi) const { return dist_[pi]; }
  FiniteDist Dist(int pi) const { return FiniteDist(obs_, dist_[pi]); }
  const std::vector<std::vector<double>>& table() const { return dist_; }

  bool operator==(const Model& other) const { return dist_ == other.dist_; }

 private:
  FiniteSpace decisions_;
  FiniteSpace obs_;
  std::vector<std::vector<double>> dist_;
};

// R(z, pi) in [0, 1].
class RewardFn {
 public:
  RewardFn(FiniteSpace obs, FiniteSpace decisions,
           std::vector<std::vector<double>> values);

  double operator()(int z, int pi) const { return values_[z][pi]; }
  // z -> R(z, pi).
  ScalarFn Slice(int pi) const;
  const FiniteSpace& obs() const { return obs_; }
  const FiniteSpace& decisions() const { return decisions_; }

 private:
  FiniteSpace obs_;
  FiniteSpace decisions_;
  std::vector<std::vector<double>> values_;
};

// V^M(pi) = E_{z ~ M(pi)} R(z, pi).
double Value(const Model& model, const RewardFn& reward, int pi);

enum class LossKind { kRewardBased, kMetricBased, kIndicator };

class ModelClass {
 public:
  // Reward-based loss max_pi' V(pi') - V(pi). The default dictionary is used
  // when none is given.
  static ModelClass RewardBased(std::vector<Model> models, RewardFn reward,
                                std::optional<LDictionary> dictionary = {});
  // Loss given as an explicit table loss[m][pi].
  static ModelClass Tabulated(std::vector<Model> models,
                              std::vector<std::vector<double>> loss,
                              LossKind kind,
                              std::optional<LDictionary> dictionary = {});

  int size() const { return static_cast<int>(models_.size()); }
  const Model& model(int m) const { return models_[m]; }
  const std::vector<Model>& models() const { return models_; }
  const FiniteSpace& decisions() const { return models_.front().decisions(); }
  const FiniteSpace& obs() const { return models_.front().obs(); }
  int num_decisions() const { return decisions().size(); }
  LossKind kind() const { return kind_; }
  const LDictionary& dictionary() const { return *dictionary_; }
  const std::optional<RewardFn>& reward() const { return reward_; }

  double Loss(int m, int pi) const { return loss_[m][pi]; }
  const std::vector<double>& LossRow(int m) const { return loss_[m]; }
  const std::vector<std::vector<double>>& loss_table() const { return loss_; }
  // Lowest-index minimizer of the loss.
  int OptimalDecision(int m) const;
  // V for reward-based classes; -loss otherwise.
  double ValueOf(int m, int pi) const;
  // Reward-based loss of an arbitrary model (e.g. a mixture).
  std::vector<double> LossOfModel(const Model& model) const;

  // Same models and loss with another dictionary.
  ModelClass WithDictionary(LDictionary dictionary) const;
  // Restriction to the listed members.
  ModelClass Subclass(std::span<const int> members) const;

 private:
  ModelClass() = default;
  void Validate();

  std::vector<Model> models_;
  std::vector<std::vector<double>> loss_;
  LossKind kind_ = LossKind::kRewardBased;
  std::optional<RewardFn> reward_;
  std::optional<LDictionary> dictionary_;
};

// Singleton indicators over Z, then R(., pi) for each pi, then extras, with
// duplicates removed (first occurrence kept).
LDictionary DefaultDictionary(const FiniteSpace& obs,
                              const std::optional<RewardFn>& reward,
                              std::span<const ScalarFn> extras = {});

// Multi-armed bandit with Rademacher rewards: model k pulls arm a to observe
// rad(means[k][a]); R(z, .) = (z + 1) / 2.
ModelClass MabClass(const std::vector<std::vector<double>>& means);
// K models; model k has mean 1 on arm k and -1 elsewhere.
ModelClass CanonicalMab(int k);

// Contexts x in [num_contexts], actions a in [num_actions]; policies are all
// maps X -> A. One model per (context distribution, reward function) pair.
ModelClass ContextualBanditClass(
    int num_contexts, int num_actions,
    const std::vector<std::vector<std::vector<double>>>& reward_fns,
    const std::vector<std::vector<double>>& context_dists,
    int policy_cap = kDefaultPolicyCap);
// Action chosen by policy `pi` at context x.
int PolicyAction(int pi, int x, int num_actions);

struct ParityInstance {
  ModelClass cls;
  Model reference;
  int d = 0;
  double lambda = 0.0;
  // Subset mask of model m.
  std::vector<unsigned> subsets;
};
// X = {0,1}^d, Z = X x {-1,+1}, one model per S subset of [d]; decisions are
// all maps X -> {-1,+1} with 0/1 classification loss.
ParityInstance ParityClass(int d, double lambda,
                           int policy_cap = kDefaultPolicyCap);

// Covariates x_i in the unit ball; model (nu, theta) draws x ~ nu and
// y ~ rad(<x, theta>). Decisions are theta_hat in `decision_grid` with loss
// E_{x ~ nu} |<x, theta_hat - theta>|.
ModelClass LinearModelClass(const std::vector<std::vector<double>>& points,
                            const std::vector<std::vector<double>>& nu_list,
                            const std::vector<std::vector<double>>& thetas,
                            const std::vector<std::vector<double>>& decision_grid);

// Well-specified regression: x ~ nu, y ~ rad(f(x)); decisions are the
// members of F with reward 1 - |y - f_hat(x)| / 2.
ModelClass RegressionClass(const std::vector<std::vector<double>>& fns,
                           const std::vector<std::vector<double>>& nu_list);

// Loss 1{pi != block of M}; decisions are block indices.
ModelClass HypothesisSelection(std::vector<FiniteDist> dists,
                               const std::vector<int>& block_of,
                               int num_blocks);

// Deterministic query models (pi, phi) -> response vector.
class QueryModelClass {
 public:
  enum class Norm { kLinf, kL2 };

  QueryModelClass(FiniteSpace decisions, FiniteSpace queries,
                  std::vector<std::vector<std::vector<double>>> responses,
                  std::vector<std::vector<double>> loss, Norm norm);

  int size() const { return static_cast<int>(responses_.size()); }
  const FiniteSpace& decisions() const { return decisions_; }
  const FiniteSpace& queries() const { return queries_; }
  const std::vector<double>& Response(int m, int query) const {
    return responses_[m][query];
  }
  double Loss(int m, int pi) const { return loss_[m][pi]; }
  const std::vector<std::vector<double>>& loss_table() const { return loss_; }
  Norm norm() const { return norm_; }
  double Distance(std::span<const double> a, std::span<const double> b) const;

 private:
  FiniteSpace decisions_;
  FiniteSpace queries_;
  std::vector<std::vector<std::vector<double>>> responses_;
  std::vector<std::vector<double>> loss_;
  Norm norm_;
};

// Per query, a finite distribution over response vectors.
struct RandomizedResponse {
  std::vector<double> prob;
  std::vector<std::vector<double>> values;
};
using RandomizedQueryModel = std::vector<RandomizedResponse>;

// Statistical queries phi: Z -> [-1, 1] answered by E_D phi, for a class of
// distributions with an explicit loss table.
QueryModelClass StatisticalQueryClass(
    const std::vector<FiniteDist>& dists,
    const std::vector<std::vector<double>>& queries, FiniteSpace decisions,
    std::vector<std::vector<double>> loss);

// The deterministic response of model m, viewed as a randomized model.
RandomizedQueryModel AsRandomized(const QueryModelClass& cls, int m);

}  // namespace pridec

#endif  // PRIDEC_MODELS_H_
