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

#include "pridec/models.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "pridec/error.h"

namespace pridec {

namespace {

constexpr double kNormSlack = 1e-12;

double Dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void CheckUnitBall(std::span<const double> v, const char* what) {
  if (std::sqrt(Dot(v, v)) > 1.0 + kNormSlack) {
    throw Error(ErrorCode::kRange, std::string(what) + " outside unit ball");
  }
}

std::vector<double> RadMass(double mean) {
  if (!(mean >= -1.0 - kNormSlack && mean <= 1.0 + kNormSlack)) {
    throw Error(ErrorCode::kRange, "Rademacher mean must lie in [-1,1]");
  }
  mean = std::clamp(mean, -1.0, 1.0);
  return {0.5 * (1.0 - mean), 0.5 * (1.0 + mean)};
}

// Labels "x,y" for the product of an indexed space with {-1,+1}.
FiniteSpace SignedProduct(int n) {
  std::vector<std::string> labels;
  labels.reserve(2 * n);
  for (int x = 0; x < n; ++x) {
    labels.push_back(std::to_string(x) + ",-1");
    labels.push_back(std::to_string(x) + ",+1");
  }
  return FiniteSpace(std::move(labels));
}

}  // namespace

Model::Model(FiniteSpace decisions, FiniteSpace obs,
             std::vector<std::vector<double>> dist)
    : decisions_(std::move(decisions)), obs_(std::move(obs)) {
  if (static_cast<int>(dist.size()) != decisions_.size()) {
    throw Error(ErrorCode::kSpaceMismatch,
                "model needs one distribution per decision");
  }
  dist_.reserve(dist.size());
  for (auto& row : dist) dist_.push_back(FiniteDist(obs_, std::move(row)).mass());
}

Model Model::Statistical(FiniteSpace decisions, const FiniteDist& d) {
  const int n = decisions.size();
  return Model(std::move(decisions), d.space(),
               std::vector<std::vector<double>>(n, d.mass()));
}

Model Model::Mixture(std::span<const Model* const> models,
                     std::span<const double> weights) {
  if (models.empty() || models.size() != weights.size()) {
    throw Error(ErrorCode::kRange, "mixture needs one weight per model");
  }
  const Model& first = *models.front();
  std::vector<std::vector<double>> dist(
      first.num_decisions(), std::vector<double>(first.obs().size(), 0.0));
  for (size_t i = 0; i < models.size(); ++i) {
    CheckSameSpace(models[i]->obs(), first.obs(), "mixture");
    CheckSameSpace(models[i]->decisions(), first.decisions(), "mixture");
    if (weights[i] == 0.0) continue;
    for (int pi = 0; pi < first.num_decisions(); ++pi) {
      const auto& row = models[i]->at(pi);
      for (size_t z = 0; z < row.size(); ++z) dist[pi][z] += weights[i] * row[z];
    }
  }
  return Model(first.decisions(), first.obs(), std::move(dist));
}

RewardFn::RewardFn(FiniteSpace obs, FiniteSpace decisions,
                   std::vector<std::vector<double>> values)
    : obs_(std::move(obs)), decisions_(std::move(decisions)),
      values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != obs_.size()) {
    throw Error(ErrorCode::kSpaceMismatch, "reward needs one row per z");
  }
  for (const auto& row : values_) {
    if (static_cast<int>(row.size()) != decisions_.size()) {
      throw Error(ErrorCode::kSpaceMismatch, "reward needs one column per pi");
    }
    for (double v : row) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::kRange, "rewards must lie in [0,1]");
      }
    }
  }
}

ScalarFn RewardFn::Slice(int pi) const {
  std::vector<double> v(values_.size());
  for (size_t z = 0; z < values_.size(); ++z) v[z] = values_[z][pi];
  return ScalarFn(obs_, std::move(v));
}

double Value(const Model& model, const RewardFn& reward, int pi) {
  const auto& row = model.at(pi);
  double acc = 0.0;
  for (size_t z = 0; z < row.size(); ++z) acc += row[z] * reward(z, pi);
  return acc;
}

LDictionary DefaultDictionary(const FiniteSpace& obs,
                              const std::optional<RewardFn>& reward,
                              std::span<const ScalarFn> extras) {
  std::vector<ScalarFn> fns;
  auto add = [&fns](ScalarFn f) {
    for (const ScalarFn& g : fns) {
      if (g.values() == f.values()) return;
    }
    fns.push_back(std::move(f));
  };
  for (int z = 0; z < obs.size(); ++z) {
    std::vector<double> v(obs.size(), 0.0);
    v[z] = 1.0;
    add(ScalarFn(obs, std::move(v)));
  }
  if (reward.has_value()) {
    for (int pi = 0; pi < reward->decisions().size(); ++pi) {
      add(reward->Slice(pi));
    }
  }
  for (const ScalarFn& f : extras) add(f);
  return LDictionary(std::move(fns));
}

void ModelClass::Validate() {
  if (models_.empty()) throw Error(ErrorCode::kEmptyClass, "empty model class");
  for (const Model& m : models_) {
    CheckSameSpace(m.decisions(), decisions(), "model class");
    CheckSameSpace(m.obs(), obs(), "model class");
  }
  if (dictionary_.has_value()) {
    CheckSameSpace(dictionary_->space(), obs(), "model class dictionary");
  } else {
    dictionary_ = DefaultDictionary(obs(), reward_);
  }
}

ModelClass ModelClass::RewardBased(std::vector<Model> models, RewardFn reward,
                                   std::optional<LDictionary> dictionary) {
  ModelClass c;
  c.models_ = std::move(models);
  c.kind_ = LossKind::kRewardBased;
  c.reward_ = std::move(reward);
  c.dictionary_ = std::move(dictionary);
  c.Validate();
  CheckSameSpace(c.reward_->obs(), c.obs(), "reward");
  CheckSameSpace(c.reward_->decisions(), c.decisions(), "reward");
  for (const Model& m : c.models_) c.loss_.push_back(c.LossOfModel(m));
  return c;
}

ModelClass ModelClass::Tabulated(std::vector<Model> models,
                                 std::vector<std::vector<double>> loss,
                                 LossKind kind,
                                 std::optional<LDictionary> dictionary) {
  ModelClass c;
  c.models_ = std::move(models);
  c.kind_ = kind;
  c.dictionary_ = std::move(dictionary);
  c.Validate();
  if (loss.size() != c.models_.size()) {
    throw Error(ErrorCode::kSpaceMismatch, "loss table needs one row per model");
  }
  for (const auto& row : loss) {
    if (static_cast<int>(row.size()) != c.num_decisions()) {
      throw Error(ErrorCode::kSpaceMismatch, "loss row length differs from |Pi|");
    }
    for (double v : row) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error(ErrorCode::kRange, "losses must be finite and >= 0");
      }
      if (kind == LossKind::kIndicator && v != 0.0 && v != 1.0) {
        throw Error(ErrorCode::kRange, "indicator loss must be 0 or 1");
      }
    }
  }
  c.loss_ = std::move(loss);
  return c;
}

int ModelClass::OptimalDecision(int m) const {
  const auto& row = loss_[m];
  return static_cast<int>(std::min_element(row.begin(), row.end()) -
                          row.begin());
}

double ModelClass::ValueOf(int m, int pi) const {
  if (reward_.has_value()) return Value(models_[m], *reward_, pi);
  return -loss_[m][pi];
}

std::vector<double> ModelClass::LossOfModel(const Model& model) const {
  if (!reward_.has_value()) {
    throw Error(ErrorCode::kRange, "loss of a non-member needs a reward");
  }
  std::vector<double> v(num_decisions());
  for (int pi = 0; pi < num_decisions(); ++pi) v[pi] = Value(model, *reward_, pi);
  const double best = *std::max_element(v.begin(), v.end());
  for (double& x : v) x = std::max(0.0, best - x);
  return v;
}

ModelClass ModelClass::WithDictionary(LDictionary dictionary) const {
  ModelClass c = *this;
  CheckSameSpace(dictionary.space(), obs(), "dictionary");
  c.dictionary_ = std::move(dictionary);
  return c;
}

ModelClass ModelClass::Subclass(std::span<const int> members) const {
  ModelClass c = *this;
  c.models_.clear();
  c.loss_.clear();
  for (int m : members) {
    if (m < 0 || m >= size()) throw Error(ErrorCode::kNotFound, "no such model");
    c.models_.push_back(models_[m]);
    c.loss_.push_back(loss_[m]);
  }
  if (c.models_.empty()) throw Error(ErrorCode::kEmptyClass, "empty subclass");
  return c;
}

ModelClass MabClass(const std::vector<std::vector<double>>& means) {
  if (means.empty()) throw Error(ErrorCode::kEmptyClass, "no arm means");
  const int k = static_cast<int>(means.front().size());
  FiniteSpace arms = FiniteSpace::Indexed(k, "arm");
  FiniteSpace signs = FiniteSpace::Signs();
  std::vector<Model> models;
  for (const auto& mu : means) {
    if (static_cast<int>(mu.size()) != k) {
      throw Error(ErrorCode::kRange, "every model needs one mean per arm");
    }
    std::vector<std::vector<double>> dist;
    for (double m : mu) dist.push_back(RadMass(m));
    models.emplace_back(arms, signs, std::move(dist));
  }
  RewardFn reward(signs, arms,
                  {std::vector<double>(k, 0.0), std::vector<double>(k, 1.0)});
  return ModelClass::RewardBased(std::move(models), std::move(reward));
}

ModelClass CanonicalMab(int k) {
  if (k < 1) throw Error(ErrorCode::kRange, "need at least one arm");
  std::vector<std::vector<double>> means(k, std::vector<double>(k, -1.0));
  for (int i = 0; i < k; ++i) means[i][i] = 1.0;
  return MabClass(means);
}

int PolicyAction(int pi, int x, int num_actions) {
  for (int i = 0; i < x; ++i) pi /= num_actions;
  return pi % num_actions;
}

ModelClass ContextualBanditClass(
    int num_contexts, int num_actions,
    const std::vector<std::vector<std::vector<double>>>& reward_fns,
    const std::vector<std::vector<double>>& context_dists, int policy_cap) {
  if (num_contexts < 1 || num_actions < 1) {
    throw Error(ErrorCode::kRange, "need at least one context and action");
  }
  double count = std::pow(static_cast<double>(num_actions), num_contexts);
  if (count > policy_cap) {
    throw Error(ErrorCode::kInstanceTooLarge,
                "|A|^|X| = " + std::to_string(count) + " exceeds policy cap");
  }
  const int num_policies = static_cast<int>(count);
  FiniteSpace policies = FiniteSpace::Indexed(num_policies, "pi");
  std::vector<std::string> labels;
  for (int x = 0; x < num_contexts; ++x) {
    for (int a = 0; a < num_actions; ++a) {
      const std::string p = std::to_string(x) + "," + std::to_string(a);
      labels.push_back(p + ",-1");
      labels.push_back(p + ",+1");
    }
  }
  FiniteSpace obs(std::move(labels));
  auto index = [num_actions](int x, int a, int r) {
    return (x * num_actions + a) * 2 + r;
  };
  std::vector<Model> models;
  for (const auto& nu : context_dists) {
    FiniteDist nu_d(FiniteSpace::Indexed(num_contexts), nu);
    for (const auto& f : reward_fns) {
      if (static_cast<int>(f.size()) != num_contexts) {
        throw Error(ErrorCode::kRange, "reward function needs one row per x");
      }
      std::vector<std::vector<double>> dist(
          num_policies, std::vector<double>(obs.size(), 0.0));
      for (int pi = 0; pi < num_policies; ++pi) {
        for (int x = 0; x < num_contexts; ++x) {
          const int a = PolicyAction(pi, x, num_actions);
          const auto r = RadMass(f[x].at(a));
          dist[pi][index(x, a, 0)] = nu_d[x] * r[0];
          dist[pi][index(x, a, 1)] = nu_d[x] * r[1];
        }
      }
      models.emplace_back(policies, obs, std::move(dist));
    }
  }
  std::vector<std::vector<double>> rv(obs.size(),
                                      std::vector<double>(num_policies, 0.0));
  for (int x = 0; x < num_contexts; ++x) {
    for (int a = 0; a < num_actions; ++a) {
      for (int pi = 0; pi < num_policies; ++pi) rv[index(x, a, 1)][pi] = 1.0;
    }
  }
  return ModelClass::RewardBased(std::move(models),
                                 RewardFn(obs, policies, std::move(rv)));
}

ParityInstance ParityClass(int d, double lambda, int policy_cap) {
  if (d < 1 || d > 12) throw Error(ErrorCode::kInstanceTooLarge, "d too large");
  if (!(lambda >= 0.0 && lambda <= 0.5)) {
    throw Error(ErrorCode::kRange, "lambda must lie in [0, 1/2]");
  }
  const int nx = 1 << d;
  if (nx > 30 || (1LL << nx) > policy_cap) {
    throw Error(ErrorCode::kInstanceTooLarge,
                "2^(2^d) decisions exceed the policy cap");
  }
  const int num_policies = 1 << nx;
  FiniteSpace policies = FiniteSpace::Indexed(num_policies, "f");
  FiniteSpace obs = SignedProduct(nx);
  // Policy f maps x to +1 when bit x of f is set.
  auto policy_sign = [](int f, int x) { return ((f >> x) & 1) ? 1 : -1; };
  auto parity = [](unsigned s, int x) {
    return (std::popcount(s & static_cast<unsigned>(x)) % 2 == 0) ? 1 : -1;
  };
  std::vector<double> mu(nx, lambda / (nx - 1));
  mu[0] = 1.0 - lambda;

  std::vector<Model> models;
  std::vector<unsigned> subsets;
  for (unsigned s = 0; s < static_cast<unsigned>(nx); ++s) {
    std::vector<double> z(obs.size(), 0.0);
    for (int x = 0; x < nx; ++x) z[2 * x + (parity(s, x) > 0 ? 1 : 0)] = mu[x];
    models.push_back(Model::Statistical(policies, FiniteDist(obs, z)));
    subsets.push_back(s);
  }
  std::vector<std::vector<double>> reward(
      obs.size(), std::vector<double>(num_policies, 0.0));
  for (int x = 0; x < nx; ++x) {
    for (int f = 0; f < num_policies; ++f) {
      reward[2 * x + (policy_sign(f, x) > 0 ? 1 : 0)][f] = 1.0;
    }
  }
  ModelClass cls = ModelClass::RewardBased(
      std::move(models), RewardFn(obs, policies, std::move(reward)));
  // Reference: x ~ mu, y uniform off the origin, y = +1 at the origin.
  std::vector<double> ref(obs.size(), 0.0);
  ref[1] = mu[0];
  for (int x = 1; x < nx; ++x) {
    ref[2 * x] = 0.5 * mu[x];
    ref[2 * x + 1] = 0.5 * mu[x];
  }
  return ParityInstance{std::move(cls),
                        Model::Statistical(policies, FiniteDist(obs, ref)), d,
                        lambda, std::move(subsets)};
}

ModelClass LinearModelClass(const std::vector<std::vector<double>>& points,
                            const std::vector<std::vector<double>>& nu_list,
                            const std::vector<std::vector<double>>& thetas,
                            const std::vector<std::vector<double>>& decision_grid) {
  if (points.empty() || decision_grid.empty()) {
    throw Error(ErrorCode::kEmptyClass, "linear class needs points and grid");
  }
  for (const auto& x : points) CheckUnitBall(x, "covariate");
  for (const auto& t : thetas) CheckUnitBall(t, "theta");
  for (const auto& t : decision_grid) CheckUnitBall(t, "decision");
  const int n = static_cast<int>(points.size());
  FiniteSpace decisions =
      FiniteSpace::Indexed(static_cast<int>(decision_grid.size()), "theta");
  FiniteSpace obs = SignedProduct(n);
  std::vector<Model> models;
  std::vector<std::vector<double>> loss;
  for (const auto& nu : nu_list) {
    FiniteDist nu_d(FiniteSpace::Indexed(n), nu);
    for (const auto& theta : thetas) {
      std::vector<double> z(2 * n);
      for (int i = 0; i < n; ++i) {
        const auto r = RadMass(Dot(points[i], theta));
        z[2 * i] = nu_d[i] * r[0];
        z[2 * i + 1] = nu_d[i] * r[1];
      }
      models.push_back(Model::Statistical(decisions, FiniteDist(obs, z)));
      std::vector<double> row;
      for (const auto& th : decision_grid) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
          acc += nu_d[i] * std::abs(Dot(points[i], th) - Dot(points[i], theta));
        }
        row.push_back(acc);
      }
      loss.push_back(std::move(row));
    }
  }
  return ModelClass::Tabulated(std::move(models), std::move(loss),
                               LossKind::kMetricBased);
}

ModelClass RegressionClass(const std::vector<std::vector<double>>& fns,
                           const std::vector<std::vector<double>>& nu_list) {
  if (fns.empty()) throw Error(ErrorCode::kEmptyClass, "empty function class");
  const int n = static_cast<int>(fns.front().size());
  FiniteSpace decisions =
      FiniteSpace::Indexed(static_cast<int>(fns.size()), "f");
  FiniteSpace obs = SignedProduct(n);
  std::vector<Model> models;
  for (const auto& nu : nu_list) {
    FiniteDist nu_d(FiniteSpace::Indexed(n), nu);
    for (const auto& f : fns) {
      std::vector<double> z(2 * n);
      for (int i = 0; i < n; ++i) {
        const auto r = RadMass(f.at(i));
        z[2 * i] = nu_d[i] * r[0];
        z[2 * i + 1] = nu_d[i] * r[1];
      }
      models.push_back(Model::Statistical(decisions, FiniteDist(obs, z)));
    }
  }
  std::vector<std::vector<double>> reward(2 * n,
                                          std::vector<double>(fns.size()));
  for (int i = 0; i < n; ++i) {
    for (size_t k = 0; k < fns.size(); ++k) {
      reward[2 * i][k] = 1.0 - std::abs(-1.0 - fns[k][i]) / 2.0;
      reward[2 * i + 1][k] = 1.0 - std::abs(1.0 - fns[k][i]) / 2.0;
    }
  }
  return ModelClass::RewardBased(std::move(models),
                                 RewardFn(obs, decisions, std::move(reward)));
}

ModelClass HypothesisSelection(std::vector<FiniteDist> dists,
                               const std::vector<int>& block_of,
                               int num_blocks) {
  if (dists.empty()) throw Error(ErrorCode::kEmptyClass, "no hypotheses");
  if (block_of.size() != dists.size() || num_blocks < 1) {
    throw Error(ErrorCode::kInvalidPartition, "one block index per model");
  }
  std::vector<int> count(num_blocks, 0);
  for (int b : block_of) {
    if (b < 0 || b >= num_blocks) {
      throw Error(ErrorCode::kInvalidPartition, "block index out of range");
    }
    ++count[b];
  }
  for (int b = 0; b < num_blocks; ++b) {
    if (count[b] == 0) {
      throw Error(ErrorCode::kInvalidPartition,
                  "block " + std::to_string(b) + " is empty");
    }
  }
  FiniteSpace decisions = FiniteSpace::Indexed(num_blocks, "block");
  std::vector<Model> models;
  std::vector<std::vector<double>> loss;
  for (size_t m = 0; m < dists.size(); ++m) {
    models.push_back(Model::Statistical(decisions, dists[m]));
    std::vector<double> row(num_blocks, 1.0);
    row[block_of[m]] = 0.0;
    loss.push_back(std::move(row));
  }
  return ModelClass::Tabulated(std::move(models), std::move(loss),
                               LossKind::kIndicator);
}

QueryModelClass::QueryModelClass(
    FiniteSpace decisions, FiniteSpace queries,
    std::vector<std::vector<std::vector<double>>> responses,
    std::vector<std::vector<double>> loss, Norm norm)
    : decisions_(std::move(decisions)), queries_(std::move(queries)),
      responses_(std::move(responses)), loss_(std::move(loss)), norm_(norm) {
  if (responses_.empty()) throw Error(ErrorCode::kEmptyClass, "empty class");
  if (loss_.size() != responses_.size()) {
    throw Error(ErrorCode::kSpaceMismatch, "one loss row per model");
  }
  for (size_t m = 0; m < responses_.size(); ++m) {
    if (static_cast<int>(responses_[m].size()) != queries_.size() ||
        static_cast<int>(loss_[m].size()) != decisions_.size()) {
      throw Error(ErrorCode::kSpaceMismatch, "query table shape mismatch");
    }
  }
}

double QueryModelClass::Distance(std::span<const double> a,
                                 std::span<const double> b) const {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[i]);
    acc = norm_ == Norm::kLinf ? std::max(acc, d) : acc + d * d;
  }
  return norm_ == Norm::kLinf ? acc : std::sqrt(acc);
}

QueryModelClass StatisticalQueryClass(
    const std::vector<FiniteDist>& dists,
    const std::vector<std::vector<double>>& queries, FiniteSpace decisions,
    std::vector<std::vector<double>> loss) {
  if (dists.empty()) throw Error(ErrorCode::kEmptyClass, "empty class");
  for (const auto& phi : queries) {
    if (static_cast<int>(phi.size()) != dists.front().size()) {
      throw Error(ErrorCode::kSpaceMismatch, "query length differs from |Z|");
    }
    for (double v : phi) {
      if (!(v >= -1.0 && v <= 1.0)) {
        throw Error(ErrorCode::kRange, "queries must map into [-1,1]");
      }
    }
  }
  std::vector<std::vector<std::vector<double>>> responses;
  for (const FiniteDist& d : dists) {
    CheckSameSpace(d.space(), dists.front().space(), "statistical queries");
    std::vector<std::vector<double>> row;
    for (const auto& phi : queries) row.push_back({d.Expect(phi)});
    responses.push_back(std::move(row));
  }
  return QueryModelClass(
      std::move(decisions),
      FiniteSpace::Indexed(static_cast<int>(queries.size()), "phi"),
      std::move(responses), std::move(loss), QueryModelClass::Norm::kLinf);
}

RandomizedQueryModel AsRandomized(const QueryModelClass& cls, int m) {
  RandomizedQueryModel out;
  for (int q = 0; q < cls.queries().size(); ++q) {
    out.push_back({{1.0}, {cls.Response(m, q)}});
  }
  return out;
}

}  // namespace pridec
