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

#include "pridec/estimators.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pridec/channels.h"
#include "pridec/error.h"

namespace pridec {

namespace {

void CheckSign(int o) {
  if (o != 1 && o != -1) {
    throw Error(ErrorCode::kProtocol, "privatized observation must be +1 or -1");
  }
}

}  // namespace

VovkOracle::VovkOracle(std::vector<Model> models, double alpha)
    : models_(std::move(models)), alpha_(alpha) {
  if (models_.empty()) throw Error(ErrorCode::kRange, "empty model list");
  if (!(alpha_ > 0.0)) throw Error(ErrorCode::kRange, "alpha must be > 0");
  log_w_.assign(models_.size(), 0.0);
}

std::unique_ptr<EstimationOracle> VovkOracle::Fresh() const {
  return std::make_unique<VovkOracle>(models_, alpha_);
}

std::vector<double> VovkOracle::Weights() const {
  const double top = *std::max_element(log_w_.begin(), log_w_.end());
  std::vector<double> w(log_w_.size());
  double total = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(log_w_[i] - top);
    total += w[i];
  }
  for (double& x : w) x /= total;
  return w;
}

Model VovkOracle::Predict() const {
  std::vector<const Model*> ptrs;
  for (const Model& m : models_) ptrs.push_back(&m);
  const std::vector<double> w = Weights();
  return Model::Mixture(ptrs, w);
}

void VovkOracle::Update(int pi, const ScalarFn& l, int o) {
  CheckSign(o);
  const double c = CAlpha(alpha_);
  for (size_t i = 0; i < models_.size(); ++i) {
    const double r = c * raw::Expect(models_[i].at(pi), l.values()) - o;
    log_w_[i] -= kEta * 0.5 * r * r;
  }
  ++steps_;
}

double VovkOracle::BoundShape(int /*n*/, double delta) const {
  return std::log(static_cast<double>(models_.size()) / delta) /
         (alpha_ * alpha_);
}

OmdOracle::OmdOracle(FiniteSpace decisions, FiniteDist reference, double c_kl,
                     int horizon, double alpha)
    : decisions_(std::move(decisions)), reference_(std::move(reference)),
      c_kl_(c_kl), horizon_(horizon), alpha_(alpha) {
  if (!(alpha_ > 0.0)) throw Error(ErrorCode::kRange, "alpha must be > 0");
  if (horizon_ <= 0) throw Error(ErrorCode::kRange, "horizon must be > 0");
  if (!(c_kl_ >= 0.0)) throw Error(ErrorCode::kRange, "C_KL must be >= 0");
  eta_ = std::sqrt(c_kl_ / (16.0 * horizon_));
  gradient_sum_.assign(reference_.size(), 0.0);
}

OmdOracle OmdOracle::ForClass(const ModelClass& cls,
                              const FiniteDist& reference, int horizon,
                              double alpha) {
  return OmdOracle(cls.decisions(), reference, KlRadius(cls, reference),
                   horizon, alpha);
}

std::unique_ptr<EstimationOracle> OmdOracle::Fresh() const {
  return std::make_unique<OmdOracle>(decisions_, reference_, c_kl_, horizon_,
                                     alpha_);
}

std::vector<double> OmdOracle::Current() const {
  std::vector<double> logits(reference_.size());
  double top = -std::numeric_limits<double>::infinity();
  for (int z = 0; z < reference_.size(); ++z) {
    if (reference_[z] == 0.0) continue;
    logits[z] = std::log(reference_[z]) - eta_ * gradient_sum_[z];
    top = std::max(top, logits[z]);
  }
  std::vector<double> m(reference_.size(), 0.0);
  double total = 0.0;
  for (int z = 0; z < reference_.size(); ++z) {
    if (reference_[z] == 0.0) continue;
    m[z] = std::exp(logits[z] - top);
    total += m[z];
  }
  for (double& x : m) x /= total;
  return m;
}

Model OmdOracle::Predict() const {
  return Model::Statistical(decisions_, FiniteDist(reference_.space(), Current()));
}

void OmdOracle::Update(int /*pi*/, const ScalarFn& l, int o) {
  CheckSign(o);
  CheckSameSpace(l.space(), reference_.space(), "omd update");
  const std::vector<double> m = Current();
  const double g = CAlpha(alpha_) * raw::Expect(m, l.values()) - o;
  for (int z = 0; z < reference_.size(); ++z) gradient_sum_[z] += g * l(z);
  ++steps_;
}

double OmdOracle::BoundShape(int n, double delta) const {
  return std::sqrt(c_kl_ * n) / alpha_ + std::log(1.0 / delta) / (alpha_ * alpha_);
}

double KlRadius(const ModelClass& cls, const FiniteDist& reference) {
  double radius = 0.0;
  for (int m = 0; m < cls.size(); ++m) {
    radius = std::max(radius, KlDivergence(cls.model(m).Dist(0), reference));
  }
  return radius;
}

void EstRecord::Append(double value) {
  per_step.push_back(value);
  cumulative += value;
}

double EstIncrement(const Model& truth, const Model& pred,
                    const LDictionary& dict, const std::vector<double>& q) {
  const int nl = dict.size();
  if (static_cast<int>(q.size()) != truth.num_decisions() * nl) {
    throw Error(ErrorCode::kSpaceMismatch, "q does not match (pi, l) columns");
  }
  double acc = 0.0;
  for (size_t j = 0; j < q.size(); ++j) {
    if (q[j] == 0.0) continue;
    const int pi = static_cast<int>(j) / nl;
    const ScalarFn& l = dict[static_cast<int>(j) % nl];
    const double d = raw::Expect(truth.at(pi), l.values()) -
                     raw::Expect(pred.at(pi), l.values());
    acc += q[j] * d * d;
  }
  return acc;
}

}  // namespace pridec
