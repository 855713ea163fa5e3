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

#include "pridec/environments.h"

#include <algorithm>
#include <cmath>

#include "pridec/channels.h"
#include "pridec/error.h"
#include "pridec/rng.h"

namespace pridec {

namespace {

constexpr uint64_t kObservationPurpose = 1;
constexpr uint64_t kChannelPurpose = 2;
constexpr uint64_t kCoinPurpose = 3;
constexpr uint64_t kContaminationPurpose = 4;
constexpr uint64_t kReferencePurpose = 5;
constexpr double kTauSlack = 1e-12;

void CheckDecision(const Model& m, const Action& a) {
  if (a.decision < 0 || a.decision >= m.num_decisions()) {
    throw Error(ErrorCode::kProtocol, "action decision outside the decision space");
  }
  if (a.channel.has_value()) CheckSameSpace(a.channel->input(), m.obs(), "step");
}

Observation Sample(const Model& m, const Action& a, uint64_t seed, int round) {
  CheckDecision(m, a);
  CounterRng z_rng(StreamKey(seed, 0, static_cast<uint64_t>(round),
                             kObservationPurpose));
  const int z = z_rng.Categorical(m.at(a.decision));
  Observation obs;
  if (!a.channel.has_value()) {
    obs.symbol = z;
    return obs;
  }
  CounterRng o_rng(StreamKey(seed, 0, static_cast<uint64_t>(round),
                             kChannelPurpose));
  obs.symbol = o_rng.Categorical(a.channel->row(z));
  return obs;
}

// Law of the observed symbol under the truth.
std::vector<double> SymbolLaw(const Model& m, const Action& a) {
  const std::vector<double>& pz = m.at(a.decision);
  if (!a.channel.has_value()) return pz;
  std::vector<double> out(a.channel->output().size(), 0.0);
  for (size_t z = 0; z < pz.size(); ++z) {
    for (size_t o = 0; o < out.size(); ++o) out[o] += pz[z] * a.channel->row(z)[o];
  }
  return out;
}

}  // namespace

StationaryEnv::StationaryEnv(Model truth, std::vector<double> values,
                             uint64_t seed)
    : truth_(std::move(truth)), values_(std::move(values)), seed_(seed) {}

Observation StationaryEnv::Step(int round, const Action& action) {
  if (action.query >= 0) {
    throw Error(ErrorCode::kProtocol, "stationary environment takes no queries");
  }
  return Sample(truth_, action, seed_, round);
}

HuberEnv::HuberEnv(Model truth, std::vector<double> values, double beta,
                   Strategy strategy, int fixed_symbol, uint64_t seed)
    : honest_(truth, values, seed), truth_(std::move(truth)),
      values_(std::move(values)), beta_(beta), strategy_(strategy),
      fixed_symbol_(fixed_symbol), seed_(seed) {
  if (!(beta_ >= 0.0 && beta_ <= 1.0)) {
    throw Error(ErrorCode::kRange, "beta must lie in [0,1]");
  }
}

Observation HuberEnv::Step(int round, const Action& action) {
  Observation honest = honest_.Step(round, action);
  CounterRng coin(StreamKey(seed_, 0, static_cast<uint64_t>(round), kCoinPurpose));
  if (!(coin.Uniform() < beta_)) return honest;
  ++deviations_;
  const std::vector<double> law = SymbolLaw(truth_, action);
  Observation obs;
  if (strategy_ == Strategy::kFixed) {
    obs.symbol = std::clamp(fixed_symbol_, 0, static_cast<int>(law.size()) - 1);
  } else {
    obs.symbol = static_cast<int>(std::min_element(law.begin(), law.end()) -
                                  law.begin());
  }
  return obs;
}

GqOracleEnv::GqOracleEnv(QueryModelClass cls, int truth, double tau,
                         Strategy strategy, RandomizedQueryModel reference,
                         uint64_t seed)
    : cls_(std::move(cls)), truth_(truth), tau_(tau), strategy_(strategy),
      reference_(std::move(reference)), seed_(seed) {
  if (truth_ < 0 || truth_ >= cls_.size()) {
    throw Error(ErrorCode::kRange, "truth is not a class member");
  }
  if (!(tau_ >= 0.0)) throw Error(ErrorCode::kRange, "tau must be >= 0");
  if (strategy_ == Strategy::kReferencePull &&
      static_cast<int>(reference_.size()) != cls_.queries().size()) {
    throw Error(ErrorCode::kSpaceMismatch, "reference needs one law per query");
  }
}

Observation GqOracleEnv::Step(int round, const Action& action) {
  if (action.query < 0 || action.query >= cls_.queries().size()) {
    throw Error(ErrorCode::kProtocol, "gq oracle needs a valid query");
  }
  const std::vector<double>& exact = cls_.Response(truth_, action.query);
  Observation obs;
  obs.response = exact;
  if (strategy_ == Strategy::kReferencePull) {
    const RandomizedResponse& r = reference_[action.query];
    CounterRng rng(StreamKey(seed_, 0, static_cast<uint64_t>(round),
                             kReferencePurpose));
    const std::vector<double>& target = r.values[rng.Categorical(r.prob)];
    if (cls_.norm() == QueryModelClass::Norm::kLinf) {
      for (size_t i = 0; i < exact.size(); ++i) {
        obs.response[i] = exact[i] + std::clamp(target[i] - exact[i], -tau_, tau_);
      }
    } else {
      const double d = cls_.Distance(target, exact);
      const double scale = d > tau_ ? tau_ / d : 1.0;
      for (size_t i = 0; i < exact.size(); ++i) {
        obs.response[i] = exact[i] + scale * (target[i] - exact[i]);
      }
    }
  }
  if (cls_.Distance(obs.response, exact) > tau_ + kTauSlack) {
    throw Error(ErrorCode::kValidation, "gq response left the tolerance ball");
  }
  return obs;
}

AdversarialEnv::AdversarialEnv(std::vector<Model> models,
                               std::vector<std::vector<double>> values,
                               Strategy strategy, uint64_t seed)
    : models_(std::move(models)), values_(std::move(values)),
      strategy_(strategy), seed_(seed) {
  if (models_.empty() || models_.size() != values_.size()) {
    throw Error(ErrorCode::kRange, "need one value row per model");
  }
  play_counts_.assign(models_.front().num_decisions(), 0);
}

Observation AdversarialEnv::Step(int round, const Action& action) {
  const int n = static_cast<int>(models_.size());
  switch (strategy_) {
    case Strategy::kFixed:
      last_ = 0;
      break;
    case Strategy::kCycle:
      last_ = round % n;
      break;
    case Strategy::kGreedy: {
      const int hot = static_cast<int>(
          std::max_element(play_counts_.begin(), play_counts_.end()) -
          play_counts_.begin());
      last_ = 0;
      for (int m = 1; m < n; ++m) {
        if (values_[m][hot] < values_[last_][hot]) last_ = m;
      }
      break;
    }
  }
  Observation obs = Sample(models_[last_], action, seed_, round);
  ++play_counts_[action.decision];
  return obs;
}

RunReport Run(Learner& learner, Environment& env,
              const std::vector<double>& truth_loss) {
  RunReport report;
  std::vector<double> value_sum;
  double played_value = 0.0;
  int round = 0;
  while (!learner.Done()) {
    const Action a = learner.Next();
    const Observation obs = env.Step(round, a);
    learner.Observe(obs);
    report.realized_models.push_back(env.LastModel());
    const std::vector<double>& values = env.LastValues();
    if (!values.empty()) {
      if (value_sum.empty()) value_sum.assign(values.size(), 0.0);
      for (size_t pi = 0; pi < values.size(); ++pi) value_sum[pi] += values[pi];
      const RoundRecord& rec = learner.transcript().rounds.back();
      if (rec.p.size() == values.size()) {
        for (size_t pi = 0; pi < values.size(); ++pi) {
          played_value += rec.p[pi] * values[pi];
        }
      } else {
        played_value += values[a.decision];
      }
    }
    ++round;
  }
  report.transcript = learner.transcript();
  if (!value_sum.empty()) {
    report.best_decision = static_cast<int>(
        std::max_element(value_sum.begin(), value_sum.end()) - value_sum.begin());
    report.regret = value_sum[report.best_decision] - played_value;
  }
  if (!truth_loss.empty()) {
    const std::vector<double>& p = report.transcript.p_hat;
    if (p.size() != truth_loss.size()) {
      throw Error(ErrorCode::kSpaceMismatch, "output does not match the loss row");
    }
    for (size_t pi = 0; pi < p.size(); ++pi) report.risk += p[pi] * truth_loss[pi];
  }
  return report;
}

AuditReport PrivacyAudit(const Transcript& transcript, double alpha,
                         const LearnerFactory& factory) {
  AuditReport report;
  constexpr double kDpSlack = 1e-12;
  for (const RoundRecord& rec : transcript.rounds) {
    if (!rec.action.channel.has_value()) continue;
    const double level = DpLevel(*rec.action.channel);
    if (!(level <= alpha + kDpSlack)) {
      report.failures.push_back(
          {rec.round, "channel dp level " + std::to_string(level) +
                          " exceeds alpha " + std::to_string(alpha)});
    }
  }
  if (factory) {
    std::unique_ptr<Learner> replay = factory(transcript.seed);
    for (const RoundRecord& rec : transcript.rounds) {
      if (replay->Done()) {
        report.failures.push_back({rec.round, "replay finished early"});
        break;
      }
      const Action a = replay->Next();
      if (!(a == rec.action)) {
        report.failures.push_back({rec.round, "replay diverges from record"});
        break;
      }
      replay->Observe(rec.obs);
      ++report.rounds_checked;
    }
    if (report.failures.empty() && !replay->Done()) {
      report.failures.push_back(
          {static_cast<int>(transcript.rounds.size()), "transcript truncated"});
    }
  }
  std::stable_sort(report.failures.begin(), report.failures.end(),
                   [](const AuditFailure& a, const AuditFailure& b) {
                     return a.round < b.round;
                   });
  report.pass = report.failures.empty();
  return report;
}

}  // namespace pridec
