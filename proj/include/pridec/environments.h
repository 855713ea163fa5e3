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

// Environments answering learner actions, the run loop with risk and regret
// accounting, and the privacy auditor.

#ifndef PRIDEC_ENVIRONMENTS_H_
#define PRIDEC_ENVIRONMENTS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pridec/learners.h"
#include "pridec/models.h"

namespace pridec {

class Environment {
 public:
  virtual ~Environment() = default;

  virtual Observation Step(int round, const Action& action) = 0;
  // V^{M^t}(.) of the model that produced the last observation; empty when
  // values are not defined.
  virtual const std::vector<double>& LastValues() const = 0;
  // Index of that model in the environment's own list, or -1.
  virtual int LastModel() const { return -1; }
};

// z ~ M(pi), then o ~ channel(. | z) when a channel is given.
class StationaryEnv : public Environment {
 public:
  StationaryEnv(Model truth, std::vector<double> values, uint64_t seed);

  Observation Step(int round, const Action& action) override;
  const std::vector<double>& LastValues() const override { return values_; }
  int LastModel() const override { return 0; }

 private:
  Model truth_;
  std::vector<double> values_;
  uint64_t seed_;
};

// Honest stationary answers with probability 1 - beta, contamination
// otherwise. "fixed" emits a configured symbol; "greedy" emits the symbol
// least likely under the truth for the current action.
class HuberEnv : public Environment {
 public:
  enum class Strategy { kFixed, kGreedy };

  HuberEnv(Model truth, std::vector<double> values, double beta,
           Strategy strategy, int fixed_symbol, uint64_t seed);

  Observation Step(int round, const Action& action) override;
  const std::vector<double>& LastValues() const override { return values_; }
  int LastModel() const override { return 0; }
  int deviations() const { return deviations_; }

 private:
  StationaryEnv honest_;
  Model truth_;
  std::vector<double> values_;
  double beta_;
  Strategy strategy_;
  int fixed_symbol_;
  uint64_t seed_;
  int deviations_ = 0;
};

// Answers statistical queries within tau of the truth. "truthful" returns
// the exact response; "reference_pull" draws from the reference and projects
// it into the tau-ball around the truth.
class GqOracleEnv : public Environment {
 public:
  enum class Strategy { kTruthful, kReferencePull };

  GqOracleEnv(QueryModelClass cls, int truth, double tau, Strategy strategy,
              RandomizedQueryModel reference, uint64_t seed);

  Observation Step(int round, const Action& action) override;
  const std::vector<double>& LastValues() const override { return empty_; }

 private:
  QueryModelClass cls_;
  int truth_;
  double tau_;
  Strategy strategy_;
  RandomizedQueryModel reference_;
  uint64_t seed_;
  std::vector<double> empty_;
};

// Picks the round's model from a fixed list: always the first ("fixed"),
// round-robin ("cycle"), or the one with the largest loss on the decision
// played most often so far ("greedy").
class AdversarialEnv : public Environment {
 public:
  enum class Strategy { kFixed, kCycle, kGreedy };

  AdversarialEnv(std::vector<Model> models,
                 std::vector<std::vector<double>> values, Strategy strategy,
                 uint64_t seed);

  Observation Step(int round, const Action& action) override;
  const std::vector<double>& LastValues() const override {
    return values_[last_];
  }
  int LastModel() const override { return last_; }

 private:
  std::vector<Model> models_;
  std::vector<std::vector<double>> values_;
  Strategy strategy_;
  uint64_t seed_;
  std::vector<int> play_counts_;
  int last_ = 0;
};

struct RunReport {
  Transcript transcript;
  double risk = 0.0;
  double regret = 0.0;
  // Hindsight-best decision used for regret.
  int best_decision = -1;
  std::vector<int> realized_models;  // per round, from LastModel()
};

// Drives the learner to completion. truth_loss, when non-empty, is the loss
// row used for the risk of the output distribution.
RunReport Run(Learner& learner, Environment& env,
              const std::vector<double>& truth_loss);

struct AuditFailure {
  int round = -1;
  std::string reason;
};

struct AuditReport {
  bool pass = true;
  int rounds_checked = 0;
  std::vector<AuditFailure> failures;

  int FirstFailureRound() const {
    return failures.empty() ? -1 : failures.front().round;
  }
};

using LearnerFactory = std::function<std::unique_ptr<Learner>(uint64_t seed)>;

// Every channel must be alpha-DP to 1e-12, and a learner rebuilt from the
// transcript seed and fed the recorded observations must reproduce every
// recorded action. A null factory skips the replay.
AuditReport PrivacyAudit(const Transcript& transcript, double alpha,
                         const LearnerFactory& factory);

}  // namespace pridec

#endif  // PRIDEC_ENVIRONMENTS_H_
