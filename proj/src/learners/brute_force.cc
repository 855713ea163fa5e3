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

#include <cmath>

#include "pridec/error.h"
#include "pridec/learners.h"
#include "pridec/rng.h"

namespace pridec {

namespace {

constexpr uint64_t kCandidatePurpose = 3;

class BruteForceLearner : public Learner {
 public:
  BruteForceLearner(const ModelClass& cls, const BruteForceConfig& cfg)
      : cls_(cls), cfg_(cfg), sched_(MakeBruteForceSchedule(cls, cfg)) {
    sums_.assign(sched_.n, 0.0);
    transcript_.algorithm = "brute_force_dc";
    transcript_.seed = cfg_.seed;
    transcript_.horizon = cfg_.horizon;
    transcript_.alpha = cfg_.alpha;
    transcript_.extras["N"] = sched_.n;
    transcript_.extras["J"] = sched_.j;
    transcript_.extras["n_frac"] = sched_.n_frac;
    for (int k = 0; k < sched_.n; ++k) {
      CounterRng rng(StreamKey(cfg_.seed, 0, static_cast<uint64_t>(k),
                               kCandidatePurpose));
      candidates_.push_back(rng.Categorical(sched_.p_star));
    }
  }

  bool Done() const override { return round_ >= sched_.n * sched_.j; }

  Action Next() override {
    if (Done()) throw Error(ErrorCode::kProtocol, "learner already finished");
    const int k = round_ / sched_.j;
    const int pi = candidates_[k];
    Action a;
    a.decision = pi;
    a.column = pi;
    a.channel = BinaryChannel(cls_.reward()->Slice(pi), cfg_.alpha);
    RoundRecord rec;
    rec.round = round_;
    rec.phase = "candidate_" + std::to_string(k);
    rec.action = a;
    rec.p = sched_.p_star;
    transcript_.rounds.push_back(std::move(rec));
    pending_ = true;
    return a;
  }

  void Observe(const Observation& obs) override {
    if (!pending_) throw Error(ErrorCode::kProtocol, "observation without action");
    pending_ = false;
    transcript_.rounds.back().obs = obs;
    sums_[round_ / sched_.j] += SignOf(obs.symbol);
    ++round_;
    if (Done()) Finish();
  }

  const Transcript& transcript() const override { return transcript_; }

 private:
  void Finish() {
    int best = 0;
    for (int k = 1; k < sched_.n; ++k) {
      if (sums_[k] > sums_[best]) best = k;
    }
    transcript_.p_hat.assign(cls_.num_decisions(), 0.0);
    transcript_.p_hat[candidates_[best]] = 1.0;
    transcript_.extras["k_hat"] = best;
    transcript_.cert_value =
        cfg_.delta_gap + 2.0 / CAlpha(cfg_.alpha) *
                             std::sqrt(2.0 * std::log(2.0 * sched_.n / cfg_.delta) /
                                       sched_.j);
  }

  ModelClass cls_;
  BruteForceConfig cfg_;
  BruteForceSchedule sched_;
  std::vector<int> candidates_;
  std::vector<double> sums_;
  int round_ = 0;
  bool pending_ = false;
  Transcript transcript_;
};

}  // namespace

BruteForceSchedule MakeBruteForceSchedule(const ModelClass& cls,
                                          const BruteForceConfig& cfg) {
  if (!cls.reward().has_value()) {
    throw Error(ErrorCode::kConfig, "brute force needs a reward-based class");
  }
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
    throw Error(ErrorCode::kConfig, "delta must lie in (0,1)");
  }
  if (!(cfg.alpha > 0.0)) throw Error(ErrorCode::kConfig, "alpha must be > 0");
  CoveringResult cover = FractionalCovering(cls, cfg.delta_gap);
  if (!std::isfinite(cover.n_frac)) {
    throw Error(ErrorCode::kInfeasible, "fractional covering number is infinite");
  }
  BruteForceSchedule s;
  s.n_frac = cover.n_frac;
  s.p_star = cover.p_star;
  // Round away LP noise before taking the ceiling.
  const double raw = cover.n_frac * std::log(1.0 / cfg.delta);
  s.n = static_cast<int>(std::ceil(raw - 1e-9));
  if (s.n < 1) s.n = 1;
  if (cfg.horizon < s.n) {
    throw Error(ErrorCode::kConfig, "horizon shorter than the candidate count");
  }
  s.j = cfg.horizon / s.n;
  return s;
}

std::unique_ptr<Learner> MakeBruteForceLearner(const ModelClass& cls,
                                               const BruteForceConfig& cfg) {
  return std::make_unique<BruteForceLearner>(cls, cfg);
}

}  // namespace pridec
