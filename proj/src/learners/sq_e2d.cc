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

#include <algorithm>
#include <cmath>
#include <map>

#include "pridec/error.h"
#include "pridec/learners.h"
#include "pridec/rng.h"

namespace pridec {

namespace {

constexpr uint64_t kSamplePurpose = 1;
constexpr uint64_t kRefinePurpose = 2;

class SqE2dLearner : public Learner {
 public:
  SqE2dLearner(const QueryModelClass& cls, const SqE2dConfig& cfg)
      : cls_(cls), cfg_(cfg), sched_(MakeSqE2dSchedule(cls.size(), cfg)),
        alive_(cls.size(), true) {
    transcript_.algorithm = "sq_e2d";
    transcript_.seed = cfg_.seed;
    transcript_.horizon = cfg_.horizon;
    transcript_.extras["K"] = sched_.k;
    transcript_.extras["N"] = sched_.n;
    transcript_.extras["T0"] = sched_.t0;
    transcript_.extras["gamma_bar"] = sched_.gamma_bar;
  }

  bool Done() const override { return done_; }

  Action Next() override {
    if (Done()) throw Error(ErrorCode::kProtocol, "learner already finished");
    RoundRecord rec;
    rec.round = round_;
    if (round_ < sched_.t0) {
      rec.phase = "explore";
      const DecCertificate& cert = Certificate(alive_);
      sets_.push_back(alive_);
      ps_.push_back(cert.p);
      qs_.push_back(cert.q);
      certs_.push_back(cert.value);
      rec.p = cert.p;
      rec.q = cert.q;
      rec.cert = cert.value;
    } else {
      if (round_ == sched_.t0) DrawRefineIndices();
      const int t = t_k_[Batch()];
      rec.phase = "refine";
      rec.p = ps_[t];
      rec.q = qs_[t];
      rec.cert = certs_[t];
    }
    CounterRng rng(StreamKey(cfg_.seed, 0, static_cast<uint64_t>(round_),
                             kSamplePurpose));
    Action a;
    a.query = rng.Categorical(rec.q);
    a.column = a.query;
    rec.action = a;
    transcript_.rounds.push_back(std::move(rec));
    pending_ = true;
    return a;
  }

  void Observe(const Observation& obs) override {
    if (!pending_) throw Error(ErrorCode::kProtocol, "observation without action");
    pending_ = false;
    RoundRecord& rec = transcript_.rounds.back();
    rec.obs = obs;
    const int j = rec.action.query;
    if (round_ < sched_.t0) {
      std::vector<bool> next = alive_;
      for (int m = 0; m < cls_.size(); ++m) {
        if (next[m] && cls_.Distance(cls_.Response(m, j), obs.response) > cfg_.tau) {
          next[m] = false;
        }
      }
      if (std::find(next.begin(), next.end(), true) != next.end()) {
        alive_ = std::move(next);
      } else {
        transcript_.extras["empty_elimination"] = 1.0;
      }
    } else {
      const std::vector<bool>& mu = sets_[t_k_[Batch()]];
      int size = 0;
      int far = 0;
      for (int m = 0; m < cls_.size(); ++m) {
        if (!mu[m]) continue;
        ++size;
        if (cls_.Distance(cls_.Response(m, j), obs.response) > cfg_.tau) ++far;
      }
      error_sum_ += static_cast<double>(far) / size;
    }
    ++round_;
    if (round_ >= sched_.t0 && (round_ - sched_.t0) % sched_.n == 0 &&
        round_ > sched_.t0) {
      const int k = (round_ - sched_.t0) / sched_.n - 1;
      const double e_hat = error_sum_ / sched_.n;
      error_sum_ = 0.0;
      transcript_.extras["e_hat_" + std::to_string(k)] = e_hat;
      if (e_hat < sched_.gamma_bar) {
        Finish(k);
      } else if (k + 1 == sched_.k) {
        Finish(0);
      }
    }
  }

  const Transcript& transcript() const override { return transcript_; }

 private:
  int Batch() const { return (round_ - sched_.t0) / sched_.n; }

  const DecCertificate& Certificate(const std::vector<bool>& alive) {
    auto it = cache_.find(alive);
    if (it != cache_.end()) return it->second;
    std::vector<int> members;
    for (int m = 0; m < cls_.size(); ++m) {
      if (alive[m]) members.push_back(m);
    }
    RandomizedQueryModel mu(cls_.queries().size());
    for (int j = 0; j < cls_.queries().size(); ++j) {
      for (int m : members) {
        mu[j].prob.push_back(1.0 / static_cast<double>(members.size()));
        mu[j].values.push_back(cls_.Response(m, j));
      }
    }
    DecCertificate cert = SolveConstrained(SqTable(cls_, mu, 2.0 * cfg_.tau),
                                           std::sqrt(sched_.gamma_bar),
                                           cfg_.search);
    return cache_.emplace(alive, std::move(cert)).first->second;
  }

  void DrawRefineIndices() {
    CounterRng rng(StreamKey(cfg_.seed, 0, static_cast<uint64_t>(sched_.t0),
                             kRefinePurpose));
    for (int k = 0; k < sched_.k; ++k) t_k_.push_back(rng.UniformInt(sched_.t0));
  }

  void Finish(int k_star) {
    done_ = true;
    const int t = t_k_[k_star];
    transcript_.p_hat = ps_[t];
    transcript_.cert_value = certs_[t];
    transcript_.extras["k_star"] = k_star;
    transcript_.extras["t_star"] = t;
  }

  QueryModelClass cls_;
  SqE2dConfig cfg_;
  SqE2dSchedule sched_;
  std::vector<bool> alive_;
  std::map<std::vector<bool>, DecCertificate> cache_;
  std::vector<std::vector<bool>> sets_;
  std::vector<std::vector<double>> ps_;
  std::vector<std::vector<double>> qs_;
  std::vector<double> certs_;
  std::vector<int> t_k_;
  double error_sum_ = 0.0;
  int round_ = 0;
  bool pending_ = false;
  bool done_ = false;
  Transcript transcript_;
};

}  // namespace

SqE2dSchedule MakeSqE2dSchedule(int num_models, const SqE2dConfig& cfg) {
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
    throw Error(ErrorCode::kConfig, "delta must lie in (0,1)");
  }
  if (!(cfg.tau >= 0.0)) throw Error(ErrorCode::kConfig, "tau must be >= 0");
  if (!(cfg.c0 > 0.0)) throw Error(ErrorCode::kConfig, "C0 must be > 0");
  SqE2dSchedule s;
  s.k = static_cast<int>(std::ceil(std::log(2.0 / cfg.delta)));
  if (cfg.horizon < 2 * s.k * 2) {
    throw Error(ErrorCode::kConfig, "horizon too short for the phase schedule");
  }
  s.t0 = cfg.horizon / 2;
  s.n = cfg.horizon / (2 * s.k);
  s.gamma_bar = cfg.c0 * std::max(std::log(static_cast<double>(num_models)) /
                                      cfg.horizon,
                                  std::log(1.0 / cfg.delta) / s.n);
  return s;
}

std::unique_ptr<Learner> MakeSqE2dLearner(const QueryModelClass& cls,
                                          const SqE2dConfig& cfg) {
  return std::make_unique<SqE2dLearner>(cls, cfg);
}

}  // namespace pridec
