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
#include <limits>

#include "pridec/error.h"
#include "pridec/learners.h"
#include "pridec/rng.h"

namespace pridec {

namespace {

constexpr uint64_t kSamplePurpose = 1;
constexpr uint64_t kRefinePurpose = 2;

DecCertificate SweepSolve(const DecTable& table, double eps) {
  DecCertificate best;
  best.value = std::numeric_limits<double>::infinity();
  for (int j = -4; j <= 12; ++j) {
    DecCertificate off = SolveOffsetPac(table, std::ldexp(1.0, j));
    const double v = ConstrainedObjective(table, eps, off.p, off.q);
    if (v < best.value - 1e-12) {
      best = off;
      best.value = ConstrainedObjective(table, eps, off.p, off.q, &best.witness);
      best.mode = CertMode::kHeuristicUpper;
    }
  }
  return best;
}

class E2dLearner : public Learner {
 public:
  E2dLearner(const ModelClass& cls, const E2dConfig& cfg,
             const EstimationOracle& oracle)
      : cls_(cls), cfg_(cfg), proto_(oracle.Fresh()),
        sched_(MakeE2dSchedule(cfg, oracle)) {
    if (cls_.kind() == LossKind::kIndicator) {
      throw Error(ErrorCode::kConfig, "e2d needs a reward- or metric-based loss");
    }
    oracle_ = proto_->Fresh();
    transcript_.algorithm = "ldp_e2d";
    transcript_.seed = cfg_.seed;
    transcript_.horizon = cfg_.horizon;
    transcript_.alpha = cfg_.alpha;
    transcript_.extras["K"] = sched_.k;
    transcript_.extras["N"] = sched_.n;
    transcript_.extras["est"] = sched_.est;
    transcript_.extras["eps_bar"] = sched_.eps_bar;
  }

  bool Done() const override { return round_ >= (sched_.k + 1) * sched_.n; }

  Action Next() override {
    if (Done()) throw Error(ErrorCode::kProtocol, "learner already finished");
    const int n = sched_.n;
    RoundRecord rec;
    rec.round = round_;
    if (round_ < n) {
      rec.phase = "explore";
      Model pred = oracle_->Predict();
      DecTable table = LdpTable(cls_, pred);
      DecCertificate cert = cfg_.solver == "sweep"
                                ? SweepSolve(table, sched_.eps_bar)
                                : SolveConstrained(table, sched_.eps_bar,
                                                   cfg_.search);
      preds_.push_back(std::move(pred));
      ps_.push_back(cert.p);
      qs_.push_back(cert.q);
      certs_.push_back(cert.value);
      rec.p = cert.p;
      rec.q = cert.q;
      rec.cert = cert.value;
    } else {
      if (round_ == n) DrawRefineIndices();
      const int k = (round_ - n) / n;
      rec.phase = "refine";
      if ((round_ - n) % n == 0) {
        oracle_ = proto_->Fresh();
        batch_sum_.clear();
      }
      Accumulate(oracle_->Predict());
      rec.p = ps_[t_k_[k]];
      rec.q = qs_[t_k_[k]];
      rec.cert = certs_[t_k_[k]];
    }
    CounterRng rng(StreamKey(cfg_.seed, 0, static_cast<uint64_t>(round_),
                             kSamplePurpose));
    const int j = rng.Categorical(rec.q);
    const int nl = cls_.dictionary().size();
    Action a;
    a.decision = j / nl;
    a.column = j;
    a.channel = BinaryChannel(cls_.dictionary()[j % nl], cfg_.alpha);
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
    const int nl = cls_.dictionary().size();
    oracle_->Update(rec.action.decision, cls_.dictionary()[rec.action.column % nl],
                    SignOf(obs.symbol));
    ++round_;
    const int n = sched_.n;
    if (round_ > n && (round_ - n) % n == 0) CloseBatch((round_ - n) / n - 1);
    if (Done()) Finish();
  }

  const Transcript& transcript() const override { return transcript_; }

 private:
  void DrawRefineIndices() {
    CounterRng rng(StreamKey(cfg_.seed, 0, static_cast<uint64_t>(sched_.n),
                             kRefinePurpose));
    for (int k = 0; k < sched_.k; ++k) t_k_.push_back(rng.UniformInt(sched_.n));
  }

  void Accumulate(const Model& pred) {
    if (batch_sum_.empty()) {
      batch_sum_ = pred.table();
    } else {
      for (size_t pi = 0; pi < batch_sum_.size(); ++pi) {
        for (size_t z = 0; z < batch_sum_[pi].size(); ++z) {
          batch_sum_[pi][z] += pred.table()[pi][z];
        }
      }
    }
  }

  void CloseBatch(int k) {
    std::vector<std::vector<double>> avg = batch_sum_;
    for (auto& row : avg) {
      for (double& x : row) x /= static_cast<double>(sched_.n);
    }
    Model batch_model(cls_.decisions(), cls_.obs(), std::move(avg));
    const int t = t_k_[k];
    const double score =
        EstIncrement(preds_[t], batch_model, cls_.dictionary(), qs_[t]);
    scores_.push_back(score);
    transcript_.extras["score_" + std::to_string(k)] = score;
  }

  void Finish() {
    int k_hat = 0;
    for (int k = 1; k < sched_.k; ++k) {
      if (scores_[k] < scores_[k_hat]) k_hat = k;
    }
    const int t = t_k_[k_hat];
    transcript_.p_hat = ps_[t];
    double max_cert = 0.0;
    for (double c : certs_) max_cert = std::max(max_cert, c);
    transcript_.cert_value = max_cert;
    transcript_.extras["k_hat"] = k_hat;
    transcript_.extras["t_hat"] = t;
    transcript_.extras["cert_output"] = certs_[t];
  }

  ModelClass cls_;
  E2dConfig cfg_;
  std::unique_ptr<EstimationOracle> proto_;
  std::unique_ptr<EstimationOracle> oracle_;
  E2dSchedule sched_;
  int round_ = 0;
  bool pending_ = false;
  std::vector<Model> preds_;
  std::vector<std::vector<double>> ps_;
  std::vector<std::vector<double>> qs_;
  std::vector<double> certs_;
  std::vector<int> t_k_;
  std::vector<std::vector<double>> batch_sum_;
  std::vector<double> scores_;
  Transcript transcript_;
};

}  // namespace

E2dSchedule MakeE2dSchedule(const E2dConfig& cfg,
                            const EstimationOracle& oracle) {
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
    throw Error(ErrorCode::kConfig, "delta must lie in (0,1)");
  }
  if (!(cfg.alpha > 0.0)) throw Error(ErrorCode::kConfig, "alpha must be > 0");
  E2dSchedule s;
  s.k = static_cast<int>(std::ceil(std::log(2.0 / cfg.delta)));
  if (cfg.horizon < 2 * (s.k + 1)) {
    throw Error(ErrorCode::kConfig, "horizon too short for the phase schedule");
  }
  s.n = cfg.horizon / (s.k + 1);
  s.est = cfg.est_scale * oracle.BoundShape(s.n, cfg.delta / (4.0 * s.k));
  s.eps_bar = 8.0 * std::sqrt(s.est / s.n);
  return s;
}

std::unique_ptr<Learner> MakeE2dLearner(const ModelClass& cls,
                                        const E2dConfig& cfg,
                                        const EstimationOracle& oracle) {
  return std::make_unique<E2dLearner>(cls, cfg, oracle);
}

}  // namespace pridec
