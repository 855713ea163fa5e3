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

// Exploration-by-optimization over an information set structure. Each round
// alternates between the (p, q) linear program at fixed xi and the optimal
// clipped log-posterior xi at the LP's dual weights, keeping the best
// certified iterate. The first posterior step uses the prior spread over
// each information set, since the dual at xi = 0 is usually degenerate.

#include <algorithm>
#include <cmath>
#include <limits>

#include "pridec/error.h"
#include "pridec/learners.h"
#include "pridec/lp.h"
#include "pridec/rng.h"

namespace pridec {

namespace {

constexpr uint64_t kSamplePurpose = 1;
constexpr double kImprovement = 1e-9;

struct Row {
  int model;
  int psi;
};

std::vector<Row> Rows(const InfoSetStructure& info) {
  std::vector<Row> rows;
  for (int psi = 0; psi < static_cast<int>(info.sets.size()); ++psi) {
    for (int m : info.sets[psi]) rows.push_back({m, psi});
  }
  return rows;
}

double AnchoredLoss(const ModelClass& cls, const InfoSetStructure& info,
                    const Row& r, int pi) {
  return cls.Loss(r.model, pi) - cls.Loss(r.model, info.anchors[r.psi]);
}

// E_{o ~ M(col)} E_{psi' ~ w} [1 - exp(xi(psi') - xi(psi))] per column.
std::vector<double> ExplorationGain(const ExoColumns& cols, const Row& r,
                                    const std::vector<double>& w,
                                    const XiTable& xi) {
  const int nj = static_cast<int>(cols.decision.size());
  std::vector<double> gain(nj, 0.0);
  for (int j = 0; j < nj; ++j) {
    const auto& law = cols.law[r.model][j];
    for (size_t o = 0; o < law.size(); ++o) {
      if (law[o] == 0.0) continue;
      const auto& x = xi[j][o];
      double inner = 0.0;
      for (size_t psi = 0; psi < w.size(); ++psi) {
        inner += w[psi] * (1.0 - std::exp(x[psi] - x[r.psi]));
      }
      gain[j] += law[o] * inner;
    }
  }
  return gain;
}

std::vector<double> Marginal(const ExoColumns& cols, int np,
                             const std::vector<double>& q) {
  std::vector<double> p(np, 0.0);
  for (size_t j = 0; j < q.size(); ++j) p[cols.decision[j]] += q[j];
  return p;
}

XiTable ZeroXi(const ExoColumns& cols, size_t num_psi) {
  XiTable xi(cols.decision.size());
  for (size_t j = 0; j < xi.size(); ++j) {
    xi[j].assign(cols.law.front()[j].size(), std::vector<double>(num_psi, 0.0));
  }
  return xi;
}

class ExoLearner : public Learner {
 public:
  ExoLearner(const ModelClass& cls, const InfoSetStructure& info,
             const ExoConfig& cfg)
      : cls_(cls), info_(info), cfg_(cfg), cols_(MakeExoColumns(cls, cfg)),
        rows_(Rows(info)) {
    info_.Validate(cls_.size(), cls_.num_decisions());
    if (cfg_.horizon <= 0) throw Error(ErrorCode::kConfig, "horizon must be > 0");
    if (!(cfg_.gamma > 0.0)) throw Error(ErrorCode::kConfig, "gamma must be > 0");
    clip_ = cfg_.clip > 0.0 ? cfg_.clip
                            : std::log(std::max(2.0, double(cfg_.horizon)));
    log_w_.resize(info_.prior.size());
    for (size_t i = 0; i < log_w_.size(); ++i) log_w_[i] = std::log(info_.prior[i]);
    p_sum_.assign(cls_.num_decisions(), 0.0);
    transcript_.algorithm = "exo_plus";
    transcript_.seed = cfg_.seed;
    transcript_.horizon = cfg_.horizon;
    transcript_.alpha = cfg_.private_observations ? cfg_.alpha : 0.0;
    transcript_.extras["clip"] = clip_;
    transcript_.extras["gamma"] = cfg_.gamma;
  }

  bool Done() const override { return round_ >= cfg_.horizon; }

  Action Next() override {
    if (Done()) throw Error(ErrorCode::kProtocol, "learner already finished");
    const std::vector<double> w = Weights();
    Solve(w);
    RoundRecord rec;
    rec.round = round_;
    rec.phase = "play";
    rec.p = p_;
    rec.q = q_;
    rec.cert = cert_;
    CounterRng rng(StreamKey(cfg_.seed, 0, static_cast<uint64_t>(round_),
                             kSamplePurpose));
    const int j = rng.Categorical(q_);
    Action a;
    a.decision = cols_.decision[j];
    a.column = j;
    if (cfg_.private_observations) {
      a.channel = BinaryChannel(cls_.dictionary()[cols_.fn[j]], cfg_.alpha);
    }
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
    const int j = rec.action.column;
    if (obs.symbol < 0 ||
        obs.symbol >= static_cast<int>(xi_[j].size())) {
      throw Error(ErrorCode::kProtocol, "observation outside the column's space");
    }
    for (size_t psi = 0; psi < log_w_.size(); ++psi) {
      log_w_[psi] += xi_[j][obs.symbol][psi];
    }
    for (size_t pi = 0; pi < p_.size(); ++pi) p_sum_[pi] += p_[pi];
    sum_cert_ += cert_;
    ++round_;
    if (Done()) Finish();
  }

  const Transcript& transcript() const override { return transcript_; }

 private:
  std::vector<double> Weights() const {
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

  void Solve(const std::vector<double>& w) {
    const int np = cls_.num_decisions();
    const int nj = static_cast<int>(cols_.decision.size());
    XiTable xi = ZeroXi(cols_, w.size());
    cert_ = std::numeric_limits<double>::infinity();
    for (int it = 0; it < cfg_.max_alternations; ++it) {
      std::vector<std::vector<double>> a;
      for (const Row& r : rows_) {
        const std::vector<double> gain = ExplorationGain(cols_, r, w, xi);
        std::vector<double> row;
        if (cfg_.regret_option) {
          for (int j = 0; j < nj; ++j) {
            row.push_back(AnchoredLoss(cls_, info_, r, cols_.decision[j]) -
                          cfg_.gamma * gain[j]);
          }
        } else {
          for (int pi = 0; pi < np; ++pi) {
            row.push_back(AnchoredLoss(cls_, info_, r, pi));
          }
          for (int j = 0; j < nj; ++j) row.push_back(-cfg_.gamma * gain[j]);
        }
        a.push_back(std::move(row));
      }
      const std::vector<int> blocks =
          cfg_.regret_option ? std::vector<int>{nj} : std::vector<int>{np, nj};
      GameSolution g = SolveMinMaxGame(a, std::vector<double>(a.size(), 0.0),
                                       blocks, true);
      std::vector<double> q;
      std::vector<double> p;
      if (cfg_.regret_option) {
        q = g.x;
        p = Marginal(cols_, np, q);
      } else {
        p.assign(g.x.begin(), g.x.begin() + np);
        q.assign(g.x.begin() + np, g.x.end());
      }
      const double value =
          ExoObjective(cls_, info_, cols_, w, cfg_.gamma, p, q, xi);
      if (value < cert_ - kImprovement) {
        cert_ = value;
        p_ = p;
        q_ = q;
        xi_ = xi;
      } else if (it > 1) {
        break;
      }
      xi = PosteriorXi(w, it == 0 ? PriorRowWeights(w) : g.mu);
    }
  }

  // w(psi) spread uniformly over M_psi.
  std::vector<double> PriorRowWeights(const std::vector<double>& w) const {
    std::vector<double> mu;
    for (const Row& r : rows_) {
      mu.push_back(w[r.psi] / static_cast<double>(info_.sets[r.psi].size()));
    }
    return mu;
  }

  XiTable PosteriorXi(const std::vector<double>& w,
                      const std::vector<double>& mu) const {
    XiTable xi = ZeroXi(cols_, w.size());
    for (size_t j = 0; j < xi.size(); ++j) {
      for (size_t o = 0; o < xi[j].size(); ++o) {
        std::vector<double> nu(w.size(), 0.0);
        double total = 0.0;
        for (size_t r = 0; r < rows_.size(); ++r) {
          const double m = mu[r] * cols_.law[rows_[r].model][j][o];
          nu[rows_[r].psi] += m;
          total += m;
        }
        if (total <= 0.0) continue;
        for (size_t psi = 0; psi < w.size(); ++psi) {
          const double ratio = nu[psi] / total / w[psi];
          const double lr = ratio > 0.0 ? std::log(ratio) : -clip_;
          xi[j][o][psi] = 0.5 * std::clamp(lr, -clip_, clip_);
        }
      }
    }
    return xi;
  }

  void Finish() {
    transcript_.p_hat = p_sum_;
    for (double& x : transcript_.p_hat) x /= static_cast<double>(cfg_.horizon);
    transcript_.cert_value = sum_cert_;
    transcript_.extras["sum_gamma_cert"] = sum_cert_;
  }

  ModelClass cls_;
  InfoSetStructure info_;
  ExoConfig cfg_;
  ExoColumns cols_;
  std::vector<Row> rows_;
  double clip_ = 0.0;
  std::vector<double> log_w_;
  std::vector<double> p_;
  std::vector<double> q_;
  XiTable xi_;
  double cert_ = 0.0;
  double sum_cert_ = 0.0;
  std::vector<double> p_sum_;
  int round_ = 0;
  bool pending_ = false;
  Transcript transcript_;
};

}  // namespace

ExoColumns MakeExoColumns(const ModelClass& cls, const ExoConfig& cfg) {
  ExoColumns cols;
  cols.law.resize(cls.size());
  if (!cfg.private_observations) {
    for (int pi = 0; pi < cls.num_decisions(); ++pi) {
      cols.decision.push_back(pi);
      cols.fn.push_back(-1);
    }
    for (int m = 0; m < cls.size(); ++m) cols.law[m] = cls.model(m).table();
    return cols;
  }
  if (!(cfg.alpha > 0.0)) throw Error(ErrorCode::kConfig, "alpha must be > 0");
  const LDictionary& dict = cls.dictionary();
  const double c = CAlpha(cfg.alpha);
  for (int pi = 0; pi < cls.num_decisions(); ++pi) {
    for (int l = 0; l < dict.size(); ++l) {
      cols.decision.push_back(pi);
      cols.fn.push_back(l);
    }
  }
  for (int m = 0; m < cls.size(); ++m) {
    for (size_t j = 0; j < cols.decision.size(); ++j) {
      const double mean =
          raw::Expect(cls.model(m).at(cols.decision[j]), dict[cols.fn[j]].values());
      const double plus = 0.5 * (1.0 + c * mean);
      cols.law[m].push_back({1.0 - plus, plus});
    }
  }
  return cols;
}

double ExoObjective(const ModelClass& cls, const InfoSetStructure& info,
                    const ExoColumns& cols, const std::vector<double>& w,
                    double gamma, const std::vector<double>& p,
                    const std::vector<double>& q, const XiTable& xi) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Row& r : Rows(info)) {
    double exploit = 0.0;
    for (size_t pi = 0; pi < p.size(); ++pi) {
      exploit += p[pi] * AnchoredLoss(cls, info, r, static_cast<int>(pi));
    }
    const std::vector<double> gain = ExplorationGain(cols, r, w, xi);
    double explore = 0.0;
    for (size_t j = 0; j < q.size(); ++j) explore += q[j] * gain[j];
    best = std::max(best, exploit - gamma * explore);
  }
  return best;
}

double ExoRegretBound(const ModelClass& cls, const InfoSetStructure& info,
                      double delta_info, double gamma, double delta,
                      const std::vector<int>& realized, double sum_cert) {
  if (realized.empty()) throw Error(ErrorCode::kRange, "no realized models");
  const int np = cls.num_decisions();
  std::vector<double> avg(np, 0.0);
  std::vector<bool> seen(cls.size(), false);
  for (int m : realized) {
    seen[m] = true;
    for (int pi = 0; pi < np; ++pi) avg[pi] += cls.ValueOf(m, pi);
  }
  const double best = *std::max_element(avg.begin(), avg.end()) / realized.size();
  double mass = 0.0;
  for (size_t psi = 0; psi < info.sets.size(); ++psi) {
    bool contains = true;
    for (int m = 0; m < cls.size(); ++m) {
      if (seen[m] &&
          std::find(info.sets[psi].begin(), info.sets[psi].end(), m) ==
              info.sets[psi].end()) {
        contains = false;
      }
    }
    const double anchor = avg[info.anchors[psi]] / realized.size();
    if (contains && best - anchor <= delta_info + 1e-12) mass += info.prior[psi];
  }
  if (mass <= 0.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(realized.size()) * delta_info + sum_cert +
         2.0 * gamma * (std::log(1.0 / mass) + std::log(1.0 / delta));
}

std::unique_ptr<Learner> MakeExoLearner(const ModelClass& cls,
                                        const InfoSetStructure& info,
                                        const ExoConfig& cfg) {
  return std::make_unique<ExoLearner>(cls, info, cfg);
}

}  // namespace pridec
