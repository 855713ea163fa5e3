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

#include "pridec/dec.h"

#include <algorithm>
#include <cmath>

#include "pridec/error.h"
#include "pridec/lp.h"

namespace pridec {

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr double kGoodTolerance = 1e-12;

// Max of `values`, lowest index among near-ties.
double MaxLowest(const std::vector<double>& values, int* witness) {
  double best = -std::numeric_limits<double>::infinity();
  for (double v : values) best = std::max(best, v);
  if (witness != nullptr) {
    *witness = -1;
    for (size_t i = 0; i < values.size(); ++i) {
      if (values[i] >= best - kTieTolerance) {
        *witness = static_cast<int>(i);
        break;
      }
    }
  }
  return best;
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double SupTv(const Model& a, const Model& b) {
  double worst = 0.0;
  for (int pi = 0; pi < a.num_decisions(); ++pi) {
    double acc = 0.0;
    const auto& x = a.at(pi);
    const auto& y = b.at(pi);
    for (size_t z = 0; z < x.size(); ++z) acc += std::abs(x[z] - y[z]);
    worst = std::max(worst, 0.5 * acc);
  }
  return worst;
}

}  // namespace

void DecTable::Validate(bool needs_decisions) const {
  if (loss.empty()) throw Error(ErrorCode::kEmptyClass, "DEC over empty class");
  if (div.size() != loss.size()) {
    throw Error(ErrorCode::kSpaceMismatch, "loss and divergence tables differ");
  }
  if (num_columns() == 0) {
    throw Error(ErrorCode::kRange, "DEC needs at least one column");
  }
  if (static_cast<int>(column_decision.size()) != num_columns()) {
    throw Error(ErrorCode::kSpaceMismatch, "column_decision length");
  }
  if (needs_decisions) {
    for (int d : column_decision) {
      if (d < 0 || d >= num_decisions()) {
        throw Error(ErrorCode::kRange, "column without a decision");
      }
    }
  }
}

DecTable LdpTable(const ModelClass& cls, const Model& ref) {
  CheckSameSpace(ref.obs(), cls.obs(), "ldp table");
  CheckSameSpace(ref.decisions(), cls.decisions(), "ldp table");
  const LDictionary& dict = cls.dictionary();
  DecTable t;
  t.loss = cls.loss_table();
  const int np = cls.num_decisions();
  for (int pi = 0; pi < np; ++pi) {
    for (int l = 0; l < dict.size(); ++l) {
      t.column_decision.push_back(pi);
      t.column_labels.push_back(cls.decisions().label(pi) + "/l" +
                                std::to_string(l));
    }
  }
  // Reference expectations once per (pi, l).
  std::vector<double> ref_mean(np * dict.size());
  for (int pi = 0; pi < np; ++pi) {
    for (int l = 0; l < dict.size(); ++l) {
      ref_mean[pi * dict.size() + l] = raw::Expect(ref.at(pi), dict[l].values());
    }
  }
  for (int m = 0; m < cls.size(); ++m) {
    std::vector<double> row(np * dict.size());
    for (int pi = 0; pi < np; ++pi) {
      for (int l = 0; l < dict.size(); ++l) {
        const int j = pi * dict.size() + l;
        const double d =
            raw::Expect(cls.model(m).at(pi), dict[l].values()) - ref_mean[j];
        row[j] = d * d;
      }
    }
    t.div.push_back(std::move(row));
  }
  return t;
}

namespace {

template <typename Fn>
DecTable DecisionColumnTable(const ModelClass& cls, const Model& ref, Fn div) {
  CheckSameSpace(ref.obs(), cls.obs(), "decision table");
  CheckSameSpace(ref.decisions(), cls.decisions(), "decision table");
  DecTable t;
  t.loss = cls.loss_table();
  const int np = cls.num_decisions();
  for (int pi = 0; pi < np; ++pi) {
    t.column_decision.push_back(pi);
    t.column_labels.push_back(cls.decisions().label(pi));
  }
  for (int m = 0; m < cls.size(); ++m) {
    std::vector<double> row(np);
    for (int pi = 0; pi < np; ++pi) row[pi] = div(cls.model(m).at(pi), ref.at(pi));
    t.div.push_back(std::move(row));
  }
  return t;
}

}  // namespace

DecTable HellingerTable(const ModelClass& cls, const Model& ref) {
  return DecisionColumnTable(cls, ref,
                             [](const std::vector<double>& a,
                                const std::vector<double>& b) {
                               return raw::HellingerSq(a, b);
                             });
}

DecTable RobustTable(const ModelClass& cls, const Model& ref, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::kRange, "beta must lie in [0,1]");
  }
  return DecisionColumnTable(cls, ref,
                             [beta](const std::vector<double>& a,
                                    const std::vector<double>& b) {
                               return raw::HuberHellinger(a, b, beta);
                             });
}

const char* CertModeName(CertMode mode) {
  switch (mode) {
    case CertMode::kExactLp:
      return "exact_lp";
    case CertMode::kExactEnum:
      return "exact_enum";
    case CertMode::kHeuristicUpper:
      return "heuristic_upper";
  }
  return "unknown";
}

double OffsetObjective(const DecTable& table, double gamma,
                       const std::vector<double>& p,
                       const std::vector<double>& q, int* witness) {
  std::vector<double> vals(table.num_models());
  for (int m = 0; m < table.num_models(); ++m) {
    vals[m] = Dot(p, table.loss[m]) - gamma * Dot(q, table.div[m]);
  }
  return MaxLowest(vals, witness);
}

std::vector<double> DecisionMarginal(const DecTable& table,
                                     const std::vector<double>& q) {
  std::vector<double> p(table.num_decisions(), 0.0);
  for (int j = 0; j < table.num_columns(); ++j) {
    p[table.column_decision[j]] += q[j];
  }
  return p;
}

double OffsetRegObjective(const DecTable& table, double gamma,
                          const std::vector<double>& q, int* witness) {
  return OffsetObjective(table, gamma, DecisionMarginal(table, q), q, witness);
}

double ConstrainedObjective(const DecTable& table, double eps,
                            const std::vector<double>& p,
                            const std::vector<double>& q, int* witness) {
  const double budget = eps * eps;
  double best = 0.0;
  if (witness != nullptr) *witness = -1;
  for (int m = 0; m < table.num_models(); ++m) {
    if (Dot(q, table.div[m]) > budget) continue;
    const double v = Dot(p, table.loss[m]);
    if (witness != nullptr && (*witness < 0 || v > best + kTieTolerance)) {
      *witness = m;
    }
    best = std::max(best, v);
  }
  return best;
}

DecCertificate SolveOffsetPac(const DecTable& table, double gamma) {
  table.Validate(false);
  if (!(gamma >= 0.0)) throw Error(ErrorCode::kRange, "gamma must be >= 0");
  const int np = table.num_decisions();
  const int nj = table.num_columns();
  std::vector<std::vector<double>> a;
  for (int m = 0; m < table.num_models(); ++m) {
    std::vector<double> row(table.loss[m]);
    for (int j = 0; j < nj; ++j) row.push_back(-gamma * table.div[m][j]);
    a.push_back(std::move(row));
  }
  GameSolution g =
      SolveMinMaxGame(a, std::vector<double>(a.size(), 0.0), {np, nj});
  DecCertificate cert;
  cert.p.assign(g.x.begin(), g.x.begin() + np);
  cert.q.assign(g.x.begin() + np, g.x.end());
  cert.value = OffsetObjective(table, gamma, cert.p, cert.q, &cert.witness);
  cert.mode = CertMode::kExactLp;
  return cert;
}

DecCertificate SolveOffsetReg(const DecTable& table, double gamma) {
  table.Validate(true);
  if (!(gamma >= 0.0)) throw Error(ErrorCode::kRange, "gamma must be >= 0");
  const int nj = table.num_columns();
  std::vector<std::vector<double>> a;
  for (int m = 0; m < table.num_models(); ++m) {
    std::vector<double> row(nj);
    for (int j = 0; j < nj; ++j) {
      row[j] = table.loss[m][table.column_decision[j]] -
               gamma * table.div[m][j];
    }
    a.push_back(std::move(row));
  }
  GameSolution g = SolveMinMaxGame(a, std::vector<double>(a.size(), 0.0), {nj});
  DecCertificate cert;
  cert.q = g.x;
  cert.p = DecisionMarginal(table, cert.q);
  cert.value = OffsetObjective(table, gamma, cert.p, cert.q, &cert.witness);
  cert.mode = CertMode::kExactLp;
  return cert;
}

DecCertificate OffsetPacDecLdp(const ModelClass& cls, const Model& ref,
                               double gamma) {
  return SolveOffsetPac(LdpTable(cls, ref), gamma);
}

DecCertificate OffsetRegDecLdp(const ModelClass& cls, const Model& ref,
                               double gamma) {
  return SolveOffsetReg(LdpTable(cls, ref), gamma);
}

DecCertificate OffsetDecHellinger(const ModelClass& cls, const Model& ref,
                                  double gamma, bool regret) {
  DecTable t = HellingerTable(cls, ref);
  return regret ? SolveOffsetReg(t, gamma) : SolveOffsetPac(t, gamma);
}

DecCertificate RobustOffsetDec(const ModelClass& cls, const Model& ref,
                               double gamma, double beta, bool regret) {
  DecTable t = RobustTable(cls, ref, beta);
  return regret ? SolveOffsetReg(t, gamma) : SolveOffsetPac(t, gamma);
}

DecCertificate ConstrainedPacDecLdp(const ModelClass& cls, const Model& ref,
                                    double eps, const SearchConfig& cfg) {
  return SolveConstrained(LdpTable(cls, ref), eps, cfg);
}

DecCertificate QuantilePacDec(const ModelClass& cls, const Model& ref,
                              double eps, double delta,
                              const SearchConfig& cfg) {
  return SolveQuantile(LdpTable(cls, ref), eps, delta, cfg);
}

double LocalDec(const ModelClass& cls, int m0, double eps) {
  if (m0 < 0 || m0 >= cls.size()) {
    throw Error(ErrorCode::kNotFound, "reference model not in class");
  }
  double best = 0.0;
  for (int m1 = 0; m1 < cls.size(); ++m1) {
    if (SupTv(cls.model(m1), cls.model(m0)) > eps) continue;
    double inner = std::numeric_limits<double>::infinity();
    for (int pi = 0; pi < cls.num_decisions(); ++pi) {
      inner = std::min(inner, cls.Loss(m1, pi) + cls.Loss(m0, pi));
    }
    best = std::max(best, inner);
  }
  return best;
}

double TvModulus(const ModelClass& cls, int m0, double eps,
                 const std::vector<double>& functional) {
  if (m0 < 0 || m0 >= cls.size()) {
    throw Error(ErrorCode::kNotFound, "reference model not in class");
  }
  if (static_cast<int>(functional.size()) != cls.size()) {
    throw Error(ErrorCode::kSpaceMismatch, "one functional value per model");
  }
  double best = 0.0;
  for (int m1 = 0; m1 < cls.size(); ++m1) {
    if (SupTv(cls.model(m1), cls.model(m0)) > eps) continue;
    best = std::max(best, std::abs(functional[m1] - functional[m0]));
  }
  return best;
}

CoveringResult FractionalCovering(const ModelClass& cls, double delta) {
  if (!(delta >= 0.0)) throw Error(ErrorCode::kRange, "delta must be >= 0");
  const int np = cls.num_decisions();
  std::vector<std::vector<double>> a;
  for (int m = 0; m < cls.size(); ++m) {
    std::vector<double> row(np, 0.0);
    bool any = false;
    for (int pi = 0; pi < np; ++pi) {
      if (cls.Loss(m, pi) <= delta + kGoodTolerance) {
        row[pi] = -1.0;
        any = true;
      }
    }
    if (!any) return CoveringResult{};
    a.push_back(std::move(row));
  }
  GameSolution g = SolveMinMaxGame(a, std::vector<double>(a.size(), 0.0), {np});
  CoveringResult out;
  out.p_star = g.x;
  // g.value = -(worst-case good mass) at the cleaned p.
  out.n_frac = 1.0 / (-g.value);
  return out;
}

DecTable SqTable(const QueryModelClass& cls, const RandomizedQueryModel& ref,
                 double tau) {
  if (!(tau >= 0.0)) throw Error(ErrorCode::kRange, "tau must be >= 0");
  const int nq = cls.queries().size();
  if (static_cast<int>(ref.size()) != nq) {
    throw Error(ErrorCode::kSpaceMismatch, "reference needs one law per query");
  }
  DecTable t;
  t.loss = cls.loss_table();
  for (int j = 0; j < nq; ++j) {
    t.column_decision.push_back(-1);
    t.column_labels.push_back(cls.queries().label(j));
  }
  for (int m = 0; m < cls.size(); ++m) {
    std::vector<double> row(nq, 0.0);
    for (int j = 0; j < nq; ++j) {
      const RandomizedResponse& r = ref[j];
      for (size_t k = 0; k < r.prob.size(); ++k) {
        if (cls.Distance(cls.Response(m, j), r.values[k]) > tau) {
          row[j] += r.prob[k];
        }
      }
    }
    t.div.push_back(std::move(row));
  }
  return t;
}

DecCertificate SqDec(const QueryModelClass& cls,
                     const RandomizedQueryModel& ref, double eps, double tau,
                     const SearchConfig& cfg) {
  return SolveConstrained(SqTable(cls, ref, tau), eps, cfg);
}

}  // namespace pridec
