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

// Constrained and quantile DECs. For a fixed exploration distribution q the
// set of models still feasible is explicit, and the value only depends on
// that set. Small classes are solved exactly by enumerating feasible sets;
// larger ones by projected ascent on the divergence of the models the inner
// adversary relies on.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "pridec/dec.h"
#include "pridec/error.h"
#include "pridec/lp.h"
#include "pridec/rng.h"

namespace pridec {

namespace {

// A model set counts as excludable when some q pushes every excluded model
// at least this far past the budget.
constexpr double kStrictMargin = 1e-10;
constexpr double kDeltaSlack = 1e-12;

using Mask = std::vector<bool>;

struct InnerResult {
  double value = 0.0;
  std::vector<double> p;
  std::vector<double> mu;  // adversary weights over the set, in model order
};

std::vector<double> Uniform(int n) { return std::vector<double>(n, 1.0 / n); }

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// Euclidean projection onto the probability simplex.
std::vector<double> ProjectSimplex(std::vector<double> v) {
  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  for (double& x : v) x = std::max(0.0, x - theta);
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& x : v) x /= s;
  return v;
}

Mask FeasibleSet(const DecTable& t, const std::vector<double>& q,
                 double budget) {
  Mask f(t.num_models());
  for (int m = 0; m < t.num_models(); ++m) f[m] = Dot(q, t.div[m]) <= budget;
  return f;
}

// Enumerates the simplex grid {k / res} in dimension n.
template <typename Fn>
void ForEachGridPoint(int n, int res, Fn fn) {
  std::vector<int> k(n, 0);
  std::vector<double> p(n);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n - 1) {
      k[i] = left;
      for (int j = 0; j < n; ++j) p[j] = static_cast<double>(k[j]) / res;
      fn(p);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, res);
}

class FeasibleSetSearch {
 public:
  using InnerFn = std::function<InnerResult(const std::vector<int>& members)>;
  using ObjectiveFn =
      std::function<double(const std::vector<double>& p,
                           const std::vector<double>& q, int* witness)>;

  FeasibleSetSearch(const DecTable& table, double eps, InnerFn inner,
                    ObjectiveFn objective)
      : t_(table), budget_(eps * eps), inner_(std::move(inner)),
        objective_(std::move(objective)) {}

  DecCertificate Solve(const SearchConfig& cfg) {
    if (t_.num_models() <= cfg.exact_model_cap && t_.num_models() < 31) {
      return SolveExact();
    }
    return SolveHeuristic(cfg);
  }

 private:
  const InnerResult& Inner(const Mask& mask) {
    auto it = memo_.find(mask);
    if (it != memo_.end()) return it->second;
    std::vector<int> members;
    for (int m = 0; m < t_.num_models(); ++m) {
      if (mask[m]) members.push_back(m);
    }
    InnerResult r;
    if (members.empty()) {
      r.value = 0.0;
      r.p = Uniform(t_.num_decisions());
    } else {
      r = inner_(members);
    }
    return memo_.emplace(mask, std::move(r)).first->second;
  }

  // A q excluding every model outside `mask`, if one exists.
  bool Excludable(const Mask& mask, std::vector<double>* q) {
    std::vector<std::vector<double>> a;
    for (int m = 0; m < t_.num_models(); ++m) {
      if (mask[m]) continue;
      std::vector<double> row(t_.div[m]);
      for (double& v : row) v = -v;
      a.push_back(std::move(row));
    }
    if (a.empty()) {
      *q = Uniform(t_.num_columns());
      return true;
    }
    GameSolution g = SolveMinMaxGame(
        a, std::vector<double>(a.size(), budget_), {t_.num_columns()});
    if (g.value < -kStrictMargin) {
      *q = g.x;
      return true;
    }
    return false;
  }

  DecCertificate Finish(const std::vector<double>& p,
                        const std::vector<double>& q, CertMode mode) {
    DecCertificate cert;
    cert.p = p;
    cert.q = q;
    cert.value = objective_(p, q, &cert.witness);
    cert.mode = mode;
    return cert;
  }

  DecCertificate SolveExact() {
    const int n = t_.num_models();
    const uint32_t count = 1u << n;
    std::vector<std::pair<double, uint32_t>> order;
    order.reserve(count);
    for (uint32_t bits = 0; bits < count; ++bits) {
      order.emplace_back(Inner(ToMask(bits)).value, bits);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) {
                       return a.first < b.first;
                     });
    for (const auto& [value, bits] : order) {
      std::vector<double> q;
      const Mask mask = ToMask(bits);
      if (Excludable(mask, &q)) {
        return Finish(Inner(mask).p, q, CertMode::kExactEnum);
      }
    }
    throw Error(ErrorCode::kInfeasible, "no feasible set is achievable");
  }

  Mask ToMask(uint32_t bits) const {
    Mask mask(t_.num_models());
    for (int m = 0; m < t_.num_models(); ++m) mask[m] = (bits >> m) & 1u;
    return mask;
  }

  DecCertificate SolveHeuristic(const SearchConfig& cfg) {
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<double> best_p;
    std::vector<double> best_q;
    auto consider = [&](const std::vector<double>& q) {
      const InnerResult& r = Inner(FeasibleSet(t_, q, budget_));
      const double v = objective_(r.p, q, nullptr);
      if (v < best_value - 1e-12) {
        best_value = v;
        best_p = r.p;
        best_q = q;
      }
      return &r;
    };
    // Lagrangian candidates from the offset problem.
    for (int j = -4; j <= 10; ++j) {
      DecCertificate off = SolveOffsetPac(t_, std::ldexp(1.0, j));
      consider(off.q);
    }
    const int nj = t_.num_columns();
    for (int r = 0; r < cfg.restarts; ++r) {
      std::vector<double> q = Uniform(nj);
      if (r > 0) {
        CounterRng rng(StreamKey(cfg.seed, static_cast<uint64_t>(r), 0, 7));
        double total = 0.0;
        for (double& x : q) {
          x = -std::log(1.0 - rng.Uniform());
          total += x;
        }
        for (double& x : q) x /= total;
      }
      for (int step = 1; step <= cfg.steps; ++step) {
        const InnerResult* inner = consider(q);
        const Mask f = FeasibleSet(t_, q, budget_);
        if (std::none_of(f.begin(), f.end(), [](bool b) { return b; })) break;
        std::vector<double> grad(nj, 0.0);
        int k = 0;
        for (int m = 0; m < t_.num_models(); ++m) {
          if (!f[m]) continue;
          const double w = inner->mu.empty() ? 1.0 : inner->mu[k];
          ++k;
          if (w == 0.0) continue;
          for (int j = 0; j < nj; ++j) grad[j] += w * t_.div[m][j];
        }
        const double eta = cfg.step_scale / std::sqrt(static_cast<double>(step));
        for (int j = 0; j < nj; ++j) q[j] += eta * grad[j];
        q = ProjectSimplex(std::move(q));
      }
    }
    return Finish(best_p, best_q, CertMode::kHeuristicUpper);
  }

  const DecTable& t_;
  double budget_;
  InnerFn inner_;
  ObjectiveFn objective_;
  std::map<Mask, InnerResult> memo_;
};

InnerResult GameInner(const DecTable& t, const std::vector<int>& members) {
  std::vector<std::vector<double>> a;
  for (int m : members) a.push_back(t.loss[m]);
  GameSolution g = SolveMinMaxGame(a, std::vector<double>(a.size(), 0.0),
                                   {t.num_decisions()}, true);
  return {g.value, g.x, g.mu};
}

double WorstQuantile(const DecTable& t, const std::vector<int>& members,
                     const std::vector<double>& p, double delta) {
  double worst = 0.0;
  for (int m : members) worst = std::max(worst, QuantileLoss(p, t.loss[m], delta));
  return worst;
}

InnerResult QuantileInner(const DecTable& t, const std::vector<int>& members,
                          double delta, int grid) {
  const int np = t.num_decisions();
  InnerResult best;
  best.value = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<double>& p) {
    const double v = WorstQuantile(t, members, p, delta);
    if (v < best.value - 1e-12) {
      best.value = v;
      best.p = p;
    }
  };
  if (np <= 3) {
    ForEachGridPoint(np, grid, consider);
  } else {
    for (int pi = 0; pi < np; ++pi) {
      std::vector<double> p(np, 0.0);
      p[pi] = 1.0;
      consider(p);
    }
    consider(Uniform(np));
    consider(GameInner(t, members).p);
  }
  // Adversary weights: models attaining the worst quantile at the chosen p.
  for (int m : members) {
    best.mu.push_back(QuantileLoss(best.p, t.loss[m], delta) >= best.value - 1e-12
                          ? 1.0
                          : 0.0);
  }
  return best;
}

}  // namespace

DecCertificate SolveConstrained(const DecTable& table, double eps,
                                const SearchConfig& cfg) {
  table.Validate(false);
  if (!(eps >= 0.0)) throw Error(ErrorCode::kRange, "eps must be >= 0");
  FeasibleSetSearch search(
      table, eps,
      [&table](const std::vector<int>& members) {
        return GameInner(table, members);
      },
      [&table, eps](const std::vector<double>& p, const std::vector<double>& q,
                    int* witness) {
        return ConstrainedObjective(table, eps, p, q, witness);
      });
  return search.Solve(cfg);
}

double QuantileLoss(const std::vector<double>& p,
                    const std::vector<double>& loss, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw Error(ErrorCode::kRange, "delta must lie in (0,1]");
  }
  std::vector<int> order;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) order.push_back(static_cast<int>(i));
  }
  std::stable_sort(order.begin(), order.end(),
                   [&loss](int a, int b) { return loss[a] > loss[b]; });
  double mass = 0.0;
  for (int i : order) {
    mass += p[i];
    if (mass >= delta - kDeltaSlack) return loss[i];
  }
  return order.empty() ? 0.0 : loss[order.back()];
}

double QuantileObjective(const DecTable& table, double eps, double delta,
                         const std::vector<double>& p,
                         const std::vector<double>& q, int* witness) {
  const double budget = eps * eps;
  double best = 0.0;
  if (witness != nullptr) *witness = -1;
  for (int m = 0; m < table.num_models(); ++m) {
    if (Dot(q, table.div[m]) > budget) continue;
    const double v = QuantileLoss(p, table.loss[m], delta);
    if (witness != nullptr && (*witness < 0 || v > best + 1e-12)) *witness = m;
    best = std::max(best, v);
  }
  return best;
}

DecCertificate SolveQuantile(const DecTable& table, double eps, double delta,
                             const SearchConfig& cfg) {
  table.Validate(false);
  if (!(eps >= 0.0)) throw Error(ErrorCode::kRange, "eps must be >= 0");
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw Error(ErrorCode::kRange, "delta must lie in (0,1]");
  }
  FeasibleSetSearch search(
      table, eps,
      [&table, delta, &cfg](const std::vector<int>& members) {
        return QuantileInner(table, members, delta, cfg.quantile_grid);
      },
      [&table, eps, delta](const std::vector<double>& p,
                           const std::vector<double>& q, int* witness) {
        return QuantileObjective(table, eps, delta, p, q, witness);
      });
  return search.Solve(cfg);
}

}  // namespace pridec
