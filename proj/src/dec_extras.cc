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
#include <bit>
#include <cmath>

#include <Eigen/Dense>

#include "pridec/dec.h"
#include "pridec/error.h"
#include "pridec/rng.h"

namespace pridec {

namespace {

constexpr double kFixedPointTolerance = 1e-8;
constexpr double kGoodTolerance = 1e-12;
constexpr double kNormTolerance = 1e-12;

double CorrelationEps(const std::vector<std::vector<double>>& rho,
                      const std::vector<int>& family) {
  const double m = static_cast<double>(family.size());
  double eps = 0.0;
  for (int i : family) {
    for (int j : family) {
      const double v = i == j ? std::sqrt(std::abs(rho[i][i]) / m)
                              : std::sqrt(std::abs(rho[i][j]));
      eps = std::max(eps, v);
    }
  }
  return eps;
}

bool CoverageOk(const ModelClass& cls, double delta,
                const std::vector<int>& family) {
  const int m = static_cast<int>(family.size());
  for (int pi = 0; pi < cls.num_decisions(); ++pi) {
    int good = 0;
    for (int i : family) {
      if (cls.Loss(i, pi) <= delta + kGoodTolerance) ++good;
    }
    if (2 * good > m) return false;
  }
  return true;
}

std::vector<std::vector<double>> Restrict(
    const std::vector<std::vector<double>>& rho, const std::vector<int>& fam) {
  std::vector<std::vector<double>> out(fam.size(),
                                       std::vector<double>(fam.size()));
  for (size_t a = 0; a < fam.size(); ++a) {
    for (size_t b = 0; b < fam.size(); ++b) out[a][b] = rho[fam[a]][fam[b]];
  }
  return out;
}

}  // namespace

double PairwiseCorrelation(const FiniteDist& d1, const FiniteDist& d2,
                           const FiniteDist& ref) {
  CheckSameSpace(d1.space(), ref.space(), "pairwise_correlation");
  CheckSameSpace(d2.space(), ref.space(), "pairwise_correlation");
  double acc = 0.0;
  for (int z = 0; z < ref.size(); ++z) {
    if (ref[z] == 0.0) {
      if (d1[z] > 0.0 || d2[z] > 0.0) {
        throw Error(ErrorCode::kAbsoluteContinuity,
                    "pairwise_correlation: reference misses class support");
      }
      continue;
    }
    acc += d1[z] * d2[z] / ref[z];
  }
  return acc - 1.0;
}

CorrelationReport MinCorrelation(const ModelClass& cls, double delta,
                                 const std::vector<FiniteDist>& refs,
                                 int subset_cap) {
  if (refs.empty()) throw Error(ErrorCode::kRange, "no reference candidates");
  const int n = cls.size();
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;

  std::vector<std::vector<int>> families;
  if (n <= subset_cap && n < 31) {
    for (uint32_t bits = 1; bits < (1u << n); ++bits) {
      if (std::popcount(bits) < 2) continue;
      std::vector<int> fam;
      for (int i = 0; i < n; ++i) {
        if ((bits >> i) & 1u) fam.push_back(i);
      }
      families.push_back(std::move(fam));
    }
  } else {
    families.push_back(all);
  }

  CorrelationReport best;
  std::vector<std::vector<double>> first_rho;
  for (size_t r = 0; r < refs.size(); ++r) {
    std::vector<std::vector<double>> rho(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        rho[i][j] = rho[j][i] = PairwiseCorrelation(
            cls.model(i).Dist(0), cls.model(j).Dist(0), refs[r]);
      }
    }
    if (r == 0) first_rho = rho;
    for (const std::vector<int>& fam : families) {
      if (!CoverageOk(cls, delta, fam)) continue;
      const double eps = CorrelationEps(rho, fam);
      if (eps < best.eps_correlated_at) {
        best.eps_correlated_at = eps;
        best.reference = static_cast<int>(r);
        best.family = fam;
        best.pairwise = Restrict(rho, fam);
        best.decision_coverage_ok = true;
      }
    }
  }
  if (!best.decision_coverage_ok) {
    best.reference = 0;
    best.family = all;
    best.pairwise = Restrict(first_rho, all);
  }
  return best;
}

FixedPointResult SolveFixedPointU(const std::vector<std::vector<double>>& points,
                                  const std::vector<double>& weights,
                                  double lambda0, int max_iterations) {
  if (!(lambda0 > 0.0)) throw Error(ErrorCode::kRange, "lambda0 must be > 0");
  if (points.empty() || points.size() != weights.size()) {
    throw Error(ErrorCode::kSpaceMismatch, "points and weights must align");
  }
  const int d = static_cast<int>(points.front().size());
  std::vector<Eigen::VectorXd> xs;
  for (const std::vector<double>& p : points) {
    if (static_cast<int>(p.size()) != d) {
      throw Error(ErrorCode::kSpaceMismatch, "points must share a dimension");
    }
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(p.data(), d);
    if (x.norm() == 0.0) throw Error(ErrorCode::kRange, "points must be nonzero");
    xs.push_back(std::move(x));
  }
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);

  // A(U) = E x x^T / ||U x||.
  auto weighted = [&](const Eigen::MatrixXd& u) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
    for (size_t i = 0; i < xs.size(); ++i) {
      a += weights[i] * xs[i] * xs[i].transpose() / (u * xs[i]).norm();
    }
    return a;
  };
  auto residual = [&](const Eigen::MatrixXd& u) {
    return (u * weighted(u) * u + lambda0 * u - id).cwiseAbs().maxCoeff();
  };

  Eigen::MatrixXd u = id / (1.0 + lambda0);
  Eigen::MatrixXd best_u = u;
  double best_res = residual(u);
  int it = 0;
  while (best_res > kFixedPointTolerance && it < max_iterations) {
    ++it;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(u);
    const Eigen::MatrixXd half =
        es.eigenvectors() *
        es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
        es.eigenvectors().transpose();
    Eigen::MatrixXd next = (half * weighted(u) * half + lambda0 * id).inverse();
    u = 0.5 * (u + 0.5 * (next + next.transpose()));
    const double res = residual(u);
    if (res < best_res) {
      best_res = res;
      best_u = u;
    }
  }

  FixedPointResult out;
  out.lambda0 = lambda0;
  out.residual = best_res;
  out.iterations = it;
  out.converged = best_res <= kFixedPointTolerance;
  out.u.assign(d, std::vector<double>(d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) out.u[i][j] = best_u(i, j);
  }
  for (size_t i = 0; i < xs.size(); ++i) {
    out.trace_expect += weights[i] * (best_u * xs[i]).norm();
  }
  return out;
}

LDictionary GaussianHalfspaceDictionary(
    const FiniteSpace& obs, const std::vector<std::vector<double>>& f, int n,
    uint64_t seed) {
  if (static_cast<int>(f.size()) != obs.size()) {
    throw Error(ErrorCode::kSpaceMismatch, "one feature vector per outcome");
  }
  if (n <= 0) throw Error(ErrorCode::kRange, "dictionary size must be > 0");
  const size_t dim = f.front().size();
  std::vector<double> norms;
  for (const std::vector<double>& v : f) {
    if (v.size() != dim) {
      throw Error(ErrorCode::kSpaceMismatch, "feature vectors must align");
    }
    double sq = 0.0;
    for (double x : v) sq += x * x;
    const double norm = std::sqrt(sq);
    if (norm > 1.0 + kNormTolerance) {
      throw Error(ErrorCode::kRange, "feature vectors must lie in the unit ball");
    }
    norms.push_back(std::min(norm, 1.0));
  }
  std::vector<ScalarFn> entries;
  entries.reserve(n);
  for (int k = 0; k < n; ++k) {
    CounterRng rng(StreamKey(seed, static_cast<uint64_t>(k), 0, 11));
    std::vector<double> w(dim);
    for (double& x : w) x = rng.Gaussian();
    std::vector<double> values(f.size());
    for (size_t z = 0; z < f.size(); ++z) {
      double dot = 0.0;
      for (size_t i = 0; i < dim; ++i) dot += f[z][i] * w[i];
      values[z] = dot >= 0.0 ? norms[z] : 0.0;
    }
    entries.emplace_back(obs, std::move(values));
  }
  return LDictionary(std::move(entries));
}

}  // namespace pridec
