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

#include "pridec/prob.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "pridec/error.h"

namespace pridec {

namespace {

constexpr double kSumTolerance = 1e-9;
constexpr double kNegativeTolerance = 1e-12;
constexpr double kBisectionTolerance = 1e-12;

}  // namespace

FiniteSpace::FiniteSpace(std::vector<std::string> labels) {
  if (labels.empty()) {
    throw Error(ErrorCode::kRange, "finite space must be non-empty");
  }
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) {
    throw Error(ErrorCode::kRange, "finite space labels must be unique");
  }
  labels_ = std::make_shared<const std::vector<std::string>>(std::move(labels));
}

FiniteSpace FiniteSpace::Indexed(int n, const std::string& prefix) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (int i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
  return FiniteSpace(std::move(labels));
}

FiniteSpace FiniteSpace::Signs() {
  static const FiniteSpace* signs = new FiniteSpace({"-1", "+1"});
  return *signs;
}

int FiniteSpace::IndexOf(const std::string& label) const {
  auto it = std::find(labels_->begin(), labels_->end(), label);
  return it == labels_->end() ? -1
                              : static_cast<int>(it - labels_->begin());
}

bool FiniteSpace::operator==(const FiniteSpace& other) const {
  return labels_ == other.labels_ || *labels_ == *other.labels_;
}

void CheckSameSpace(const FiniteSpace& a, const FiniteSpace& b,
                    const char* what) {
  if (a != b) {
    throw Error(ErrorCode::kSpaceMismatch,
                std::string(what) + ": operands live on different spaces");
  }
}

FiniteDist::FiniteDist(FiniteSpace space, std::vector<double> mass)
    : space_(std::move(space)), mass_(std::move(mass)) {
  if (static_cast<int>(mass_.size()) != space_.size()) {
    throw Error(ErrorCode::kSpaceMismatch,
                "mass vector length does not match space size");
  }
  double total = 0.0;
  for (double& m : mass_) {
    if (!std::isfinite(m) || m < -kNegativeTolerance) {
      throw Error(ErrorCode::kRange, "probability mass must be non-negative");
    }
    if (m < 0.0) m = 0.0;
    total += m;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw Error(ErrorCode::kRange,
                "probability mass sums to " + std::to_string(total));
  }
  for (double& m : mass_) m /= total;
}

FiniteDist FiniteDist::PointMass(FiniteSpace space, int index) {
  std::vector<double> mass(space.size(), 0.0);
  mass.at(index) = 1.0;
  return FiniteDist(std::move(space), std::move(mass));
}

FiniteDist FiniteDist::Uniform(FiniteSpace space) {
  const int n = space.size();
  return FiniteDist(std::move(space), std::vector<double>(n, 1.0 / n));
}

double FiniteDist::Expect(std::span<const double> values) const {
  return raw::Expect(mass_, values);
}

ScalarFn::ScalarFn(FiniteSpace space, std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != space_.size()) {
    throw Error(ErrorCode::kSpaceMismatch,
                "function length does not match space size");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::kRange, "function values must lie in [0,1]");
    }
  }
}

double ScalarFn::Min() const {
  return *std::min_element(values_.begin(), values_.end());
}

double ScalarFn::Max() const {
  return *std::max_element(values_.begin(), values_.end());
}

LDictionary::LDictionary(std::vector<ScalarFn> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw Error(ErrorCode::kRange, "dictionary must be non-empty");
  }
  for (const ScalarFn& f : entries_) {
    CheckSameSpace(f.space(), entries_.front().space(), "LDictionary");
  }
}

namespace raw {

double Expect(std::span<const double> p, std::span<const double> values) {
  double acc = 0.0;
  for (size_t i = 0; i < p.size(); ++i) acc += p[i] * values[i];
  return acc;
}

double HellingerSq(std::span<const double> p, std::span<const double> q) {
  double acc = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
    acc += d * d;
  }
  return std::clamp(0.5 * acc, 0.0, 1.0);
}

double HuberHellinger(std::span<const double> p, std::span<const double> q,
                      double beta) {
  if (beta == 0.0) return HellingerSq(p, q);
  if (std::equal(p.begin(), p.end(), q.begin(), q.end())) return 0.0;
  std::vector<double> m = HuberHellingerMixture(p, q, beta);
  return HellingerSq(m, q);
}

}  // namespace raw

std::vector<double> HuberHellingerMixture(std::span<const double> p,
                                          std::span<const double> q,
                                          double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::kRange, "beta must lie in [0,1]");
  }
  const size_t n = p.size();
  std::vector<double> floor(n);
  for (size_t i = 0; i < n; ++i) floor[i] = (1.0 - beta) * p[i];

  // Maximizing the affinity sum_o sqrt(m_o q_o) over m >= floor, sum m = 1
  // gives m_o = max(floor_o, s q_o) with s chosen to exhaust the budget.
  auto budget = [&](double s) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += std::max(floor[i], s * q[i]);
    return acc;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > kBisectionTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (budget(mid) < 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double s = hi;

  // Recompute the free coordinates exactly from the active set.
  std::vector<bool> free(n, false);
  double fixed_mass = 0.0;
  double free_q = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (q[i] > 0.0 && s * q[i] > floor[i]) {
      free[i] = true;
      free_q += q[i];
    } else {
      fixed_mass += floor[i];
    }
  }
  std::vector<double> m(n);
  if (free_q <= 0.0) {
    const double total = std::accumulate(floor.begin(), floor.end(), 0.0);
    for (size_t i = 0; i < n; ++i) m[i] = floor[i] / total;
    return m;
  }
  const double scale = std::max(0.0, 1.0 - fixed_mass) / free_q;
  for (size_t i = 0; i < n; ++i) {
    m[i] = free[i] ? std::max(floor[i], scale * q[i]) : floor[i];
  }
  return m;
}

double HellingerSq(const FiniteDist& p, const FiniteDist& q) {
  CheckSameSpace(p.space(), q.space(), "hellinger_sq");
  return raw::HellingerSq(p.mass(), q.mass());
}

double TotalVariation(const FiniteDist& p, const FiniteDist& q) {
  CheckSameSpace(p.space(), q.space(), "tv");
  double acc = 0.0;
  for (int i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

double KlDivergence(const FiniteDist& p, const FiniteDist& q) {
  CheckSameSpace(p.space(), q.space(), "kl");
  double acc = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) {
      throw Error(ErrorCode::kAbsoluteContinuity,
                  "kl: support of P is not contained in support of Q");
    }
    acc += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(acc, 0.0);
}

double ChiSquare(const FiniteDist& p, const FiniteDist& q) {
  CheckSameSpace(p.space(), q.space(), "chi_sq");
  double acc = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    if (q[i] == 0.0) {
      if (p[i] == 0.0) continue;
      throw Error(ErrorCode::kAbsoluteContinuity,
                  "chi_sq: support of P is not contained in support of Q");
    }
    const double d = p[i] - q[i];
    acc += d * d / q[i];
  }
  return acc;
}

double LDivergence(const FiniteDist& p, const FiniteDist& q,
                   const ScalarFn& l) {
  CheckSameSpace(p.space(), q.space(), "l_divergence");
  CheckSameSpace(p.space(), l.space(), "l_divergence");
  return std::abs(p.Expect(l.values()) - q.Expect(l.values()));
}

double HuberHellinger(const FiniteDist& p, const FiniteDist& q, double beta) {
  CheckSameSpace(p.space(), q.space(), "huber_hellinger");
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw Error(ErrorCode::kRange, "beta must lie in [0,1]");
  }
  return raw::HuberHellinger(p.mass(), q.mass(), beta);
}

FiniteDist Rad(double mean) {
  if (!(mean >= -1.0 && mean <= 1.0)) {
    throw Error(ErrorCode::kRange, "Rademacher mean must lie in [-1,1]");
  }
  const double plus = 0.5 * (1.0 + mean);
  return FiniteDist(FiniteSpace::Signs(), {1.0 - plus, plus});
}

}  // namespace pridec
