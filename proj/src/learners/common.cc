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
#include <numeric>

#include "pridec/error.h"
#include "pridec/learners.h"

namespace pridec {

namespace {

constexpr double kPriorTolerance = 1e-9;

std::vector<double> UniformPrior(size_t n) {
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

std::vector<std::vector<double>> ValueTable(const ModelClass& cls) {
  std::vector<std::vector<double>> f(cls.size(),
                                     std::vector<double>(cls.num_decisions()));
  for (int m = 0; m < cls.size(); ++m) {
    for (int pi = 0; pi < cls.num_decisions(); ++pi) f[m][pi] = cls.ValueOf(m, pi);
  }
  return f;
}

double SupDistance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

int ArgMax(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

InfoSetStructure FromCenters(const std::vector<std::vector<double>>& f,
                             const std::vector<int>& centers, double delta,
                             std::string kind) {
  InfoSetStructure info;
  info.kind = std::move(kind);
  for (int c : centers) {
    std::vector<int> members;
    for (int m = 0; m < static_cast<int>(f.size()); ++m) {
      if (SupDistance(f[m], f[c]) <= delta + 1e-12) members.push_back(m);
    }
    info.sets.push_back(std::move(members));
    info.anchors.push_back(ArgMax(f[c]));
  }
  info.prior = UniformPrior(info.sets.size());
  return info;
}

}  // namespace

bool Action::operator==(const Action& other) const {
  return decision == other.decision && column == other.column &&
         query == other.query && channel == other.channel;
}

void InfoSetStructure::Validate(int num_models, int num_decisions) const {
  const size_t n = sets.size();
  if (n == 0 || anchors.size() != n || prior.size() != n) {
    throw Error(ErrorCode::kStructure,
                "information sets, anchors and prior must align and be non-empty");
  }
  std::vector<bool> covered(num_models, false);
  for (size_t psi = 0; psi < n; ++psi) {
    if (sets[psi].empty()) {
      throw Error(ErrorCode::kStructure, "empty information set");
    }
    for (int m : sets[psi]) {
      if (m < 0 || m >= num_models) {
        throw Error(ErrorCode::kStructure, "information set names unknown model");
      }
      covered[m] = true;
    }
    if (anchors[psi] < 0 || anchors[psi] >= num_decisions) {
      throw Error(ErrorCode::kStructure, "anchor is not a decision");
    }
    if (!(prior[psi] > 0.0)) {
      throw Error(ErrorCode::kStructure, "prior must be positive");
    }
  }
  if (std::abs(std::accumulate(prior.begin(), prior.end(), 0.0) - 1.0) >
      kPriorTolerance) {
    throw Error(ErrorCode::kStructure, "prior must sum to one");
  }
  if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
    throw Error(ErrorCode::kStructure, "some model lies in no information set");
  }
}

InfoSetStructure ModelBasedInfoSets(const ModelClass& cls) {
  InfoSetStructure info;
  info.kind = "model_based";
  for (int m = 0; m < cls.size(); ++m) {
    info.sets.push_back({m});
    info.anchors.push_back(cls.OptimalDecision(m));
  }
  info.prior = UniformPrior(info.sets.size());
  return info;
}

InfoSetStructure PolicyBasedInfoSets(const ModelClass& cls, double delta) {
  InfoSetStructure info;
  info.kind = "policy_based";
  for (int pi = 0; pi < cls.num_decisions(); ++pi) {
    std::vector<int> members;
    for (int m = 0; m < cls.size(); ++m) {
      if (cls.Loss(m, pi) <= delta + 1e-12) members.push_back(m);
    }
    if (members.empty()) continue;
    info.sets.push_back(std::move(members));
    info.anchors.push_back(pi);
  }
  info.prior = UniformPrior(info.sets.size());
  return info;
}

InfoSetStructure ValueBasedInfoSets(const ModelClass& cls, double delta) {
  const auto f = ValueTable(cls);
  std::vector<int> centers;
  for (int m = 0; m < cls.size(); ++m) {
    bool fresh = true;
    for (int c : centers) fresh = fresh && f[c] != f[m];
    if (fresh) centers.push_back(m);
  }
  return FromCenters(f, centers, delta, "value_based");
}

InfoSetStructure ContextualInfoSets(const ModelClass& cls, double delta) {
  const auto f = ValueTable(cls);
  std::vector<bool> covered(cls.size(), false);
  std::vector<int> centers;
  while (std::find(covered.begin(), covered.end(), false) != covered.end()) {
    int best = -1;
    int best_gain = -1;
    for (int c = 0; c < cls.size(); ++c) {
      int gain = 0;
      for (int m = 0; m < cls.size(); ++m) {
        if (!covered[m] && SupDistance(f[m], f[c]) <= delta + 1e-12) ++gain;
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    centers.push_back(best);
    for (int m = 0; m < cls.size(); ++m) {
      if (SupDistance(f[m], f[best]) <= delta + 1e-12) covered[m] = true;
    }
  }
  return FromCenters(f, centers, delta, "contextual");
}

}  // namespace pridec
