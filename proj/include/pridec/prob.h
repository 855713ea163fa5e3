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

// Finite probability spaces, distributions over them, and the divergences
// used by every decision-estimation quantity in the library.

#ifndef PRIDEC_PROB_H_
#define PRIDEC_PROB_H_

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace pridec {

// An ordered set of distinct labels. Copies share the label storage, so
// passing spaces around is cheap and equality is usually a pointer compare.
class FiniteSpace {
 public:
  explicit FiniteSpace(std::vector<std::string> labels);

  // Labels "0", "1", ..., "n-1".
  static FiniteSpace Indexed(int n, const std::string& prefix = "");
  // The two-point space {-1, +1} used by binary channels and Rademacher
  // rewards. Index 0 is "-1", index 1 is "+1".
  static FiniteSpace Signs();

  int size() const { return static_cast<int>(labels_->size()); }
  const std::string& label(int i) const { return (*labels_)[i]; }
  const std::vector<std::string>& labels() const { return *labels_; }
  // Position of a label, or -1.
  int IndexOf(const std::string& label) const;

  bool operator==(const FiniteSpace& other) const;
  bool operator!=(const FiniteSpace& other) const { return !(*this == other); }

 private:
  std::shared_ptr<const std::vector<std::string>> labels_;
};

// Throws SpaceMismatch unless the spaces agree.
void CheckSameSpace(const FiniteSpace& a, const FiniteSpace& b,
                    const char* what);

class FiniteDist {
 public:
  // Rejects negative entries (beyond -1e-12) and sums off by more than 1e-9;
  // smaller deviations are renormalized away.
  FiniteDist(FiniteSpace space, std::vector<double> mass);

  static FiniteDist PointMass(FiniteSpace space, int index);
  static FiniteDist Uniform(FiniteSpace space);

  const FiniteSpace& space() const { return space_; }
  const std::vector<double>& mass() const { return mass_; }
  double operator[](int i) const { return mass_[i]; }
  int size() const { return static_cast<int>(mass_.size()); }

  // Expectation of a function given as one value per label.
  double Expect(std::span<const double> values) const;

 private:
  FiniteSpace space_;
  std::vector<double> mass_;
};

// A function from a finite space into [0, 1].
class ScalarFn {
 public:
  ScalarFn(FiniteSpace space, std::vector<double> values);

  const FiniteSpace& space() const { return space_; }
  const std::vector<double>& values() const { return values_; }
  double operator()(int i) const { return values_[i]; }
  double Min() const;
  double Max() const;

 private:
  FiniteSpace space_;
  std::vector<double> values_;
};

// A finite, non-empty family of [0,1]-valued functions over one space.
class LDictionary {
 public:
  explicit LDictionary(std::vector<ScalarFn> entries);

  const FiniteSpace& space() const { return entries_.front().space(); }
  const std::vector<ScalarFn>& entries() const { return entries_; }
  const ScalarFn& operator[](int i) const { return entries_[i]; }
  int size() const { return static_cast<int>(entries_.size()); }

 private:
  std::vector<ScalarFn> entries_;
};

// Squared Hellinger distance with the 1/2 normalization, in [0, 1].
double HellingerSq(const FiniteDist& p, const FiniteDist& q);
double TotalVariation(const FiniteDist& p, const FiniteDist& q);
// Natural-log KL. Throws AbsoluteContinuityError if supp(p) is not in supp(q).
double KlDivergence(const FiniteDist& p, const FiniteDist& q);
double ChiSquare(const FiniteDist& p, const FiniteDist& q);
// |E_p l - E_q l|.
double LDivergence(const FiniteDist& p, const FiniteDist& q, const ScalarFn& l);
// inf over P' of HellingerSq((1-beta) p + beta P', q), solved exactly.
double HuberHellinger(const FiniteDist& p, const FiniteDist& q, double beta);
// The minimizing mixture (1-beta) p + beta P' for HuberHellinger.
std::vector<double> HuberHellingerMixture(std::span<const double> p,
                                          std::span<const double> q,
                                          double beta);

// Distribution on {-1, +1} with the given mean.
FiniteDist Rad(double mean);

// Span-level kernels used in inner loops where the spaces are known to agree.
namespace raw {
double HellingerSq(std::span<const double> p, std::span<const double> q);
double HuberHellinger(std::span<const double> p, std::span<const double> q,
                      double beta);
double Expect(std::span<const double> p, std::span<const double> values);
}  // namespace raw

}  // namespace pridec

#endif  // PRIDEC_PROB_H_
