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

// Online estimation oracles fed with privatized observations o in {-1, +1}
// whose mean is c_alpha times the queried l-expectation.

#ifndef PRIDEC_ESTIMATORS_H_
#define PRIDEC_ESTIMATORS_H_

#include <memory>
#include <string>
#include <vector>

#include "pridec/models.h"
#include "pridec/prob.h"

namespace pridec {

class EstimationOracle {
 public:
  virtual ~EstimationOracle() = default;

  // A fresh oracle with the same configuration and no history.
  virtual std::unique_ptr<EstimationOracle> Fresh() const = 0;
  virtual Model Predict() const = 0;
  // o is +1 or -1.
  virtual void Update(int pi, const ScalarFn& l, int o) = 0;
  virtual int steps() const = 0;
  virtual std::string name() const = 0;
  // Est(N, delta) without any leading constant.
  virtual double BoundShape(int n, double delta) const = 0;
};

class VovkOracle : public EstimationOracle {
 public:
  static constexpr double kEta = 0.125;

  VovkOracle(std::vector<Model> models, double alpha);

  std::unique_ptr<EstimationOracle> Fresh() const override;
  Model Predict() const override;
  void Update(int pi, const ScalarFn& l, int o) override;
  int steps() const override { return steps_; }
  std::string name() const override { return "vovk"; }
  // log(|M| / delta) / alpha^2.
  double BoundShape(int n, double delta) const override;

  // Normalized weights.
  std::vector<double> Weights() const;

 private:
  std::vector<Model> models_;
  double alpha_;
  std::vector<double> log_w_;
  int steps_ = 0;
};

class OmdOracle : public EstimationOracle {
 public:
  // Statistical task: every model ignores the decision. horizon is the N in
  // the step size sqrt(C_KL / (16 N)).
  OmdOracle(FiniteSpace decisions, FiniteDist reference, double c_kl,
            int horizon, double alpha);
  // Checks every class member against the reference support.
  static OmdOracle ForClass(const ModelClass& cls, const FiniteDist& reference,
                            int horizon, double alpha);

  std::unique_ptr<EstimationOracle> Fresh() const override;
  Model Predict() const override;
  void Update(int pi, const ScalarFn& l, int o) override;
  int steps() const override { return steps_; }
  std::string name() const override { return "omd"; }
  // sqrt(C_KL N) / alpha + log(1 / delta) / alpha^2.
  double BoundShape(int n, double delta) const override;

  double eta() const { return eta_; }
  double c_kl() const { return c_kl_; }

 private:
  std::vector<double> Current() const;

  FiniteSpace decisions_;
  FiniteDist reference_;
  double c_kl_;
  int horizon_;
  double alpha_;
  double eta_;
  std::vector<double> gradient_sum_;
  int steps_ = 0;
};

// Sup over class members of KL(M | reference), taken at decision 0.
double KlRadius(const ModelClass& cls, const FiniteDist& reference);

struct EstRecord {
  double cumulative = 0.0;
  std::vector<double> per_step;
  double bound = 0.0;

  void Append(double value);
};

// E_{(pi, l) ~ q} (E_{truth(pi)} l - E_{pred(pi)} l)^2 with q over the
// decision-major (pi, l) columns of the dictionary.
double EstIncrement(const Model& truth, const Model& pred,
                    const LDictionary& dict, const std::vector<double>& q);

}  // namespace pridec

#endif  // PRIDEC_ESTIMATORS_H_
