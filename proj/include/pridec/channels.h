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

// Locally private channels Z -> Delta(O) and the strong data-processing
// decomposition of an alpha-DP channel into a mixture of binary channels.

#ifndef PRIDEC_CHANNELS_H_
#define PRIDEC_CHANNELS_H_

#include <vector>

#include "pridec/prob.h"
#include "pridec/rng.h"

namespace pridec {

class Channel {
 public:
  // kernel[z] is the output distribution for input z.
  Channel(FiniteSpace input, FiniteSpace output,
          std::vector<std::vector<double>> kernel);

  // Every row equal to the uniform distribution on `output`.
  static Channel Uniform(FiniteSpace input, FiniteSpace output);

  const FiniteSpace& input() const { return input_; }
  const FiniteSpace& output() const { return output_; }
  const std::vector<std::vector<double>>& kernel() const { return kernel_; }
  const std::vector<double>& row(int z) const { return kernel_[z]; }
  // Q(o | z).
  double operator()(int z, int o) const { return kernel_[z][o]; }

  bool operator==(const Channel& other) const;

 private:
  FiniteSpace input_;
  FiniteSpace output_;
  std::vector<std::vector<double>> kernel_;
};

// c_alpha = 1 - exp(-alpha).
double CAlpha(double alpha);

// Smallest alpha with Q(o|z) <= e^alpha Q(o|z') for all o, z, z'. Returns
// +infinity if some Q(o|z) > 0 meets Q(o|z') = 0.
double DpLevel(const Channel& channel);

// Q(+1|z) = (1 + c_alpha l(z)) / 2 over the output space Signs().
Channel BinaryChannel(const ScalarFn& l, double alpha);

// (Q o P)(o) = sum_z P(z) Q(o|z).
FiniteDist Apply(const Channel& channel, const FiniteDist& p);

struct SdpiDecomposition {
  // Output indices that survive (all-zero columns are dropped).
  std::vector<int> outcomes;
  // floor[i] = min_z Q(outcomes[i] | z).
  std::vector<double> floor;
  // Normalized floor, as a distribution over the surviving outcomes.
  std::vector<double> base;
  std::vector<ScalarFn> fns;
  double alpha = 0.0;

  // floor(o) (1 + (e^alpha - 1) l_o(z)).
  double Reconstruct(int i, int z) const;
};

// Throws NotDP when some surviving column has a zero floor.
SdpiDecomposition SdpiDecompose(const Channel& channel, double alpha);

struct SdpiReport {
  double expected_l_sq = 0.0;  // E_{l ~ base} D_l(P1, P2)^2
  double hellinger_sq = 0.0;
  double kl = 0.0;
  double chi_sq = 0.0;
  double scale = 0.0;  // (e^alpha - 1)^2
  // Denominators of the Hellinger lower bound: the one asserted and the
  // sharper one available from the decomposition argument.
  double statement_denominator = 0.0;  // 8 e^{2 alpha}
  double proof_denominator = 0.0;      // 8 e^{alpha}

  // Smallest slack over the four inequalities; >= -tol means they all hold.
  double MinSlack() const;
};

SdpiReport SdpiCheck(const Channel& channel, const FiniteDist& p1,
                     const FiniteDist& p2, double alpha);

// An alpha-DP channel built as a random mixture of a uniform channel and
// binary channels embedded on random outcome pairs.
Channel RandomDpChannel(int input_size, int output_size, double alpha,
                        CounterRng& rng);

}  // namespace pridec

#endif  // PRIDEC_CHANNELS_H_
