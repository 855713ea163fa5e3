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

#include "pridec/channels.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pridec/error.h"

namespace pridec {

namespace {

// Values of l_o that overshoot [0,1] by less than this are rounding noise.
constexpr double kUnitSlack = 1e-9;

}  // namespace

Channel::Channel(FiniteSpace input, FiniteSpace output,
                 std::vector<std::vector<double>> kernel)
    : input_(std::move(input)), output_(std::move(output)) {
  if (static_cast<int>(kernel.size()) != input_.size()) {
    throw Error(ErrorCode::kSpaceMismatch,
                "channel kernel needs one row per input");
  }
  kernel_.reserve(kernel.size());
  for (auto& row : kernel) {
    kernel_.push_back(FiniteDist(output_, std::move(row)).mass());
  }
}

Channel Channel::Uniform(FiniteSpace input, FiniteSpace output) {
  const int n = input.size();
  const int m = output.size();
  return Channel(std::move(input), std::move(output),
                 std::vector<std::vector<double>>(
                     n, std::vector<double>(m, 1.0 / m)));
}

bool Channel::operator==(const Channel& other) const {
  return input_ == other.input_ && output_ == other.output_ &&
         kernel_ == other.kernel_;
}

double CAlpha(double alpha) { return -std::expm1(-alpha); }

double DpLevel(const Channel& channel) {
  const int n = channel.input().size();
  const int m = channel.output().size();
  double level = 0.0;
  for (int o = 0; o < m; ++o) {
    double hi = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    for (int z = 0; z < n; ++z) {
      hi = std::max(hi, channel(z, o));
      lo = std::min(lo, channel(z, o));
    }
    if (hi == 0.0) continue;
    if (lo == 0.0) return std::numeric_limits<double>::infinity();
    level = std::max(level, std::log(hi / lo));
  }
  return level;
}

Channel BinaryChannel(const ScalarFn& l, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::kRange, "binary channel needs finite alpha > 0");
  }
  const double c = CAlpha(alpha);
  std::vector<std::vector<double>> kernel;
  kernel.reserve(l.values().size());
  for (double v : l.values()) {
    const double plus = 0.5 * (1.0 + c * v);
    kernel.push_back({1.0 - plus, plus});
  }
  return Channel(l.space(), FiniteSpace::Signs(), std::move(kernel));
}

FiniteDist Apply(const Channel& channel, const FiniteDist& p) {
  CheckSameSpace(channel.input(), p.space(), "apply");
  std::vector<double> out(channel.output().size(), 0.0);
  for (int z = 0; z < p.size(); ++z) {
    if (p[z] == 0.0) continue;
    const auto& row = channel.row(z);
    for (size_t o = 0; o < out.size(); ++o) out[o] += p[z] * row[o];
  }
  return FiniteDist(channel.output(), std::move(out));
}

double SdpiDecomposition::Reconstruct(int i, int z) const {
  return floor[i] * (1.0 + std::expm1(alpha) * fns[i](z));
}

SdpiDecomposition SdpiDecompose(const Channel& channel, double alpha) {
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::kRange, "sdpi decomposition needs alpha > 0");
  }
  const int n = channel.input().size();
  const int m = channel.output().size();
  const double scale = std::expm1(alpha);
  SdpiDecomposition out;
  out.alpha = alpha;
  double total = 0.0;
  for (int o = 0; o < m; ++o) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int z = 0; z < n; ++z) {
      lo = std::min(lo, channel(z, o));
      hi = std::max(hi, channel(z, o));
    }
    if (hi == 0.0) continue;
    if (lo == 0.0) {
      throw Error(ErrorCode::kNotDp,
                  "outcome " + channel.output().label(o) +
                      " has zero floor but positive mass");
    }
    std::vector<double> values(n);
    for (int z = 0; z < n; ++z) {
      double v = (channel(z, o) / lo - 1.0) / scale;
      if (v > 1.0 + kUnitSlack) {
        throw Error(ErrorCode::kNotDp,
                    "likelihood ratio exceeds e^alpha at outcome " +
                        channel.output().label(o));
      }
      values[z] = std::clamp(v, 0.0, 1.0);
    }
    out.outcomes.push_back(o);
    out.floor.push_back(lo);
    out.fns.emplace_back(channel.input(), std::move(values));
    total += lo;
  }
  out.base.reserve(out.floor.size());
  for (double f : out.floor) out.base.push_back(f / total);
  return out;
}

double SdpiReport::MinSlack() const {
  const double lower = scale / statement_denominator * expected_l_sq;
  const double upper = scale / 8.0 * expected_l_sq;
  return std::min({hellinger_sq - lower, upper - hellinger_sq, chi_sq - kl,
                   scale * expected_l_sq - chi_sq});
}

SdpiReport SdpiCheck(const Channel& channel, const FiniteDist& p1,
                     const FiniteDist& p2, double alpha) {
  CheckSameSpace(p1.space(), p2.space(), "sdpi_check");
  CheckSameSpace(channel.input(), p1.space(), "sdpi_check");
  const SdpiDecomposition dec = SdpiDecompose(channel, alpha);
  SdpiReport report;
  for (size_t i = 0; i < dec.fns.size(); ++i) {
    const double d = LDivergence(p1, p2, dec.fns[i]);
    report.expected_l_sq += dec.base[i] * d * d;
  }
  const FiniteDist o1 = Apply(channel, p1);
  const FiniteDist o2 = Apply(channel, p2);
  report.hellinger_sq = HellingerSq(o1, o2);
  report.kl = KlDivergence(o1, o2);
  report.chi_sq = ChiSquare(o1, o2);
  const double s = std::expm1(alpha);
  report.scale = s * s;
  report.statement_denominator = 8.0 * std::exp(2.0 * alpha);
  report.proof_denominator = 8.0 * std::exp(alpha);
  return report;
}

Channel RandomDpChannel(int input_size, int output_size, double alpha,
                        CounterRng& rng) {
  if (input_size < 1 || output_size < 2) {
    throw Error(ErrorCode::kRange, "random channel needs |Z|>=1, |O|>=2");
  }
  const double c = CAlpha(alpha);
  const int parts = 1 + rng.UniformInt(4);
  std::vector<double> weights(parts + 1);
  double total = 0.0;
  for (double& w : weights) {
    w = 0.05 + rng.Uniform();
    total += w;
  }
  std::vector<std::vector<double>> kernel(
      input_size,
      std::vector<double>(output_size, weights[0] / total / output_size));
  for (int k = 1; k <= parts; ++k) {
    const int a = rng.UniformInt(output_size);
    const int b = (a + 1 + rng.UniformInt(output_size - 1)) % output_size;
    std::vector<double> l(input_size);
    for (double& v : l) v = rng.Uniform();
    // Hit both endpoints so the component is tight at level alpha.
    if (input_size >= 2) {
      l[rng.UniformInt(input_size)] = 0.0;
      l[rng.UniformInt(input_size)] = 1.0;
    }
    const double w = weights[k] / total;
    for (int z = 0; z < input_size; ++z) {
      kernel[z][a] += w * 0.5 * (1.0 - c * l[z]);
      kernel[z][b] += w * 0.5 * (1.0 + c * l[z]);
    }
  }
  return Channel(FiniteSpace::Indexed(input_size, "z"),
                 FiniteSpace::Indexed(output_size, "o"), std::move(kernel));
}

}  // namespace pridec
