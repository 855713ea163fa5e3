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

// Counter-based random streams. A stream is identified by a key derived from
// (master seed, run id, round, purpose); draws never depend on how many other
// streams were consumed, so parallel runs cannot reorder randomness.

#ifndef PRIDEC_RNG_H_
#define PRIDEC_RNG_H_

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>

namespace pridec {

// SplitMix64 finalizer.
constexpr uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr uint64_t HashCombine(uint64_t a, uint64_t b) {
  return Mix64(a ^ Mix64(b + 0x632be59bd9b4e019ULL));
}

constexpr uint64_t StreamKey(uint64_t master, uint64_t run_id, uint64_t round,
                             uint64_t purpose = 0) {
  return HashCombine(HashCombine(HashCombine(master, run_id), round), purpose);
}

// Per-run seed from a master seed; documented derivation used by sweeps.
constexpr uint64_t DeriveRunSeed(uint64_t master, uint64_t run_index) {
  return Mix64(master ^ Mix64(run_index * 0xd1b54a32d192ed03ULL + 1));
}

// Satisfies UniformRandomBitGenerator so <random> distributions can be used
// on top of it. Output i of a stream is Mix64(key + i * golden).
class CounterRng {
 public:
  using result_type = uint64_t;

  explicit CounterRng(uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<uint64_t>::max();
  }

  result_type operator()() {
    return Mix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL);
  }

  // Uniform in [0, 1) with 53 bits.
  double Uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double Gaussian() {
    // Box-Muller on two uniforms; keeps the stream layout independent of the
    // standard library's distribution implementation.
    double u1 = Uniform();
    double u2 = Uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  // Samples an index from a probability vector. Mass below zero is treated as
  // zero; the last positive index absorbs rounding slack.
  int Categorical(std::span<const double> probs) {
    double u = Uniform();
    double acc = 0.0;
    int last_positive = 0;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
      if (probs[i] <= 0.0) continue;
      last_positive = i;
      acc += probs[i];
      if (u < acc) return i;
    }
    return last_positive;
  }

  int UniformInt(int n) {
    return static_cast<int>(Uniform() * static_cast<double>(n)) % n;
  }

  uint64_t key() const { return key_; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace pridec

#endif  // PRIDEC_RNG_H_
