// Copyright 2026 The psro Authors
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

#ifndef PSRO_RNG_H_
#define PSRO_RNG_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace psro {

inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// mt19937_64 has a standardized output sequence; the distributions below are
// written out so draws are identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(SplitMix64(seed)) {}

  // Independent child stream, a pure function of (seed, stream).
  Rng Split(uint64_t stream) const {
    return Rng(SplitMix64(seed_ ^ SplitMix64(stream + 0x51afd7ed558ccd1dULL)));
  }

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() { return (engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), rejection sampled.
  int UniformInt(int n) {
    const uint64_t range = static_cast<uint64_t>(n);
    const uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<int>(x % range);
  }

  // Box-Muller; consumes exactly two uniforms per call.
  double Normal(double mean, double variance) {
    const double u1 = 1.0 - Uniform();
    const double u2 = Uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) *
                     std::cos(2.0 * std::numbers::pi * u2);
    return mean + std::sqrt(variance) * z;
  }

  // Index drawn from a discrete distribution.
  template <class Vec>
  int Categorical(const Vec& probs) {
    const double u = Uniform();
    double acc = 0.0;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
      acc += probs[i];
      if (u < acc) return i;
    }
    for (int i = static_cast<int>(probs.size()) - 1; i >= 0; --i) {
      if (probs[i] > 0) return i;
    }
    return 0;
  }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace psro

#endif  // PSRO_RNG_H_
