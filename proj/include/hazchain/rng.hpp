// Copyright 2026 The hazchain authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HAZCHAIN_RNG_HPP_
#define HAZCHAIN_RNG_HPP_

#include <cmath>
#include <cstdint>

namespace hazchain {

// SplitMix64 step (public-domain algorithm by Sebastiano Vigna). Used for
// seeding and for stream derivation.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256++ (public domain, Blackman & Vigna). Each (seed, stream) pair
// yields an independent generator: stream i's output does not depend on how
// many streams exist or in which order they run, which keeps replicated
// experiments reproducible under any parallel schedule.
class Rng {
 public:
  Rng(uint64_t seed, uint64_t stream) {
    uint64_t sm = seed;
    (void)splitmix64(sm);
    sm ^= 0x9E3779B97F4A7C15ULL * (stream + 1);
    s_[0] = splitmix64(sm);
    s_[1] = splitmix64(sm);
    s_[2] = splitmix64(sm);
    s_[3] = splitmix64(sm);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero is invalid
  }

  uint64_t next() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Exponential with the given rate; strictly positive.
  double exponential(double rate) {
    return -std::log1p(-uniform01()) / rate;
  }

  // Index into a cumulative-weight row: smallest i with u*total < cum[i].
  int categorical(const double* cum, int n) {
    const double u = uniform01() * cum[n - 1];
    int i = 0;
    while (i < n - 1 && cum[i] <= u) ++i;
    return i;
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

}  // namespace hazchain

#endif  // HAZCHAIN_RNG_HPP_
