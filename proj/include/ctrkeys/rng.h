/*
 * Copyright 2026 The ctrkeys Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef CTRKEYS_RNG_H_
#define CTRKEYS_RNG_H_

#include <cstdint>
#include <initializer_list>

namespace ctrkeys {

inline constexpr uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 output function.
constexpr uint64_t Mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Order-sensitive hash of a short sequence of words.
uint64_t HashWords(std::initializer_list<uint64_t> words);

// Maps 64 random bits to a double in [0, 1) using the top 53 bits.
constexpr double ToUnitInterval(uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// SplitMix64 as a counter-based generator: the i-th draw (i = 1, 2, ...) is
// Mix64(seed + i * kGoldenGamma). Everything is defined on 64-bit unsigned
// arithmetic, so the stream is identical on every platform and easy to
// reproduce in other languages.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed) : seed_(seed) {}

  uint64_t Next() { return Mix64(seed_ + (++counter_) * kGoldenGamma); }

  double Uniform() { return ToUnitInterval(Next()); }

  // Uniform integer in [0, n), n > 0 (multiply-shift reduction).
  uint64_t Below(uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(Next()) * n) >> 64);
  }

  // Standard normal by Box-Muller. Uses libm, so only the integer draws are
  // guaranteed bit-portable.
  double Normal();

  bool Bernoulli(double p) { return Uniform() < p; }

  uint64_t counter() const { return counter_; }

 private:
  uint64_t seed_;
  uint64_t counter_ = 0;
};

}  // namespace ctrkeys

#endif  // CTRKEYS_RNG_H_
