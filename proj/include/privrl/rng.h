// Copyright 2026 The privrl Authors
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

#ifndef PRIVRL_RNG_H_
#define PRIVRL_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace privrl {

// All randomness flows through explicitly passed engines of this type. The
// engine's output sequence is fixed by the C++ standard, so results are
// reproducible across standard libraries as long as only the helpers below
// are used to turn raw words into variates.
using Rng = std::mt19937_64;

// Independent stream purposes for seed derivation.
enum class StreamPurpose : uint64_t {
  kEnvironment = 1,
  kAgent = 2,
  kCounterNoise = 3,
  kGenerator = 4,
};

// SplitMix64 finalizer.
uint64_t Mix64(uint64_t x);

// Derives the seed for (base, replica, purpose) by chained SplitMix64 mixing.
uint64_t DeriveSeed(uint64_t base_seed, uint64_t replica,
                    StreamPurpose purpose);

// Uniform double in [0, 1) built from the top 53 bits of one engine word.
double UniformUnit(Rng& rng);

// Uniform integer in [0, n). Uses rejection to avoid modulo bias.
uint64_t UniformIndex(Rng& rng, uint64_t n);

// Draws an index from a discrete distribution given by `probs` (assumed to
// sum to one). Falls back to the last positive entry on rounding overshoot.
template <typename Range>
int SampleDiscrete(Rng& rng, const Range& probs) {
  const double u = UniformUnit(rng);
  double acc = 0.0;
  int last_positive = 0;
  int i = 0;
  for (double p : probs) {
    if (p > 0.0) last_positive = i;
    acc += p;
    if (u < acc) return i;
    ++i;
  }
  return last_positive;
}

// Laplace(0, scale) by inverse CDF: u uniform in (-1/2, 1/2],
// x = -scale * sign(u) * ln(1 - 2|u|).
double SampleLaplace(Rng& rng, double scale);

}  // namespace privrl

#endif  // PRIVRL_RNG_H_
