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

#include "privrl/rng.h"

#include <cmath>

namespace privrl {

uint64_t Mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t DeriveSeed(uint64_t base_seed, uint64_t replica,
                    StreamPurpose purpose) {
  uint64_t h = Mix64(base_seed);
  h = Mix64(h ^ replica);
  h = Mix64(h ^ static_cast<uint64_t>(purpose));
  return h;
}

double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

uint64_t UniformIndex(Rng& rng, uint64_t n) {
  if (n <= 1) return 0;
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

double SampleLaplace(Rng& rng, double scale) {
  // 1 - UniformUnit lies in (0, 1]; shifting gives u in (-1/2, 1/2]. The
  // endpoint u = 1/2 maps to an infinite draw and is resampled.
  double u;
  do {
    u = (1.0 - UniformUnit(rng)) - 0.5;
  } while (u >= 0.5);
  const double mag = -scale * std::log(1.0 - 2.0 * std::fabs(u));
  return u < 0.0 ? -mag : mag;
}

}  // namespace privrl
