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

// Environment generators.

#ifndef PRIVRL_ENVS_H_
#define PRIVRL_ENVS_H_

#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privrl/mdp.h"

namespace privrl {

// n parallel bandit problems sharing two absorbing outcome states.
struct HardMdpSpec {
  int n = 1;                  // initial (bandit) states
  int m = 1;                  // arms are {0, ..., m}
  double alpha_prime = 0.1;   // gap parameter in (0, 1/2]
  int horizon = 2;
  std::vector<int> optimal_arms;  // I_s per initial state, each in {0..m}

  absl::Status Validate() const;
  bool operator==(const HardMdpSpec&) const = default;
};

// State layout of hard_mdp: initial states 0..n-1, then the success state
// n ("+") and the failure state n+1 ("-").
inline int HardMdpSuccessState(const HardMdpSpec& spec) { return spec.n; }
inline int HardMdpFailureState(const HardMdpSpec& spec) { return spec.n + 1; }

// From initial state s at the first step: arm 0 reaches + w.p. 1/2 + a'/2,
// arm I_s != 0 w.p. 1/2 + a', every other arm w.p. 1/2; the rest goes to -.
// + and - absorb under every action. Reward 1 whenever the realized next
// state is +, so an episode pays H if + is reached at the first step and 0
// otherwise. Initial states are never revisited; their rows for later
// steps are self-loops.
absl::StatusOr<TabularMdp> HardMdp(const HardMdpSpec& spec);

// Gap parameter that couples a PAC accuracy alpha to the hard class.
inline double PacGapParameter(double alpha, int horizon) {
  return 14.0 * alpha / horizon;
}

// Rows drawn as normalized Gamma(concentration) vectors, mean rewards
// uniform in [0,1], Bernoulli rewards, uniform initial distribution.
absl::StatusOr<TabularMdp> RandomMdp(int num_states, int num_actions,
                                     int horizon, double concentration,
                                     uint64_t seed);

// Three-state deterministic chain starting in state 0. Action 0 advances
// (0 -> 1 -> 2 -> 2), action 1 resets to state 0 except at the last step.
// The only reward is 1 for action 1 at the last step in state 1 or 2, so
// rho* = 1 for every H >= 2.
absl::StatusOr<TabularMdp> ChainFixture(int horizon);

}  // namespace privrl

#endif  // PRIVRL_ENVS_H_
