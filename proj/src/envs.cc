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

#include "privrl/envs.h"

#include <random>

#include "privrl/strings.h"
#include "privrl/rng.h"

namespace privrl {

absl::Status HardMdpSpec::Validate() const {
  if (n < 1) return absl::InvalidArgumentError("hard_mdp: n must be >= 1");
  if (m < 1) return absl::InvalidArgumentError("hard_mdp: m must be >= 1");
  if (!(alpha_prime > 0.0 && alpha_prime <= 0.5)) {
    return absl::InvalidArgumentError("hard_mdp: alpha' must lie in (0, 1/2]");
  }
  if (horizon < 1) return absl::InvalidArgumentError("hard_mdp: H must be >= 1");
  if (static_cast<int>(optimal_arms.size()) != n) {
    return absl::InvalidArgumentError("hard_mdp: I must have n entries");
  }
  for (int arm : optimal_arms) {
    if (arm < 0 || arm > m) {
      return absl::InvalidArgumentError(
          StrCat("hard_mdp: optimal arm ", arm, " outside {0..", m, "}"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<TabularMdp> HardMdp(const HardMdpSpec& spec) {
  if (auto s = spec.Validate(); !s.ok()) return s;
  const int S = spec.n + 2, A = spec.m + 1, H = spec.horizon;
  const int plus = HardMdpSuccessState(spec);
  const int minus = HardMdpFailureState(spec);
  TabularMdp mdp(S, A, H);
  mdp.set_reward_kind(RewardKind::kTransitionCoupled, plus);
  for (int s = 0; s < spec.n; ++s) mdp.initial_dist()[s] = 1.0 / spec.n;

  for (int s = 0; s < spec.n; ++s) {
    const int best = spec.optimal_arms[s];
    for (int a = 0; a < A; ++a) {
      double p_plus = 0.5;
      if (a == 0) {
        p_plus = 0.5 + spec.alpha_prime / 2.0;
      } else if (a == best) {
        p_plus = 0.5 + spec.alpha_prime;
      }
      mdp.transition(s, a, 0, plus) = p_plus;
      mdp.transition(s, a, 0, minus) = 1.0 - p_plus;
      for (int h = 1; h < H; ++h) mdp.transition(s, a, h, s) = 1.0;
    }
  }
  for (int a = 0; a < A; ++a) {
    for (int h = 0; h < H; ++h) {
      mdp.transition(plus, a, h, plus) = 1.0;
      mdp.transition(minus, a, h, minus) = 1.0;
    }
  }
  mdp.SyncCoupledRewards();
  return mdp;
}

absl::StatusOr<TabularMdp> RandomMdp(int num_states, int num_actions,
                                     int horizon, double concentration,
                                     uint64_t seed) {
  if (num_states < 1 || num_actions < 1 || horizon < 1) {
    return absl::InvalidArgumentError("random_mdp: S, A and H must be >= 1");
  }
  if (!(concentration > 0.0)) {
    return absl::InvalidArgumentError("random_mdp: concentration must be > 0");
  }
  Rng rng(DeriveSeed(seed, 0, StreamPurpose::kGenerator));
  std::gamma_distribution<double> gamma(concentration, 1.0);
  TabularMdp mdp(num_states, num_actions, horizon);
  mdp.set_reward_kind(RewardKind::kBernoulli);
  for (int s = 0; s < num_states; ++s) {
    mdp.initial_dist()[s] = 1.0 / num_states;
    for (int a = 0; a < num_actions; ++a) {
      for (int h = 0; h < horizon; ++h) {
        auto row = mdp.transition_row(s, a, h);
        double total = 0.0;
        for (double& p : row) {
          p = gamma(rng);
          total += p;
        }
        if (total <= 0.0) {
          // Tiny shapes can underflow every draw; fall back to uniform.
          for (double& p : row) p = 1.0 / num_states;
        } else {
          for (double& p : row) p /= total;
        }
        mdp.mean_reward(s, a, h) = UniformUnit(rng);
      }
    }
  }
  return mdp;
}

absl::StatusOr<TabularMdp> ChainFixture(int horizon) {
  if (horizon < 2) return absl::InvalidArgumentError("chain: H must be >= 2");
  const int H = horizon;
  TabularMdp mdp(3, 2, H);
  mdp.set_reward_kind(RewardKind::kDeterministic);
  mdp.initial_dist()[0] = 1.0;
  for (int s = 0; s < 3; ++s) {
    for (int h = 0; h < H; ++h) {
      mdp.transition(s, 0, h, std::min(s + 1, 2)) = 1.0;
      if (h + 1 < H) {
        mdp.transition(s, 1, h, 0) = 1.0;
      } else {
        mdp.transition(s, 1, h, s) = 1.0;
        mdp.mean_reward(s, 1, h) = s >= 1 ? 1.0 : 0.0;
      }
    }
  }
  return mdp;
}

}  // namespace privrl
