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

#include <gtest/gtest.h>

namespace privrl {
namespace {

TEST(HardMdpTest, TransitionProbabilities) {
  const HardMdpSpec spec{2, 1, 0.2, 3, {1, 0}};
  auto mdp = HardMdp(spec);
  ASSERT_TRUE(mdp.ok()) << mdp.status();
  const int plus = HardMdpSuccessState(spec), minus = HardMdpFailureState(spec);
  EXPECT_EQ(mdp->num_states(), 4);
  EXPECT_EQ(mdp->num_actions(), 2);
  EXPECT_NEAR(mdp->transition(0, 1, 0, plus), 0.7, 1e-15);
  EXPECT_NEAR(mdp->transition(0, 0, 0, plus), 0.6, 1e-15);
  EXPECT_NEAR(mdp->transition(1, 0, 0, plus), 0.6, 1e-15);
  EXPECT_NEAR(mdp->transition(1, 1, 0, plus), 0.5, 1e-15);
  EXPECT_NEAR(mdp->transition(0, 1, 0, minus), 0.3, 1e-15);
  EXPECT_EQ(mdp->initial_dist(), (std::vector<double>{0.5, 0.5, 0.0, 0.0}));
  for (int a = 0; a < 2; ++a)
    for (int h = 0; h < 3; ++h) {
      EXPECT_EQ(mdp->transition(plus, a, h, plus), 1.0);
      EXPECT_EQ(mdp->transition(minus, a, h, minus), 1.0);
    }
  EXPECT_EQ(mdp->reward_kind(), RewardKind::kTransitionCoupled);
  EXPECT_TRUE(Validate(*mdp).ok());
}

TEST(HardMdpTest, TwoScaleStructure) {
  const double ap = 0.16;
  const HardMdpSpec spec{3, 3, ap, 4, {2, 0, 3}};
  auto mdp = HardMdp(spec);
  ASSERT_TRUE(mdp.ok());
  const int plus = HardMdpSuccessState(spec);
  for (int s = 0; s < 3; ++s) {
    const double arm0 = mdp->transition(s, 0, 0, plus);
    for (int a = 1; a <= 3; ++a) {
      const double p = mdp->transition(s, a, 0, plus);
      if (a == spec.optimal_arms[s]) {
        EXPECT_NEAR(p - arm0, ap / 2, 1e-15);
      } else {
        EXPECT_NEAR(arm0 - p, ap / 2, 1e-15);
      }
    }
  }
}

TEST(HardMdpTest, OptimalValueAndGap) {
  const HardMdpSpec spec{3, 2, 0.3, 3, {1, 2, 1}};
  auto mdp = HardMdp(spec);
  ASSERT_TRUE(mdp.ok());
  const double rho = OptimalValues(*mdp).rho;
  EXPECT_NEAR(rho, 3 * (0.5 + 0.3), 1e-12);
  const Policy arm0(mdp->num_states(), 3, 0);
  EXPECT_NEAR(rho - PolicyValue(*mdp, arm0).rho, 3 * 0.3 / 2, 1e-12);
}

TEST(HardMdpTest, EpisodeRewardIsAllOrNothing) {
  const HardMdpSpec spec{2, 2, 0.4, 5, {1, 2}};
  auto mdp = HardMdp(spec);
  ASSERT_TRUE(mdp.ok());
  Rng rng(2);
  Policy p(mdp->num_states(), 5);
  p.at(0, 0) = 1;
  bool saw[2] = {false, false};
  for (int k = 0; k < 2000; ++k) {
    const Trajectory t = SampleEpisode(*mdp, p, rng, k);
    double total = 0.0;
    for (const Step& st : t.steps) total += st.reward;
    const bool success = t.steps[0].next_state == HardMdpSuccessState(spec);
    saw[success] = true;
    EXPECT_EQ(total, success ? 5.0 : 0.0);
  }
  EXPECT_TRUE(saw[0] && saw[1]);
}

TEST(HardMdpTest, RejectsInvalidSpecs) {
  EXPECT_FALSE(HardMdp({0, 1, 0.2, 3, {}}).ok());
  EXPECT_FALSE(HardMdp({1, 0, 0.2, 3, {0}}).ok());
  EXPECT_FALSE(HardMdp({1, 1, 0.6, 3, {0}}).ok());
  EXPECT_FALSE(HardMdp({1, 1, 0.0, 3, {0}}).ok());
  EXPECT_FALSE(HardMdp({2, 1, 0.2, 3, {0}}).ok());
  EXPECT_FALSE(HardMdp({1, 1, 0.2, 3, {2}}).ok());
  EXPECT_TRUE(HardMdp({1, 1, 0.5, 3, {1}}).ok());
}

TEST(HardMdpTest, PacCoupling) {
  EXPECT_DOUBLE_EQ(PacGapParameter(0.1, 7), 0.2);
}

TEST(RandomMdpTest, SeedReproducible) {
  auto a = RandomMdp(4, 3, 2, 0.5, 123);
  auto b = RandomMdp(4, 3, 2, 0.5, 123);
  auto c = RandomMdp(4, 3, 2, 0.5, 124);
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_TRUE(*a == *b);
  EXPECT_FALSE(*a == *c);
}

TEST(RandomMdpTest, LargeConcentrationIsNearUniform) {
  auto mdp = RandomMdp(5, 2, 3, 1e6, 8);
  ASSERT_TRUE(mdp.ok());
  for (int s = 0; s < 5; ++s)
    for (int a = 0; a < 2; ++a)
      for (int h = 0; h < 3; ++h)
        for (int n = 0; n < 5; ++n) EXPECT_NEAR(mdp->transition(s, a, h, n), 0.2, 1e-2);
}

TEST(RandomMdpTest, AlwaysValid) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    auto mdp = RandomMdp(1 + seed % 5, 1 + seed % 3, 1 + seed % 4, 0.05 + seed * 0.1, seed);
    ASSERT_TRUE(mdp.ok());
    EXPECT_TRUE(Validate(*mdp).ok()) << Validate(*mdp).ToString();
    EXPECT_EQ(mdp->reward_kind(), RewardKind::kBernoulli);
  }
}

// Hand DP for H = 2: step 0 must move right (action 0) to leave state 0,
// step 1 takes the paying action from state 1, for a total of exactly 1.
TEST(ChainFixtureTest, HandComputedValues) {
  auto chain = ChainFixture(2);
  ASSERT_TRUE(chain.ok());
  EXPECT_TRUE(Validate(*chain).ok());
  const OptimalSolution sol = OptimalValues(*chain);
  EXPECT_EQ(sol.rho, 1.0);
  EXPECT_EQ(PolicyValue(*chain, GreedyPolicy(sol.q)).rho, 1.0);
  EXPECT_EQ(PolicyValue(*chain, Policy(3, 2, 1)).rho, 0.0);
  EXPECT_FALSE(ChainFixture(1).ok());
}

TEST(ChainFixtureTest, LongerHorizonStillPaysOnce) {
  auto chain = ChainFixture(5);
  ASSERT_TRUE(chain.ok());
  EXPECT_EQ(OptimalValues(*chain).rho, 1.0);
}

}  // namespace
}  // namespace privrl
