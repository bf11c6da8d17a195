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

#include "privrl/counters.h"

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>
#include "privrl/envs.h"

namespace privrl {
namespace {

std::vector<double> FeedAll(PrivateCounter& counter,
                            const std::vector<double>& stream, Rng& rng) {
  std::vector<double> out;
  for (double v : stream) {
    auto r = counter.Feed(v, rng);
    EXPECT_TRUE(r.ok()) << r.status();
    out.push_back(*r);
  }
  return out;
}

TEST(PrivateCounterTest, NoiseFreeReleasesPrefixSums) {
  auto counter = PrivateCounter::Create(8, kNoPrivacy);
  ASSERT_TRUE(counter.ok());
  EXPECT_EQ(counter->noise_mode(), NoiseMode::kNoiseFree);
  Rng rng(1);
  EXPECT_EQ(FeedAll(*counter, {1, 0, 1, 1}, rng),
            (std::vector<double>{1, 1, 2, 3}));
}

TEST(PrivateCounterTest, LevelTraceAtFour) {
  auto counter = PrivateCounter::Create(8, kNoPrivacy);
  ASSERT_TRUE(counter.ok());
  Rng rng(1);
  FeedAll(*counter, {1, 0, 1, 1}, rng);
  // t = 4 = 100b: the two lower levels merge into level 2.
  const auto clean = counter->clean_levels();
  ASSERT_EQ(clean.size(), 4u);
  EXPECT_EQ(clean[0], 0.0);
  EXPECT_EQ(clean[1], 0.0);
  EXPECT_EQ(clean[2], 3.0);
  EXPECT_EQ(counter->noisy_levels()[0], 0.0);
  EXPECT_EQ(counter->noisy_levels()[1], 0.0);
  EXPECT_EQ(counter->TermsInLastRelease(), 1);
}

TEST(PrivateCounterTest, NoiseFreeMatchesRunningSumOnRealStreams) {
  Rng data(17), noise(18);
  for (int trial = 0; trial < 20; ++trial) {
    const int64_t T = 1 + static_cast<int64_t>(UniformIndex(data, 300));
    auto counter = PrivateCounter::Create(T, kNoPrivacy);
    ASSERT_TRUE(counter.ok());
    double sum = 0.0;
    for (int64_t t = 0; t < T; ++t) {
      const double v = UniformUnit(data);
      sum += v;
      auto r = counter->Feed(v, noise);
      ASSERT_TRUE(r.ok());
      EXPECT_NEAR(*r, sum, 1e-9);
    }
  }
}

TEST(PrivateCounterTest, LaplaceReleasesAreMonotoneAndNonnegative) {
  auto counter = PrivateCounter::Create(512, 0.5);
  ASSERT_TRUE(counter.ok());
  Rng rng(4);
  double prev = 0.0;
  for (int t = 0; t < 512; ++t) {
    auto r = counter->Feed(t % 3 == 0 ? 1.0 : 0.0, rng);
    ASSERT_TRUE(r.ok());
    EXPECT_GE(*r, 0.0);
    EXPECT_GE(*r, prev);
    prev = *r;
    EXPECT_LE(counter->TermsInLastRelease(), counter->depth() + 1);
  }
}

TEST(PrivateCounterTest, ExactPrefixSumUnderNoise) {
  auto counter = PrivateCounter::Create(100, 1.0);
  ASSERT_TRUE(counter.ok());
  Rng rng(6);
  double sum = 0.0;
  for (int t = 0; t < 100; ++t) {
    const double v = (t * 7 % 11) / 10.0;
    sum += v;
    ASSERT_TRUE(counter->Feed(v, rng).ok());
    EXPECT_NEAR(counter->ExactPrefixSum(), sum, 1e-9);
  }
}

TEST(PrivateCounterTest, BudgetAccountingIdentity) {
  for (int64_t T : {1, 2, 3, 4, 5, 255, 256, 257, 1000}) {
    auto counter = PrivateCounter::Create(T, 0.7);
    ASSERT_TRUE(counter.ok());
    EXPECT_GE(counter->depth(), 1);
    EXPECT_EQ(counter->depth(),
              static_cast<int>(std::ceil(std::log2(std::max<double>(T, 2)))));
    EXPECT_NEAR(counter->per_level_epsilon() * counter->depth(), 0.7, 1e-15);
    EXPECT_EQ(counter->clean_levels().size(),
              static_cast<size_t>(counter->depth() + 1));
  }
}

TEST(PrivateCounterTest, RejectsOverflowAndBadSymbols) {
  auto counter = PrivateCounter::Create(2, 1.0);
  ASSERT_TRUE(counter.ok());
  Rng rng(0);
  EXPECT_EQ(counter->Feed(1.5, rng).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(counter->Feed(-0.1, rng).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_TRUE(counter->Feed(1.0, rng).ok());
  EXPECT_TRUE(counter->Feed(0.0, rng).ok());
  EXPECT_EQ(counter->Feed(0.0, rng).status().code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_FALSE(PrivateCounter::Create(0, 1.0).ok());
  EXPECT_FALSE(PrivateCounter::Create(4, 0.0).ok());
}

TEST(PrivateCounterTest, CheckpointResumesBitIdentically) {
  auto a = PrivateCounter::Create(64, 1.0);
  ASSERT_TRUE(a.ok());
  Rng rng(9);
  for (int t = 0; t < 21; ++t) ASSERT_TRUE(a->Feed(t % 2, rng).ok());
  auto b = PrivateCounter::FromJson(a->ToJson());
  ASSERT_TRUE(b.ok()) << b.status();
  EXPECT_EQ(b->t(), 21);
  EXPECT_EQ(b->release(), a->release());
  Rng rng_a(33), rng_b(33);
  for (int t = 0; t < 43; ++t) {
    EXPECT_EQ(*a->Feed(0.5, rng_a), *b->Feed(0.5, rng_b));
  }
  EXPECT_FALSE(PrivateCounter::FromJson("{\"format\":\"x\"}").ok());
  auto nf = PrivateCounter::Create(4, kNoPrivacy);
  auto nf2 = PrivateCounter::FromJson(nf->ToJson());
  ASSERT_TRUE(nf2.ok());
  EXPECT_EQ(nf2->noise_mode(), NoiseMode::kNoiseFree);
}

TEST(CounterErrorBoundTest, KnownValues) {
  EXPECT_NEAR(*CounterErrorBound(2, 4.0, 1.0 / std::exp(1.0)), 1.0, 1e-12);
  EXPECT_NEAR(*CounterErrorBound(256, 0.5, 0.1), 3334.499396639021, 1e-9);
  EXPECT_DOUBLE_EQ(*CounterErrorBound(256, 1.0, 0.1),
                   2.0 * *CounterErrorBound(256, 2.0, 0.1));
}

TEST(CounterErrorBoundTest, Monotonicity) {
  EXPECT_GT(*CounterErrorBound(100, 0.5, 0.1), *CounterErrorBound(100, 1.0, 0.1));
  EXPECT_LT(*CounterErrorBound(100, 1.0, 0.1), *CounterErrorBound(1000, 1.0, 0.1));
  EXPECT_LT(*CounterErrorBound(100, 1.0, 0.1), *CounterErrorBound(100, 1.0, 0.01));
}

TEST(CounterErrorBoundTest, RejectsBadDomain) {
  EXPECT_FALSE(CounterErrorBound(0, 1.0, 0.1).ok());
  EXPECT_FALSE(CounterErrorBound(10, -1.0, 0.1).ok());
  EXPECT_FALSE(CounterErrorBound(10, 1.0, 0.0).ok());
  EXPECT_FALSE(CounterErrorBound(10, 1.0, 1.0).ok());
}

TEST(PrivateCounterTest, AccuracyBoundHoldsInMostReplicas) {
  const int64_t T = 256;
  const double bound = *CounterErrorBound(T, 1.0, 0.1);
  Rng rng(DeriveSeed(3, 0, StreamPurpose::kCounterNoise));
  int exceed = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    auto counter = PrivateCounter::Create(T, 1.0);
    double sum = 0.0, worst = 0.0;
    for (int64_t t = 0; t < T; ++t) {
      const double v = UniformIndex(rng, 2);
      sum += v;
      worst = std::max(worst, std::fabs(*counter->Feed(v, rng) - sum));
    }
    if (worst > bound) ++exceed;
  }
  EXPECT_LE(exceed, 100);
}

TEST(CounterFamilyTest, CountAndErrorBound) {
  auto family = CounterFamily::Create(2, 2, 3, 1.0, 0.2, 1024);
  ASSERT_TRUE(family.ok());
  EXPECT_EQ(family->num_counters(), 48);
  EXPECT_EQ(FamilyCounterCount(2, 2, 3), 48);
  EXPECT_NEAR(family->error_bound(), 7817.519803652829, 1e-7);
  EXPECT_DOUBLE_EQ(family->per_counter_epsilon(), 1.0 / 9.0);
  EXPECT_DOUBLE_EQ(family->per_counter_beta(), 0.05 / 48);
  EXPECT_EQ(family->visit_counter(1, 1, 2).epsilon(), 1.0 / 9.0);
}

TEST(CounterFamilyTest, NoiseFreeSentinel) {
  auto family = CounterFamily::Create(2, 2, 3, kNoPrivacy, 0.2, 10);
  ASSERT_TRUE(family.ok());
  EXPECT_EQ(family->error_bound(), 0.0);
  EXPECT_EQ(family->visit_counter(0, 0, 0).noise_mode(), NoiseMode::kNoiseFree);
}

TEST(CounterFamilyTest, RefusesOversizedAllocation) {
  auto family = CounterFamily::Create(10, 10, 10, 1.0, 0.1, 10, 1000);
  EXPECT_EQ(family.status().code(), absl::StatusCode::kResourceExhausted);
}

Trajectory OneStateEpisode(int action, int horizon, double reward) {
  Trajectory t;
  for (int h = 0; h < horizon; ++h) t.steps.push_back({0, action, reward, 0});
  return t;
}

TEST(CounterFamilyTest, SingleEpisodeInOneStateMdp) {
  auto family = CounterFamily::Create(1, 3, 2, kNoPrivacy, 0.1, 5);
  ASSERT_TRUE(family.ok());
  Rng rng(0);
  ASSERT_TRUE(family->FeedEpisode(OneStateEpisode(1, 2, 0.25), rng).ok());
  const CountSnapshot snap = family->Snapshot();
  for (int h = 0; h < 2; ++h) {
    for (int a = 0; a < 3; ++a) {
      EXPECT_EQ(snap.visits.at(0, a, h), a == 1 ? 1.0 : 0.0);
      EXPECT_EQ(snap.rewards.at(0, a, h), a == 1 ? 0.25 : 0.0);
      EXPECT_EQ(snap.transitions.at(0, a, h, 0), a == 1 ? 1.0 : 0.0);
      EXPECT_EQ(family->visit_counter(0, a, h).t(), 1);
    }
  }
}

TEST(CounterFamilyTest, NoiseFreeSnapshotEqualsExactCounts) {
  auto mdp = RandomMdp(3, 2, 3, 1.0, 4);
  ASSERT_TRUE(mdp.ok());
  auto family = CounterFamily::Create(3, 2, 3, kNoPrivacy, 0.1, 50);
  ASSERT_TRUE(family.ok());
  const CountSnapshot empty = family->Snapshot();
  for (double v : empty.visits.data()) EXPECT_EQ(v, 0.0);
  QTable visits(3, 2, 3), rewards(3, 2, 3);
  TransitionTable trans(3, 2, 3);
  Rng env(1), noise(2), pick(3);
  for (int k = 0; k < 50; ++k) {
    Policy p(3, 3);
    for (int s = 0; s < 3; ++s)
      for (int h = 0; h < 3; ++h) p.at(s, h) = static_cast<int>(UniformIndex(pick, 2));
    const Trajectory t = SampleEpisode(*mdp, p, env, k);
    for (const Step& st : t.steps) {
      const int h = static_cast<int>(&st - t.steps.data());
      visits.at(st.state, st.action, h) += 1;
      rewards.at(st.state, st.action, h) += st.reward;
      trans.at(st.state, st.action, h, st.next_state) += 1;
    }
    ASSERT_TRUE(family->FeedEpisode(t, noise).ok());
  }
  const CountSnapshot snap = family->Snapshot();
  EXPECT_EQ(snap.visits, visits);
  EXPECT_EQ(snap.rewards, rewards);
  EXPECT_EQ(snap.transitions, trans);
  EXPECT_EQ(family->episodes(), 50);
}

TEST(CounterFamilyTest, LaplaceSnapshotsAreMonotone) {
  auto family = CounterFamily::Create(2, 2, 2, 1.0, 0.1, 40);
  ASSERT_TRUE(family.ok());
  Rng rng(8);
  CountSnapshot prev = family->Snapshot();
  for (int k = 0; k < 40; ++k) {
    ASSERT_TRUE(family->FeedEpisode(OneStateEpisode(k % 2, 2, 1.0), rng).ok());
    const CountSnapshot snap = family->Snapshot();
    for (size_t i = 0; i < snap.visits.data().size(); ++i) {
      EXPECT_GE(snap.visits.data()[i], 0.0);
      EXPECT_GE(snap.visits.data()[i], prev.visits.data()[i]);
      EXPECT_GE(snap.rewards.data()[i], prev.rewards.data()[i]);
    }
    for (size_t i = 0; i < snap.transitions.data().size(); ++i) {
      EXPECT_GE(snap.transitions.data()[i], prev.transitions.data()[i]);
    }
    prev = snap;
  }
  EXPECT_EQ(family->FeedEpisode(OneStateEpisode(0, 2, 1.0), rng).code(),
            absl::StatusCode::kOutOfRange);
}

TEST(SensitivityTest, PerFamilyDeltasBoundedByHorizon) {
  const int S = 4, A = 3, H = 5;
  Rng rng(12);
  auto random_traj = [&]() {
    Trajectory t;
    int s = static_cast<int>(UniformIndex(rng, S));
    for (int h = 0; h < H; ++h) {
      const int next = static_cast<int>(UniformIndex(rng, S));
      t.steps.push_back({s, static_cast<int>(UniformIndex(rng, A)),
                         UniformUnit(rng), next});
      s = next;
    }
    return t;
  };
  for (int i = 0; i < 100; ++i) {
    const SensitivityReport r =
        EpisodeSensitivity(S, A, H, random_traj(), random_traj());
    EXPECT_LE(r.visits.removed, H);
    EXPECT_LE(r.visits.added, H);
    EXPECT_LE(r.rewards.removed, H);
    EXPECT_LE(r.rewards.added, H);
    EXPECT_LE(r.transitions.l1(), 2 * H);
  }
  const Trajectory same = random_traj();
  EXPECT_EQ(EpisodeSensitivity(S, A, H, same, same).visits.l1(), 0.0);
}

TEST(PrivacyProbeTest, IdenticalStreamsGiveSmallEstimate) {
  std::vector<double> stream(32, 0.0);
  for (size_t i = 0; i < stream.size(); i += 2) stream[i] = 1.0;
  PrivacyProbeOptions opts;
  opts.epsilon = 1.0;
  opts.trials = 20'000;
  auto report = EmpiricalPrivacyProbe(stream, stream, opts);
  ASSERT_TRUE(report.ok());
  EXPECT_LE(report->estimate, report->slack);
  EXPECT_TRUE(report->within_bound());
}

TEST(PrivacyProbeTest, NoiseFreeIsUnbounded) {
  std::vector<double> a(16, 0.0), b(16, 0.0);
  b[5] = 1.0;
  PrivacyProbeOptions opts;
  opts.epsilon = kNoPrivacy;
  opts.trials = 10'000;
  auto report = EmpiricalPrivacyProbe(a, b, opts);
  ASSERT_TRUE(report.ok());
  EXPECT_TRUE(std::isinf(report->estimate));
  EXPECT_FALSE(report->within_bound());
  EXPECT_EQ(EmpiricalPrivacyProbe(a, a, opts)->estimate, 0.0);
}

TEST(PrivacyProbeTest, RejectsNonNeighboringStreams) {
  std::vector<double> a(8, 0.0), b(8, 1.0);
  EXPECT_FALSE(EmpiricalPrivacyProbe(a, b, PrivacyProbeOptions{}).ok());
}

TEST(PrivacyProbeTest, ReportSerializes) {
  std::vector<double> a(8, 0.0), b(8, 0.0);
  b[0] = 1.0;
  PrivacyProbeOptions opts;
  opts.trials = 10'000;
  auto report = EmpiricalPrivacyProbe(a, b, opts);
  ASSERT_TRUE(report.ok());
  EXPECT_NE(report->ToJson().find("\"estimate\""), std::string::npos);
  EXPECT_EQ(report->prob_a.size(), report->event_edges.size() + 1);
}

}  // namespace
}  // namespace privrl
