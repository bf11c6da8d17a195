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

// Differentially private counters under continual observation.
//
// PrivateCounter is the binary (tree) mechanism: the stream is covered by
// dyadic partial sums, each partial sum is released once with Laplace noise,
// and the release at time t adds up the noisy partial sums that correspond
// to the set bits of t. Releases are post-processed with a running maximum
// floored at zero so that they are nondecreasing.
//
// CounterFamily holds the three keyed counter sets used by the private
// planner: rewards r~(s,a,h), visits n~(s,a,h), transitions m~(s,a,s',h).

#ifndef PRIVRL_COUNTERS_H_
#define PRIVRL_COUNTERS_H_

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privrl/mdp.h"
#include "privrl/rng.h"

namespace privrl {

// Passing this as a privacy budget selects noise-free counters.
inline constexpr double kNoPrivacy = std::numeric_limits<double>::infinity();

// Default refusal threshold for CounterFamily allocation.
inline constexpr int64_t kDefaultMaxCounters = 10'000'000;

enum class NoiseMode { kLaplace, kNoiseFree };

// Tree depth: ceil(log2(max(T, 2))).
int TreeDepth(int64_t capacity);

// (4 / epsilon) * ln(1 / beta) * log2(max(T, 2))^{5/2}: with probability at
// least 1 - beta every prefix release of one counter is within this bound.
absl::StatusOr<double> CounterErrorBound(int64_t capacity, double epsilon,
                                         double beta);

class PrivateCounter {
 public:
  // `epsilon` is the whole-counter budget; kNoPrivacy gives a noise-free
  // counter whose releases are exact prefix sums.
  static absl::StatusOr<PrivateCounter> Create(int64_t capacity,
                                               double epsilon);

  // Consumes one symbol in [0, 1] and returns the monotonized release.
  absl::StatusOr<double> Feed(double value, Rng& rng);

  double release() const { return last_release_; }
  int64_t t() const { return t_; }
  int64_t capacity() const { return capacity_; }
  double epsilon() const { return epsilon_; }
  double per_level_epsilon() const { return per_level_epsilon_; }
  int depth() const { return depth_; }
  NoiseMode noise_mode() const { return mode_; }

  // Sum of the clean partial sums selected by the bits of t, i.e. the exact
  // prefix sum of the stream so far.
  double ExactPrefixSum() const;
  // Number of noisy partial sums combined in the most recent raw output.
  int TermsInLastRelease() const { return terms_in_last_release_; }
  // Clean and noisy partial sums, one slot per level (depth + 1 slots).
  std::span<const double> clean_levels() const { return clean_; }
  std::span<const double> noisy_levels() const { return noisy_; }

  // Versioned checkpoint document.
  std::string ToJson() const;
  static absl::StatusOr<PrivateCounter> FromJson(std::string_view text);

 private:
  PrivateCounter() = default;

  int64_t capacity_ = 0;
  double epsilon_ = kNoPrivacy;
  double per_level_epsilon_ = kNoPrivacy;
  int depth_ = 0;
  NoiseMode mode_ = NoiseMode::kNoiseFree;
  std::vector<double> clean_;
  std::vector<double> noisy_;
  int64_t t_ = 0;
  double last_release_ = 0.0;
  int terms_in_last_release_ = 0;
};

// Dense (s, a, s', h) table of transition counts.
class TransitionTable {
 public:
  TransitionTable() = default;
  TransitionTable(int num_states, int num_actions, int horizon)
      : num_states_(num_states),
        num_actions_(num_actions),
        horizon_(horizon),
        data_(static_cast<size_t>(num_states) * num_actions * horizon *
                  num_states,
              0.0) {}

  double& at(int s, int a, int h, int next) { return data_[Index(s, a, h) + next]; }
  double at(int s, int a, int h, int next) const {
    return data_[Index(s, a, h) + next];
  }
  std::span<const double> row(int s, int a, int h) const {
    return {data_.data() + Index(s, a, h), static_cast<size_t>(num_states_)};
  }
  const std::vector<double>& data() const { return data_; }
  int num_states() const { return num_states_; }

  bool operator==(const TransitionTable&) const = default;

 private:
  size_t Index(int s, int a, int h) const {
    return ((static_cast<size_t>(s) * num_actions_ + a) * horizon_ + h) *
           num_states_;
  }

  int num_states_ = 0;
  int num_actions_ = 0;
  int horizon_ = 0;
  std::vector<double> data_;
};

// Latest releases of every counter in a family (or exact counts).
struct CountSnapshot {
  QTable rewards;               // r(s, a, h)
  QTable visits;                // n(s, a, h)
  TransitionTable transitions;  // m(s, a, s', h)
};

// Per-episode symbols fed to each family, flattened in counter order.
struct EpisodeSymbols {
  std::vector<double> rewards;
  std::vector<double> visits;
  std::vector<double> transitions;
};

// The symbols one trajectory contributes to each family in one episode:
// r~(s_h,a_h,h) gets r_h, n~(s_h,a_h,h) and m~(s_h,a_h,s_{h+1},h) get 1,
// every other counter gets 0.
EpisodeSymbols SymbolsForEpisode(int num_states, int num_actions, int horizon,
                                 const Trajectory& trajectory);

// l1 change of one family's per-episode symbol vector when one episode's
// trajectory is replaced. `removed` is the mass present only in the first
// trajectory's contribution, `added` the mass present only in the second.
struct FamilyDelta {
  double removed = 0.0;
  double added = 0.0;
  double l1() const { return removed + added; }
};

struct SensitivityReport {
  FamilyDelta rewards;
  FamilyDelta visits;
  FamilyDelta transitions;
};

SensitivityReport EpisodeSensitivity(int num_states, int num_actions,
                                     int horizon, const Trajectory& first,
                                     const Trajectory& second);

// E_eps = (3 / epsilon) * H * ln((2SAH + S^2AH) / beta') * ln(T)^{5/2} with
// beta' = beta / 4. Zero for kNoPrivacy.
double FamilyErrorBound(int num_states, int num_actions, int horizon,
                        double epsilon, double beta, int64_t capacity);

// Budget split helpers.
inline double FamilyCounterEpsilon(double epsilon, int horizon) {
  return epsilon / (3.0 * horizon);
}
inline double BetaPrime(double beta) { return beta / 4.0; }

inline int64_t FamilyCounterCount(int64_t S, int64_t A, int64_t H) {
  return 2 * S * A * H + S * S * A * H;
}

class CounterFamily {
 public:
  static absl::StatusOr<CounterFamily> Create(
      int num_states, int num_actions, int horizon, double epsilon,
      double beta, int64_t capacity,
      int64_t max_counters = kDefaultMaxCounters);

  // Advances every counter by exactly one symbol.
  absl::Status FeedEpisode(const Trajectory& trajectory, Rng& rng);

  CountSnapshot Snapshot() const;

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int horizon() const { return horizon_; }
  int64_t capacity() const { return capacity_; }
  int64_t episodes() const { return episodes_; }
  double epsilon() const { return epsilon_; }
  double per_counter_epsilon() const { return per_counter_epsilon_; }
  double per_counter_beta() const { return per_counter_beta_; }
  double error_bound() const { return error_bound_; }
  int64_t num_counters() const {
    return static_cast<int64_t>(rewards_.size() + visits_.size() +
                                transitions_.size());
  }

  const PrivateCounter& reward_counter(int s, int a, int h) const;
  const PrivateCounter& visit_counter(int s, int a, int h) const;
  const PrivateCounter& transition_counter(int s, int a, int h, int next) const;

 private:
  CounterFamily() = default;
  size_t SahIndex(int s, int a, int h) const {
    return (static_cast<size_t>(s) * num_actions_ + a) * horizon_ + h;
  }

  int num_states_ = 0;
  int num_actions_ = 0;
  int horizon_ = 0;
  int64_t capacity_ = 0;
  int64_t episodes_ = 0;
  double epsilon_ = kNoPrivacy;
  double per_counter_epsilon_ = kNoPrivacy;
  double per_counter_beta_ = 0.0;
  double error_bound_ = 0.0;
  std::vector<PrivateCounter> rewards_;
  std::vector<PrivateCounter> visits_;
  std::vector<PrivateCounter> transitions_;  // (s, a, h, s') order
};

struct PrivacyProbeOptions {
  double epsilon = 1.0;  // whole-counter budget
  int64_t trials = 100'000;
  // Interior bucket edges for the final release. Empty selects deciles of
  // a pooled pilot sample drawn from an independent stream.
  std::vector<double> event_edges;
  uint64_t seed = 1;
  double slack_multiplier = 3.0;
};

struct PrivacyProbeReport {
  std::vector<double> event_edges;
  std::vector<int64_t> counts_a;
  std::vector<int64_t> counts_b;
  std::vector<double> prob_a;  // add-one smoothed
  std::vector<double> prob_b;
  double estimate = 0.0;  // max |ln(p_a / p_b)|; +inf when unbounded
  int64_t min_count = 0;
  double slack = 0.0;     // slack_multiplier * sqrt(1 / min_count)
  double epsilon = 0.0;
  bool within_bound() const {
    return std::isfinite(estimate) && estimate <= epsilon + slack;
  }
  std::string ToJson() const;
};

// Runs a fresh counter over each stream `trials` times and compares the
// bucketed distributions of the final release. Streams must have equal
// length and differ in at most one symbol.
absl::StatusOr<PrivacyProbeReport> EmpiricalPrivacyProbe(
    std::span<const double> stream_a, std::span<const double> stream_b,
    const PrivacyProbeOptions& options);

}  // namespace privrl

#endif  // PRIVRL_COUNTERS_H_
