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

// Finite-horizon tabular MDPs and exact (noise-free) dynamic programming.
//
// Step indices are zero-based throughout the library: an episode visits
// steps h = 0, ..., H-1 and value tables carry an extra terminal column
// h = H that is identically zero.

#ifndef PRIVRL_MDP_H_
#define PRIVRL_MDP_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "privrl/rng.h"

namespace privrl {

inline constexpr double kDistributionTolerance = 1e-12;

enum class RewardKind {
  kBernoulli,          // r ~ Bernoulli(mean)
  kDeterministic,      // r = mean
  kTransitionCoupled,  // r = 1 iff the realized next state is success_state
};

const char* RewardKindName(RewardKind kind);

// Dense table indexed (s, h) with h in [0, H]; column H is terminal.
class ValueTable {
 public:
  ValueTable() = default;
  ValueTable(int num_states, int horizon)
      : num_states_(num_states),
        horizon_(horizon),
        data_(static_cast<size_t>(num_states) * (horizon + 1), 0.0) {}

  double& at(int s, int h) { return data_[Index(s, h)]; }
  double at(int s, int h) const { return data_[Index(s, h)]; }
  int num_states() const { return num_states_; }
  int horizon() const { return horizon_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const ValueTable&) const = default;

 private:
  size_t Index(int s, int h) const {
    return static_cast<size_t>(s) * (horizon_ + 1) + h;
  }

  int num_states_ = 0;
  int horizon_ = 0;
  std::vector<double> data_;
};

// Dense table indexed (s, a, h) with h in [0, H).
class QTable {
 public:
  QTable() = default;
  QTable(int num_states, int num_actions, int horizon, double fill = 0.0)
      : num_states_(num_states),
        num_actions_(num_actions),
        horizon_(horizon),
        data_(static_cast<size_t>(num_states) * num_actions * horizon, fill) {}

  double& at(int s, int a, int h) { return data_[Index(s, a, h)]; }
  double at(int s, int a, int h) const { return data_[Index(s, a, h)]; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int horizon() const { return horizon_; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool operator==(const QTable&) const = default;

 private:
  size_t Index(int s, int a, int h) const {
    return (static_cast<size_t>(s) * num_actions_ + a) * horizon_ + h;
  }

  int num_states_ = 0;
  int num_actions_ = 0;
  int horizon_ = 0;
  std::vector<double> data_;
};

class TabularMdp {
 public:
  TabularMdp() = default;
  // Zero-filled MDP; callers populate the tables and then run Validate().
  TabularMdp(int num_states, int num_actions, int horizon);

  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int horizon() const { return horizon_; }

  double& transition(int s, int a, int h, int next) {
    return transitions_[RowOffset(s, a, h) + next];
  }
  double transition(int s, int a, int h, int next) const {
    return transitions_[RowOffset(s, a, h) + next];
  }
  std::span<double> transition_row(int s, int a, int h) {
    return {transitions_.data() + RowOffset(s, a, h),
            static_cast<size_t>(num_states_)};
  }
  std::span<const double> transition_row(int s, int a, int h) const {
    return {transitions_.data() + RowOffset(s, a, h),
            static_cast<size_t>(num_states_)};
  }

  double& mean_reward(int s, int a, int h) { return rewards_.at(s, a, h); }
  double mean_reward(int s, int a, int h) const { return rewards_.at(s, a, h); }
  const QTable& mean_rewards() const { return rewards_; }

  std::vector<double>& initial_dist() { return initial_dist_; }
  const std::vector<double>& initial_dist() const { return initial_dist_; }

  RewardKind reward_kind() const { return reward_kind_; }
  int success_state() const { return success_state_; }
  void set_reward_kind(RewardKind kind, int success_state = -1) {
    reward_kind_ = kind;
    success_state_ = success_state;
  }

  // For kTransitionCoupled, sets every mean reward to the probability of
  // landing in the success state.
  void SyncCoupledRewards();

  // Rescales every transition row and the initial distribution to sum to
  // one. Only ever applied on explicit request; constructors are strict.
  void NormalizeRows();

  bool operator==(const TabularMdp&) const = default;

 private:
  size_t RowOffset(int s, int a, int h) const {
    return ((static_cast<size_t>(s) * num_actions_ + a) * horizon_ + h) *
           num_states_;
  }

  int num_states_ = 0;
  int num_actions_ = 0;
  int horizon_ = 0;
  std::vector<double> transitions_;
  QTable rewards_;
  std::vector<double> initial_dist_;
  RewardKind reward_kind_ = RewardKind::kBernoulli;
  int success_state_ = -1;
};

struct Violation {
  enum class Kind {
    kShape,
    kNegativeProbability,
    kRowSum,
    kInitialDistribution,
    kRewardRange,
    kCoupledReward,
  };
  Kind kind;
  int state = -1;
  int action = -1;
  int step = -1;
  double value = 0.0;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string ToString() const;
};

// Checks every structural invariant and lists each violating index.
ValidationReport Validate(const TabularMdp& mdp);

// Deterministic Markov policy: one action per (s, h).
class Policy {
 public:
  Policy() = default;
  Policy(int num_states, int horizon, int fill_action = 0)
      : num_states_(num_states),
        horizon_(horizon),
        actions_(static_cast<size_t>(num_states) * horizon, fill_action) {}

  int& at(int s, int h) { return actions_[static_cast<size_t>(s) * horizon_ + h]; }
  int at(int s, int h) const {
    return actions_[static_cast<size_t>(s) * horizon_ + h];
  }
  int num_states() const { return num_states_; }
  int horizon() const { return horizon_; }
  const std::vector<int>& actions() const { return actions_; }

  bool operator==(const Policy&) const = default;

 private:
  int num_states_ = 0;
  int horizon_ = 0;
  std::vector<int> actions_;
};

absl::Status ValidatePolicy(const TabularMdp& mdp, const Policy& policy);

// Greedy argmax over actions of `q`; ties go to the smallest action index.
Policy GreedyPolicy(const QTable& q);

struct Step {
  int state = 0;
  int action = 0;
  double reward = 0.0;
  int next_state = 0;
};

struct Trajectory {
  int64_t episode = 0;
  std::vector<Step> steps;  // exactly H entries
};

struct OptimalSolution {
  ValueTable v;
  QTable q;
  double rho = 0.0;
};

// Backward induction. Values lie in [0, H].
OptimalSolution OptimalValues(const TabularMdp& mdp);

struct PolicyEvaluation {
  ValueTable v;
  double rho = 0.0;
};

PolicyEvaluation PolicyValue(const TabularMdp& mdp, const Policy& policy);

// Rolls out one episode. Per step, the next state is drawn before the reward.
Trajectory SampleEpisode(const TabularMdp& mdp, const Policy& policy, Rng& rng,
                         int64_t episode = 0);

// w(s, a, h): probability that the policy occupies (s, a) at step h.
QTable VisitationProbs(const TabularMdp& mdp, const Policy& policy);

}  // namespace privrl

#endif  // PRIVRL_MDP_H_
