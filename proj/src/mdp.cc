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

#include "privrl/mdp.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "privrl/strings.h"

namespace privrl {

const char* RewardKindName(RewardKind kind) {
  switch (kind) {
    case RewardKind::kBernoulli:
      return "bernoulli";
    case RewardKind::kDeterministic:
      return "deterministic";
    case RewardKind::kTransitionCoupled:
      return "transition_coupled";
  }
  return "unknown";
}

TabularMdp::TabularMdp(int num_states, int num_actions, int horizon)
    : num_states_(num_states),
      num_actions_(num_actions),
      horizon_(horizon),
      transitions_(static_cast<size_t>(num_states) * num_actions * horizon *
                       num_states,
                   0.0),
      rewards_(num_states, num_actions, horizon),
      initial_dist_(num_states, 0.0) {}

void TabularMdp::SyncCoupledRewards() {
  if (reward_kind_ != RewardKind::kTransitionCoupled) return;
  for (int s = 0; s < num_states_; ++s)
    for (int a = 0; a < num_actions_; ++a)
      for (int h = 0; h < horizon_; ++h)
        rewards_.at(s, a, h) = transition(s, a, h, success_state_);
}

void TabularMdp::NormalizeRows() {
  auto normalize = [](std::span<double> row) {
    double total = 0.0;
    for (double p : row) total += p;
    if (total <= 0.0) return;
    for (double& p : row) p /= total;
  };
  for (int s = 0; s < num_states_; ++s)
    for (int a = 0; a < num_actions_; ++a)
      for (int h = 0; h < horizon_; ++h) normalize(transition_row(s, a, h));
  normalize(initial_dist_);
  SyncCoupledRewards();
}

std::string ValidationReport::ToString() const {
  if (ok()) return "ok\n";
  std::ostringstream out;
  for (const Violation& v : violations) {
    out << "violation";
    if (v.state >= 0) out << " s=" << v.state;
    if (v.action >= 0) out << " a=" << v.action;
    if (v.step >= 0) out << " h=" << v.step;
    out << " value=" << v.value << ": " << v.message << "\n";
  }
  return out.str();
}

ValidationReport Validate(const TabularMdp& mdp) {
  ValidationReport report;
  const int S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  if (S < 1 || A < 1 || H < 1) {
    report.violations.push_back({Violation::Kind::kShape, -1, -1, -1, 0.0,
                                 "S, A and H must all be positive"});
    return report;
  }
  if (static_cast<int>(mdp.initial_dist().size()) != S) {
    report.violations.push_back(
        {Violation::Kind::kShape, -1, -1, -1,
         static_cast<double>(mdp.initial_dist().size()),
         "initial distribution length differs from S"});
    return report;
  }
  const bool coupled = mdp.reward_kind() == RewardKind::kTransitionCoupled;
  if (coupled && (mdp.success_state() < 0 || mdp.success_state() >= S)) {
    report.violations.push_back({Violation::Kind::kShape, -1, -1, -1,
                                 static_cast<double>(mdp.success_state()),
                                 "success state out of range"});
    return report;
  }

  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      for (int h = 0; h < H; ++h) {
        double total = 0.0;
        for (int next = 0; next < S; ++next) {
          const double p = mdp.transition(s, a, h, next);
          if (!(p >= 0.0 && p <= 1.0)) {
            report.violations.push_back(
                {Violation::Kind::kNegativeProbability, s, a, h, p,
                 StrCat("transition to ", next, " outside [0,1]")});
          }
          total += p;
        }
        if (!(std::fabs(total - 1.0) <= kDistributionTolerance)) {
          report.violations.push_back({Violation::Kind::kRowSum, s, a, h,
                                       total, "transition row does not sum to 1"});
        }
        const double r = mdp.mean_reward(s, a, h);
        if (!(r >= 0.0 && r <= 1.0)) {
          report.violations.push_back({Violation::Kind::kRewardRange, s, a, h,
                                       r, "mean reward outside [0,1]"});
        } else if (coupled &&
                   std::fabs(r - mdp.transition(s, a, h, mdp.success_state())) >
                       kDistributionTolerance) {
          report.violations.push_back(
              {Violation::Kind::kCoupledReward, s, a, h, r,
               "coupled mean reward differs from success probability"});
        }
      }
    }
  }

  double total = 0.0;
  for (int s = 0; s < S; ++s) {
    const double p = mdp.initial_dist()[s];
    if (!(p >= 0.0 && p <= 1.0)) {
      report.violations.push_back({Violation::Kind::kInitialDistribution, s,
                                   -1, -1, p,
                                   "initial probability outside [0,1]"});
    }
    total += p;
  }
  if (!(std::fabs(total - 1.0) <= kDistributionTolerance)) {
    report.violations.push_back({Violation::Kind::kInitialDistribution, -1, -1,
                                 -1, total,
                                 "initial distribution does not sum to 1"});
  }
  return report;
}

absl::Status ValidatePolicy(const TabularMdp& mdp, const Policy& policy) {
  if (policy.num_states() != mdp.num_states() ||
      policy.horizon() != mdp.horizon()) {
    return absl::InvalidArgumentError("policy shape does not match MDP");
  }
  for (int s = 0; s < mdp.num_states(); ++s) {
    for (int h = 0; h < mdp.horizon(); ++h) {
      const int a = policy.at(s, h);
      if (a < 0 || a >= mdp.num_actions()) {
        return absl::InvalidArgumentError(
            StrCat("invalid action ", a, " at s=", s, " h=", h));
      }
    }
  }
  return absl::OkStatus();
}

Policy GreedyPolicy(const QTable& q) {
  Policy policy(q.num_states(), q.horizon());
  for (int s = 0; s < q.num_states(); ++s) {
    for (int h = 0; h < q.horizon(); ++h) {
      int best = 0;
      for (int a = 1; a < q.num_actions(); ++a) {
        if (q.at(s, a, h) > q.at(s, best, h)) best = a;
      }
      policy.at(s, h) = best;
    }
  }
  return policy;
}

namespace {

double Backup(const TabularMdp& mdp, const ValueTable& v, int s, int a,
              int h) {
  double value = mdp.mean_reward(s, a, h);
  const auto row = mdp.transition_row(s, a, h);
  for (int next = 0; next < mdp.num_states(); ++next) {
    value += row[next] * v.at(next, h + 1);
  }
  return value;
}

}  // namespace

OptimalSolution OptimalValues(const TabularMdp& mdp) {
  const int S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  OptimalSolution sol{ValueTable(S, H), QTable(S, A, H), 0.0};
  for (int h = H - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      double best = 0.0;
      for (int a = 0; a < A; ++a) {
        const double q = Backup(mdp, sol.v, s, a, h);
        sol.q.at(s, a, h) = q;
        if (a == 0 || q > best) best = q;
      }
      sol.v.at(s, h) = best;
    }
  }
  for (int s = 0; s < S; ++s) sol.rho += mdp.initial_dist()[s] * sol.v.at(s, 0);
  return sol;
}

PolicyEvaluation PolicyValue(const TabularMdp& mdp, const Policy& policy) {
  const int S = mdp.num_states(), H = mdp.horizon();
  PolicyEvaluation eval{ValueTable(S, H), 0.0};
  for (int h = H - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      eval.v.at(s, h) = Backup(mdp, eval.v, s, policy.at(s, h), h);
    }
  }
  for (int s = 0; s < S; ++s)
    eval.rho += mdp.initial_dist()[s] * eval.v.at(s, 0);
  return eval;
}

Trajectory SampleEpisode(const TabularMdp& mdp, const Policy& policy, Rng& rng,
                         int64_t episode) {
  Trajectory traj;
  traj.episode = episode;
  traj.steps.reserve(mdp.horizon());
  int s = SampleDiscrete(rng, mdp.initial_dist());
  for (int h = 0; h < mdp.horizon(); ++h) {
    Step step;
    step.state = s;
    step.action = policy.at(s, h);
    step.next_state = SampleDiscrete(rng, mdp.transition_row(s, step.action, h));
    const double mean = mdp.mean_reward(s, step.action, h);
    switch (mdp.reward_kind()) {
      case RewardKind::kBernoulli:
        step.reward = UniformUnit(rng) < mean ? 1.0 : 0.0;
        break;
      case RewardKind::kDeterministic:
        step.reward = mean;
        break;
      case RewardKind::kTransitionCoupled:
        step.reward = step.next_state == mdp.success_state() ? 1.0 : 0.0;
        break;
    }
    traj.steps.push_back(step);
    s = step.next_state;
  }
  return traj;
}

QTable VisitationProbs(const TabularMdp& mdp, const Policy& policy) {
  const int S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  QTable w(S, A, H);
  std::vector<double> state_prob = mdp.initial_dist();
  std::vector<double> next_prob(S);
  for (int h = 0; h < H; ++h) {
    std::fill(next_prob.begin(), next_prob.end(), 0.0);
    for (int s = 0; s < S; ++s) {
      if (state_prob[s] == 0.0) continue;
      const int a = policy.at(s, h);
      w.at(s, a, h) = state_prob[s];
      const auto row = mdp.transition_row(s, a, h);
      for (int next = 0; next < S; ++next) next_prob[next] += state_prob[s] * row[next];
    }
    state_prob.swap(next_prob);
  }
  return w;
}

}  // namespace privrl
