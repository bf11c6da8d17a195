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

// Optimistic planners and the agents built on them.
//
// PucbAgent plans every episode from a fresh snapshot of private counters
// (PrivQPlanning); UbevAgent is its non-private counterpart on exact counts
// (UbevPlanning); RandomAgent is a control that learns nothing.

#ifndef PRIVRL_AGENTS_H_
#define PRIVRL_AGENTS_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privrl/counters.h"
#include "privrl/mdp.h"
#include "privrl/rng.h"

namespace privrl {

// Coefficients of the privacy term psi~ = c1 (1+SH) E / n + c2 (1+SH) E^2 / n^2.
inline constexpr double kPsiLinearCoefficient = 3.0;
inline constexpr double kPsiQuadraticCoefficient = 2.0;

// ln(ln(max(x, e))).
double Llnp(double x);

struct ConfidenceTerms {
  double conf = 0.0;
  double phi = 0.0;
  double psi = 0.0;
  bool bonus_branch = false;  // false: n~ below threshold and conf = H
};

// Bonus for one (s, a, h). The bonus branch requires n~ >= 2 E_eps, or
// n~ >= 1 when E_eps = 0.
ConfidenceTerms Confidence(double n_tilde, double error_bound, int num_states,
                           int num_actions, int horizon, double beta_prime);

struct QTables {
  QTable q_tilde;  // 0 where not evaluated (below threshold)
  QTable q_plus;
  ValueTable v_tilde;
  QTable conf;
  QTable phi;
  QTable psi;

  bool operator==(const QTables&) const = default;
};

// Backward induction on private releases. Below the visit threshold the
// optimistic value is H without evaluating the empirical estimate.
QTables PrivQPlanning(const CountSnapshot& releases, double error_bound,
                      int num_states, int num_actions, int horizon,
                      double beta_prime);

// Non-private optimistic planning on exact counts.
QTables UbevPlanning(const CountSnapshot& counts, int num_states,
                     int num_actions, int horizon, double beta_prime);

struct PucbConfig {
  double epsilon = 1.0;  // kNoPrivacy for noise-free counters
  double beta = 0.1;
  int64_t episodes = 1;  // T

  bool noise_free() const;
  absl::Status Validate() const;
};

struct PlanningDiagnostics {
  double min_q_plus = 0.0;
  double max_q_plus = 0.0;
  double mean_q_plus = 0.0;
  int64_t clamped_entries = 0;  // entries with Q+ == H
  int64_t below_threshold = 0;  // (s, a, h) planned without a bonus branch
  double min_visit_release = 0.0;
};

PlanningDiagnostics SummarizeTables(const QTables& tables, const QTable& visits);

// Episodic protocol: PlanEpisode before each episode, ObserveEpisode after.
// A plan for episode t depends only on observations from earlier episodes.
class Agent {
 public:
  virtual ~Agent() = default;

  virtual absl::StatusOr<Policy> PlanEpisode() = 0;
  virtual absl::Status ObserveEpisode(const Trajectory& trajectory) = 0;
  virtual Policy FinalPolicy() const = 0;
  virtual std::string name() const = 0;

  // Tables behind the most recent plan, when the agent has any.
  virtual const QTables* LastTables() const { return nullptr; }
  virtual std::optional<PlanningDiagnostics> Diagnostics() const {
    return std::nullopt;
  }
};

class PucbAgent : public Agent {
 public:
  static absl::StatusOr<std::unique_ptr<PucbAgent>> Create(
      const PucbConfig& config, int num_states, int num_actions, int horizon,
      uint64_t noise_seed);

  absl::StatusOr<Policy> PlanEpisode() override;
  absl::Status ObserveEpisode(const Trajectory& trajectory) override;
  Policy FinalPolicy() const override { return policy_; }
  std::string name() const override { return "pucb"; }
  const QTables* LastTables() const override { return &tables_; }
  std::optional<PlanningDiagnostics> Diagnostics() const override;

  const CounterFamily& counters() const { return counters_; }
  double error_bound() const { return counters_.error_bound(); }

 private:
  PucbAgent(const PucbConfig& config, CounterFamily counters,
            uint64_t noise_seed);

  PucbConfig config_;
  CounterFamily counters_;
  Rng noise_rng_;
  int64_t planned_ = 0;
  QTables tables_;
  QTable last_visits_;
  Policy policy_;
};

class UbevAgent : public Agent {
 public:
  static absl::StatusOr<std::unique_ptr<UbevAgent>> Create(
      double beta, int64_t episodes, int num_states, int num_actions,
      int horizon);

  absl::StatusOr<Policy> PlanEpisode() override;
  absl::Status ObserveEpisode(const Trajectory& trajectory) override;
  Policy FinalPolicy() const override { return policy_; }
  std::string name() const override { return "ubev"; }
  const QTables* LastTables() const override { return &tables_; }
  std::optional<PlanningDiagnostics> Diagnostics() const override;

  const CountSnapshot& counts() const { return counts_; }

 private:
  UbevAgent(double beta, int64_t episodes, int num_states, int num_actions,
            int horizon);

  double beta_;
  int64_t episodes_;
  int num_states_, num_actions_, horizon_;
  int64_t planned_ = 0;
  CountSnapshot counts_;
  QTables tables_;
  Policy policy_;
};

class RandomAgent : public Agent {
 public:
  RandomAgent(int num_states, int num_actions, int horizon, uint64_t seed);

  absl::StatusOr<Policy> PlanEpisode() override;
  absl::Status ObserveEpisode(const Trajectory&) override {
    return absl::OkStatus();
  }
  Policy FinalPolicy() const override { return policy_; }
  std::string name() const override { return "random"; }

 private:
  int num_states_, num_actions_, horizon_;
  Rng rng_;
  Policy policy_;
};

// 1 / (x - y) <= 1 / x + 2y / x^2, defined for y > 0 and x >= 2y.
absl::StatusOr<bool> InverseGapBoundCheck(double x, double y);

}  // namespace privrl

#endif  // PRIVRL_AGENTS_H_
