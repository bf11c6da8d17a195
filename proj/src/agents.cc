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

#include "privrl/agents.h"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>

#include "privrl/strings.h"

namespace privrl {

double Llnp(double x) { return std::log(std::log(std::max(x, std::numbers::e))); }

ConfidenceTerms Confidence(double n_tilde, double error_bound, int num_states,
                           int num_actions, int horizon, double beta_prime) {
  ConfidenceTerms terms;
  const double threshold = error_bound > 0.0 ? 2.0 * error_bound : 1.0;
  if (!(n_tilde >= threshold)) {
    terms.conf = horizon;
    return terms;
  }
  const double effective = n_tilde - error_bound;
  const double log_term =
      std::log(3.0 * num_states * num_actions * horizon / beta_prime);
  terms.phi = std::sqrt((2.0 * Llnp(effective) + log_term) / effective);
  const double spread = 1.0 + static_cast<double>(num_states) * horizon;
  terms.psi = kPsiLinearCoefficient * spread * error_bound / n_tilde +
              kPsiQuadraticCoefficient * spread * error_bound * error_bound /
                  (n_tilde * n_tilde);
  terms.conf = (horizon + 1) * terms.phi + terms.psi;
  terms.bonus_branch = true;
  return terms;
}

namespace {

QTables EmptyTables(int S, int A, int H) {
  return {QTable(S, A, H), QTable(S, A, H), ValueTable(S, H),
          QTable(S, A, H), QTable(S, A, H), QTable(S, A, H)};
}

void FillValues(QTables& t, int S, int A, int h) {
  for (int s = 0; s < S; ++s) {
    double best = t.q_plus.at(s, 0, h);
    for (int a = 1; a < A; ++a) best = std::max(best, t.q_plus.at(s, a, h));
    t.v_tilde.at(s, h) = best;
  }
}

}  // namespace

QTables PrivQPlanning(const CountSnapshot& releases, double error_bound,
                      int num_states, int num_actions, int horizon,
                      double beta_prime) {
  const int S = num_states, A = num_actions, H = horizon;
  QTables t = EmptyTables(S, A, H);
  for (int h = H - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const double n = releases.visits.at(s, a, h);
        const ConfidenceTerms c =
            Confidence(n, error_bound, S, A, H, beta_prime);
        t.conf.at(s, a, h) = c.conf;
        t.phi.at(s, a, h) = c.phi;
        t.psi.at(s, a, h) = c.psi;
        if (!c.bonus_branch) {
          t.q_plus.at(s, a, h) = H;
          continue;
        }
        double total = releases.rewards.at(s, a, h);
        const auto row = releases.transitions.row(s, a, h);
        for (int next = 0; next < S; ++next) {
          total += t.v_tilde.at(next, h + 1) * row[next];
        }
        const double q = total / n;
        t.q_tilde.at(s, a, h) = q;
        t.q_plus.at(s, a, h) = std::min<double>(H, q + c.conf);
      }
    }
    FillValues(t, S, A, h);
  }
  return t;
}

QTables UbevPlanning(const CountSnapshot& counts, int num_states,
                     int num_actions, int horizon, double beta_prime) {
  const int S = num_states, A = num_actions, H = horizon;
  const double log_term = std::log(3.0 * S * A * H / beta_prime);
  QTables t = EmptyTables(S, A, H);
  for (int h = H - 1; h >= 0; --h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        const double n = counts.visits.at(s, a, h);
        if (n < 1.0) {
          t.conf.at(s, a, h) = H;
          t.q_plus.at(s, a, h) = H;
          continue;
        }
        const double phi = std::sqrt((2.0 * Llnp(n) + log_term) / n);
        const double conf = (H + 1) * phi;
        double total = counts.rewards.at(s, a, h);
        for (int next = 0; next < S; ++next) {
          total += t.v_tilde.at(next, h + 1) * counts.transitions.at(s, a, h, next);
        }
        const double q = total / n;
        t.phi.at(s, a, h) = phi;
        t.conf.at(s, a, h) = conf;
        t.q_tilde.at(s, a, h) = q;
        t.q_plus.at(s, a, h) = std::min<double>(H, q + conf);
      }
    }
    FillValues(t, S, A, h);
  }
  return t;
}

bool PucbConfig::noise_free() const { return std::isinf(epsilon); }

absl::Status PucbConfig::Validate() const {
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        "epsilon must be > 0 (use noise-free mode for no privacy)");
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    return absl::InvalidArgumentError("beta must lie in (0, 1)");
  }
  if (episodes < 1) return absl::InvalidArgumentError("T must be >= 1");
  return absl::OkStatus();
}

PlanningDiagnostics SummarizeTables(const QTables& tables, const QTable& visits) {
  PlanningDiagnostics d;
  const auto& q = tables.q_plus.data();
  if (q.empty()) return d;
  const double H = tables.q_plus.horizon();
  d.min_q_plus = *std::min_element(q.begin(), q.end());
  d.max_q_plus = *std::max_element(q.begin(), q.end());
  double sum = 0.0;
  for (double v : q) {
    sum += v;
    if (v == H) ++d.clamped_entries;
  }
  d.mean_q_plus = sum / q.size();
  for (size_t i = 0; i < q.size(); ++i) {
    if (tables.conf.data()[i] == H && tables.phi.data()[i] == 0.0) {
      ++d.below_threshold;
    }
  }
  if (!visits.data().empty()) {
    d.min_visit_release =
        *std::min_element(visits.data().begin(), visits.data().end());
  }
  return d;
}

PucbAgent::PucbAgent(const PucbConfig& config, CounterFamily counters,
                     uint64_t noise_seed)
    : config_(config), counters_(std::move(counters)), noise_rng_(noise_seed) {}

absl::StatusOr<std::unique_ptr<PucbAgent>> PucbAgent::Create(
    const PucbConfig& config, int num_states, int num_actions, int horizon,
    uint64_t noise_seed) {
  if (auto s = config.Validate(); !s.ok()) return s;
  auto family = CounterFamily::Create(num_states, num_actions, horizon,
                                      config.epsilon, config.beta,
                                      config.episodes);
  if (!family.ok()) return family.status();
  return std::unique_ptr<PucbAgent>(
      new PucbAgent(config, *std::move(family), noise_seed));
}

absl::StatusOr<Policy> PucbAgent::PlanEpisode() {
  if (planned_ >= config_.episodes) {
    return absl::OutOfRangeError(
        StrCat("PUCB configured for ", config_.episodes, " episodes"));
  }
  if (planned_ > counters_.episodes()) {
    return absl::FailedPreconditionError("previous episode not observed");
  }
  CountSnapshot snap = counters_.Snapshot();
  tables_ = PrivQPlanning(snap, counters_.error_bound(), counters_.num_states(),
                          counters_.num_actions(), counters_.horizon(),
                          BetaPrime(config_.beta));
  last_visits_ = std::move(snap.visits);
  policy_ = GreedyPolicy(tables_.q_plus);
  ++planned_;
  return policy_;
}

absl::Status PucbAgent::ObserveEpisode(const Trajectory& trajectory) {
  return counters_.FeedEpisode(trajectory, noise_rng_);
}

std::optional<PlanningDiagnostics> PucbAgent::Diagnostics() const {
  if (planned_ == 0) return std::nullopt;
  return SummarizeTables(tables_, last_visits_);
}

UbevAgent::UbevAgent(double beta, int64_t episodes, int num_states,
                     int num_actions, int horizon)
    : beta_(beta),
      episodes_(episodes),
      num_states_(num_states),
      num_actions_(num_actions),
      horizon_(horizon),
      counts_{QTable(num_states, num_actions, horizon),
              QTable(num_states, num_actions, horizon),
              TransitionTable(num_states, num_actions, horizon)} {}

absl::StatusOr<std::unique_ptr<UbevAgent>> UbevAgent::Create(
    double beta, int64_t episodes, int num_states, int num_actions,
    int horizon) {
  if (!(beta > 0.0 && beta < 1.0)) {
    return absl::InvalidArgumentError("beta must lie in (0, 1)");
  }
  if (episodes < 1) return absl::InvalidArgumentError("T must be >= 1");
  if (num_states < 1 || num_actions < 1 || horizon < 1) {
    return absl::InvalidArgumentError("S, A and H must be positive");
  }
  return std::unique_ptr<UbevAgent>(
      new UbevAgent(beta, episodes, num_states, num_actions, horizon));
}

absl::StatusOr<Policy> UbevAgent::PlanEpisode() {
  if (planned_ >= episodes_) {
    return absl::OutOfRangeError(
        StrCat("UBEV configured for ", episodes_, " episodes"));
  }
  tables_ = UbevPlanning(counts_, num_states_, num_actions_, horizon_,
                         BetaPrime(beta_));
  policy_ = GreedyPolicy(tables_.q_plus);
  ++planned_;
  return policy_;
}

absl::Status UbevAgent::ObserveEpisode(const Trajectory& trajectory) {
  if (static_cast<int>(trajectory.steps.size()) != horizon_) {
    return absl::InvalidArgumentError("trajectory length differs from H");
  }
  for (int h = 0; h < horizon_; ++h) {
    const Step& st = trajectory.steps[h];
    counts_.rewards.at(st.state, st.action, h) += st.reward;
    counts_.visits.at(st.state, st.action, h) += 1.0;
    counts_.transitions.at(st.state, st.action, h, st.next_state) += 1.0;
  }
  return absl::OkStatus();
}

std::optional<PlanningDiagnostics> UbevAgent::Diagnostics() const {
  if (planned_ == 0) return std::nullopt;
  return SummarizeTables(tables_, counts_.visits);
}

RandomAgent::RandomAgent(int num_states, int num_actions, int horizon,
                         uint64_t seed)
    : num_states_(num_states),
      num_actions_(num_actions),
      horizon_(horizon),
      rng_(seed),
      policy_(num_states, horizon) {}

absl::StatusOr<Policy> RandomAgent::PlanEpisode() {
  for (int s = 0; s < num_states_; ++s) {
    for (int h = 0; h < horizon_; ++h) {
      policy_.at(s, h) = static_cast<int>(UniformIndex(rng_, num_actions_));
    }
  }
  return policy_;
}

absl::StatusOr<bool> InverseGapBoundCheck(double x, double y) {
  if (!(y > 0.0) || !(x >= 2.0 * y) || !std::isfinite(x)) {
    return absl::InvalidArgumentError(
        StrCat("requires y > 0 and x >= 2y, got x=", x, " y=", y));
  }
  const long double lx = x, ly = y;
  const long double lhs = 1.0L / (lx - ly);
  const long double rhs = 1.0L / lx + 2.0L * ly / (lx * lx);
  // At x = 2y both sides agree exactly; allow for rounding in each operation.
  return lhs <= rhs * (1.0L + 8.0L * LDBL_EPSILON);
}

}  // namespace privrl
