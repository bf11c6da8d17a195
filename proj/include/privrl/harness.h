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

// Seeded experiment orchestration.
//
// A replica owns its environment sampler, agent and noise generator; all
// of them are seeded from (base seed, replica, purpose) so replicas are
// independent of execution order. Every episode's policy is scored exactly
// by dynamic programming on the known MDP.

#ifndef PRIVRL_HARNESS_H_
#define PRIVRL_HARNESS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privrl/agents.h"
#include "privrl/envs.h"
#include "privrl/mdp.h"

namespace privrl {

struct EnvSpec {
  enum class Kind { kHardMdp, kRandomMdp, kChain, kFile };
  Kind kind = Kind::kChain;
  HardMdpSpec hard;
  // random_mdp
  int num_states = 2;
  int num_actions = 2;
  double concentration = 1.0;
  uint64_t generator_seed = 0;
  // random_mdp and chain
  int horizon = 2;
  // file
  std::string path;

  bool operator==(const EnvSpec&) const = default;
};

absl::StatusOr<TabularMdp> BuildEnvironment(const EnvSpec& spec);

struct AgentSpec {
  enum class Kind { kPucb, kUbev, kRandom };
  Kind kind = Kind::kPucb;
  double epsilon = 1.0;  // kNoPrivacy selects noise-free counters
  double beta = 0.1;

  bool operator==(const AgentSpec&) const = default;
};

const char* AgentKindName(AgentSpec::Kind kind);

enum class OutputFormat { kCsv, kJson };

struct ExperimentConfig {
  EnvSpec env;
  AgentSpec agent;
  int64_t episodes = 100;  // T
  double alpha = 0.1;      // PAC accuracy
  int replicas = 1;
  uint64_t seed = 1;
  std::string output_path;  // empty: keep results in memory only
  OutputFormat format = OutputFormat::kCsv;
  int workers = 1;
  std::vector<double> epsilons;  // sweep grid

  absl::Status Validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

absl::StatusOr<std::unique_ptr<Agent>> MakeAgent(const AgentSpec& spec,
                                                 int num_states,
                                                 int num_actions, int horizon,
                                                 int64_t episodes,
                                                 uint64_t base_seed,
                                                 int replica);

struct EpisodeRecord {
  int replica = 0;
  int64_t episode = 0;  // 1-based
  double policy_value = 0.0;
  double optimal_value = 0.0;
  double gap = 0.0;
  double cum_regret = 0.0;
  bool suboptimal = false;
  int64_t clamped_entries = 0;
  double min_visit_release = 0.0;

  bool operator==(const EpisodeRecord&) const = default;
};

struct ReplicaResult {
  int replica = 0;
  std::vector<EpisodeRecord> records;
  bool truncated = false;
  std::string error;
};

struct EpisodeContext {
  int replica;
  int64_t episode;
  const TabularMdp& mdp;
  const OptimalSolution& optimal;
  const Policy& policy;
  const Agent& agent;
  const EpisodeRecord& record;
};

// Called after each episode is scored and before the agent observes it.
using EpisodeHook = std::function<void(const EpisodeContext&)>;

// Runs one replica. Errors inside the replica are reported on the result
// (truncated = true) rather than returned.
ReplicaResult RunReplica(const ExperimentConfig& config, const TabularMdp& mdp,
                         const OptimalSolution& optimal, int replica,
                         const EpisodeHook& hook = {});

struct ExperimentResult {
  std::vector<ReplicaResult> replicas;  // indexed by replica
};

// Runs every replica (up to config.workers at a time). When output_path is
// set each replica streams to "<output_path>.replica-<r>.part" and the parts
// are merged in replica order into output_path.
absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config,
                                               const EpisodeHook& hook = {});

// Record serialization.
inline constexpr char kCsvHeader[] =
    "replica,episode,policy_value,optimal_value,gap,cum_regret,suboptimal,"
    "clamped_entries,min_visit_release";
inline constexpr char kTruncationMarker[] = "#TRUNCATED";

std::string FormatRecordCsv(const EpisodeRecord& record);
std::string FormatRecordJson(const EpisodeRecord& record);

struct RecordFile {
  std::vector<EpisodeRecord> records;
  bool truncated = false;
};

// Parses a CSV written by RunExperiment. Rejects a wrong header.
absl::StatusOr<RecordFile> ParseRecordsCsv(std::string_view text);

// Gaps are differences of exactly computed values, so a policy whose true
// gap equals alpha can come out a few ulps above it. The PAC predicate
// treats anything within this tolerance of alpha as alpha-optimal.
inline constexpr double kGapTolerance = 1e-9;

inline bool IsSuboptimal(double gap, double alpha) {
  return gap > alpha + kGapTolerance;
}

// Episodes with gap > alpha (up to kGapTolerance).
int64_t PacCount(const std::vector<EpisodeRecord>& records, double alpha);

struct RegretPoint {
  int64_t episode;
  double cum_regret;
};

// Prefix sums of the per-episode gaps.
std::vector<RegretPoint> RegretCurve(const std::vector<EpisodeRecord>& records);

struct SummaryRow {
  double epsilon = 0.0;
  double mean_final_regret = 0.0;
  double std_final_regret = 0.0;  // sample standard deviation
  double mean_pac_count = 0.0;
  int replicas = 0;
};

inline constexpr char kSummaryHeader[] =
    "epsilon,mean_final_regret,std_final_regret,mean_pac_count,replicas";

SummaryRow Summarize(const ExperimentResult& result, double epsilon,
                     double alpha);
std::string FormatSummaryCsv(const std::vector<SummaryRow>& rows);

// Formats an epsilon for file names and tables ("inf" for kNoPrivacy).
std::string EpsilonLabel(double epsilon);

// Runs the template once per epsilon. With an output_path the template is
// treated as a directory receiving eps_<label>.csv per cell and summary.csv.
absl::StatusOr<std::vector<SummaryRow>> Sweep(
    const ExperimentConfig& config_template, const std::vector<double>& epsilons);

struct GapAuditEntry {
  int64_t episode = 0;
  double gap = 0.0;
  double bound = 0.0;  // sum over (s, a, h) of w(s, a, h) * conf(s, a, h)
  bool violated = false;
};

// Checks gap <= sum w * conf (+ tolerance) for one episode.
GapAuditEntry AuditEpisodeGap(const TabularMdp& mdp, const Policy& policy,
                              const QTable& conf, const EpisodeRecord& record,
                              double tolerance = kGapTolerance);

struct GapAuditReport {
  int64_t episodes = 0;
  int64_t violations = 0;
  std::vector<GapAuditEntry> entries;
};

// Runs one replica of `config` and audits every episode against the bonus
// tables the agent planned with. The agent must expose its tables.
absl::StatusOr<GapAuditReport> RunGapAudit(const ExperimentConfig& config,
                                           int replica = 0);

}  // namespace privrl

#endif  // PRIVRL_HARNESS_H_
