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

#include "privrl/harness.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "privrl/strings.h"
#include "privrl/mdp_io.h"

namespace privrl {

absl::StatusOr<TabularMdp> BuildEnvironment(const EnvSpec& spec) {
  absl::StatusOr<TabularMdp> mdp;
  switch (spec.kind) {
    case EnvSpec::Kind::kHardMdp:
      mdp = HardMdp(spec.hard);
      break;
    case EnvSpec::Kind::kRandomMdp:
      mdp = RandomMdp(spec.num_states, spec.num_actions, spec.horizon,
                      spec.concentration, spec.generator_seed);
      break;
    case EnvSpec::Kind::kChain:
      mdp = ChainFixture(spec.horizon);
      break;
    case EnvSpec::Kind::kFile:
      mdp = LoadMdp(spec.path);
      break;
  }
  if (!mdp.ok()) return mdp.status();
  if (ValidationReport report = Validate(*mdp); !report.ok()) {
    return absl::InvalidArgumentError(
        StrCat("environment fails validation:\n", report.ToString()));
  }
  return mdp;
}

const char* AgentKindName(AgentSpec::Kind kind) {
  switch (kind) {
    case AgentSpec::Kind::kPucb:
      return "pucb";
    case AgentSpec::Kind::kUbev:
      return "ubev";
    case AgentSpec::Kind::kRandom:
      return "random";
  }
  return "unknown";
}

absl::Status ExperimentConfig::Validate() const {
  if (episodes < 1) return absl::InvalidArgumentError("episodes must be >= 1");
  if (replicas < 1) return absl::InvalidArgumentError("replicas must be >= 1");
  if (!(alpha > 0.0)) return absl::InvalidArgumentError("alpha must be > 0");
  if (workers < 1) return absl::InvalidArgumentError("workers must be >= 1");
  if (agent.kind != AgentSpec::Kind::kRandom) {
    if (!(agent.beta > 0.0 && agent.beta < 1.0)) {
      return absl::InvalidArgumentError("beta must lie in (0, 1)");
    }
  }
  if (!(agent.epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        "epsilon must be > 0 (use noise-free mode for no privacy)");
  }
  for (double eps : epsilons) {
    if (!(eps > 0.0)) {
      return absl::InvalidArgumentError("every sweep epsilon must be > 0");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::unique_ptr<Agent>> MakeAgent(const AgentSpec& spec,
                                                 int num_states,
                                                 int num_actions, int horizon,
                                                 int64_t episodes,
                                                 uint64_t base_seed,
                                                 int replica) {
  switch (spec.kind) {
    case AgentSpec::Kind::kPucb: {
      PucbConfig cfg{spec.epsilon, spec.beta, episodes};
      auto agent = PucbAgent::Create(
          cfg, num_states, num_actions, horizon,
          DeriveSeed(base_seed, replica, StreamPurpose::kCounterNoise));
      if (!agent.ok()) return agent.status();
      return std::unique_ptr<Agent>(std::move(*agent));
    }
    case AgentSpec::Kind::kUbev: {
      auto agent =
          UbevAgent::Create(spec.beta, episodes, num_states, num_actions, horizon);
      if (!agent.ok()) return agent.status();
      return std::unique_ptr<Agent>(std::move(*agent));
    }
    case AgentSpec::Kind::kRandom:
      return std::unique_ptr<Agent>(std::make_unique<RandomAgent>(
          num_states, num_actions, horizon,
          DeriveSeed(base_seed, replica, StreamPurpose::kAgent)));
  }
  return absl::InvalidArgumentError("unknown agent kind");
}

namespace {

// Shortest representation that parses back to the same double.
std::string FormatDouble(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string PartPath(const std::string& output, int replica) {
  return StrCat(output, ".replica-", replica, ".part");
}

std::string TruncationLine(OutputFormat format, int replica,
                           const std::string& reason) {
  std::string clean = reason;
  for (char& c : clean) {
    if (c == '\n' || c == '"') c = ' ';
  }
  if (format == OutputFormat::kJson) {
    return StrCat("{\"truncated\":true,\"replica\":", replica,
                        ",\"reason\":\"", clean, "\"}\n");
  }
  return StrCat(kTruncationMarker, " replica=", replica,
                      " reason=", clean, "\n");
}

}  // namespace

std::string FormatRecordCsv(const EpisodeRecord& r) {
  return StrCat(r.replica, ",", r.episode, ",",
                      FormatDouble(r.policy_value), ",",
                      FormatDouble(r.optimal_value), ",", FormatDouble(r.gap),
                      ",", FormatDouble(r.cum_regret), ",",
                      r.suboptimal ? 1 : 0, ",", r.clamped_entries, ",",
                      FormatDouble(r.min_visit_release));
}

std::string FormatRecordJson(const EpisodeRecord& r) {
  return StrCat(
      "{\"replica\":", r.replica, ",\"episode\":", r.episode,
      ",\"policy_value\":", FormatDouble(r.policy_value),
      ",\"optimal_value\":", FormatDouble(r.optimal_value),
      ",\"gap\":", FormatDouble(r.gap),
      ",\"cum_regret\":", FormatDouble(r.cum_regret),
      ",\"suboptimal\":", r.suboptimal ? "true" : "false",
      ",\"clamped_entries\":", r.clamped_entries,
      ",\"min_visit_release\":", FormatDouble(r.min_visit_release), "}");
}

ReplicaResult RunReplica(const ExperimentConfig& config, const TabularMdp& mdp,
                         const OptimalSolution& optimal, int replica,
                         const EpisodeHook& hook) {
  ReplicaResult result;
  result.replica = replica;
  std::ofstream part;
  if (!config.output_path.empty()) {
    part.open(PartPath(config.output_path, replica), std::ios::trunc);
    if (!part) {
      result.truncated = true;
      result.error = "cannot open replica output";
      return result;
    }
  }
  auto fail = [&](std::string reason) {
    result.truncated = true;
    result.error = std::move(reason);
    if (part.is_open()) {
      part << TruncationLine(config.format, replica, result.error);
      part.flush();
    }
    return result;
  };

  auto agent = MakeAgent(config.agent, mdp.num_states(), mdp.num_actions(),
                         mdp.horizon(), config.episodes, config.seed, replica);
  if (!agent.ok()) return fail(std::string(agent.status().message()));
  Rng env_rng(DeriveSeed(config.seed, replica, StreamPurpose::kEnvironment));

  result.records.reserve(config.episodes);
  double cum_regret = 0.0;
  for (int64_t t = 1; t <= config.episodes; ++t) {
    auto policy = (*agent)->PlanEpisode();
    if (!policy.ok()) return fail(std::string(policy.status().message()));
    const PolicyEvaluation eval = PolicyValue(mdp, *policy);
    EpisodeRecord rec;
    rec.replica = replica;
    rec.episode = t;
    rec.policy_value = eval.rho;
    rec.optimal_value = optimal.rho;
    rec.gap = optimal.rho - eval.rho;
    cum_regret += rec.gap;
    rec.cum_regret = cum_regret;
    rec.suboptimal = IsSuboptimal(rec.gap, config.alpha);
    if (auto diag = (*agent)->Diagnostics()) {
      rec.clamped_entries = diag->clamped_entries;
      rec.min_visit_release = diag->min_visit_release;
    }
    if (hook) hook({replica, t, mdp, optimal, *policy, **agent, rec});

    const Trajectory traj = SampleEpisode(mdp, *policy, env_rng, t);
    if (auto s = (*agent)->ObserveEpisode(traj); !s.ok()) {
      return fail(std::string(s.message()));
    }
    result.records.push_back(rec);
    if (part.is_open()) {
      part << (config.format == OutputFormat::kCsv ? FormatRecordCsv(rec)
                                                   : FormatRecordJson(rec))
           << "\n";
      if (!part) return fail("write failure");
    }
  }
  return result;
}

absl::StatusOr<ExperimentResult> RunExperiment(const ExperimentConfig& config,
                                               const EpisodeHook& hook) {
  if (auto s = config.Validate(); !s.ok()) return s;
  auto mdp = BuildEnvironment(config.env);
  if (!mdp.ok()) return mdp.status();
  const OptimalSolution optimal = OptimalValues(*mdp);

  ExperimentResult result;
  result.replicas.resize(config.replicas);
  const int workers = std::min(config.workers, config.replicas);
  if (workers <= 1 || hook) {
    for (int r = 0; r < config.replicas; ++r) {
      result.replicas[r] = RunReplica(config, *mdp, optimal, r, hook);
    }
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (int r = w; r < config.replicas; r += workers) {
          result.replicas[r] = RunReplica(config, *mdp, optimal, r);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  if (!config.output_path.empty()) {
    std::ofstream out(config.output_path, std::ios::trunc);
    if (!out) {
      return absl::UnavailableError(
          StrCat("cannot write '", config.output_path, "'"));
    }
    if (config.format == OutputFormat::kCsv) out << kCsvHeader << "\n";
    for (int r = 0; r < config.replicas; ++r) {
      const std::string part = PartPath(config.output_path, r);
      {
        std::ifstream in(part);
        if (in) {
          out << in.rdbuf();
        } else {
          out << TruncationLine(config.format, r, "missing replica output");
        }
      }
      std::error_code ec;
      std::filesystem::remove(part, ec);
    }
    out.flush();
    if (!out) return absl::DataLossError("failed to merge replica outputs");
  }
  return result;
}

absl::StatusOr<RecordFile> ParseRecordsCsv(std::string_view text) {
  RecordFile file;
  std::vector<std::string_view> lines = Split(text, '\n');
  if (lines.empty() || lines[0] != kCsvHeader) {
    return absl::InvalidArgumentError("CSV header does not match record schema");
  }
  for (size_t i = 1; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (line.empty()) continue;
    if (line.starts_with(kTruncationMarker)) {
      file.truncated = true;
      continue;
    }
    std::vector<std::string_view> f = Split(line, ',');
    EpisodeRecord r;
    int suboptimal = 0;
    if (f.size() != 9 || !ParseNumber(f[0], &r.replica) ||
        !ParseNumber(f[1], &r.episode) ||
        !ParseNumber(f[2], &r.policy_value) ||
        !ParseNumber(f[3], &r.optimal_value) ||
        !ParseNumber(f[4], &r.gap) ||
        !ParseNumber(f[5], &r.cum_regret) ||
        !ParseNumber(f[6], &suboptimal) ||
        !ParseNumber(f[7], &r.clamped_entries) ||
        !ParseNumber(f[8], &r.min_visit_release)) {
      return absl::InvalidArgumentError(
          StrCat("malformed record on line ", i + 1));
    }
    r.suboptimal = suboptimal != 0;
    file.records.push_back(r);
  }
  return file;
}

int64_t PacCount(const std::vector<EpisodeRecord>& records, double alpha) {
  int64_t count = 0;
  for (const auto& r : records) {
    if (IsSuboptimal(r.gap, alpha)) ++count;
  }
  return count;
}

std::vector<RegretPoint> RegretCurve(const std::vector<EpisodeRecord>& records) {
  std::vector<RegretPoint> curve;
  curve.reserve(records.size());
  double total = 0.0;
  for (const auto& r : records) {
    total += r.gap;
    curve.push_back({r.episode, total});
  }
  return curve;
}

SummaryRow Summarize(const ExperimentResult& result, double epsilon,
                     double alpha) {
  SummaryRow row;
  row.epsilon = epsilon;
  row.replicas = static_cast<int>(result.replicas.size());
  std::vector<double> finals;
  double pac_total = 0.0;
  for (const auto& rep : result.replicas) {
    const auto curve = RegretCurve(rep.records);
    finals.push_back(curve.empty() ? 0.0 : curve.back().cum_regret);
    pac_total += static_cast<double>(PacCount(rep.records, alpha));
  }
  if (finals.empty()) return row;
  double sum = 0.0;
  for (double f : finals) sum += f;
  row.mean_final_regret = sum / finals.size();
  if (finals.size() > 1) {
    double ss = 0.0;
    for (double f : finals) ss += (f - row.mean_final_regret) * (f - row.mean_final_regret);
    row.std_final_regret = std::sqrt(ss / (finals.size() - 1));
  }
  row.mean_pac_count = pac_total / finals.size();
  return row;
}

std::string EpsilonLabel(double epsilon) {
  if (std::isinf(epsilon)) return "inf";
  return FormatDouble(epsilon);
}

std::string FormatSummaryCsv(const std::vector<SummaryRow>& rows) {
  std::string out = StrCat(kSummaryHeader, "\n");
  for (const auto& r : rows) {
    StrAppend(&out, EpsilonLabel(r.epsilon), ",",
                    FormatDouble(r.mean_final_regret), ",",
                    FormatDouble(r.std_final_regret), ",",
                    FormatDouble(r.mean_pac_count), ",", r.replicas, "\n");
  }
  return out;
}

absl::StatusOr<std::vector<SummaryRow>> Sweep(
    const ExperimentConfig& config_template, const std::vector<double>& epsilons) {
  if (epsilons.empty()) return absl::InvalidArgumentError("epsilon list is empty");
  const std::string dir = config_template.output_path;
  if (!dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) return absl::UnavailableError(StrCat("cannot create '", dir, "'"));
  }
  std::vector<SummaryRow> rows;
  for (double eps : epsilons) {
    ExperimentConfig cfg = config_template;
    cfg.agent.kind = AgentSpec::Kind::kPucb;
    cfg.agent.epsilon = eps;
    cfg.output_path =
        dir.empty() ? "" : (std::filesystem::path(dir) /
                            StrCat("eps_", EpsilonLabel(eps), ".csv"))
                               .string();
    cfg.format = OutputFormat::kCsv;
    auto result = RunExperiment(cfg);
    if (!result.ok()) return result.status();
    for (const auto& rep : result->replicas) {
      if (rep.truncated) {
        return absl::InternalError(StrCat("epsilon ", EpsilonLabel(eps),
                                                " replica ", rep.replica,
                                                ": ", rep.error));
      }
    }
    rows.push_back(Summarize(*result, eps, cfg.alpha));
  }
  if (!dir.empty()) {
    auto s = WriteFile((std::filesystem::path(dir) / "summary.csv").string(),
                       FormatSummaryCsv(rows));
    if (!s.ok()) return s;
  }
  return rows;
}

GapAuditEntry AuditEpisodeGap(const TabularMdp& mdp, const Policy& policy,
                              const QTable& conf, const EpisodeRecord& record,
                              double tolerance) {
  const QTable w = VisitationProbs(mdp, policy);
  double bound = 0.0;
  for (size_t i = 0; i < w.data().size(); ++i) {
    bound += w.data()[i] * conf.data()[i];
  }
  return {record.episode, record.gap, bound, record.gap > bound + tolerance};
}

absl::StatusOr<GapAuditReport> RunGapAudit(const ExperimentConfig& config,
                                           int replica) {
  if (auto s = config.Validate(); !s.ok()) return s;
  if (config.agent.kind == AgentSpec::Kind::kRandom) {
    return absl::InvalidArgumentError("gap audit needs an optimistic agent");
  }
  auto mdp = BuildEnvironment(config.env);
  if (!mdp.ok()) return mdp.status();
  const OptimalSolution optimal = OptimalValues(*mdp);
  GapAuditReport report;
  ExperimentConfig cfg = config;
  cfg.output_path.clear();
  ReplicaResult rep = RunReplica(
      cfg, *mdp, optimal, replica, [&report](const EpisodeContext& ctx) {
        const QTables* tables = ctx.agent.LastTables();
        GapAuditEntry e =
            AuditEpisodeGap(ctx.mdp, ctx.policy, tables->conf, ctx.record);
        ++report.episodes;
        if (e.violated) ++report.violations;
        report.entries.push_back(e);
      });
  if (rep.truncated) return absl::InternalError(rep.error);
  return report;
}

}  // namespace privrl
