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

// privrl command-line entry point.
//
//   privrl run --config exp.json [--episodes N --epsilon E ...]
//   privrl sweep --config exp.json --epsilons 0.1,1,10,inf --out dir
//   privrl eval-mdp --mdp mdp.json | --config exp.json [--save mdp.json]
//   privrl plot a.csv b.csv --out regret.svg [--allow-partial]
//   privrl probe-privacy --epsilon 1 --length 64 --trials 100000
//
// Exit codes: 0 ok, 1 runtime error, 2 usage or config error. Errors are
// reported on stderr as a single "error: kind=<usage|runtime> message=..."
// line. PRIVRL_LOG=quiet|info|debug sets log verbosity (default info).

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "privrl/strings.h"
#include "privrl/config.h"
#include "privrl/counters.h"
#include "privrl/harness.h"
#include "privrl/mdp_io.h"
#include "privrl/plot.h"

namespace privrl {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int LogLevel() {
  const char* env = std::getenv("PRIVRL_LOG");
  if (env == nullptr) return 1;
  const std::string v = env;
  if (v == "quiet") return 0;
  if (v == "debug") return 2;
  return 1;
}

void Log(int level, std::string_view message) {
  if (level <= LogLevel()) std::cerr << message << "\n";
}

int Fail(int code, std::string_view message) {
  std::string flat(message);
  for (char& c : flat) {
    if (c == '\n') c = ' ';
  }
  std::cerr << "error: kind=" << (code == kExitUsage ? "usage" : "runtime")
            << " message=" << flat << "\n";
  return code;
}

int Fail(int code, const absl::Status& status) {
  return Fail(code, std::string(status.message()));
}

struct Overrides {
  std::optional<int64_t> episodes;
  std::optional<std::string> epsilon;
  std::optional<double> beta;
  std::optional<double> alpha;
  std::optional<uint64_t> seed;
  std::optional<int> replicas;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<int> workers;
  bool noise_free = false;
};

void AddOverrideFlags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--episodes", o.episodes, "Number of episodes T");
  cmd->add_option("--epsilon", o.epsilon, "Total privacy budget (or inf)");
  cmd->add_option("--beta", o.beta, "Failure probability");
  cmd->add_option("--alpha", o.alpha, "PAC accuracy threshold");
  cmd->add_option("--seed", o.seed, "Base seed");
  cmd->add_option("--replicas", o.replicas, "Replica count");
  cmd->add_option("--out", o.out, "Output path");
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--workers", o.workers, "Concurrent replicas");
  cmd->add_flag("--noise-free", o.noise_free,
                "Noise-free counters (epsilon = inf, NOT private)");
}

absl::StatusOr<ExperimentConfig> EffectiveConfig(const std::string& path,
                                                 const Overrides& o) {
  auto cfg = LoadConfig(path);
  if (!cfg.ok()) return cfg.status();
  if (o.episodes) cfg->episodes = *o.episodes;
  if (o.epsilon) {
    auto eps = ParseEpsilon(*o.epsilon);
    if (!eps.ok()) return eps.status();
    cfg->agent.epsilon = *eps;
  }
  if (o.beta) cfg->agent.beta = *o.beta;
  if (o.alpha) cfg->alpha = *o.alpha;
  if (o.seed) cfg->seed = *o.seed;
  if (o.replicas) cfg->replicas = *o.replicas;
  if (o.out) cfg->output_path = *o.out;
  if (o.format) cfg->format = *o.format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
  if (o.workers) cfg->workers = *o.workers;
  if (o.noise_free) cfg->agent.epsilon = kNoPrivacy;
  if (auto s = cfg->Validate(); !s.ok()) return s;
  return cfg;
}

int RunCommand(const std::string& config_path, const Overrides& o) {
  auto cfg = EffectiveConfig(config_path, o);
  if (!cfg.ok()) return Fail(kExitUsage, cfg.status());
  if (std::isinf(cfg->agent.epsilon) && cfg->agent.kind == AgentSpec::Kind::kPucb) {
    Log(1, "warning: noise-free counters, results are NOT private");
  }
  auto result = RunExperiment(*cfg);
  if (!result.ok()) {
    const bool usage = absl::IsInvalidArgument(result.status()) ||
                       absl::IsNotFound(result.status());
    return Fail(usage ? kExitUsage : kExitRuntime, result.status());
  }
  if (cfg->output_path.empty()) {
    if (cfg->format == OutputFormat::kCsv) std::cout << kCsvHeader << "\n";
    for (const auto& rep : result->replicas) {
      for (const auto& r : rep.records) {
        std::cout << (cfg->format == OutputFormat::kCsv ? FormatRecordCsv(r)
                                                        : FormatRecordJson(r))
                  << "\n";
      }
    }
  } else {
    if (auto s = WriteFile(cfg->output_path + ".config.json", ConfigToJson(*cfg));
        !s.ok()) {
      return Fail(kExitRuntime, s);
    }
  }
  int truncated = 0;
  for (const auto& rep : result->replicas) {
    if (rep.truncated) {
      ++truncated;
      Log(1, StrCat("replica ", rep.replica, " truncated: ", rep.error));
    }
  }
  const SummaryRow row = Summarize(*result, cfg->agent.epsilon, cfg->alpha);
  Log(1, StrCat("agent=", AgentKindName(cfg->agent.kind),
                      " epsilon=", EpsilonLabel(cfg->agent.epsilon),
                      " mean_final_regret=", row.mean_final_regret,
                      " mean_pac_count=", row.mean_pac_count));
  return truncated == 0 ? kExitOk : kExitRuntime;
}

int SweepCommand(const std::string& config_path, const Overrides& o,
                 const std::string& epsilons_flag) {
  auto cfg = EffectiveConfig(config_path, o);
  if (!cfg.ok()) return Fail(kExitUsage, cfg.status());
  std::vector<double> eps = cfg->epsilons;
  if (!epsilons_flag.empty()) {
    eps.clear();
    for (std::string_view part : Split(epsilons_flag, ',')) {
      auto e = ParseEpsilon(part);
      if (!e.ok() || !(*e > 0.0)) {
        return Fail(kExitUsage, StrCat("bad epsilon '", part, "'"));
      }
      eps.push_back(*e);
    }
  }
  if (eps.empty()) return Fail(kExitUsage, "sweep needs a nonempty epsilon list");
  auto rows = Sweep(*cfg, eps);
  if (!rows.ok()) return Fail(kExitRuntime, rows.status());
  if (!cfg->output_path.empty()) {
    cfg->epsilons = eps;
    (void)WriteFile(cfg->output_path + "/config.json", ConfigToJson(*cfg));
  }
  std::cout << FormatSummaryCsv(*rows);
  return kExitOk;
}

int EvalMdpCommand(const std::string& mdp_path, const std::string& config_path,
                   const std::string& save_path) {
  absl::StatusOr<TabularMdp> mdp;
  if (!mdp_path.empty()) {
    mdp = LoadMdp(mdp_path);
  } else if (!config_path.empty()) {
    auto cfg = LoadConfig(config_path);
    if (!cfg.ok()) return Fail(kExitUsage, cfg.status());
    mdp = BuildEnvironment(cfg->env);
  } else {
    return Fail(kExitUsage, "eval-mdp needs --mdp or --config");
  }
  if (!mdp.ok()) return Fail(kExitUsage, mdp.status());
  std::cout << "S=" << mdp->num_states() << " A=" << mdp->num_actions()
            << " H=" << mdp->horizon()
            << " reward_kind=" << RewardKindName(mdp->reward_kind()) << "\n";
  const ValidationReport report = Validate(*mdp);
  std::cout << "validation: " << report.ToString();
  if (!report.ok()) return kExitUsage;  // the input document is invalid
  const OptimalSolution sol = OptimalValues(*mdp);
  std::cout.precision(12);
  std::cout << "rho_star=" << sol.rho << "\n";
  for (int s = 0; s < mdp->num_states(); ++s) {
    std::cout << "V1[" << s << "]=" << sol.v.at(s, 0) << "\n";
  }
  if (!save_path.empty()) {
    if (auto s = SaveMdp(*mdp, save_path); !s.ok()) return Fail(kExitRuntime, s);
  }
  return kExitOk;
}

int PlotCommand(const std::vector<std::string>& inputs, const std::string& out,
                const std::string& title, bool allow_partial) {
  PlotOptions opts;
  if (!title.empty()) opts.title = title;
  opts.allow_partial = allow_partial;
  auto svg = PlotCsvFiles(inputs, opts);
  if (!svg.ok()) {
    const bool usage = absl::IsInvalidArgument(svg.status()) ||
                       absl::IsFailedPrecondition(svg.status()) ||
                       absl::IsNotFound(svg.status());
    return Fail(usage ? kExitUsage : kExitRuntime, svg.status());
  }
  if (out.empty()) {
    std::cout << *svg;
    return kExitOk;
  }
  if (auto s = WriteFile(out, *svg); !s.ok()) return Fail(kExitRuntime, s);
  return kExitOk;
}

int ProbeCommand(const std::string& epsilon_flag, int64_t length, int64_t trials,
                 uint64_t seed, int64_t position, bool identical, bool noise_free) {
  auto eps = ParseEpsilon(epsilon_flag);
  if (!eps.ok() || !(*eps > 0.0)) return Fail(kExitUsage, "epsilon must be > 0");
  if (noise_free) *eps = kNoPrivacy;
  if (length < 1 || position < 0 || position >= length) {
    return Fail(kExitUsage, "need length >= 1 and 0 <= position < length");
  }
  std::vector<double> a(length), b;
  for (int64_t i = 0; i < length; ++i) a[i] = static_cast<double>(i % 2);
  b = a;
  if (!identical) b[position] = 1.0 - b[position];
  PrivacyProbeOptions opts;
  opts.epsilon = *eps;
  opts.trials = trials;
  opts.seed = seed;
  auto report = EmpiricalPrivacyProbe(a, b, opts);
  if (!report.ok()) return Fail(kExitUsage, report.status());
  std::cout << report->ToJson();
  Log(1, StrCat("estimate=", report->estimate, " slack=", report->slack,
                      " bound=", report->epsilon + report->slack,
                      report->within_bound()          ? " ok"
                      : std::isinf(report->estimate) ? " UNBOUNDED (not private)"
                                                     : " EXCEEDED"));
  return kExitOk;
}

}  // namespace
}  // namespace privrl

int main(int argc, char** argv) {
  using namespace privrl;
  CLI::App app{"Private optimistic episodic RL toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides run_o, sweep_o;
  auto* run = app.add_subcommand("run", "Run an experiment");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  AddOverrideFlags(run, run_o);

  std::string epsilons_flag;
  auto* sweep = app.add_subcommand("sweep", "Run PUCB over a list of epsilons");
  sweep->add_option("--config", config_path, "Experiment config (JSON)")->required();
  sweep->add_option("--epsilons", epsilons_flag, "Comma-separated epsilons");
  AddOverrideFlags(sweep, sweep_o);

  std::string mdp_path, save_path;
  auto* eval = app.add_subcommand("eval-mdp", "Validate and solve an MDP");
  eval->add_option("--mdp", mdp_path, "MDP document");
  eval->add_option("--config", config_path, "Build the MDP from a config's env");
  eval->add_option("--save", save_path, "Write the MDP document here");

  std::vector<std::string> plot_inputs;
  std::string plot_out, plot_title;
  bool allow_partial = false;
  auto* plot = app.add_subcommand("plot", "Plot cumulative regret from CSVs");
  plot->add_option("inputs", plot_inputs, "Record CSVs")->required();
  plot->add_option("--out", plot_out, "SVG output path (default stdout)");
  plot->add_option("--title", plot_title, "Plot title");
  plot->add_flag("--allow-partial", allow_partial, "Accept truncated inputs");

  std::string probe_eps = "1";
  int64_t probe_length = 64, probe_trials = 100000, probe_position = 0;
  uint64_t probe_seed = 1;
  bool probe_identical = false, probe_noise_free = false;
  auto* probe = app.add_subcommand("probe-privacy", "Empirical counter privacy probe");
  probe->add_option("--epsilon", probe_eps, "Counter budget");
  probe->add_option("--length", probe_length, "Stream length T");
  probe->add_option("--trials", probe_trials, "Trials per stream");
  probe->add_option("--seed", probe_seed, "Seed");
  probe->add_option("--position", probe_position, "Index of the differing symbol");
  probe->add_flag("--identical", probe_identical, "Compare a stream with itself");
  probe->add_flag("--noise-free", probe_noise_free, "Disable noise");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    return Fail(kExitUsage, msg);
  }

  if (*run) return RunCommand(config_path, run_o);
  if (*sweep) return SweepCommand(config_path, sweep_o, epsilons_flag);
  if (*eval) return EvalMdpCommand(mdp_path, config_path, save_path);
  if (*plot) return PlotCommand(plot_inputs, plot_out, plot_title, allow_partial);
  if (*probe) {
    return ProbeCommand(probe_eps, probe_length, probe_trials, probe_seed,
                        probe_position, probe_identical, probe_noise_free);
  }
  return kExitUsage;
}
