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

#include "privrl/config.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

#include "privrl/strings.h"
#include "json.hpp"
#include "privrl/counters.h"
#include "privrl/mdp_io.h"

namespace privrl {
namespace {

using nlohmann::json;

json EpsilonJson(double eps) {
  return std::isinf(eps) ? json("inf") : json(eps);
}

absl::StatusOr<double> EpsilonFromJson(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return ParseEpsilon(j.get<std::string>());
  return absl::InvalidArgumentError("epsilon must be a number or \"inf\"");
}

absl::Status CheckKeys(const json& obj, const std::set<std::string>& allowed,
                       std::string_view where) {
  if (!obj.is_object()) {
    return absl::InvalidArgumentError(StrCat(where, " must be an object"));
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.contains(it.key())) {
      return absl::InvalidArgumentError(
          StrCat("unknown key '", it.key(), "' in ", where));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<EnvSpec> EnvFromJson(const json& j) {
  EnvSpec env;
  const std::string name = j.value("name", "chain");
  if (name == "hard_mdp") {
    if (auto s = CheckKeys(j, {"name", "n", "m", "alpha_prime", "H", "I"}, "env");
        !s.ok())
      return s;
    env.kind = EnvSpec::Kind::kHardMdp;
    env.hard.n = j.value("n", env.hard.n);
    env.hard.m = j.value("m", env.hard.m);
    env.hard.alpha_prime = j.value("alpha_prime", env.hard.alpha_prime);
    env.hard.horizon = j.value("H", env.hard.horizon);
    env.hard.optimal_arms = j.value("I", std::vector<int>(env.hard.n, 1));
  } else if (name == "random_mdp") {
    if (auto s = CheckKeys(j, {"name", "S", "A", "H", "concentration", "seed"}, "env");
        !s.ok())
      return s;
    env.kind = EnvSpec::Kind::kRandomMdp;
    env.num_states = j.value("S", env.num_states);
    env.num_actions = j.value("A", env.num_actions);
    env.horizon = j.value("H", env.horizon);
    env.concentration = j.value("concentration", env.concentration);
    env.generator_seed = j.value("seed", env.generator_seed);
  } else if (name == "chain") {
    if (auto s = CheckKeys(j, {"name", "H"}, "env"); !s.ok()) return s;
    env.kind = EnvSpec::Kind::kChain;
    env.horizon = j.value("H", env.horizon);
  } else if (name == "file") {
    if (auto s = CheckKeys(j, {"name", "path"}, "env"); !s.ok()) return s;
    env.kind = EnvSpec::Kind::kFile;
    env.path = j.at("path").get<std::string>();
  } else {
    return absl::InvalidArgumentError(StrCat("unknown env name '", name, "'"));
  }
  return env;
}

json EnvToJson(const EnvSpec& env) {
  switch (env.kind) {
    case EnvSpec::Kind::kHardMdp:
      return {{"name", "hard_mdp"},     {"n", env.hard.n},
              {"m", env.hard.m},        {"alpha_prime", env.hard.alpha_prime},
              {"H", env.hard.horizon},  {"I", env.hard.optimal_arms}};
    case EnvSpec::Kind::kRandomMdp:
      return {{"name", "random_mdp"},
              {"S", env.num_states},
              {"A", env.num_actions},
              {"H", env.horizon},
              {"concentration", env.concentration},
              {"seed", env.generator_seed}};
    case EnvSpec::Kind::kChain:
      return {{"name", "chain"}, {"H", env.horizon}};
    case EnvSpec::Kind::kFile:
      return {{"name", "file"}, {"path", env.path}};
  }
  return json::object();
}

}  // namespace

absl::StatusOr<double> ParseEpsilon(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "inf" || lower == "infinity") return kNoPrivacy;
  double v;
  if (!ParseNumber(text, &v)) {
    return absl::InvalidArgumentError(StrCat("bad epsilon '", text, "'"));
  }
  return v;
}

std::string ConfigToJson(const ExperimentConfig& c) {
  json doc;
  doc["env"] = EnvToJson(c.env);
  doc["agent"] = {{"kind", AgentKindName(c.agent.kind)},
                  {"epsilon", EpsilonJson(c.agent.epsilon)},
                  {"beta", c.agent.beta}};
  doc["episodes"] = c.episodes;
  doc["alpha"] = c.alpha;
  doc["replicas"] = c.replicas;
  doc["seed"] = c.seed;
  doc["out"] = c.output_path;
  doc["format"] = c.format == OutputFormat::kCsv ? "csv" : "json";
  doc["workers"] = c.workers;
  json eps = json::array();
  for (double e : c.epsilons) eps.push_back(EpsilonJson(e));
  doc["epsilons"] = eps;
  return doc.dump(2) + "\n";
}

absl::StatusOr<ExperimentConfig> ConfigFromJson(std::string_view text) {
  json doc = json::parse(text, nullptr, false, /*ignore_comments=*/true);
  if (doc.is_discarded()) return absl::InvalidArgumentError("config is not valid JSON");
  if (auto s = CheckKeys(doc,
                         {"env", "agent", "episodes", "alpha", "replicas",
                          "seed", "out", "format", "workers", "epsilons"},
                         "config");
      !s.ok())
    return s;
  ExperimentConfig c;
  try {
    if (doc.contains("env")) {
      auto env = EnvFromJson(doc["env"]);
      if (!env.ok()) return env.status();
      c.env = *env;
    }
    if (doc.contains("agent")) {
      const json& a = doc["agent"];
      if (auto s = CheckKeys(a, {"kind", "epsilon", "beta"}, "agent"); !s.ok()) return s;
      const std::string kind = a.value("kind", "pucb");
      if (kind == "pucb") {
        c.agent.kind = AgentSpec::Kind::kPucb;
      } else if (kind == "ubev") {
        c.agent.kind = AgentSpec::Kind::kUbev;
      } else if (kind == "random") {
        c.agent.kind = AgentSpec::Kind::kRandom;
      } else {
        return absl::InvalidArgumentError(StrCat("unknown agent kind '", kind, "'"));
      }
      if (a.contains("epsilon")) {
        auto eps = EpsilonFromJson(a["epsilon"]);
        if (!eps.ok()) return eps.status();
        c.agent.epsilon = *eps;
      }
      c.agent.beta = a.value("beta", c.agent.beta);
    }
    c.episodes = doc.value("episodes", c.episodes);
    c.alpha = doc.value("alpha", c.alpha);
    c.replicas = doc.value("replicas", c.replicas);
    c.seed = doc.value("seed", c.seed);
    c.output_path = doc.value("out", c.output_path);
    const std::string format = doc.value("format", "csv");
    if (format == "csv") {
      c.format = OutputFormat::kCsv;
    } else if (format == "json") {
      c.format = OutputFormat::kJson;
    } else {
      return absl::InvalidArgumentError(StrCat("unknown format '", format, "'"));
    }
    c.workers = doc.value("workers", c.workers);
    if (doc.contains("epsilons")) {
      for (const json& e : doc["epsilons"]) {
        auto eps = EpsilonFromJson(e);
        if (!eps.ok()) return eps.status();
        c.epsilons.push_back(*eps);
      }
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(StrCat("malformed config: ", e.what()));
  }
  return c;
}

absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ConfigFromJson(*text);
}

}  // namespace privrl
