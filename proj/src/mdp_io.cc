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

#include "privrl/mdp_io.h"

#include <fstream>
#include <sstream>

#include "privrl/strings.h"
#include "json.hpp"

namespace privrl {
namespace {

using nlohmann::json;

constexpr char kFormat[] = "privrl-mdp";
constexpr int kVersion = 1;

absl::StatusOr<RewardKind> ParseRewardKind(const std::string& name) {
  for (RewardKind kind : {RewardKind::kBernoulli, RewardKind::kDeterministic,
                          RewardKind::kTransitionCoupled}) {
    if (name == RewardKindName(kind)) return kind;
  }
  return absl::InvalidArgumentError(StrCat("unknown reward_kind '", name, "'"));
}

bool HasLength(const json& j, int n) {
  return j.is_array() && static_cast<int>(j.size()) == n;
}

}  // namespace

std::string MdpToJson(const TabularMdp& mdp) {
  const int S = mdp.num_states(), A = mdp.num_actions(), H = mdp.horizon();
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["S"] = S;
  doc["A"] = A;
  doc["H"] = H;
  doc["p0"] = mdp.initial_dist();
  json transitions = json::array();
  json rewards = json::array();
  for (int s = 0; s < S; ++s) {
    json ts = json::array(), rs = json::array();
    for (int a = 0; a < A; ++a) {
      json ta = json::array(), ra = json::array();
      for (int h = 0; h < H; ++h) {
        const auto row = mdp.transition_row(s, a, h);
        ta.push_back(std::vector<double>(row.begin(), row.end()));
        ra.push_back(mdp.mean_reward(s, a, h));
      }
      ts.push_back(std::move(ta));
      rs.push_back(std::move(ra));
    }
    transitions.push_back(std::move(ts));
    rewards.push_back(std::move(rs));
  }
  doc["transitions"] = std::move(transitions);
  doc["rewards"] = std::move(rewards);
  doc["reward_kind"] = RewardKindName(mdp.reward_kind());
  if (mdp.reward_kind() == RewardKind::kTransitionCoupled) {
    doc["success_state"] = mdp.success_state();
  }
  return doc.dump(1) + "\n";
}

absl::StatusOr<TabularMdp> MdpFromJson(std::string_view text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return absl::InvalidArgumentError("MDP document is not a JSON object");
  }
  if (doc.value("format", "") != kFormat) {
    return absl::InvalidArgumentError("missing or wrong 'format' field");
  }
  if (doc.value("version", 0) != kVersion) {
    return absl::InvalidArgumentError("unsupported MDP document version");
  }
  try {
    const int S = doc.at("S").get<int>();
    const int A = doc.at("A").get<int>();
    const int H = doc.at("H").get<int>();
    if (S < 1 || A < 1 || H < 1) {
      return absl::InvalidArgumentError("S, A and H must be positive");
    }
    TabularMdp mdp(S, A, H);
    const json& p0 = doc.at("p0");
    const json& transitions = doc.at("transitions");
    const json& rewards = doc.at("rewards");
    if (!HasLength(p0, S)) return absl::InvalidArgumentError("p0 must have S entries");
    if (!HasLength(transitions, S) || !HasLength(rewards, S)) {
      return absl::InvalidArgumentError("transitions/rewards must have S rows");
    }
    for (int s = 0; s < S; ++s) {
      mdp.initial_dist()[s] = p0[s].get<double>();
      if (!HasLength(transitions[s], A) || !HasLength(rewards[s], A)) {
        return absl::InvalidArgumentError(StrCat("state ", s, ": expected A entries"));
      }
      for (int a = 0; a < A; ++a) {
        if (!HasLength(transitions[s][a], H) || !HasLength(rewards[s][a], H)) {
          return absl::InvalidArgumentError(
              StrCat("state ", s, " action ", a, ": expected H entries"));
        }
        for (int h = 0; h < H; ++h) {
          const json& row = transitions[s][a][h];
          if (!HasLength(row, S)) {
            return absl::InvalidArgumentError(StrCat(
                "transition row (", s, ",", a, ",", h, ") must have S entries"));
          }
          for (int next = 0; next < S; ++next) {
            mdp.transition(s, a, h, next) = row[next].get<double>();
          }
          mdp.mean_reward(s, a, h) = rewards[s][a][h].get<double>();
        }
      }
    }
    auto kind = ParseRewardKind(doc.at("reward_kind").get<std::string>());
    if (!kind.ok()) return kind.status();
    mdp.set_reward_kind(*kind, *kind == RewardKind::kTransitionCoupled
                                   ? doc.at("success_state").get<int>()
                                   : -1);
    return mdp;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(StrCat("malformed MDP document: ", e.what()));
  }
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(StrCat("cannot open '", path, "'"));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

absl::Status WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::UnavailableError(StrCat("cannot write '", path, "'"));
  out << contents;
  out.flush();
  if (!out) return absl::DataLossError(StrCat("short write to '", path, "'"));
  return absl::OkStatus();
}

absl::Status SaveMdp(const TabularMdp& mdp, const std::string& path) {
  return WriteFile(path, MdpToJson(mdp));
}

absl::StatusOr<TabularMdp> LoadMdp(const std::string& path) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  return MdpFromJson(*text);
}

}  // namespace privrl
