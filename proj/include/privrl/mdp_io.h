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

// MDP documents.
//
// An MDP is stored as a JSON object:
//
//   {
//     "format": "privrl-mdp", "version": 1,
//     "S": 3, "A": 2, "H": 4,
//     "p0": [p_0, ..., p_{S-1}],
//     "transitions": [s][a][h][s'],   // nested arrays, S x A x H x S
//     "rewards": [s][a][h],           // mean rewards, S x A x H
//     "reward_kind": "bernoulli" | "deterministic" | "transition_coupled",
//     "success_state": 2              // only for transition_coupled
//   }
//
// Step indices h are zero-based. Parsing checks shapes only; use Validate()
// for the distribution invariants so that invalid files can be reported.

#ifndef PRIVRL_MDP_IO_H_
#define PRIVRL_MDP_IO_H_

#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privrl/mdp.h"

namespace privrl {

std::string MdpToJson(const TabularMdp& mdp);
absl::StatusOr<TabularMdp> MdpFromJson(std::string_view text);

absl::Status SaveMdp(const TabularMdp& mdp, const std::string& path);
absl::StatusOr<TabularMdp> LoadMdp(const std::string& path);

// Whole-file helpers shared by the other document readers.
absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, std::string_view contents);

}  // namespace privrl

#endif  // PRIVRL_MDP_IO_H_
