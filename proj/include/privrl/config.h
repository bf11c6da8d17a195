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

// Experiment configuration documents.
//
// A config file is a JSON object. Every key is optional and unknown keys
// are rejected:
//
//   {
//     "env": {"name": "hard_mdp", "n": 3, "m": 2, "alpha_prime": 0.3,
//             "H": 3, "I": [1, 2, 1]},
//          | {"name": "random_mdp", "S": 4, "A": 2, "H": 3,
//             "concentration": 1.0, "seed": 7}
//          | {"name": "chain", "H": 3}
//          | {"name": "file", "path": "mdp.json"},
//     "agent": {"kind": "pucb" | "ubev" | "random",
//               "epsilon": 1.0 | "inf", "beta": 0.1},
//     "episodes": 1000, "alpha": 0.1, "replicas": 4, "seed": 1,
//     "out": "runs/pucb.csv", "format": "csv" | "json", "workers": 1,
//     "epsilons": [0.1, 1, 10, "inf"]
//   }
//
// An epsilon of "inf" selects noise-free counters (no privacy).

#ifndef PRIVRL_CONFIG_H_
#define PRIVRL_CONFIG_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "privrl/harness.h"

namespace privrl {

std::string ConfigToJson(const ExperimentConfig& config);
absl::StatusOr<ExperimentConfig> ConfigFromJson(std::string_view text);
absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path);

// Parses "inf"/"infinity" or a decimal number.
absl::StatusOr<double> ParseEpsilon(std::string_view text);

}  // namespace privrl

#endif  // PRIVRL_CONFIG_H_
