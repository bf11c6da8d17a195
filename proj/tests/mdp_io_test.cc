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

#include <filesystem>

#include <gtest/gtest.h>
#include "privrl/envs.h"

namespace privrl {
namespace {

TEST(MdpIoTest, RoundTripsEveryRewardKind) {
  std::vector<TabularMdp> mdps;
  mdps.push_back(*HardMdp({2, 1, 0.2, 3, {1, 0}}));
  mdps.push_back(*RandomMdp(3, 2, 4, 0.3, 5));
  mdps.push_back(*ChainFixture(3));
  for (const TabularMdp& mdp : mdps) {
    auto back = MdpFromJson(MdpToJson(mdp));
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_TRUE(*back == mdp);
  }
}

TEST(MdpIoTest, SaveAndLoad) {
  const std::string path =
      (std::filesystem::temp_directory_path() / "privrl_mdp_io_test.json").string();
  const TabularMdp mdp = *RandomMdp(2, 2, 2, 1.0, 1);
  ASSERT_TRUE(SaveMdp(mdp, path).ok());
  auto back = LoadMdp(path);
  ASSERT_TRUE(back.ok());
  EXPECT_TRUE(*back == mdp);
  std::filesystem::remove(path);
  EXPECT_EQ(LoadMdp(path).status().code(), absl::StatusCode::kNotFound);
}

TEST(MdpIoTest, RejectsMalformedDocuments) {
  EXPECT_FALSE(MdpFromJson("not json").ok());
  EXPECT_FALSE(MdpFromJson(R"({"format":"other","version":1})").ok());
  EXPECT_FALSE(MdpFromJson(R"({"format":"privrl-mdp","version":9})").ok());
  // Transition tensor has the wrong shape for S = 1.
  EXPECT_FALSE(MdpFromJson(R"({"format":"privrl-mdp","version":1,"S":1,"A":1,
      "H":1,"p0":[1],"transitions":[[[[0.5,0.5]]]],"rewards":[[[0]]],
      "reward_kind":"bernoulli"})").ok());
}

TEST(MdpIoTest, LoadsInvalidButWellFormedMdp) {
  // Shape checks only; probability checks belong to Validate.
  auto mdp = MdpFromJson(R"({"format":"privrl-mdp","version":1,"S":1,"A":1,
      "H":1,"p0":[1],"transitions":[[[[0.9]]]],"rewards":[[[0.5]]],
      "reward_kind":"bernoulli"})");
  ASSERT_TRUE(mdp.ok()) << mdp.status();
  EXPECT_FALSE(Validate(*mdp).ok());
}

}  // namespace
}  // namespace privrl
