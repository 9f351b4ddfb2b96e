/*
 *
 * Copyright 2026 The HYDRA-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#include <gtest/gtest.h>

#include "hydra/sim/model_check.hpp"

namespace hydra::sim {
namespace {

TEST(ModelCheckTest, ShallowSearchIsClean) {
  ConfinementSystem sys = BuildConfinementSystem();
  ModelCheckOptions options;
  options.max_depth = 3;
  ModelCheckResult r = CheckAuthorityConfinement(sys.kernel, sys.actors, options);
  EXPECT_TRUE(r.ok()) << r.violations.front();
  EXPECT_TRUE(r.exhaustive);
  EXPECT_EQ(r.depth_reached, 3);
  EXPECT_GT(r.states, 1000u);
  EXPECT_GT(r.probes, r.states);
}

TEST(ModelCheckTest, SetupMatchesDescription) {
  ConfinementSystem sys = BuildConfinementSystem();
  EXPECT_EQ(sys.kernel.ProcessIds().size(), 3u);
  ASSERT_EQ(sys.actors.size(), 2u);
  std::size_t user_frames = 0;
  for (auto f : sys.kernel.Frames()) user_frames += !sys.kernel.IsKernelFrame(f);
  EXPECT_EQ(user_frames, 8u);
}

TEST(ModelCheckTest, DetectsLeakedKeyFrame) {
  ConfinementSystem sys = BuildConfinementSystem(ConfinementFixture::kLeakKeyFrame);
  ModelCheckOptions options;
  options.max_depth = 1;
  EXPECT_FALSE(CheckAuthorityConfinement(sys.kernel, sys.actors, options).ok());
}

TEST(ModelCheckTest, DetectsLeakedTcb) {
  ConfinementSystem sys = BuildConfinementSystem(ConfinementFixture::kLeakTcb);
  ModelCheckOptions options;
  options.max_depth = 1;
  EXPECT_FALSE(CheckAuthorityConfinement(sys.kernel, sys.actors, options).ok());
}

TEST(ModelCheckTest, DetectsMissingCapabilityChecks) {
  Protections weak;
  weak.capability_checks = false;
  ConfinementSystem sys = BuildConfinementSystem(ConfinementFixture::kHonest, weak);
  ModelCheckOptions options;
  options.max_depth = 0;
  ModelCheckResult r = CheckAuthorityConfinement(sys.kernel, sys.actors, options);
  EXPECT_FALSE(r.ok());
}

TEST(ModelCheckTest, StateLimitMarksSearchIncomplete) {
  ConfinementSystem sys = BuildConfinementSystem();
  ModelCheckOptions options;
  options.state_limit = 50;
  ModelCheckResult r = CheckAuthorityConfinement(sys.kernel, sys.actors, options);
  EXPECT_FALSE(r.exhaustive);
  EXPECT_EQ(r.states, 50u);
}

}  // namespace
}  // namespace hydra::sim
