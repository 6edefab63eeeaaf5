// Copyright 2026 The ssdrbm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "ssdrbm/config.hpp"
#include "ssdrbm/errors.hpp"

namespace ssdrbm {
namespace {

TEST(Config, DefaultsWhenEmpty) {
  const RunConfig c = parse_config("");
  EXPECT_EQ(c.family, Family::bernoulli);
  EXPECT_EQ(c.n_hidden, 25);
  EXPECT_EQ(c.batch_size, 100);
  EXPECT_EQ(c.cd_k, 1);
  EXPECT_EQ(c.policy.w.rule, UpdateRule::sgd);
}

TEST(Config, ParsesKeysAndComments) {
  const RunConfig c = parse_config(
      "# experiment\n"
      "family = gaussian\n"
      "covariance = diagonal\n"
      "hidden = 7   # trailing comment\n"
      "optimizer = ssd\n"
      "step = 0.002\n"
      "b_rule = sgd\n"
      "b_step = 0.05\n"
      "schedule = exponential\n"
      "decay = 0.9\n"
      "decay_period = 100\n"
      "cd_mode = pcd\n"
      "cd_k = 10\n"
      "weight_cap = 3\n"
      "svd_mode = randomized\n"
      "svd_rank = 5\n");
  EXPECT_EQ(c.family, Family::gaussian);
  EXPECT_EQ(c.covariance, CovarianceKind::diagonal_log);
  EXPECT_EQ(c.n_hidden, 7);
  EXPECT_EQ(c.policy.w.rule, UpdateRule::ssd);
  EXPECT_EQ(c.policy.a.rule, UpdateRule::ssd);
  EXPECT_EQ(c.policy.b.rule, UpdateRule::sgd);
  EXPECT_DOUBLE_EQ(c.policy.w.schedule.base, 0.002);
  EXPECT_DOUBLE_EQ(c.policy.b.schedule.base, 0.05);
  EXPECT_EQ(c.policy.b.schedule.kind, StepSchedule::Kind::exponential);
  EXPECT_EQ(c.policy.w.schedule.period, 100);
  EXPECT_EQ(c.cd_mode, CdMode::pcd);
  EXPECT_EQ(c.cd_k, 10);
  ASSERT_TRUE(c.policy.weight_cap.has_value());
  EXPECT_DOUBLE_EQ(*c.policy.weight_cap, 3.0);
  EXPECT_EQ(c.policy.svd.kind, SvdMode::Kind::randomized);
  EXPECT_EQ(c.policy.svd.target_rank, 5);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config("bogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("hidden = 3\nhidden = 4\n"), ConfigError);
  EXPECT_THROW(parse_config("hidden = three\n"), ConfigError);
  EXPECT_THROW(parse_config("hidden = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("batch_size = -1\n"), ConfigError);
  EXPECT_THROW(parse_config("cd_k = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("step = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("family = poisson\n"), ConfigError);
  EXPECT_THROW(parse_config("no equals sign\n"), ConfigError);
  EXPECT_THROW(parse_config("dataset = idx\n"), ConfigError);
}

TEST(Config, RenderRoundTrips) {
  const RunConfig c = parse_config(
      "family = gaussian\ncovariance = full\noptimizer = nesterov\n"
      "momentum = 0.5\nw_rule = ssd\nw_step = 0.0123456789\nseed = 77\n"
      "iterations = 0\n");
  const std::string text = render_config(c);
  EXPECT_EQ(render_config(parse_config(text)), text);
}

}  // namespace
}  // namespace ssdrbm
