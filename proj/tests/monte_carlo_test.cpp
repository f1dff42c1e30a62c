// Copyright 2026 The memcap Authors
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

#include "memcap/monte_carlo.hpp"

#include "gtest/gtest.h"

using namespace memcap;

TEST(monte_carlo, memoryless_reference) {
    auto m = build_joint_chain(ChannelParams::from_physical(0.0, 2.0 / 3.0, 1.0 / 3.0));
    auto e = mc_entropy_rate(m, 1'000'000, 1);
    EXPECT_EQ(e.method, Method::monte_carlo);
    EXPECT_EQ(e.meta, 1'000'000u);
    EXPECT_GT(e.standard_error, 0.0);
    EXPECT_LT(e.standard_error, 2e-3);
    EXPECT_NEAR(e.value, 0.918296, 3 * e.standard_error);
}

TEST(monte_carlo, identical_subchannels_reference) {
    auto m = build_joint_chain(ChannelParams::from_physical(0.6, 0.8, 0.0));
    auto e = mc_entropy_rate(m, 1'000'000, 2);
    EXPECT_NEAR(e.value, 0.721928, 3 * e.standard_error);
}

TEST(monte_carlo, same_seed_is_bitwise_reproducible) {
    auto m = build_joint_chain(ChannelParams::from_physical(0.7, 0.55, 0.2));
    auto a = mc_entropy_rate(m, 50'000, 99);
    auto b = mc_entropy_rate(m, 50'000, 99);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.standard_error, b.standard_error);
    auto c = mc_entropy_rate(m, 50'000, 100);
    EXPECT_NE(a.value, c.value);
}

TEST(monte_carlo, noiseless_has_zero_surprisal) {
    auto m = build_joint_chain(ChannelParams::from_physical(0.3, 1.0, 0.0));
    auto e = mc_entropy_rate(m, 10'000, 5);
    EXPECT_EQ(e.value, 0.0);
    EXPECT_EQ(e.standard_error, 0.0);
}

TEST(monte_carlo, few_steps) {
    auto m = build_joint_chain(ChannelParams::from_physical(0.3, 0.6, 0.1));
    auto e = mc_entropy_rate(m, 7, 5);
    EXPECT_TRUE(std::isfinite(e.value));
    EXPECT_TRUE(std::isfinite(e.standard_error));
    EXPECT_TRUE(std::isinf(mc_entropy_rate(m, 1, 5).standard_error));
    EXPECT_THROW(mc_entropy_rate(m, 0, 5), InvalidParameters);
}

TEST(monte_carlo, seed_mixing_spreads) {
    EXPECT_NE(mix_seed(1), mix_seed(2));
    EXPECT_NE(mix_seed(0), 0u);
}
