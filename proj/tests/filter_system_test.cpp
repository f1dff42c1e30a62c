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

#include "memcap/filter_system.hpp"

#include <random>

#include "gtest/gtest.h"

using namespace memcap;

TEST(filter_system, closed_form_maps_for_correlated_family) {
    FilterSystem f(ChannelParams::from_physical(2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0));
    for (int i = 0; i <= 20; ++i) {
        double b = i / 20.0;
        EXPECT_NEAR(f.f1(b), (3 + 12 * b) / (8 + 8 * b), 1e-14) << b;
        EXPECT_NEAR(f.c1(b), (4 + 4 * b) / 9, 1e-14) << b;
        EXPECT_EQ(f.f2(b), 0.0) << b;
        EXPECT_NEAR(f.c2(b), (5 - 4 * b) / 9, 1e-14) << b;
    }
}

TEST(filter_system, memoryless_maps_are_constant) {
    for (auto [a, d] : {std::pair{2.0 / 3.0, 1.0 / 3.0}, std::pair{0.6, 0.2}, std::pair{0.8, -0.1}}) {
        FilterSystem f(ChannelParams::from_physical(0.0, a, d));
        double x0 = a + d;
        double x1 = a - d;
        for (double b : {0.0, 0.3, 0.77, 1.0}) {
            EXPECT_NEAR(f.f1(b), x0 / (x0 + x1), 1e-15);
            EXPECT_NEAR(f.f2(b), (1 - x0) / (2 - x0 - x1), 1e-15);
            EXPECT_NEAR(f.c1(b), a, 1e-15);
        }
    }
}

TEST(filter_system, fixed_points_correlated_family) {
    FilterSystem f(ChannelParams::from_physical(2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0));
    EXPECT_NEAR(f.a1(), (1 + std::sqrt(7.0)) / 4, 1e-15);
    EXPECT_NEAR(f.a1(), 0.911438, 1e-6);
    EXPECT_EQ(f.a2(), 0.0);
    auto both = fixed_points(f);
    EXPECT_EQ(both[0], f.a1());
}

TEST(filter_system, fixed_points_memoryless) {
    FilterSystem f(ChannelParams::from_physical(0.0, 2.0 / 3.0, 1.0 / 3.0));
    EXPECT_NEAR(f.a1(), 0.75, 1e-15);
    EXPECT_EQ(f.a2(), 0.0);
}

TEST(filter_system, fixed_points_identical_subchannels) {
    for (double s : {-0.8, 0.1, 0.6}) {
        for (double x : {0.4, 0.8}) {
            FilterSystem f(ChannelParams::from_physical(s, x, 0.0));
            EXPECT_NEAR(f.a1(), 0.5, 1e-15);
            EXPECT_NEAR(f.a2(), 0.5, 1e-15);
        }
    }
}

TEST(filter_system, inert_branch) {
    // Noiseless: flips never happen.
    FilterSystem f(ChannelParams::from_physical(0.4, 1.0, 0.0));
    EXPECT_FALSE(f.inert(0));
    EXPECT_TRUE(f.inert(1));
    EXPECT_TRUE(std::isnan(f.a2()));
    EXPECT_EQ(f.c2(0.3), 0.0);
    EXPECT_EQ(f.c1(0.3), 1.0);
}

TEST(filter_system, invariants_on_random_params) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        double x0 = 1.0 / 3.0 + (2.0 / 3.0) * u(rng);
        double x1 = 1.0 / 3.0 + (2.0 / 3.0) * u(rng);
        double q00 = 0.01 + 0.98 * u(rng);
        double q10 = 0.01 + 0.98 * u(rng);
        auto p = trial % 2 ? ChannelParams::from_physical(-0.99 + 1.98 * u(rng), (x0 + x1) / 2, (x0 - x1) / 2)
                           : ChannelParams::from_raw({{{q00, 1 - q00}, {q10, 1 - q10}}}, x0, x1);
        FilterSystem f(p);
        for (int k = 0; k < 2; ++k) {
            if (f.inert(k)) {
                continue;
            }
            double a = f.fixed_point(k);
            EXPECT_GE(a, 0.0);
            EXPECT_LE(a, 1.0);
            EXPECT_NEAR(f.shrink(k, a), a, 1e-12) << "trial " << trial << " branch " << k;
        }
        for (int i = 0; i <= 10; ++i) {
            double b = i / 10.0;
            EXPECT_NEAR(f.c1(b) + f.c2(b), 1.0, 1e-14);
            EXPECT_NEAR(f.c1(b),
                        f.predict_channel0(b) * p.x(0, 0) + f.predict_channel1(b) * p.x(1, 0), 1e-15);
            for (int k = 0; k < 2; ++k) {
                EXPECT_GE(f.shrink(k, b), 0.0);
                EXPECT_LE(f.shrink(k, b), 1.0);
            }
        }
    }
}

TEST(filter_system, derivative_matches_finite_difference) {
    FilterSystem f(ChannelParams::from_physical(0.45, 0.55, 0.15));
    for (int k = 0; k < 2; ++k) {
        for (double b : {0.1, 0.5, 0.9}) {
            double h = 1e-6;
            double fd = (f.shrink(k, b + h) - f.shrink(k, b - h)) / (2 * h);
            EXPECT_NEAR(f.shrink_derivative(k, b), fd, 1e-8);
        }
    }
}
