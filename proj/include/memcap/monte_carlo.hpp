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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "memcap/channel_model.hpp"
#include "memcap/entropy.hpp"
#include "memcap/estimate.hpp"
#include "memcap/filter_system.hpp"

namespace memcap {

/// splitmix64 finalizer; used to derive independent per-task seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

struct MonteCarloOptions {
    std::size_t batches = 100;
};

/// Samples the joint chain from tau and averages the exact predictive
/// surprisal -log2 p(y_t | y_1..y_{t-1}), tracked with the filter maps.
/// Standard error from batch means. Deterministic for a fixed seed.
inline EntropyEstimate mc_entropy_rate(const JointChainModel &model, std::size_t steps, std::uint64_t seed,
                                       const MonteCarloOptions &opts = {}) {
    if (steps < 1) {
        throw InvalidParameters("monte carlo needs at least one step");
    }
    const auto &p = model.params;
    FilterSystem filter(p);
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto draw = [&](double p_zero) { return uniform() < p_zero ? 0 : 1; };

    std::size_t batches = std::clamp<std::size_t>(opts.batches, 1, steps);
    std::vector<double> batch_sum(batches, 0.0);
    CompensatedSum total;

    int channel = draw(model.gamma[0]);
    double belief = model.gamma[0];
    for (std::size_t b = 0, t = 0; b < batches; ++b) {
        std::size_t end = (b + 1) * steps / batches;
        CompensatedSum batch;
        for (; t < end; ++t) {
            if (t > 0) {
                channel = draw(p.q(channel, 0));
            }
            int symbol = draw(p.x_noerr(channel));
            double surprisal = -std::log2(filter.weight(symbol, belief));
            belief = filter.shrink(symbol, belief);
            batch += surprisal;
        }
        batch_sum[b] = batch.value();
        total += batch.value();
    }

    EntropyEstimate e;
    e.value = total.value() / static_cast<double>(steps);
    e.method = Method::monte_carlo;
    e.meta = steps;
    if (batches < 2) {
        e.standard_error = std::numeric_limits<double>::infinity();
        return e;
    }
    std::vector<double> means(batches);
    for (std::size_t b = 0; b < batches; ++b) {
        std::size_t begin = b * steps / batches;
        std::size_t end = (b + 1) * steps / batches;
        means[b] = batch_sum[b] / static_cast<double>(end - begin);
    }
    double m = 0.0;
    for (double v : means) {
        m += v;
    }
    m /= static_cast<double>(batches);
    double ss = 0.0;
    for (double v : means) {
        ss += (v - m) * (v - m);
    }
    e.standard_error = std::sqrt(ss / static_cast<double>(batches * (batches - 1)));
    return e;
}

}  // namespace memcap
