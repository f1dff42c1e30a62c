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

#include <cstddef>
#include <string_view>

namespace memcap {

enum class Method { block_ratio, block_difference, blackwell, monte_carlo };

constexpr std::string_view method_name(Method m) {
    switch (m) {
        case Method::block_ratio:
            return "block_ratio";
        case Method::block_difference:
            return "block_difference";
        case Method::blackwell:
            return "blackwell";
        case Method::monte_carlo:
            return "monte_carlo";
    }
    return "unknown";
}

/// Entropy rate in bits per channel use.
struct EntropyEstimate {
    double value = 0.0;
    Method method = Method::blackwell;
    /// Block length (oracle), generation count (blackwell) or steps (monte_carlo).
    std::size_t meta = 0;
    /// Last convergence increment.
    double delta = 0.0;
    /// Batch-means standard error; monte_carlo only.
    double standard_error = 0.0;
    /// Support size of the final measure; blackwell only.
    std::size_t atoms = 0;
};

}  // namespace memcap
