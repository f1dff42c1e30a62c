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

#include <stdexcept>
#include <string>

namespace memcap {

/// Channel parameters outside the admissible region (CP window, forgetfulness,
/// stochasticity) or an out-of-range size argument.
class InvalidParameters : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// The measure iteration did not settle within the iteration limit.
class NonConvergence : public std::runtime_error {
   public:
    NonConvergence(const std::string &what, double previous, double last)
        : std::runtime_error(what), previous_value(previous), last_value(last) {
    }
    double previous_value;
    double last_value;
};

/// Atom count exceeded the configured budget after merging and pruning.
class BudgetExceeded : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace memcap
