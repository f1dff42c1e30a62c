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

#include <cmath>
#include <numbers>

namespace memcap {

/// -p log2 p with the convention 0 log 0 = 0.
inline double eta(double p) {
    if (p <= 0.0) {
        return 0.0;
    }
    return -p * std::log2(p);
}

/// Binary entropy in bits.
inline double binary_entropy(double p) {
    return eta(p) + eta(1.0 - p);
}

/// Neumaier-compensated running sum.
class CompensatedSum {
   public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            carry_ += (sum_ - t) + v;
        } else {
            carry_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    CompensatedSum &operator+=(double v) {
        add(v);
        return *this;
    }
    double value() const {
        return sum_ + carry_;
    }

   private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

}  // namespace memcap
