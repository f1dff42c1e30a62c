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

// Predictive filter on the belief coordinate beta = P(last channel = 0 | past).
//
// For observed symbol k the update is
//   A(beta) = beta q00 + (1 - beta) q10      (next channel is 0)
//   B(beta) = beta q01 + (1 - beta) q11      (next channel is 1)
//   c_k(beta) = A(beta) x_0^k + B(beta) x_1^k
//   f_k(beta) = A(beta) x_0^k / c_k(beta)
// Symbol 0 gives the pair (f1, c1), symbol 1 gives (f2, c2).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "memcap/channel_model.hpp"
#include "memcap/errors.hpp"

namespace memcap {

class FilterSystem {
   public:
    explicit FilterSystem(const ChannelParams &params)
        : q00_(params.q(0, 0)), q01_(params.q(0, 1)), q10_(params.q(1, 0)), q11_(params.q(1, 1)) {
        for (int i = 0; i < 2; ++i) {
            for (int k = 0; k < 2; ++k) {
                x_[i][k] = params.x(i, k);
            }
        }
        for (int k = 0; k < 2; ++k) {
            inert_[k] = x_[0][k] == 0.0 && x_[1][k] == 0.0;
        }
        fixed_points_ = {solve_fixed_point(0), solve_fixed_point(1)};
    }

    double predict_channel0(double beta) const {
        return beta * q00_ + (1.0 - beta) * q10_;
    }
    double predict_channel1(double beta) const {
        return beta * q01_ + (1.0 - beta) * q11_;
    }

    /// c_k(beta): probability that the next symbol is k.
    double weight(int symbol, double beta) const {
        double c = predict_channel0(beta) * x_[0][symbol] + predict_channel1(beta) * x_[1][symbol];
        return std::clamp(c, 0.0, 1.0);
    }

    /// f_k(beta): belief after observing k. Returns 0 where c_k(beta) = 0.
    double shrink(int symbol, double beta) const {
        double num = predict_channel0(beta) * x_[0][symbol];
        double den = num + predict_channel1(beta) * x_[1][symbol];
        if (den <= 0.0) {
            return 0.0;
        }
        return std::clamp(num / den, 0.0, 1.0);
    }

    double f1(double beta) const {
        return shrink(0, beta);
    }
    double f2(double beta) const {
        return shrink(1, beta);
    }
    double c1(double beta) const {
        return weight(0, beta);
    }
    double c2(double beta) const {
        return weight(1, beta);
    }

    /// Branch whose weight vanishes identically (symbol never emitted).
    bool inert(int symbol) const {
        return inert_[symbol];
    }
    double fixed_point(int symbol) const {
        return fixed_points_[symbol];
    }
    double a1() const {
        return fixed_points_[0];
    }
    double a2() const {
        return fixed_points_[1];
    }

    /// d f_k / d beta; f_k is a linear-fractional map.
    double shrink_derivative(int symbol, double beta) const {
        double x = x_[0][symbol];
        double y = x_[1][symbol];
        double c = weight(symbol, beta);
        if (c <= 0.0) {
            return 0.0;
        }
        return x * y * (q00_ - q10_) * (q10_ + q11_) / (c * c);
    }

   private:
    // beta (A x + B y) = A x with A = q10 + delta beta, B = q11 - delta beta:
    //   delta (x - y) beta^2 + (q10 x + q11 y - delta x) beta - q10 x = 0.
    double solve_fixed_point(int symbol) const {
        double x = x_[0][symbol];
        double y = x_[1][symbol];
        if (inert_[symbol]) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        if (x == 0.0) {
            return 0.0;
        }
        if (y == 0.0) {
            return 1.0;
        }
        double delta = q00_ - q10_;
        double qa = delta * (x - y);
        double qb = q10_ * x + q11_ * y - delta * x;
        double qc = -q10_ * x;

        std::vector<double> roots;
        if (qa == 0.0) {
            if (qb != 0.0) {
                roots.push_back(-qc / qb);
            }
        } else {
            double disc = qb * qb - 4.0 * qa * qc;
            if (disc < 0.0) {
                if (disc < -1e-14 * qb * qb) {
                    throw InvalidParameters("shrink map has no real fixed point (discriminant " +
                                            detail::num(disc) + ")");
                }
                disc = 0.0;
            }
            double half = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
            if (half != 0.0) {
                roots.push_back(half / qa);
                roots.push_back(qc / half);
            } else {
                roots.push_back(0.0);
            }
        }

        constexpr double slack = 1e-12;
        double best = std::numeric_limits<double>::quiet_NaN();
        double best_slope = std::numeric_limits<double>::infinity();
        for (double r : roots) {
            if (!std::isfinite(r) || r < -slack || r > 1.0 + slack) {
                continue;
            }
            r = std::clamp(r, 0.0, 1.0);
            double slope = std::abs(shrink_derivative(symbol, r));
            if (slope < best_slope) {
                best = r;
                best_slope = slope;
            }
        }
        if (std::isnan(best)) {
            throw InvalidParameters("shrink map f" + std::to_string(symbol + 1) + " has no fixed point in [0, 1]");
        }
        return best;
    }

    double q00_, q01_, q10_, q11_;
    std::array<std::array<double, 2>, 2> x_{};
    std::array<bool, 2> inert_{};
    std::array<double, 2> fixed_points_{};
};

inline FilterSystem build_filter_system(const ChannelParams &params) {
    return FilterSystem(params);
}

/// (a1, a2); NaN marks an inert branch.
inline std::array<double, 2> fixed_points(const FilterSystem &system) {
    return {system.a1(), system.a2()};
}

}  // namespace memcap
