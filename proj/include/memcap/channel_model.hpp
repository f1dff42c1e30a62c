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

// Switched depolarizing channel and its hidden-Markov representation.
//
// Two single-qubit sub-channels rho -> x_i^0 rho + x_i^1 (1 - rho) are
// selected by a two-state Markov chain q. The observable process is the
// flip / no-flip sequence, a function of the joint (channel, flip) chain.
//
// Joint state order everywhere: (0,0), (0,1), (1,0), (1,1), i.e. index
// 2 * channel + symbol.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "memcap/errors.hpp"

namespace memcap {

using Matrix2 = std::array<std::array<double, 2>, 2>;
using Matrix4 = std::array<std::array<double, 4>, 4>;
using Vector2 = std::array<double, 2>;
using Vector4 = std::array<double, 4>;

inline constexpr double kCpLowerBound = 1.0 / 3.0;

constexpr std::size_t joint_index(int channel, int symbol) {
    return static_cast<std::size_t>(2 * channel + symbol);
}

struct ValidationOptions {
    /// Forgetfulness requires |s| <= 1 - forgetful_margin.
    double forgetful_margin = 1e-9;
    /// validate() warns when 1 - |s| < near_forgetful_margin.
    double near_forgetful_margin = 1e-4;
    /// x values this close outside [1/3, 1] are clamped onto the boundary.
    double boundary_slack = 1e-12;
    double stochastic_tol = 1e-12;
    /// Permit x outside the CP window (still inside [0, 1]). Capacity
    /// reporting refuses such parameters.
    bool relax_cp = false;
};

/// (s, a_bar, d): switching eigenvalue, mean and half-difference of the
/// no-error probabilities.
struct PhysicalView {
    double s;
    double a_bar;
    double d;
};

struct Diagnostic {
    enum class Severity { warning, error };
    Severity severity;
    std::string code;
    std::string message;

    bool is_error() const {
        return severity == Severity::error;
    }
};

using Diagnostics = std::vector<Diagnostic>;

inline bool has_errors(const Diagnostics &diags) {
    for (const auto &d : diags) {
        if (d.is_error()) {
            return true;
        }
    }
    return false;
}

inline std::string describe(const Diagnostics &diags) {
    std::string out;
    for (const auto &d : diags) {
        if (!out.empty()) {
            out += "; ";
        }
        out += d.code + ": " + d.message;
    }
    return out;
}

namespace detail {

inline std::string num(double v) {
    std::ostringstream ss;
    ss.precision(12);
    ss << v;
    return ss.str();
}

inline void check_forgetful(double s, const ValidationOptions &opts, Diagnostics &out) {
    if (!std::isfinite(s) || std::abs(s) > 1.0 - opts.forgetful_margin) {
        out.push_back({Diagnostic::Severity::error, "non_forgetful",
                       "switching eigenvalue s = " + num(s) +
                           " makes the chain periodic or reducible (need |s| < 1)"});
    } else if (1.0 - std::abs(s) < opts.near_forgetful_margin) {
        out.push_back({Diagnostic::Severity::warning, "near_non_forgetful",
                       "switching eigenvalue s = " + num(s) + " is close to the non-forgetful limit"});
    }
}

inline void check_noerr(const char *name, double x, const ValidationOptions &opts, Diagnostics &out) {
    double lo = opts.relax_cp ? 0.0 : kCpLowerBound;
    if (!std::isfinite(x) || x < lo - opts.boundary_slack || x > 1.0 + opts.boundary_slack) {
        if (opts.relax_cp || !std::isfinite(x) || x < -opts.boundary_slack || x > 1.0 + opts.boundary_slack) {
            out.push_back({Diagnostic::Severity::error, "not_probability",
                           std::string(name) + " = " + num(x) + " is not a probability"});
        } else {
            out.push_back({Diagnostic::Severity::error, "cp_violation",
                           std::string(name) + " = " + num(x) +
                               " lies outside the completely positive window [1/3, 1]"});
        }
    }
}

inline double clamp_noerr(double x, const ValidationOptions &opts) {
    double lo = opts.relax_cp ? 0.0 : kCpLowerBound;
    if (x < lo) {
        return lo;
    }
    if (x > 1.0) {
        return 1.0;
    }
    return x;
}

}  // namespace detail

inline Diagnostics validate_physical(double s, double a_bar, double d, const ValidationOptions &opts = {}) {
    Diagnostics out;
    detail::check_forgetful(s, opts, out);
    detail::check_noerr("x0_noerr", a_bar + d, opts, out);
    detail::check_noerr("x1_noerr", a_bar - d, opts, out);
    return out;
}

inline Diagnostics validate_raw(
    const Matrix2 &q, double x0_noerr, double x1_noerr, const ValidationOptions &opts = {}) {
    Diagnostics out;
    bool stochastic = true;
    for (int i = 0; i < 2; ++i) {
        double row = q[i][0] + q[i][1];
        if (!std::isfinite(row) || q[i][0] < 0.0 || q[i][1] < 0.0 || std::abs(row - 1.0) > opts.stochastic_tol) {
            stochastic = false;
            out.push_back({Diagnostic::Severity::error, "not_stochastic",
                           "row " + std::to_string(i) + " of q = (" + detail::num(q[i][0]) + ", " +
                               detail::num(q[i][1]) + ") is not a probability vector"});
        }
    }
    if (stochastic) {
        if (q[0][1] <= 0.0 || q[1][0] <= 0.0) {
            out.push_back({Diagnostic::Severity::error, "non_forgetful",
                           "q has an absorbing channel (q01 = " + detail::num(q[0][1]) +
                               ", q10 = " + detail::num(q[1][0]) + ")"});
        } else {
            detail::check_forgetful(q[0][0] - q[1][0], opts, out);
        }
    }
    detail::check_noerr("x0_noerr", x0_noerr, opts, out);
    detail::check_noerr("x1_noerr", x1_noerr, opts, out);
    return out;
}

/// Validated parameters of the switched channel. Immutable.
class ChannelParams {
   public:
    static ChannelParams from_physical(double s, double a_bar, double d, const ValidationOptions &opts = {}) {
        auto diags = validate_physical(s, a_bar, d, opts);
        if (has_errors(diags)) {
            throw InvalidParameters(describe(diags));
        }
        ChannelParams p;
        double q00 = (1.0 + s) / 2.0;
        double q10 = (1.0 - s) / 2.0;
        // Doubly stochastic: set the mirrored entries bitwise equal.
        p.q_ = {{{q00, q10}, {q10, q00}}};
        p.x_noerr_ = {detail::clamp_noerr(a_bar + d, opts), detail::clamp_noerr(a_bar - d, opts)};
        p.physical_ = PhysicalView{s, a_bar, d};
        p.relax_cp_ = opts.relax_cp;
        return p;
    }

    static ChannelParams from_raw(const Matrix2 &q, double x0_noerr, double x1_noerr,
                                  const ValidationOptions &opts = {}) {
        auto diags = validate_raw(q, x0_noerr, x1_noerr, opts);
        if (has_errors(diags)) {
            throw InvalidParameters(describe(diags));
        }
        ChannelParams p;
        p.q_ = q;
        p.x_noerr_ = {detail::clamp_noerr(x0_noerr, opts), detail::clamp_noerr(x1_noerr, opts)};
        p.relax_cp_ = opts.relax_cp;
        if (std::abs(q[0][0] - q[1][1]) <= opts.stochastic_tol) {
            p.physical_ = PhysicalView{q[0][0] - q[1][0], (p.x_noerr_[0] + p.x_noerr_[1]) / 2.0,
                                       (p.x_noerr_[0] - p.x_noerr_[1]) / 2.0};
        }
        return p;
    }

    const Matrix2 &q() const {
        return q_;
    }
    double q(int from, int to) const {
        return q_[from][to];
    }
    double x_noerr(int channel) const {
        return x_noerr_[channel];
    }
    /// x_channel^symbol: probability that the sub-channel emits `symbol`
    /// (0 = no flip, 1 = flip).
    double x(int channel, int symbol) const {
        return symbol == 0 ? x_noerr_[channel] : 1.0 - x_noerr_[channel];
    }
    /// Non-unit eigenvalue of q.
    double switching_eigenvalue() const {
        return q_[0][0] - q_[1][0];
    }
    bool relax_cp() const {
        return relax_cp_;
    }
    bool cp_valid() const {
        for (double x : x_noerr_) {
            if (x < kCpLowerBound || x > 1.0) {
                return false;
            }
        }
        return true;
    }
    const std::optional<PhysicalView> &physical() const {
        return physical_;
    }
    PhysicalView to_physical() const {
        if (!physical_) {
            throw InvalidParameters("physical view unavailable: q is not doubly stochastic");
        }
        return *physical_;
    }

    /// Flat key-value record (s, a_bar, d, q00, q10, x0_noerr, x1_noerr).
    /// Physical keys are NaN when q is not doubly stochastic.
    std::vector<std::pair<std::string, double>> record() const {
        double nan = std::nan("");
        return {
            {"s", physical_ ? physical_->s : nan},
            {"a_bar", physical_ ? physical_->a_bar : nan},
            {"d", physical_ ? physical_->d : nan},
            {"q00", q_[0][0]},
            {"q10", q_[1][0]},
            {"x0_noerr", x_noerr_[0]},
            {"x1_noerr", x_noerr_[1]},
        };
    }

   private:
    ChannelParams() = default;

    Matrix2 q_{};
    Vector2 x_noerr_{};
    std::optional<PhysicalView> physical_;
    bool relax_cp_ = false;
};

/// Warnings (and, for relaxed parameters, CP notes) on already-built params.
inline Diagnostics validate(const ChannelParams &params, const ValidationOptions &opts = {}) {
    ValidationOptions o = opts;
    o.relax_cp = params.relax_cp();
    Diagnostics out = validate_raw(params.q(), params.x_noerr(0), params.x_noerr(1), o);
    if (params.relax_cp() && !params.cp_valid()) {
        out.push_back({Diagnostic::Severity::warning, "cp_relaxed",
                       "parameters lie outside the CP window; capacity reporting is refused"});
    }
    return out;
}

/// Stationary distribution of q (closed form for two states).
inline Vector2 stationary_switch_distribution(const ChannelParams &params) {
    double q01 = params.q(0, 1);
    double q10 = params.q(1, 0);
    double g0 = q10 / (q01 + q10);
    return {g0, 1.0 - g0};
}

struct JointChainModel {
    ChannelParams params;
    /// E[(i,j)][(i',j')] = q_{ii'} x_{i'}^{j'}.
    Matrix4 transition;
    /// observation[a] keeps the rows of E whose source state carries symbol a,
    /// so that p(k_1..k_n) = <tau| F_{k_1} ... F_{k_n} |1>.
    std::array<Matrix4, 2> observation;
    Vector2 gamma;
    Vector4 tau;
    Vector4 ones{1.0, 1.0, 1.0, 1.0};

    const Matrix4 &F(int symbol) const {
        return observation[symbol];
    }
};

/// tau_(i,k) = gamma_i x_i^k.
inline Vector4 stationary_joint_distribution(const JointChainModel &model) {
    Vector4 tau{};
    for (int i = 0; i < 2; ++i) {
        for (int k = 0; k < 2; ++k) {
            tau[joint_index(i, k)] = model.gamma[i] * model.params.x(i, k);
        }
    }
    return tau;
}

inline JointChainModel build_joint_chain(const ChannelParams &params) {
    JointChainModel m{params, {}, {}, stationary_switch_distribution(params), {}};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int i2 = 0; i2 < 2; ++i2) {
                for (int j2 = 0; j2 < 2; ++j2) {
                    double v = params.q(i, i2) * params.x(i2, j2);
                    std::size_t r = joint_index(i, j);
                    std::size_t c = joint_index(i2, j2);
                    m.transition[r][c] = v;
                    m.observation[j][r][c] = v;
                    m.observation[1 - j][r][c] = 0.0;
                }
            }
        }
    }
    m.tau = stationary_joint_distribution(m);
    return m;
}

}  // namespace memcap
