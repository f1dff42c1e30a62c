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

// Exact reference computations on the observed flip process: word
// probabilities by matrix product and by explicit path enumeration, and
// block entropies by depth-first traversal of the prefix tree.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "memcap/channel_model.hpp"
#include "memcap/entropy.hpp"
#include "memcap/errors.hpp"
#include "memcap/estimate.hpp"

namespace memcap {

/// Flip pattern k_1..k_n (0 = no flip, 1 = flip).
class ErrorWord {
   public:
    ErrorWord() = default;
    explicit ErrorWord(std::vector<std::uint8_t> symbols) : symbols_(std::move(symbols)) {
        for (auto s : symbols_) {
            if (s > 1) {
                throw InvalidParameters("error word symbols must be 0 or 1");
            }
        }
    }
    static ErrorWord parse(std::string_view text) {
        std::vector<std::uint8_t> symbols;
        symbols.reserve(text.size());
        for (char c : text) {
            if (c != '0' && c != '1') {
                throw InvalidParameters("error word must consist of '0' and '1', got '" + std::string(text) + "'");
            }
            symbols.push_back(static_cast<std::uint8_t>(c - '0'));
        }
        return ErrorWord(std::move(symbols));
    }
    /// The word of length n whose i-th symbol is bit (n - 1 - i) of `bits`.
    static ErrorWord from_bits(std::uint64_t bits, std::size_t n) {
        std::vector<std::uint8_t> symbols(n);
        for (std::size_t i = 0; i < n; ++i) {
            symbols[i] = static_cast<std::uint8_t>((bits >> (n - 1 - i)) & 1u);
        }
        return ErrorWord(std::move(symbols));
    }

    std::size_t size() const {
        return symbols_.size();
    }
    int operator[](std::size_t i) const {
        return symbols_[i];
    }
    const std::vector<std::uint8_t> &symbols() const {
        return symbols_;
    }
    ErrorWord appended(int symbol) const {
        auto s = symbols_;
        s.push_back(static_cast<std::uint8_t>(symbol));
        return ErrorWord(std::move(s));
    }
    ErrorWord prepended(int symbol) const {
        std::vector<std::uint8_t> s;
        s.reserve(symbols_.size() + 1);
        s.push_back(static_cast<std::uint8_t>(symbol));
        s.insert(s.end(), symbols_.begin(), symbols_.end());
        return ErrorWord(std::move(s));
    }

   private:
    std::vector<std::uint8_t> symbols_;
};

namespace detail {

inline Vector4 row_times(const Vector4 &v, const Matrix4 &m) {
    Vector4 out{};
    for (std::size_t r = 0; r < 4; ++r) {
        if (v[r] == 0.0) {
            continue;
        }
        for (std::size_t c = 0; c < 4; ++c) {
            out[c] += v[r] * m[r][c];
        }
    }
    return out;
}

inline double mass(const Vector4 &v) {
    return (v[0] + v[1]) + (v[2] + v[3]);
}

}  // namespace detail

/// <tau| F_{k_1} ... F_{k_n} |1>.
inline double word_probability(const JointChainModel &model, const ErrorWord &word) {
    Vector4 v = model.tau;
    for (std::size_t i = 0; i < word.size(); ++i) {
        v = detail::row_times(v, model.F(word[i]));
    }
    return detail::mass(v);
}

inline constexpr std::size_t kPathSumMaxLength = 20;

/// Sum over channel paths (i_1..i_n) of
/// gamma_{i_1} q_{i_1 i_2} ... q_{i_{n-1} i_n} x_{i_1}^{k_1} ... x_{i_n}^{k_n}.
inline double word_probability_pathsum(const JointChainModel &model, const ErrorWord &word) {
    std::size_t n = word.size();
    if (n > kPathSumMaxLength) {
        throw InvalidParameters("path enumeration is capped at length " + std::to_string(kPathSumMaxLength) +
                                ", got " + std::to_string(n));
    }
    if (n == 0) {
        return 1.0;
    }
    const auto &p = model.params;
    CompensatedSum total;
    for (std::uint64_t path = 0; path < (std::uint64_t{1} << n); ++path) {
        int prev = static_cast<int>(path & 1u);
        double w = model.gamma[prev] * p.x(prev, word[0]);
        for (std::size_t t = 1; t < n && w != 0.0; ++t) {
            int cur = static_cast<int>((path >> t) & 1u);
            w *= p.q(prev, cur) * p.x(cur, word[t]);
            prev = cur;
        }
        total += w;
    }
    return total.value();
}

struct OracleOptions {
    std::size_t n_max = 24;
};

/// Block entropies S_1..S_n in bits (index m - 1 holds S_m).
inline std::vector<double> block_entropies(const JointChainModel &model, std::size_t n,
                                           const OracleOptions &opts = {}) {
    if (n < 1 || n > opts.n_max) {
        throw InvalidParameters("block length must lie in [1, " + std::to_string(opts.n_max) + "], got " +
                                std::to_string(n));
    }
    std::vector<CompensatedSum> acc(n);
    std::vector<Vector4> stack(n + 1);
    stack[0] = model.tau;

    // Depth-first over prefixes; stack[m] = tau^T F_{k_1} ... F_{k_m}.
    auto visit = [&](auto &&self, std::size_t depth) -> void {
        for (int k = 0; k < 2; ++k) {
            stack[depth + 1] = detail::row_times(stack[depth], model.F(k));
            double p = detail::mass(stack[depth + 1]);
            if (p <= 0.0) {
                continue;
            }
            acc[depth] += -p * std::log(p);
            if (depth + 1 < n) {
                self(self, depth + 1);
            }
        }
    };
    visit(visit, 0);

    std::vector<double> out(n);
    for (std::size_t m = 0; m < n; ++m) {
        out[m] = acc[m].value() / std::numbers::ln2;
    }
    return out;
}

inline double block_entropy(const JointChainModel &model, std::size_t n, const OracleOptions &opts = {}) {
    return block_entropies(model, n, opts).back();
}

struct OracleEstimate {
    /// S_n - S_{n-1}.
    EntropyEstimate difference;
    /// S_n / n.
    EntropyEstimate ratio;
};

inline OracleEstimate entropy_rate_oracle(const JointChainModel &model, std::size_t n,
                                          const OracleOptions &opts = {}) {
    if (n < 2) {
        throw InvalidParameters("block-difference estimate needs n >= 2, got " + std::to_string(n));
    }
    auto s = block_entropies(model, n, opts);
    auto at = [&](std::size_t m) { return m == 0 ? 0.0 : s[m - 1]; };

    double diff = at(n) - at(n - 1);
    double prev_diff = at(n - 1) - at(n - 2);
    double ratio = at(n) / static_cast<double>(n);
    double prev_ratio = at(n - 1) / static_cast<double>(n - 1);

    OracleEstimate out;
    out.difference.value = diff;
    out.difference.method = Method::block_difference;
    out.difference.meta = n;
    out.difference.delta = std::abs(diff - prev_diff);
    out.ratio.value = ratio;
    out.ratio.method = Method::block_ratio;
    out.ratio.meta = n;
    out.ratio.delta = std::abs(ratio - prev_ratio);
    return out;
}

}  // namespace memcap
