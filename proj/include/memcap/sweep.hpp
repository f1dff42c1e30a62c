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

// Grid sweeps over (s, a_bar, d), method cross-comparison and CSV output.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "memcap/blackwell.hpp"
#include "memcap/channel_model.hpp"
#include "memcap/entropy.hpp"
#include "memcap/errors.hpp"
#include "memcap/estimate.hpp"
#include "memcap/exact_oracle.hpp"
#include "memcap/monte_carlo.hpp"

namespace memcap {

struct SolverKnobs {
    BlackwellOptions blackwell;
    std::size_t oracle_n = 16;
    OracleOptions oracle;
    std::size_t mc_steps = 1'000'000;
    std::uint64_t seed = 1;
    /// |blackwell - oracle| bound for the cross-check.
    double cross_tol = 1e-4;
    /// MC agreement bound in standard errors.
    double mc_sigmas = 3.0;
};

struct MethodSet {
    bool blackwell = true;
    bool oracle = false;
    bool monte_carlo = false;
    bool references = false;

    /// Comma-separated subset of blackwell, oracle_n, monte_carlo, references.
    static MethodSet parse(std::string_view text) {
        MethodSet m{false, false, false, false};
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t end = std::min(text.find(',', pos), text.size());
            std::string_view item = text.substr(pos, end - pos);
            if (item == "blackwell") {
                m.blackwell = true;
            } else if (item == "oracle_n" || item == "oracle") {
                m.oracle = true;
            } else if (item == "monte_carlo" || item == "mc") {
                m.monte_carlo = true;
            } else if (item == "references") {
                m.references = true;
            } else if (!item.empty()) {
                throw InvalidParameters("unknown method '" + std::string(item) + "'");
            }
            pos = end + 1;
        }
        return m;
    }
};

struct ReferenceCurves {
    /// s -> +-1 limit: mean of the two sub-channel capacities.
    double avg_capacity;
    /// s = 0: capacity of the averaged channel.
    double avg_channel;
    /// Sub-channel with no-error probability a_bar + |d|.
    double low_noise_sub;
    /// Sub-channel with no-error probability a_bar - |d|.
    double noisier_sub;
    double min_capacity;
};

inline ReferenceCurves reference_curves(double a_bar, double d) {
    auto diags = validate_physical(0.0, a_bar, d);
    if (has_errors(diags)) {
        throw InvalidParameters(describe(diags));
    }
    double hi = std::min(1.0, a_bar + std::abs(d));
    double lo = std::max(kCpLowerBound, a_bar - std::abs(d));
    double c_hi = 1.0 - binary_entropy(hi);
    double c_lo = 1.0 - binary_entropy(lo);
    return {0.5 * (c_hi + c_lo), 1.0 - binary_entropy(a_bar), c_hi, c_lo, std::min(c_hi, c_lo)};
}

struct ResultRow {
    ChannelParams params;
    std::optional<EntropyEstimate> blackwell;
    std::optional<OracleEstimate> oracle;
    std::optional<EntropyEstimate> monte_carlo;
    std::optional<ReferenceCurves> references;
    bool blackwell_oracle_agree = true;
};

inline std::string describe_point(const ChannelParams &p) {
    std::ostringstream ss;
    ss.precision(12);
    if (p.physical()) {
        ss << "(s=" << p.physical()->s << ", a_bar=" << p.physical()->a_bar << ", d=" << p.physical()->d << ")";
    } else {
        ss << "(q00=" << p.q(0, 0) << ", q10=" << p.q(1, 0) << ", x0=" << p.x_noerr(0) << ", x1=" << p.x_noerr(1)
           << ")";
    }
    return ss.str();
}

namespace detail {

/// Rethrows the active exception with the parameter point prepended,
/// keeping its category.
[[noreturn]] inline void rethrow_at(const ChannelParams &p) {
    std::string where = "at " + describe_point(p) + ": ";
    try {
        throw;
    } catch (const NonConvergence &e) {
        throw NonConvergence(where + e.what(), e.previous_value, e.last_value);
    } catch (const BudgetExceeded &e) {
        throw BudgetExceeded(where + e.what());
    } catch (const InvalidParameters &e) {
        throw InvalidParameters(where + e.what());
    }
}

}  // namespace detail

/// Evaluates every requested method at one parameter point.
inline ResultRow run_point(const ChannelParams &params, const MethodSet &methods, const SolverKnobs &knobs) {
    if (params.relax_cp()) {
        throw InvalidParameters("capacity reporting requires CP-valid parameters " + describe_point(params));
    }
    ResultRow row{params, {}, {}, {}, {}};
    try {
        JointChainModel model = build_joint_chain(params);
        if (methods.blackwell) {
            row.blackwell = entropy_rate_blackwell(params, knobs.blackwell);
        }
        if (methods.oracle) {
            row.oracle = entropy_rate_oracle(model, knobs.oracle_n, knobs.oracle);
        }
        if (methods.monte_carlo) {
            row.monte_carlo = mc_entropy_rate(model, knobs.mc_steps, knobs.seed);
        }
        if (methods.references) {
            double a = (params.x_noerr(0) + params.x_noerr(1)) / 2.0;
            double d = (params.x_noerr(0) - params.x_noerr(1)) / 2.0;
            row.references = reference_curves(a, d);
        }
    } catch (...) {
        detail::rethrow_at(params);
    }
    if (row.blackwell && row.oracle) {
        row.blackwell_oracle_agree = std::abs(row.blackwell->value - row.oracle->difference.value) <= knobs.cross_tol;
    }
    return row;
}

struct CompareReport {
    EntropyEstimate blackwell;
    OracleEstimate oracle;
    EntropyEstimate monte_carlo;
    double blackwell_vs_oracle;
    double blackwell_vs_mc;
    double oracle_vs_mc;
    bool oracle_agrees;
    bool mc_agrees;

    bool passed() const {
        return oracle_agrees && mc_agrees;
    }
};

inline CompareReport compare_methods(const ChannelParams &params, const SolverKnobs &knobs) {
    ResultRow row = run_point(params, MethodSet{true, true, true, false}, knobs);
    CompareReport r{*row.blackwell, *row.oracle, *row.monte_carlo, 0, 0, 0, false, false};
    r.blackwell_vs_oracle = std::abs(r.blackwell.value - r.oracle.difference.value);
    r.blackwell_vs_mc = std::abs(r.blackwell.value - r.monte_carlo.value);
    r.oracle_vs_mc = std::abs(r.oracle.difference.value - r.monte_carlo.value);
    r.oracle_agrees = r.blackwell_vs_oracle <= knobs.cross_tol;
    r.mc_agrees = r.blackwell_vs_mc <= knobs.mc_sigmas * r.monte_carlo.standard_error;
    return r;
}

struct Axis {
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 1;

    static Axis point(double v) {
        return {v, v, 1};
    }

    std::vector<double> values() const {
        if (count < 1) {
            throw InvalidParameters("axis count must be >= 1");
        }
        std::vector<double> out(count);
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = count == 1 ? start
                                : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
        }
        if (count > 1) {
            out.back() = stop;
        }
        return out;
    }
};

enum class DPolicy { explicit_value, max_allowed };

/// d = min(a_bar - 1/3, 1 - a_bar), floored at 0.
inline double max_allowed_d(double a_bar) {
    return std::max(0.0, std::min(a_bar - kCpLowerBound, 1.0 - a_bar));
}

struct SweepSpec {
    std::string name = "sweep";
    Axis s = Axis::point(0.0);
    Axis a_bar = Axis::point(2.0 / 3.0);
    Axis d = Axis::point(1.0 / 3.0);
    DPolicy d_policy = DPolicy::explicit_value;
    MethodSet methods;
    SolverKnobs knobs;

    /// Grid points in lexicographic (s, a_bar, d) order. Throws with every
    /// invalid point listed.
    std::vector<ChannelParams> grid() const {
        std::vector<ChannelParams> out;
        std::vector<std::string> bad;
        auto ds = d.values();
        for (double sv : s.values()) {
            for (double av : a_bar.values()) {
                std::vector<double> dvals = d_policy == DPolicy::max_allowed ? std::vector<double>{max_allowed_d(av)}
                                                                              : ds;
                for (double dv : dvals) {
                    auto diags = validate_physical(sv, av, dv);
                    if (has_errors(diags)) {
                        std::ostringstream ss;
                        ss.precision(12);
                        ss << "(s=" << sv << ", a_bar=" << av << ", d=" << dv << "): " << describe(diags);
                        bad.push_back(ss.str());
                    } else if (bad.empty()) {
                        out.push_back(ChannelParams::from_physical(sv, av, dv));
                    }
                }
            }
        }
        if (!bad.empty()) {
            std::string msg = std::to_string(bad.size()) + " invalid grid point(s):";
            for (const auto &b : bad) {
                msg += "\n  " + b;
            }
            throw InvalidParameters(msg);
        }
        return out;
    }
};

inline SweepSpec figure_preset(int figure) {
    SweepSpec spec;
    spec.d_policy = DPolicy::max_allowed;
    spec.methods = MethodSet{true, false, false, true};
    switch (figure) {
        case 1:
            spec.name = "figure1";
            spec.s = {-0.95, 0.95, 39};
            spec.a_bar = {1.0 / 3.0, 1.0, 27};
            break;
        case 2:
            spec.name = "figure2";
            spec.s = Axis::point(2.0 / 3.0);
            spec.a_bar = {1.0 / 3.0, 1.0, 61};
            break;
        case 3:
            spec.name = "figure3";
            spec.s = {0.0, 0.99, 100};
            spec.a_bar = Axis::point(2.0 / 3.0);
            spec.d = Axis::point(1.0 / 3.0);
            spec.d_policy = DPolicy::explicit_value;
            spec.methods.monte_carlo = true;
            break;
        default:
            throw InvalidParameters("figure must be 1, 2 or 3");
    }
    return spec;
}

/// MEMCAP_THREADS if set and positive, else the hardware concurrency.
inline unsigned thread_count_from_env() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("MEMCAP_THREADS")) {
        char *end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return hw;
}

namespace detail {

inline std::string fmt(double v) {
    if (std::isnan(v)) {
        return "";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace detail

inline std::vector<std::string> csv_header(const MethodSet &m) {
    std::vector<std::string> h{"s", "a_bar", "d", "q00", "q10", "x0_noerr", "x1_noerr"};
    if (m.blackwell) {
        h.insert(h.end(),
                 {"capacity_blackwell", "entropy_blackwell", "iterations_blackwell", "delta_blackwell", "atoms_blackwell"});
    }
    if (m.oracle) {
        h.insert(h.end(), {"capacity_oracle", "entropy_oracle", "entropy_oracle_ratio", "oracle_n"});
    }
    if (m.monte_carlo) {
        h.insert(h.end(), {"capacity_mc", "entropy_mc", "stderr_mc", "steps_mc"});
    }
    if (m.references) {
        h.insert(h.end(), {"avg_capacity", "avg_channel", "low_noise_sub", "noisier_sub", "min_capacity"});
    }
    if (m.blackwell && m.oracle) {
        h.push_back("blackwell_oracle_agree");
    }
    return h;
}

inline std::vector<std::string> csv_fields(const ResultRow &row, const MethodSet &m) {
    std::vector<std::string> f;
    for (const auto &[key, value] : row.params.record()) {
        f.push_back(detail::fmt(value));
    }
    if (m.blackwell) {
        const auto &b = *row.blackwell;
        f.insert(f.end(), {detail::fmt(1.0 - b.value), detail::fmt(b.value), std::to_string(b.meta),
                           detail::fmt(b.delta), std::to_string(b.atoms)});
    }
    if (m.oracle) {
        const auto &o = *row.oracle;
        f.insert(f.end(), {detail::fmt(1.0 - o.difference.value), detail::fmt(o.difference.value),
                           detail::fmt(o.ratio.value), std::to_string(o.difference.meta)});
    }
    if (m.monte_carlo) {
        const auto &mc = *row.monte_carlo;
        f.insert(f.end(), {detail::fmt(1.0 - mc.value), detail::fmt(mc.value), detail::fmt(mc.standard_error),
                           std::to_string(mc.meta)});
    }
    if (m.references) {
        const auto &r = *row.references;
        f.insert(f.end(), {detail::fmt(r.avg_capacity), detail::fmt(r.avg_channel), detail::fmt(r.low_noise_sub),
                           detail::fmt(r.noisier_sub), detail::fmt(r.min_capacity)});
    }
    if (m.blackwell && m.oracle) {
        f.push_back(row.blackwell_oracle_agree ? "1" : "0");
    }
    return f;
}

inline std::string knobs_comment(const SweepSpec &spec) {
    const auto &k = spec.knobs;
    const auto &mo = k.blackwell.measure;
    std::ostringstream ss;
    ss << "# memcap " << spec.name << " tol=" << detail::fmt(k.blackwell.tol) << " max_iter=" << k.blackwell.max_iter
       << " tail_guard=" << (k.blackwell.tail_guard ? 1 : 0)
       << " merge_tol=" << detail::fmt(mo.merge_tol) << " prune=" << detail::fmt(mo.prune_weight)
       << " max_atoms=" << mo.max_atoms << " bins=" << mo.coarsen_bins << " oracle_n=" << k.oracle_n
       << " mc_steps=" << k.mc_steps << " seed=" << k.seed << " cross_tol=" << detail::fmt(k.cross_tol)
       << " d_policy=" << (spec.d_policy == DPolicy::max_allowed ? "max_allowed" : "explicit");
    return ss.str();
}

/// Evaluates all grid points (in parallel) and returns rows in grid order.
/// Point i uses MC seed mix_seed(seed ^ i).
inline std::vector<ResultRow> evaluate_sweep(const SweepSpec &spec, unsigned threads = 1) {
    std::vector<ChannelParams> points = spec.grid();
    std::vector<std::optional<ResultRow>> rows(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            SolverKnobs knobs = spec.knobs;
            knobs.seed = mix_seed(spec.knobs.seed ^ static_cast<std::uint64_t>(i));
            try {
                rows[i] = run_point(points[i], spec.methods, knobs);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(points.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto &t : pool) {
        t.join();
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    std::vector<ResultRow> out;
    out.reserve(rows.size());
    for (auto &r : rows) {
        out.push_back(std::move(*r));
    }
    return out;
}

inline void write_csv(std::ostream &os, const SweepSpec &spec, const std::vector<ResultRow> &rows) {
    auto join = [](const std::vector<std::string> &v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            s += (i ? "," : "") + v[i];
        }
        return s;
    };
    os << knobs_comment(spec) << '\n' << join(csv_header(spec.methods)) << '\n';
    for (const auto &row : rows) {
        os << join(csv_fields(row, spec.methods)) << '\n';
    }
}

/// Validates the whole grid, evaluates it and writes CSV.
inline std::size_t run_sweep(const SweepSpec &spec, std::ostream &os, unsigned threads = 1) {
    auto rows = evaluate_sweep(spec, threads);
    write_csv(os, spec, rows);
    return rows.size();
}

}  // namespace memcap
