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

// memcap: capacity of the Markov-switched depolarizing channel.
//
//   memcap capacity --s 0.5 --a 0.6667 --d 0.3333
//   memcap sweep --s-range 0:0.9:10 --a-range 0.5 --d-max --methods blackwell,references
//   memcap compare --s 0.6 --a 0.8 --d 0.2
//   memcap figure 3 --out f3.csv
//
// Exit codes: 0 success, 1 invalid parameters, 2 non-convergence,
// 3 atom budget exceeded.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "memcap/memcap.hpp"

namespace {

struct PointArgs {
    std::optional<double> s, a, d;
    std::optional<double> q00, q10, x0, x1;
};

void add_point_options(CLI::App *cmd, PointArgs &p) {
    cmd->add_option("--s", p.s, "switching eigenvalue s in (-1, 1)");
    cmd->add_option("--a", p.a, "average no-error probability a_bar");
    cmd->add_option("--d", p.d, "half-difference d of the no-error probabilities");
    cmd->add_option("--q00", p.q00, "raw switching probability 0 -> 0");
    cmd->add_option("--q10", p.q10, "raw switching probability 1 -> 0");
    cmd->add_option("--x0", p.x0, "no-error probability of sub-channel 0");
    cmd->add_option("--x1", p.x1, "no-error probability of sub-channel 1");
}

memcap::ChannelParams make_point(const PointArgs &p) {
    bool physical = p.s || p.a || p.d;
    bool raw = p.q00 || p.q10 || p.x0 || p.x1;
    if (physical == raw) {
        throw memcap::InvalidParameters("give either --s --a --d or --q00 --q10 --x0 --x1");
    }
    if (physical) {
        if (!(p.s && p.a && p.d)) {
            throw memcap::InvalidParameters("--s, --a and --d are all required");
        }
        return memcap::ChannelParams::from_physical(*p.s, *p.a, *p.d);
    }
    if (!(p.q00 && p.q10 && p.x0 && p.x1)) {
        throw memcap::InvalidParameters("--q00, --q10, --x0 and --x1 are all required");
    }
    memcap::Matrix2 q{{{*p.q00, 1.0 - *p.q00}, {*p.q10, 1.0 - *p.q10}}};
    return memcap::ChannelParams::from_raw(q, *p.x0, *p.x1);
}

void add_knob_options(CLI::App *cmd, memcap::SolverKnobs &k) {
    auto &b = k.blackwell;
    cmd->add_option("--tol", b.tol, "entropy convergence tolerance")->capture_default_str();
    cmd->add_option("--max-iter", b.max_iter, "maximum measure generations")->capture_default_str();
    cmd->add_flag("!--plain-stop", b.tail_guard, "stop on the entropy increment alone");
    cmd->add_option("--merge-tol", b.measure.merge_tol, "atom merge tolerance in position")->capture_default_str();
    cmd->add_option("--prune", b.measure.prune_weight, "atom prune threshold in weight")->capture_default_str();
    cmd->add_option("--max-atoms", b.measure.max_atoms, "atom budget")->capture_default_str();
    cmd->add_option("--bins", b.measure.coarsen_bins, "coarsening bins (0 disables)")->capture_default_str();
    cmd->add_option("--oracle-n", k.oracle_n, "block length of the exact oracle")->capture_default_str();
    cmd->add_option("--n-max", k.oracle.n_max, "largest admissible oracle block length")->capture_default_str();
    cmd->add_option("--mc-steps", k.mc_steps, "Monte-Carlo steps")->capture_default_str();
    cmd->add_option("--seed", k.seed, "Monte-Carlo seed")->capture_default_str();
    cmd->add_option("--cross-tol", k.cross_tol, "blackwell vs oracle tolerance")->capture_default_str();
}

memcap::Axis parse_axis(const std::string &text) {
    auto first = text.find(':');
    if (first == std::string::npos) {
        return memcap::Axis::point(std::stod(text));
    }
    auto second = text.find(':', first + 1);
    if (second == std::string::npos) {
        throw memcap::InvalidParameters("range must be start:stop:count, got '" + text + "'");
    }
    long count = std::stol(text.substr(second + 1));
    if (count < 1) {
        throw memcap::InvalidParameters("range count must be >= 1, got '" + text + "'");
    }
    return {std::stod(text.substr(0, first)), std::stod(text.substr(first + 1, second - first - 1)),
            static_cast<std::size_t>(count)};
}

void emit(const memcap::SweepSpec &spec, const std::string &out) {
    unsigned threads = memcap::thread_count_from_env();
    if (out.empty() || out == "-") {
        memcap::run_sweep(spec, std::cout, threads);
        return;
    }
    auto rows = memcap::evaluate_sweep(spec, threads);
    std::ofstream os(out, std::ios::binary);
    if (!os) {
        throw memcap::InvalidParameters("cannot open '" + out + "' for writing");
    }
    memcap::write_csv(os, spec, rows);
    std::cerr << "wrote " << rows.size() << " rows to " << out << "\n";
}

void print_compare(const memcap::CompareReport &r, const memcap::SolverKnobs &k) {
    std::printf("blackwell        %.12f  (generations %zu, delta %.3g, atoms %zu)\n", r.blackwell.value,
                r.blackwell.meta, r.blackwell.delta, r.blackwell.atoms);
    std::printf("oracle S%zu-S%zu   %.12f  (S_n/n %.12f)\n", r.oracle.difference.meta,
                r.oracle.difference.meta - 1, r.oracle.difference.value, r.oracle.ratio.value);
    std::printf("monte_carlo      %.12f  +- %.3g  (%zu steps)\n", r.monte_carlo.value, r.monte_carlo.standard_error,
                r.monte_carlo.meta);
    std::printf("|blackwell - oracle| = %.3g  (tol %.3g)  %s\n", r.blackwell_vs_oracle, k.cross_tol,
                r.oracle_agrees ? "PASS" : "FAIL");
    std::printf("|blackwell - mc|     = %.3g  (tol %g stderr = %.3g)  %s\n", r.blackwell_vs_mc, k.mc_sigmas,
                k.mc_sigmas * r.monte_carlo.standard_error, r.mc_agrees ? "PASS" : "FAIL");
    std::printf("|oracle - mc|        = %.3g\n", r.oracle_vs_mc);
    std::printf("capacity (blackwell) = %.12f\n", 1.0 - r.blackwell.value);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Classical product-state capacity of a Markov-switched depolarizing channel"};
    app.require_subcommand(1);

    PointArgs point;
    memcap::SolverKnobs knobs;
    std::string methods_text = "blackwell,references";
    std::string out;

    auto *cap = app.add_subcommand("capacity", "capacity at a single parameter point");
    add_point_options(cap, point);
    add_knob_options(cap, knobs);
    cap->add_option("--methods", methods_text, "blackwell,oracle_n,monte_carlo,references")->capture_default_str();

    std::string s_range = "0", a_range = "0.6666666666666666", d_range = "0.3333333333333333";
    bool d_max = false;
    auto *sweep = app.add_subcommand("sweep", "grid sweep written as CSV");
    sweep->add_option("--s-range", s_range, "start:stop:count or a single value")->capture_default_str();
    sweep->add_option("--a-range", a_range, "start:stop:count or a single value")->capture_default_str();
    auto *d_opt = sweep->add_option("--d-range", d_range, "start:stop:count or a single value")->capture_default_str();
    sweep->add_flag("--d-max", d_max, "d = min(a - 1/3, 1 - a)")->excludes(d_opt);
    sweep->add_option("--methods", methods_text, "blackwell,oracle_n,monte_carlo,references")->capture_default_str();
    sweep->add_option("--out", out, "output file (default stdout)");
    add_knob_options(sweep, knobs);

    auto *cmp = app.add_subcommand("compare", "cross-check blackwell, oracle and Monte Carlo at one point");
    add_point_options(cmp, point);
    add_knob_options(cmp, knobs);

    int figure = 0;
    auto *fig = app.add_subcommand("figure", "preset sweeps for the capacity figures");
    fig->add_option("number", figure, "1, 2 or 3")->required()->check(CLI::IsMember({1, 2, 3}));
    fig->add_option("--out", out, "output file (default stdout)");
    add_knob_options(fig, knobs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*cap) {
            memcap::SweepSpec spec;
            spec.name = "capacity";
            spec.methods = memcap::MethodSet::parse(methods_text);
            spec.knobs = knobs;
            auto params = make_point(point);
            for (const auto &d : memcap::validate(params)) {
                std::cerr << "warning: " << d.code << ": " << d.message << "\n";
            }
            auto row = memcap::run_point(params, spec.methods, knobs);
            memcap::write_csv(std::cout, spec, {row});
        } else if (*sweep) {
            memcap::SweepSpec spec;
            spec.s = parse_axis(s_range);
            spec.a_bar = parse_axis(a_range);
            spec.d = parse_axis(d_range);
            spec.d_policy = d_max ? memcap::DPolicy::max_allowed : memcap::DPolicy::explicit_value;
            spec.methods = memcap::MethodSet::parse(methods_text);
            spec.knobs = knobs;
            emit(spec, out);
        } else if (*cmp) {
            auto params = make_point(point);
            print_compare(memcap::compare_methods(params, knobs), knobs);
        } else if (*fig) {
            auto spec = memcap::figure_preset(figure);
            spec.knobs = knobs;
            emit(spec, out);
        }
    } catch (const memcap::NonConvergence &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const memcap::BudgetExceeded &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
