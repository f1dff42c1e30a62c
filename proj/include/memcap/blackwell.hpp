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

// Atomic approximation of the invariant measure on the belief segment and
// the entropy rate obtained by integrating the symbol entropy against it.
//
// One step of the iteration maps every atom (beta, w) to the two atoms
// (f1(beta), w c1(beta)) and (f2(beta), w c2(beta)); the limit measure is
// the unique fixed point and
//   S = integral [eta(c1(beta)) + eta(c2(beta))] dlambda(beta).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "memcap/channel_model.hpp"
#include "memcap/entropy.hpp"
#include "memcap/errors.hpp"
#include "memcap/estimate.hpp"
#include "memcap/filter_system.hpp"

namespace memcap {

struct Atom {
    double position;
    double weight;

    bool operator<(const Atom &o) const {
        return position < o.position || (position == o.position && weight < o.weight);
    }
};

struct AtomicMeasure {
    std::vector<Atom> atoms;
    std::size_t generation = 0;

    double total_weight() const {
        CompensatedSum s;
        for (const auto &a : atoms) {
            s += a.weight;
        }
        return s.value();
    }
    std::size_t size() const {
        return atoms.size();
    }
};

struct MeasureOptions {
    /// Atoms whose positions lie within this distance of a cluster's first
    /// atom are coalesced at their weight-averaged position.
    double merge_tol = 1e-12;
    /// Atoms lighter than this are dropped (weight renormalized). 0 disables.
    double prune_weight = 1e-15;
    std::size_t max_atoms = std::size_t{1} << 22;
    /// When more atoms than this survive merging, they are re-merged into
    /// this many uniform bins on [0, 1]. 0 disables (budget then applies).
    std::size_t coarsen_bins = std::size_t{1} << 16;
};

/// Two atoms of the given weights at a1 and a2 (one atom if they coincide
/// or a branch is inert).
inline AtomicMeasure initial_measure(const FilterSystem &system, double merge_tol = 1e-12,
                                     std::array<double, 2> weights = {0.5, 0.5}) {
    AtomicMeasure m;
    bool live1 = !system.inert(0);
    bool live2 = !system.inert(1);
    if (live1 && live2 && std::abs(system.a1() - system.a2()) > merge_tol) {
        double total = weights[0] + weights[1];
        m.atoms = {{system.a1(), weights[0] / total}, {system.a2(), weights[1] / total}};
        std::sort(m.atoms.begin(), m.atoms.end());
    } else if (live1 && live2) {
        double total = weights[0] + weights[1];
        m.atoms = {{(weights[0] * system.a1() + weights[1] * system.a2()) / total, 1.0}};
    } else {
        m.atoms = {{live1 ? system.a1() : system.a2(), 1.0}};
    }
    return m;
}

/// Raw application of the transfer step: no merging, no normalization.
/// Branches with zero weight contribute no atom.
inline AtomicMeasure push_forward(const FilterSystem &system, const AtomicMeasure &measure) {
    AtomicMeasure out;
    out.generation = measure.generation + 1;
    out.atoms.reserve(2 * measure.atoms.size());
    for (const auto &atom : measure.atoms) {
        for (int k = 0; k < 2; ++k) {
            double c = system.weight(k, atom.position);
            if (c > 0.0) {
                out.atoms.push_back({system.shrink(k, atom.position), atom.weight * c});
            }
        }
    }
    return out;
}

namespace detail {

inline void coalesce(std::vector<Atom> &atoms, double tol) {
    std::size_t out = 0;
    std::size_t i = 0;
    while (i < atoms.size()) {
        double anchor = atoms[i].position;
        CompensatedSum w;
        CompensatedSum wp;
        std::size_t j = i;
        for (; j < atoms.size() && atoms[j].position - anchor <= tol; ++j) {
            w += atoms[j].weight;
            wp += atoms[j].weight * atoms[j].position;
        }
        double weight = w.value();
        double position = j - i == 1 ? anchor : std::clamp(wp.value() / weight, 0.0, 1.0);
        atoms[out++] = {position, weight};
        i = j;
    }
    atoms.resize(out);
}

inline void bin_atoms(std::vector<Atom> &atoms, std::size_t bins) {
    std::size_t out = 0;
    std::size_t i = 0;
    auto bin_of = [bins](double p) {
        return std::min(static_cast<std::size_t>(p * static_cast<double>(bins)), bins - 1);
    };
    while (i < atoms.size()) {
        std::size_t bin = bin_of(atoms[i].position);
        CompensatedSum w;
        CompensatedSum wp;
        std::size_t j = i;
        for (; j < atoms.size() && bin_of(atoms[j].position) == bin; ++j) {
            w += atoms[j].weight;
            wp += atoms[j].weight * atoms[j].position;
        }
        double weight = w.value();
        double position = j - i == 1 ? atoms[i].position : std::clamp(wp.value() / weight, 0.0, 1.0);
        atoms[out++] = {position, weight};
        i = j;
    }
    atoms.resize(out);
}

}  // namespace detail

/// Sort, merge, prune, coarsen and normalize.
inline AtomicMeasure compact(AtomicMeasure measure, const MeasureOptions &opts = {}) {
    auto &atoms = measure.atoms;
    std::sort(atoms.begin(), atoms.end());
    detail::coalesce(atoms, opts.merge_tol);

    if (opts.prune_weight > 0.0 && atoms.size() > 1) {
        auto heaviest = *std::max_element(
            atoms.begin(), atoms.end(), [](const Atom &a, const Atom &b) { return a.weight < b.weight; });
        double total = measure.total_weight();
        std::erase_if(atoms, [&](const Atom &a) { return a.weight < opts.prune_weight * total; });
        if (atoms.empty()) {
            atoms.push_back(heaviest);
        }
    }
    if (opts.coarsen_bins > 0 && atoms.size() > opts.coarsen_bins) {
        detail::bin_atoms(atoms, opts.coarsen_bins);
    }
    if (atoms.size() > opts.max_atoms) {
        throw BudgetExceeded("measure has " + std::to_string(atoms.size()) + " atoms after merging (budget " +
                             std::to_string(opts.max_atoms) +
                             "); loosen the merge tolerance or enable coarsening");
    }
    double total = measure.total_weight();
    for (auto &a : atoms) {
        a.weight /= total;
    }
    return measure;
}

inline AtomicMeasure iterate_measure(const FilterSystem &system, const AtomicMeasure &measure,
                                     const MeasureOptions &opts = {}) {
    return compact(push_forward(system, measure), opts);
}

/// Integral of eta(c1) + eta(c2) against the measure, in bits.
inline double entropy_functional(const FilterSystem &system, const AtomicMeasure &measure) {
    CompensatedSum s;
    for (const auto &a : measure.atoms) {
        s += a.weight * (eta(system.c1(a.position)) + eta(system.c2(a.position)));
    }
    return s.value();
}

struct BlackwellOptions {
    double tol = 1e-10;
    std::size_t max_iter = 20000;
    MeasureOptions measure;
    std::array<double, 2> initial_weights{0.5, 0.5};
    bool tail_guard = true;
};

/// Iterates the measure until the entropy increment drops below `tol`. With
/// `tail_guard` set, the geometric tail implied by the last two increments,
/// delta r / (1 - r), must be below `tol` as well.
inline EntropyEstimate entropy_rate_blackwell(const ChannelParams &params, const BlackwellOptions &opts = {}) {
    FilterSystem system(params);
    AtomicMeasure lambda = initial_measure(system, opts.measure.merge_tol, opts.initial_weights);
    double before = std::nan("");
    double previous = entropy_functional(system, lambda);
    double previous_delta = std::nan("");
    for (std::size_t k = 1; k <= opts.max_iter; ++k) {
        lambda = iterate_measure(system, lambda, opts.measure);
        double current = entropy_functional(system, lambda);
        double delta = std::abs(current - previous);
        bool settled = delta <= 64 * std::numeric_limits<double>::epsilon() * std::abs(current);
        if (!settled && delta < opts.tol && !opts.tail_guard) {
            settled = true;
        } else if (!settled && delta < opts.tol && previous_delta > 0.0) {
            double ratio = delta / previous_delta;
            settled = ratio < 1.0 && delta * ratio / (1.0 - ratio) < opts.tol;
        }
        if (settled) {
            EntropyEstimate e;
            e.value = std::clamp(current, 0.0, 1.0);
            e.method = Method::blackwell;
            e.meta = k;
            e.delta = delta;
            e.atoms = lambda.size();
            return e;
        }
        before = previous;
        previous = current;
        previous_delta = delta;
    }
    throw NonConvergence("measure iteration did not converge within " + std::to_string(opts.max_iter) +
                             " generations (last values " + detail::num(before) + ", " + detail::num(previous) +
                             ")",
                         before, previous);
}

/// Product-state capacity 1 - S in bits per use.
inline double capacity(const ChannelParams &params, const BlackwellOptions &opts = {}) {
    if (params.relax_cp()) {
        throw InvalidParameters("capacity requires CP-valid parameters (relax_cp is set)");
    }
    return std::clamp(1.0 - entropy_rate_blackwell(params, opts).value, 0.0, 1.0);
}

}  // namespace memcap
