// Copyright 2026 The cliffpatch Authors
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
#include <random>
#include <string>
#include <vector>

#include "cliffpatch/circuit.hpp"
#include "cliffpatch/clifford_eval.hpp"
#include "cliffpatch/observable.hpp"
#include "cliffpatch/statevector.hpp"

namespace cliffpatch {

namespace detail {

// Fixed gate turning letter p into something outside {I, axis}, for p == axis.
inline Gate lce_site_gate(SingleQubitPauli axis, uint32_t q) {
    return axis == SingleQubitPauli::Y ? Gate::s(q) : Gate::h(q);
}

inline PauliString conj_gate(PauliString p, const Gate &g) {
    conjugate_in_place(p, g.to_clifford());
    return p;
}

}  // namespace detail

/// Builds (Q, Q~) so that direction k of the wrapped circuit picks up +-c_{i0} at theta = 0.
///
/// With U(+-pi/2 e_k) = W_a R_V(+-pi/2) W_b (other parameters at zero), Q~ = W~ W_a^dagger, where
/// W~ makes the letter of P_{i0} on the rotated qubit anticommute with V. Q then diagonalizes the
/// two shifted words, which agree up to sign.
inline LcePair construct_lce(const Circuit &c, const PauliObservable &obs, std::size_t k, std::size_t i0) {
    if (obs.n_qubits() != c.n_qubits()) throw DimensionError("observable width does not match circuit");
    if (k >= c.n_params()) throw IndexError("LCE direction k out of range");
    if (i0 >= obs.size()) throw IndexError("LCE term i0 out of range");

    const auto &gates = c.gates();
    const std::size_t pos = c.param_positions()[k];
    const Gate &rot = gates[pos];
    const SingleQubitPauli axis = rot.axis;
    const uint32_t qk = rot.q0;
    const PauliString &word = obs[i0].word;

    LcePair pair = LcePair::identity(c);
    pair.k = k;
    pair.i0 = i0;

    // W_a^dagger: the Clifford skeleton after the rotation, inverted and reversed.
    for (std::size_t gi = gates.size(); gi-- > pos + 1;) {
        if (!gates[gi].is_param()) pair.qtilde_gates.push_back(gates[gi].inverse());
    }

    // W~ = W~1 W~2, appended so that W~2 acts first.
    std::vector<Gate> wt;
    SingleQubitPauli pk = word.get(qk);
    if (pk == SingleQubitPauli::I) {
        std::size_t site = 0;
        while (word.get(site) == SingleQubitPauli::I) site++;
        auto si = static_cast<uint32_t>(site);
        SingleQubitPauli pi = word.get(site);
        Gate w1 = (pi == SingleQubitPauli::X || pi == SingleQubitPauli::Y) ? Gate::cx(si, qk) : Gate::cx(qk, si);
        PauliString updated = detail::conj_gate(word, w1);
        if (updated.get(qk) == axis) wt.push_back(detail::lce_site_gate(axis, qk));
        wt.push_back(w1);
    } else if (pk == axis) {
        wt.push_back(detail::lce_site_gate(axis, qk));
    }
    pair.qtilde_gates.insert(pair.qtilde_gates.end(), wt.begin(), wt.end());

    // Word of term i0 at +pi/2 e_k before Q, from the circuit wrapped by Q~ only.
    Circuit partial = lce_transform(c, pair);
    ShiftVector plus = ShiftVector::unit(c.n_params(), k, 1);
    PauliString evolved(c.n_qubits());
    {
        PauliString p = word;
        detail::backprop(p, partial.gates(), 0, partial.gates().size(), plus);
        evolved = p;
    }
    for (uint32_t q = 0; q < c.n_qubits(); q++) {
        SingleQubitPauli l = evolved.get(q);
        if (l == SingleQubitPauli::X) {
            pair.q_gates.push_back(Gate::h(q));
        } else if (l == SingleQubitPauli::Y) {
            pair.q_gates.push_back(Gate::h(q));
            pair.q_gates.push_back(Gate::s(q));
        }
    }

    // Post-hoc check on the final circuit.
    Circuit full = lce_transform(c, pair);
    ShiftVector minus = ShiftVector::unit(c.n_params(), k, 3);
    PauliString wp = word, wm = word;
    detail::backprop(wp, full.gates(), 0, full.gates().size(), plus);
    detail::backprop(wm, full.gates(), 0, full.gates().size(), minus);
    if (!wp.same_word(wm) || wp.negative() == wm.negative() || !wp.is_diagonal()) {
        throw InternalConsistencyError("LCE verification failed: shifted words " + wp.str() + " and " + wm.str());
    }
    pair.achieved_sign = wp.sign();
    return pair;
}

/// beta_{i0}(H): the i0 term contributes achieved_sign * c_{i0}; every other term adds
/// 1/2 c_i (<P_i^{+}> - <P_i^{-}>) from its Heisenberg-evolved words on the wrapped circuit.
inline double beta(const Circuit &c, const PauliObservable &obs, const LcePair &pair) {
    Circuit t = lce_transform(c, pair);
    ShiftVector plus = ShiftVector::unit(c.n_params(), pair.k, 1);
    ShiftVector minus = ShiftVector::unit(c.n_params(), pair.k, 3);
    double b = pair.achieved_sign * obs[pair.i0].coeff;
    for (std::size_t i = 0; i < obs.size(); i++) {
        if (i == pair.i0) continue;
        PauliString wp = obs[i].word, wm = obs[i].word;
        detail::backprop(wp, t.gates(), 0, t.gates().size(), plus);
        detail::backprop(wm, t.gates(), 0, t.gates().size(), minus);
        b += 0.5 * obs[i].coeff * (vacuum_expectation(wp) - vacuum_expectation(wm));
    }
    return b;
}

struct CancellationOptions {
    AnsatzFamily family = AnsatzFamily::mHEA;
    std::size_t layers = 1;
    /// Cross-check beta against a statevector parameter-shift gradient every this many trials (0 = never).
    std::size_t verify_every = 0;
    std::size_t statevector_cap = kDefaultStatevectorCap;
};

struct CancellationReport {
    std::size_t n_qubits = 0;
    std::size_t n_terms = 0;
    std::size_t trials = 0;
    std::size_t hits = 0;  // trials with beta^2 == c_{i0}^2
    std::size_t verified = 0;
    double max_verify_error = 0;

    double frequency() const {
        return trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
    }
};

/// Random weighted observables, random (k, i0); counts how often the residual cancels exactly.
template <class Rng>
CancellationReport cancellation_study(std::size_t n_qubits, std::size_t n_terms, std::size_t n_trials, Rng &rng,
                                      const CancellationOptions &opt = {}) {
    if (n_trials < 1) throw InvalidArgument("cancellation_study needs at least one trial");
    CancellationReport rep;
    rep.n_qubits = n_qubits;
    rep.n_terms = n_terms;
    for (std::size_t t = 0; t < n_trials; t++) {
        AnsatzSpec spec{opt.family, n_qubits, opt.layers, rng()};
        Circuit c = build_ansatz(spec);
        PauliObservable obs = random_observable(n_qubits, n_terms, true, rng);
        std::uniform_int_distribution<std::size_t> pick_k(0, c.n_params() - 1), pick_i(0, n_terms - 1);
        std::size_t k = pick_k(rng), i0 = pick_i(rng);
        LcePair pair = construct_lce(c, obs, k, i0);
        double b = beta(c, obs, pair);
        double ci = obs[i0].coeff;
        if (std::abs(b * b - ci * ci) <= 1e-12) rep.hits++;
        rep.trials++;
        if (opt.verify_every && t % opt.verify_every == 0 && n_qubits <= opt.statevector_cap) {
            Circuit tc = lce_transform(c, pair);
            std::vector<double> th(tc.n_params(), 0.0);
            th[k] = M_PI / 2;
            double plus = exact_cost(tc, obs, th, opt.statevector_cap);
            th[k] = -M_PI / 2;
            double minus = exact_cost(tc, obs, th, opt.statevector_cap);
            rep.max_verify_error = std::max(rep.max_verify_error, std::abs(0.5 * (plus - minus) - b));
            rep.verified++;
        }
    }
    return rep;
}

}  // namespace cliffpatch
