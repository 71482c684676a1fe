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

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "cliffpatch/circuit.hpp"
#include "cliffpatch/errors.hpp"
#include "cliffpatch/observable.hpp"

namespace cliffpatch {

using cdouble = std::complex<double>;

/// Largest N run() accepts unless the caller raises it.
inline constexpr std::size_t kDefaultStatevectorCap = 20;

namespace detail {
// Plain complex products. std::complex operator* goes through the C99 NaN-recovery path,
// which dominates the kernels below.
inline cdouble cmul(cdouble a, cdouble b) {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}
// conj(a) * b
inline cdouble cmulc(cdouble a, cdouble b) {
    return {a.real() * b.real() + a.imag() * b.imag(), a.real() * b.imag() - a.imag() * b.real()};
}
}  // namespace detail

/// Dense state. Qubit q is bit q of the basis index.
class StateVector {
   public:
    StateVector() = default;
    explicit StateVector(std::size_t n_qubits, std::size_t cap = kDefaultStatevectorCap) : n_(n_qubits) {
        if (n_qubits == 0) throw InvalidArgument("state needs at least one qubit");
        if (n_qubits > cap) {
            throw ResourceError("statevector limited to N <= " + std::to_string(cap) + " qubits (got " +
                                std::to_string(n_qubits) + ")");
        }
        amp_.assign(std::size_t{1} << n_qubits, cdouble(0));
        amp_[0] = 1;
    }

    std::size_t n_qubits() const {
        return n_;
    }
    const std::vector<cdouble> &amplitudes() const {
        return amp_;
    }
    std::vector<cdouble> &amplitudes() {
        return amp_;
    }

    double norm_squared() const {
        double s = 0;
        for (const auto &a : amp_) s += std::norm(a);
        return s;
    }

    void apply_h(std::size_t q) {
        const double r = 1.0 / std::sqrt(2.0);
        for_pairs(q, [r](cdouble &a, cdouble &b) {
            cdouble u = a, v = b;
            a = r * (u + v);
            b = r * (u - v);
        });
    }
    void apply_x(std::size_t q) {
        for_pairs(q, [](cdouble &a, cdouble &b) { std::swap(a, b); });
    }
    void apply_phase(std::size_t q, cdouble ph) {
        for_pairs(q, [ph](cdouble &, cdouble &b) { b = detail::cmul(b, ph); });
    }
    void apply_s(std::size_t q) {
        for_pairs(q, [](cdouble &, cdouble &b) { b = {-b.imag(), b.real()}; });
    }
    void apply_sdg(std::size_t q) {
        for_pairs(q, [](cdouble &, cdouble &b) { b = {b.imag(), -b.real()}; });
    }
    void apply_cx(std::size_t c, std::size_t t) {
        const std::size_t mc = std::size_t{1} << c;
        for_pairs(t, [&](cdouble &a, cdouble &b) {
            if ((static_cast<std::size_t>(&a - amp_.data()) & mc) != 0) std::swap(a, b);
        });
    }
    /// exp(-i theta V / 2) on qubit q.
    void apply_rotation(SingleQubitPauli axis, std::size_t q, double theta) {
        const double c = std::cos(theta / 2), s = std::sin(theta / 2);
        switch (axis) {
            case SingleQubitPauli::X:
                for_pairs(q, [c, s](cdouble &a, cdouble &b) {
                    cdouble u = a, v = b;
                    a = {c * u.real() + s * v.imag(), c * u.imag() - s * v.real()};
                    b = {c * v.real() + s * u.imag(), c * v.imag() - s * u.real()};
                });
                return;
            case SingleQubitPauli::Y:
                for_pairs(q, [c, s](cdouble &a, cdouble &b) {
                    cdouble u = a, v = b;
                    a = c * u - s * v;
                    b = s * u + c * v;
                });
                return;
            case SingleQubitPauli::Z: {
                cdouble p0(c, -s), p1(c, s);
                for_pairs(q, [p0, p1](cdouble &a, cdouble &b) {
                    a = detail::cmul(a, p0);
                    b = detail::cmul(b, p1);
                });
                return;
            }
            default:
                throw InvalidArgument("rotation axis must be X, Y or Z");
        }
    }

    /// Applies a circuit gate; ParamRot uses theta[param].
    void apply(const Gate &g, const std::vector<double> &theta) {
        switch (g.kind) {
            case GateKind::H:
                apply_h(g.q0);
                return;
            case GateKind::S:
                apply_s(g.q0);
                return;
            case GateKind::Sdg:
                apply_sdg(g.q0);
                return;
            case GateKind::X:
                apply_x(g.q0);
                return;
            case GateKind::CX:
                apply_cx(g.q0, g.q1);
                return;
            case GateKind::ParamRot:
                apply_rotation(g.axis, g.q0, theta[g.param]);
                return;
        }
    }

    /// Applies the inverse of a circuit gate.
    void apply_inverse(const Gate &g, const std::vector<double> &theta) {
        switch (g.kind) {
            case GateKind::S:
                apply_sdg(g.q0);
                return;
            case GateKind::Sdg:
                apply_s(g.q0);
                return;
            case GateKind::ParamRot:
                apply_rotation(g.axis, g.q0, -theta[g.param]);
                return;
            default:
                apply(g, theta);
                return;
        }
    }

    /// P|psi> for an unsigned-or-signed Pauli word (sign included).
    void apply_pauli(const PauliString &p) {
        std::vector<cdouble> out(amp_.size());
        uint64_t xm = mask_of(p.x_words()), zm = mask_of(p.z_words());
        int ny = std::popcount(xm & zm);
        cdouble base = ipow(ny) * double(p.sign());
        for (std::size_t b = 0; b < amp_.size(); b++) {
            double s = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
            out[b ^ xm] += s * detail::cmul(base, amp_[b]);
        }
        amp_.swap(out);
    }

    /// <psi|P|psi> with P|b> = i^{#Y} (-1)^{|b & z|} |b ^ x>.
    double pauli_expectation(const PauliString &p) const {
        if (p.n_qubits() != n_) throw DimensionError("Pauli width does not match state");
        uint64_t xm = mask_of(p.x_words()), zm = mask_of(p.z_words());
        int ny = std::popcount(xm & zm);
        cdouble acc = 0;
        for (std::size_t b = 0; b < amp_.size(); b++) {
            double s = (std::popcount(b & zm) & 1) ? -1.0 : 1.0;
            acc += s * detail::cmulc(amp_[b ^ xm], amp_[b]);
        }
        acc = detail::cmul(acc, ipow(ny));
        return p.sign() * acc.real();
    }

    static cdouble inner(const StateVector &a, const StateVector &b) {
        cdouble acc = 0;
        for (std::size_t i = 0; i < a.amp_.size(); i++) acc += detail::cmulc(a.amp_[i], b.amp_[i]);
        return acc;
    }

   private:
    static cdouble ipow(int k) {
        switch (k & 3) {
            case 0:
                return {1, 0};
            case 1:
                return {0, 1};
            case 2:
                return {-1, 0};
            default:
                return {0, -1};
        }
    }
    static uint64_t mask_of(const std::vector<uint64_t> &w) {
        return w.empty() ? 0 : w[0];
    }

    template <class F>
    void for_pairs(std::size_t q, F &&f) {
        const std::size_t m = std::size_t{1} << q;
        for (std::size_t hi = 0; hi < amp_.size(); hi += 2 * m) {
            for (std::size_t lo = hi; lo < hi + m; lo++) f(amp_[lo], amp_[lo | m]);
        }
    }

    std::size_t n_ = 0;
    std::vector<cdouble> amp_;
};

inline void check_theta(const Circuit &c, const std::vector<double> &theta) {
    if (theta.size() != c.n_params()) {
        throw DimensionError("theta has length " + std::to_string(theta.size()) + " but circuit has D=" +
                             std::to_string(c.n_params()));
    }
}

inline StateVector run(const Circuit &c, const std::vector<double> &theta, std::size_t cap = kDefaultStatevectorCap) {
    check_theta(c, theta);
    StateVector sv(c.n_qubits(), cap);
    for (const auto &g : c.gates()) sv.apply(g, theta);
    return sv;
}

inline double expectation(const StateVector &sv, const PauliObservable &obs) {
    if (obs.n_qubits() != sv.n_qubits()) throw DimensionError("observable width does not match state");
    double total = 0;
    for (const auto &t : obs.terms()) total += t.coeff * sv.pauli_expectation(t.word);
    return total;
}

inline double exact_cost(const Circuit &c, const PauliObservable &obs, const std::vector<double> &theta,
                         std::size_t cap = kDefaultStatevectorCap) {
    return expectation(run(c, theta, cap), obs);
}

struct GradientMode {
    enum Kind { ParameterShift, CentralDifference, Adjoint } kind = ParameterShift;
    double h = 1e-3;

    static GradientMode parameter_shift() {
        return {ParameterShift, 0};
    }
    static GradientMode central_difference(double h) {
        return {CentralDifference, h};
    }
    static GradientMode adjoint() {
        return {Adjoint, 0};
    }
};

/// <a| V_q |b> for a single-qubit Pauli V on qubit q.
inline cdouble single_pauli_inner(const StateVector &a, const StateVector &b, SingleQubitPauli v, std::size_t q) {
    using detail::cmulc;
    const auto &x = a.amplitudes();
    const auto &y = b.amplitudes();
    const std::size_t m = std::size_t{1} << q;
    auto sum = [&](auto &&term) {
        cdouble acc = 0;
        for (std::size_t hi = 0; hi < x.size(); hi += 2 * m) {
            for (std::size_t lo = hi; lo < hi + m; lo++) acc += term(x[lo], x[lo | m], y[lo], y[lo | m]);
        }
        return acc;
    };
    switch (v) {
        case SingleQubitPauli::X:
            return sum([](cdouble x0, cdouble x1, cdouble y0, cdouble y1) { return cmulc(x0, y1) + cmulc(x1, y0); });
        case SingleQubitPauli::Y: {
            // -i conj(x0) y1 + i conj(x1) y0
            cdouble r = sum([](cdouble x0, cdouble x1, cdouble y0, cdouble y1) { return cmulc(x1, y0) - cmulc(x0, y1); });
            return {-r.imag(), r.real()};
        }
        case SingleQubitPauli::Z:
            return sum([](cdouble x0, cdouble x1, cdouble y0, cdouble y1) { return cmulc(x0, y0) - cmulc(x1, y1); });
        default:
            return sum([](cdouble x0, cdouble x1, cdouble y0, cdouble y1) { return cmulc(x0, y0) + cmulc(x1, y1); });
    }
}

struct CostAndGradient {
    double cost = 0;
    std::vector<double> grad;
};

/// C(theta) and its gradient by adjoint differentiation: one forward and one backward sweep.
inline CostAndGradient adjoint_cost_and_gradient(const Circuit &c, const PauliObservable &obs,
                                                 const std::vector<double> &theta,
                                                 std::size_t cap = kDefaultStatevectorCap) {
    check_theta(c, theta);
    if (obs.n_qubits() != c.n_qubits()) throw DimensionError("observable width does not match circuit");
    StateVector psi = run(c, theta, cap);
    StateVector lambda = psi;
    std::fill(lambda.amplitudes().begin(), lambda.amplitudes().end(), cdouble(0));
    for (const auto &t : obs.terms()) {
        StateVector tmp = psi;
        tmp.apply_pauli(t.word);
        auto &la = lambda.amplitudes();
        const auto &ta = tmp.amplitudes();
        for (std::size_t b = 0; b < la.size(); b++) la[b] += t.coeff * ta[b];
    }
    CostAndGradient out;
    out.cost = StateVector::inner(psi, lambda).real();
    out.grad.assign(c.n_params(), 0.0);
    const auto &gates = c.gates();
    for (std::size_t i = gates.size(); i-- > 0;) {
        const Gate &g = gates[i];
        if (g.is_param()) {
            // dC/dtheta = 2 Re <lambda| (-i/2) V |psi> = Im <lambda|V|psi>, psi taken after the gate.
            out.grad[g.param] = single_pauli_inner(lambda, psi, g.axis, g.q0).imag();
        }
        psi.apply_inverse(g, theta);
        lambda.apply_inverse(g, theta);
    }
    return out;
}

inline std::vector<double> adjoint_gradient(const Circuit &c, const PauliObservable &obs,
                                            const std::vector<double> &theta, std::size_t cap = kDefaultStatevectorCap) {
    return adjoint_cost_and_gradient(c, obs, theta, cap).grad;
}

inline std::vector<double> gradient(const Circuit &c, const PauliObservable &obs, const std::vector<double> &theta,
                                    GradientMode mode = GradientMode::parameter_shift(),
                                    std::size_t cap = kDefaultStatevectorCap) {
    check_theta(c, theta);
    if (mode.kind == GradientMode::Adjoint) return adjoint_gradient(c, obs, theta, cap);
    std::vector<double> grad(c.n_params());
    std::vector<double> t = theta;
    for (std::size_t k = 0; k < c.n_params(); k++) {
        double step = mode.kind == GradientMode::ParameterShift ? M_PI / 2 : mode.h;
        t[k] = theta[k] + step;
        double plus = exact_cost(c, obs, t, cap);
        t[k] = theta[k] - step;
        double minus = exact_cost(c, obs, t, cap);
        t[k] = theta[k];
        grad[k] = mode.kind == GradientMode::ParameterShift ? 0.5 * (plus - minus) : (plus - minus) / (2 * mode.h);
    }
    return grad;
}

/// Per-term binomial estimate of <H>.
template <class Rng>
double sampled_expectation(const StateVector &sv, const PauliObservable &obs, uint64_t shots, Rng &rng) {
    if (shots == 0) throw InvalidArgument("shots must be >= 1");
    double total = 0;
    for (const auto &t : obs.terms()) {
        double e = sv.pauli_expectation(t.word);
        double p = std::clamp((1.0 + e) / 2.0, 0.0, 1.0);
        std::binomial_distribution<uint64_t> dist(shots, p);
        uint64_t k = dist(rng);
        total += t.coeff * (2.0 * static_cast<double>(k) / static_cast<double>(shots) - 1.0);
    }
    return total;
}

/// Parameter-shift gradient from finite-shot estimates at each shifted point.
template <class Rng>
std::vector<double> sampled_gradient(const Circuit &c, const PauliObservable &obs, const std::vector<double> &theta,
                                     uint64_t shots, Rng &rng, std::size_t cap = kDefaultStatevectorCap) {
    check_theta(c, theta);
    std::vector<double> grad(c.n_params());
    std::vector<double> t = theta;
    for (std::size_t k = 0; k < c.n_params(); k++) {
        t[k] = theta[k] + M_PI / 2;
        double plus = sampled_expectation(run(c, t, cap), obs, shots, rng);
        t[k] = theta[k] - M_PI / 2;
        double minus = sampled_expectation(run(c, t, cap), obs, shots, rng);
        t[k] = theta[k];
        grad[k] = 0.5 * (plus - minus);
    }
    return grad;
}

}  // namespace cliffpatch
