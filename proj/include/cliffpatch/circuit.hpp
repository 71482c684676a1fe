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
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cliffpatch/errors.hpp"
#include "cliffpatch/pauli.hpp"
#include "json.hpp"

namespace cliffpatch {

enum class GateKind : uint8_t { H, S, Sdg, X, CX, ParamRot };

struct Gate {
    GateKind kind = GateKind::H;
    uint32_t q0 = 0;
    uint32_t q1 = 0;  // CX target
    SingleQubitPauli axis = SingleQubitPauli::I;
    uint32_t param = 0;

    static Gate h(uint32_t q) {
        return {GateKind::H, q, 0, SingleQubitPauli::I, 0};
    }
    static Gate s(uint32_t q) {
        return {GateKind::S, q, 0, SingleQubitPauli::I, 0};
    }
    static Gate sdg(uint32_t q) {
        return {GateKind::Sdg, q, 0, SingleQubitPauli::I, 0};
    }
    static Gate x(uint32_t q) {
        return {GateKind::X, q, 0, SingleQubitPauli::I, 0};
    }
    static Gate cx(uint32_t control, uint32_t target) {
        return {GateKind::CX, control, target, SingleQubitPauli::I, 0};
    }
    static Gate rot(SingleQubitPauli axis, uint32_t q, uint32_t param) {
        return {GateKind::ParamRot, q, 0, axis, param};
    }

    bool is_param() const {
        return kind == GateKind::ParamRot;
    }

    /// Clifford element of a fixed gate. ParamRot maps to a rotation by t quarter turns.
    CliffordGate to_clifford(int quarter_turns = 0) const {
        switch (kind) {
            case GateKind::H:
                return CliffordGate::h(q0);
            case GateKind::S:
                return CliffordGate::s(q0);
            case GateKind::Sdg:
                return CliffordGate::sdg(q0);
            case GateKind::X:
                return CliffordGate::x(q0);
            case GateKind::CX:
                return CliffordGate::cx(q0, q1);
            case GateKind::ParamRot:
                return CliffordGate::rot(axis, q0, quarter_turns);
        }
        return CliffordGate::h(q0);
    }

    /// Inverse of a fixed Clifford gate.
    Gate inverse() const {
        Gate g = *this;
        if (kind == GateKind::S) g.kind = GateKind::Sdg;
        if (kind == GateKind::Sdg) g.kind = GateKind::S;
        if (kind == GateKind::ParamRot) {
            throw InvalidArgument("parameterized rotation has no fixed inverse");
        }
        return g;
    }

    bool operator==(const Gate &) const = default;
};

inline const char *gate_kind_name(GateKind k) {
    switch (k) {
        case GateKind::H:
            return "H";
        case GateKind::S:
            return "S";
        case GateKind::Sdg:
            return "Sdg";
        case GateKind::X:
            return "X";
        case GateKind::CX:
            return "CX";
        case GateKind::ParamRot:
            return "Rot";
    }
    return "?";
}

inline GateKind gate_kind_from_name(const std::string &s) {
    if (s == "H") return GateKind::H;
    if (s == "S") return GateKind::S;
    if (s == "Sdg") return GateKind::Sdg;
    if (s == "X") return GateKind::X;
    if (s == "CX") return GateKind::CX;
    if (s == "Rot") return GateKind::ParamRot;
    throw InvalidArgument("unknown gate kind '" + s + "'");
}

class Circuit {
   public:
    Circuit() = default;
    explicit Circuit(std::size_t n_qubits) : n_(n_qubits) {
        if (n_qubits == 0) throw InvalidArgument("circuit needs at least one qubit");
    }

    /// Builds from a raw gate list and validates all invariants.
    static Circuit from_gates(std::size_t n_qubits, std::vector<Gate> gates) {
        Circuit c(n_qubits);
        c.gates_ = std::move(gates);
        c.n_params_ = 0;
        for (const auto &g : c.gates_) {
            if (g.is_param()) c.n_params_++;
        }
        c.validate();
        return c;
    }

    void add(const Gate &g) {
        check_gate(g);
        if (g.is_param()) {
            throw InvalidArgument("use add_rotation for parameterized gates");
        }
        gates_.push_back(g);
    }
    void add_h(uint32_t q) {
        add(Gate::h(q));
    }
    void add_s(uint32_t q) {
        add(Gate::s(q));
    }
    void add_sdg(uint32_t q) {
        add(Gate::sdg(q));
    }
    void add_x(uint32_t q) {
        add(Gate::x(q));
    }
    void add_cx(uint32_t c, uint32_t t) {
        add(Gate::cx(c, t));
    }
    /// Appends a rotation and gives it the next parameter index.
    uint32_t add_rotation(SingleQubitPauli axis, uint32_t q) {
        Gate g = Gate::rot(axis, q, static_cast<uint32_t>(n_params_));
        check_gate(g);
        gates_.push_back(g);
        return static_cast<uint32_t>(n_params_++);
    }

    std::size_t n_qubits() const {
        return n_;
    }
    std::size_t n_params() const {
        return n_params_;
    }
    const std::vector<Gate> &gates() const {
        return gates_;
    }

    /// Position of each parameter's rotation in the gate list.
    std::vector<std::size_t> param_positions() const {
        std::vector<std::size_t> pos(n_params_);
        for (std::size_t i = 0; i < gates_.size(); i++) {
            if (gates_[i].is_param()) pos[gates_[i].param] = i;
        }
        return pos;
    }

    void validate() const {
        std::vector<char> seen(n_params_, 0);
        for (const auto &g : gates_) {
            check_gate(g);
            if (g.is_param()) {
                if (g.param >= n_params_ || seen[g.param]) {
                    throw InvalidArgument("parameter indices must be exactly 0..D-1");
                }
                seen[g.param] = 1;
            }
        }
    }

    bool operator==(const Circuit &) const = default;

   private:
    void check_gate(const Gate &g) const {
        if (g.q0 >= n_ || (g.kind == GateKind::CX && g.q1 >= n_)) {
            throw IndexError("gate qubit out of range");
        }
        if (g.kind == GateKind::CX && g.q0 == g.q1) {
            throw InvalidArgument("CX control equals target");
        }
        if (g.kind == GateKind::ParamRot && g.axis == SingleQubitPauli::I) {
            throw InvalidArgument("rotation axis must be X, Y or Z");
        }
    }

    std::size_t n_ = 0;
    std::vector<Gate> gates_;
    std::size_t n_params_ = 0;
};

enum class AnsatzFamily : uint8_t { mHEA, fHEA, rPQC };

inline const char *family_name(AnsatzFamily f) {
    switch (f) {
        case AnsatzFamily::mHEA:
            return "mHEA";
        case AnsatzFamily::fHEA:
            return "fHEA";
        case AnsatzFamily::rPQC:
            return "rPQC";
    }
    return "?";
}

inline AnsatzFamily family_from_name(const std::string &s) {
    if (s == "mHEA") return AnsatzFamily::mHEA;
    if (s == "fHEA") return AnsatzFamily::fHEA;
    if (s == "rPQC") return AnsatzFamily::rPQC;
    throw InvalidArgument("unknown ansatz family '" + s + "'");
}

struct AnsatzSpec {
    AnsatzFamily family = AnsatzFamily::mHEA;
    std::size_t n_qubits = 2;
    std::size_t layers = 1;
    uint64_t seed = 0;

    std::size_t expected_params() const {
        switch (family) {
            case AnsatzFamily::mHEA:
                return 2 * n_qubits * (layers + 1);
            case AnsatzFamily::fHEA:
                return 3 * n_qubits * (layers + 1);
            case AnsatzFamily::rPQC:
                return n_qubits * layers;
        }
        return 0;
    }
};

namespace detail {

inline void rotation_layer(Circuit &c, SingleQubitPauli axis) {
    for (uint32_t q = 0; q < c.n_qubits(); q++) c.add_rotation(axis, q);
}

}  // namespace detail

inline Circuit build_ansatz(const AnsatzSpec &spec) {
    if (spec.n_qubits < 2 || spec.layers < 1) {
        throw InvalidArgument("ansatz needs N >= 2 and L >= 1");
    }
    const auto n = static_cast<uint32_t>(spec.n_qubits);
    Circuit c(n);
    using P = SingleQubitPauli;
    switch (spec.family) {
        case AnsatzFamily::mHEA:
            detail::rotation_layer(c, P::Y);
            detail::rotation_layer(c, P::Z);
            for (std::size_t l = 0; l < spec.layers; l++) {
                for (uint32_t q = 0; q < n; q++) c.add_cx(q, (q + 1) % n);
                detail::rotation_layer(c, P::Y);
                detail::rotation_layer(c, P::Z);
            }
            break;
        case AnsatzFamily::fHEA:
            detail::rotation_layer(c, P::X);
            detail::rotation_layer(c, P::Y);
            detail::rotation_layer(c, P::Z);
            for (std::size_t l = 0; l < spec.layers; l++) {
                for (uint32_t i = 0; i < n; i++) {
                    for (uint32_t j = i + 1; j < n; j++) c.add_cx(i, j);
                }
                detail::rotation_layer(c, P::X);
                detail::rotation_layer(c, P::Y);
                detail::rotation_layer(c, P::Z);
            }
            break;
        case AnsatzFamily::rPQC: {
            std::mt19937_64 rng(spec.seed);
            std::bernoulli_distribution coin(0.5);
            std::uniform_int_distribution<uint32_t> qubit(0, n - 1);
            std::uniform_int_distribution<uint32_t> other(0, n - 2);
            std::uniform_int_distribution<int> axis(1, 3);
            for (std::size_t l = 0; l < spec.layers; l++) {
                for (uint32_t q = 0; q < n; q++) {
                    if (coin(rng)) c.add_h(q);
                }
                for (uint32_t q = 0; q < n; q++) {
                    if (coin(rng)) c.add_s(q);
                }
                for (uint32_t e = 0; e < n; e++) {
                    uint32_t a = qubit(rng);
                    uint32_t b = other(rng);
                    if (b >= a) b++;
                    c.add_cx(a, b);
                }
                for (uint32_t q = 0; q < n; q++) {
                    c.add_rotation(static_cast<P>(axis(rng)), q);
                }
            }
            break;
        }
    }
    return c;
}

/// Sparse point of the pi/2 grid: param index -> quarter turns in {1,2,3}. Entries are stored mod 4.
class ShiftVector {
   public:
    ShiftVector() = default;
    explicit ShiftVector(std::size_t dim) : dim_(dim) {
    }

    static ShiftVector from_dense(const std::vector<int> &turns) {
        ShiftVector s(turns.size());
        for (std::size_t k = 0; k < turns.size(); k++) s.set(k, turns[k]);
        return s;
    }

    static ShiftVector unit(std::size_t dim, std::size_t k, int turns) {
        ShiftVector s(dim);
        s.set(k, turns);
        return s;
    }

    std::size_t dim() const {
        return dim_;
    }

    void set(std::size_t k, int turns) {
        if (k >= dim_) throw IndexError("shift index out of range");
        auto t = static_cast<uint8_t>(((turns % 4) + 4) % 4);
        auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                                   [](const auto &e, std::size_t key) { return e.first < key; });
        if (it != entries_.end() && it->first == k) {
            if (t) {
                it->second = t;
            } else {
                entries_.erase(it);
            }
        } else if (t) {
            entries_.insert(it, {static_cast<uint32_t>(k), t});
        }
    }

    int get(std::size_t k) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                                   [](const auto &e, std::size_t key) { return e.first < key; });
        return (it != entries_.end() && it->first == k) ? it->second : 0;
    }

    /// Sorted (param, turns) pairs with turns != 0.
    const std::vector<std::pair<uint32_t, uint8_t>> &entries() const {
        return entries_;
    }

    bool operator==(const ShiftVector &) const = default;

   private:
    std::size_t dim_ = 0;
    std::vector<std::pair<uint32_t, uint8_t>> entries_;
};

inline std::vector<CliffordGate> clifford_gates_at_shift(const Circuit &c, const ShiftVector &shift) {
    if (shift.dim() != c.n_params()) {
        throw DimensionError("shift has dimension " + std::to_string(shift.dim()) + " but circuit has D=" +
                             std::to_string(c.n_params()));
    }
    std::vector<CliffordGate> out;
    out.reserve(c.gates().size());
    for (const auto &g : c.gates()) {
        if (g.is_param()) {
            int t = shift.get(g.param);
            if (t) out.push_back(g.to_clifford(t));
        } else {
            out.push_back(g.to_clifford());
        }
    }
    return out;
}

/// Clifford wrapper pair built for one direction k and observable term i0.
struct LcePair {
    std::vector<Gate> q_gates;       // applied before the circuit
    std::vector<Gate> qtilde_gates;  // applied after the circuit
    std::size_t n_qubits = 0;
    std::size_t n_params = 0;
    std::size_t k = 0;
    std::size_t i0 = 0;
    int achieved_sign = +1;

    static LcePair identity(const Circuit &c) {
        LcePair p;
        p.n_qubits = c.n_qubits();
        p.n_params = c.n_params();
        return p;
    }
};

inline Circuit lce_transform(const Circuit &c, const LcePair &pair) {
    if (pair.n_qubits != c.n_qubits() || pair.n_params != c.n_params()) {
        throw DimensionError("LCE pair was built for a different circuit shape");
    }
    std::vector<Gate> gates;
    gates.reserve(pair.q_gates.size() + c.gates().size() + pair.qtilde_gates.size());
    gates.insert(gates.end(), pair.q_gates.begin(), pair.q_gates.end());
    gates.insert(gates.end(), c.gates().begin(), c.gates().end());
    gates.insert(gates.end(), pair.qtilde_gates.begin(), pair.qtilde_gates.end());
    for (const auto &g : pair.q_gates) {
        if (g.is_param()) throw InvalidArgument("LCE gate lists must be Clifford");
    }
    for (const auto &g : pair.qtilde_gates) {
        if (g.is_param()) throw InvalidArgument("LCE gate lists must be Clifford");
    }
    return Circuit::from_gates(c.n_qubits(), std::move(gates));
}

// JSON: {n_qubits, gates:[{kind, qubits, axis?, param_index?}]}

inline void to_json(nlohmann::json &j, const Gate &g) {
    j = nlohmann::json::object();
    j["kind"] = gate_kind_name(g.kind);
    if (g.kind == GateKind::CX) {
        j["qubits"] = {g.q0, g.q1};
    } else {
        j["qubits"] = {g.q0};
    }
    if (g.is_param()) {
        j["axis"] = std::string(1, pauli_char(g.axis));
        j["param_index"] = g.param;
    }
}

inline void from_json(const nlohmann::json &j, Gate &g) {
    g = Gate{};
    g.kind = gate_kind_from_name(j.at("kind").get<std::string>());
    const auto &qs = j.at("qubits");
    std::size_t want = g.kind == GateKind::CX ? 2 : 1;
    if (!qs.is_array() || qs.size() != want) {
        throw InvalidArgument(std::string("gate '") + gate_kind_name(g.kind) + "' needs " + std::to_string(want) +
                              " qubit(s)");
    }
    g.q0 = qs[0].get<uint32_t>();
    if (want == 2) g.q1 = qs[1].get<uint32_t>();
    if (g.is_param()) {
        auto a = j.at("axis").get<std::string>();
        if (a.size() != 1) throw InvalidArgument("axis must be one letter");
        g.axis = pauli_from_char(a[0]);
        g.param = j.at("param_index").get<uint32_t>();
    }
}

inline void to_json(nlohmann::json &j, const Circuit &c) {
    j = nlohmann::json{{"n_qubits", c.n_qubits()}, {"gates", c.gates()}};
}

inline void from_json(const nlohmann::json &j, Circuit &c) {
    c = Circuit::from_gates(j.at("n_qubits").get<std::size_t>(), j.at("gates").get<std::vector<Gate>>());
}

inline void to_json(nlohmann::json &j, const LcePair &p) {
    j = nlohmann::json{{"n_qubits", p.n_qubits},   {"n_params", p.n_params},         {"k", p.k},
                       {"i0", p.i0},               {"achieved_sign", p.achieved_sign}, {"q_gates", p.q_gates},
                       {"qtilde_gates", p.qtilde_gates}};
}

inline void from_json(const nlohmann::json &j, LcePair &p) {
    p.n_qubits = j.at("n_qubits").get<std::size_t>();
    p.n_params = j.at("n_params").get<std::size_t>();
    p.k = j.at("k").get<std::size_t>();
    p.i0 = j.at("i0").get<std::size_t>();
    p.achieved_sign = j.at("achieved_sign").get<int>();
    p.q_gates = j.at("q_gates").get<std::vector<Gate>>();
    p.qtilde_gates = j.at("qtilde_gates").get<std::vector<Gate>>();
}

}  // namespace cliffpatch
