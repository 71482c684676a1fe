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

#include <bit>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cliffpatch/errors.hpp"

namespace cliffpatch {

enum class SingleQubitPauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(SingleQubitPauli p) {
    return "IXYZ"[static_cast<int>(p)];
}

inline SingleQubitPauli pauli_from_char(char c) {
    switch (c) {
        case 'I':
        case '_':
            return SingleQubitPauli::I;
        case 'X':
            return SingleQubitPauli::X;
        case 'Y':
            return SingleQubitPauli::Y;
        case 'Z':
            return SingleQubitPauli::Z;
        default:
            throw InvalidArgument(std::string("not a Pauli letter: '") + c + "'");
    }
}

/// (x, z) bit pair of a single-qubit Pauli.
inline constexpr bool pauli_x_bit(SingleQubitPauli p) {
    return p == SingleQubitPauli::X || p == SingleQubitPauli::Y;
}
inline constexpr bool pauli_z_bit(SingleQubitPauli p) {
    return p == SingleQubitPauli::Z || p == SingleQubitPauli::Y;
}
inline constexpr SingleQubitPauli pauli_from_bits(bool x, bool z) {
    return x ? (z ? SingleQubitPauli::Y : SingleQubitPauli::X) : (z ? SingleQubitPauli::Z : SingleQubitPauli::I);
}

/// Signed Pauli word in symplectic form. Bit q of the masks belongs to qubit q.
class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(std::size_t n_qubits)
        : n_(n_qubits), x_((n_qubits + 63) / 64, 0), z_((n_qubits + 63) / 64, 0) {
        if (n_qubits == 0) {
            throw InvalidArgument("PauliString needs at least one qubit");
        }
    }

    /// Parses "-XIZY" style text. Accepts an optional leading '+' or '-'.
    static PauliString from_str(std::string_view text) {
        bool neg = false;
        if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
            neg = text[0] == '-';
            text.remove_prefix(1);
        }
        PauliString p(text.size());
        for (std::size_t q = 0; q < text.size(); q++) {
            p.set(q, pauli_from_char(text[q]));
        }
        p.neg_ = neg;
        return p;
    }

    /// Single-letter word on one qubit.
    static PauliString single(std::size_t n_qubits, std::size_t qubit, SingleQubitPauli p) {
        PauliString r(n_qubits);
        r.set(qubit, p);
        return r;
    }

    std::string str() const {
        std::string s;
        s.reserve(n_ + 1);
        if (neg_) {
            s.push_back('-');
        }
        for (std::size_t q = 0; q < n_; q++) {
            s.push_back(pauli_char(get(q)));
        }
        return s;
    }

    std::size_t n_qubits() const {
        return n_;
    }
    std::size_t num_words() const {
        return x_.size();
    }

    bool x(std::size_t q) const {
        return (x_[q >> 6] >> (q & 63)) & 1;
    }
    bool z(std::size_t q) const {
        return (z_[q >> 6] >> (q & 63)) & 1;
    }

    SingleQubitPauli get(std::size_t q) const {
        check_qubit(q);
        return pauli_from_bits(x(q), z(q));
    }

    void set(std::size_t q, SingleQubitPauli p) {
        check_qubit(q);
        uint64_t bit = uint64_t{1} << (q & 63);
        x_[q >> 6] = pauli_x_bit(p) ? (x_[q >> 6] | bit) : (x_[q >> 6] & ~bit);
        z_[q >> 6] = pauli_z_bit(p) ? (z_[q >> 6] | bit) : (z_[q >> 6] & ~bit);
    }

    bool negative() const {
        return neg_;
    }
    int sign() const {
        return neg_ ? -1 : +1;
    }
    void flip_sign() {
        neg_ = !neg_;
    }
    void set_negative(bool neg) {
        neg_ = neg;
    }

    const std::vector<uint64_t> &x_words() const {
        return x_;
    }
    const std::vector<uint64_t> &z_words() const {
        return z_;
    }
    std::vector<uint64_t> &x_words() {
        return x_;
    }
    std::vector<uint64_t> &z_words() {
        return z_;
    }

    bool is_identity() const {
        for (std::size_t w = 0; w < x_.size(); w++) {
            if (x_[w] | z_[w]) {
                return false;
            }
        }
        return true;
    }

    /// True iff the word is a product of I and Z only.
    bool is_diagonal() const {
        for (uint64_t w : x_) {
            if (w) {
                return false;
            }
        }
        return true;
    }

    std::size_t weight() const {
        std::size_t w = 0;
        for (std::size_t i = 0; i < x_.size(); i++) {
            w += std::popcount(x_[i] | z_[i]);
        }
        return w;
    }

    /// Same letters, ignoring sign.
    bool same_word(const PauliString &other) const {
        return n_ == other.n_ && x_ == other.x_ && z_ == other.z_;
    }

    bool operator==(const PauliString &other) const {
        return same_word(other) && neg_ == other.neg_;
    }

    void check_qubit(std::size_t q) const {
        if (q >= n_) {
            throw IndexError("qubit " + std::to_string(q) + " out of range for " + std::to_string(n_) + " qubits");
        }
    }

    // Raw bit helpers used by the conjugation kernels; no range checks.
    void toggle_x(std::size_t q) {
        x_[q >> 6] ^= uint64_t{1} << (q & 63);
    }
    void toggle_z(std::size_t q) {
        z_[q >> 6] ^= uint64_t{1} << (q & 63);
    }

   private:
    std::size_t n_ = 0;
    std::vector<uint64_t> x_;
    std::vector<uint64_t> z_;
    bool neg_ = false;
};

inline bool commutes(const PauliString &p, const PauliString &q) {
    if (p.n_qubits() != q.n_qubits()) {
        throw DimensionError("commutes: width mismatch");
    }
    const auto &px = p.x_words();
    const auto &pz = p.z_words();
    const auto &qx = q.x_words();
    const auto &qz = q.z_words();
    uint64_t acc = 0;
    for (std::size_t w = 0; w < px.size(); w++) {
        acc ^= (px[w] & qz[w]) ^ (pz[w] & qx[w]);
    }
    return std::popcount(acc) % 2 == 0;
}

/// Elementary Clifford element used by conjugation. Rot carries a multiple of pi/2.
enum class CliffordKind : uint8_t { H, S, Sdg, X, CX, Rot };

struct CliffordGate {
    CliffordKind kind = CliffordKind::H;
    uint32_t q0 = 0;
    uint32_t q1 = 0;
    SingleQubitPauli axis = SingleQubitPauli::I;
    uint8_t quarter_turns = 0;

    static CliffordGate h(uint32_t q) {
        return {CliffordKind::H, q, 0, SingleQubitPauli::I, 0};
    }
    static CliffordGate s(uint32_t q) {
        return {CliffordKind::S, q, 0, SingleQubitPauli::I, 0};
    }
    static CliffordGate sdg(uint32_t q) {
        return {CliffordKind::Sdg, q, 0, SingleQubitPauli::I, 0};
    }
    static CliffordGate x(uint32_t q) {
        return {CliffordKind::X, q, 0, SingleQubitPauli::I, 0};
    }
    static CliffordGate cx(uint32_t control, uint32_t target) {
        return {CliffordKind::CX, control, target, SingleQubitPauli::I, 0};
    }
    static CliffordGate rot(SingleQubitPauli axis, uint32_t q, int quarter_turns) {
        return {CliffordKind::Rot, q, 0, axis, static_cast<uint8_t>(((quarter_turns % 4) + 4) % 4)};
    }

    bool operator==(const CliffordGate &) const = default;
};

namespace detail {

// Rotation kernel R_V(t*pi/2)^dagger P R_V(t*pi/2) on one qubit, t in {1,2,3}, no checks.
inline void rotate_unchecked(PauliString &p, SingleQubitPauli axis, std::size_t q, unsigned t) {
    bool x = p.x(q), z = p.z(q);
    switch (axis) {
        case SingleQubitPauli::X:
            if (!z) return;
            if (t == 2) {
                p.flip_sign();
            } else {
                // +pi/2: Y -> -Z, Z -> Y.  -pi/2: Y -> Z, Z -> -Y.
                if ((t == 1) == x) p.flip_sign();
                p.toggle_x(q);
            }
            return;
        case SingleQubitPauli::Y:
            if (x == z) return;
            if (t == 2) {
                p.flip_sign();
            } else {
                // +pi/2: X -> Z, Z -> -X.  -pi/2: X -> -Z, Z -> X.
                if ((t == 1) ? z : x) p.flip_sign();
                p.toggle_x(q);
                p.toggle_z(q);
            }
            return;
        case SingleQubitPauli::Z:
            if (!x) return;
            if (t == 2) {
                p.flip_sign();
            } else {
                // +pi/2: X -> -Y, Y -> X.  -pi/2: X -> Y, Y -> -X.
                if ((t == 1) != z) p.flip_sign();
                p.toggle_z(q);
            }
            return;
        default:
            return;
    }
}

}  // namespace detail

/// In-place g^dagger p g. Qubit indices are validated.
inline void conjugate_in_place(PauliString &p, const CliffordGate &g) {
    p.check_qubit(g.q0);
    std::size_t q = g.q0;
    switch (g.kind) {
        case CliffordKind::H: {
            bool x = p.x(q), z = p.z(q);
            if (x && z) p.flip_sign();
            if (x != z) {
                p.toggle_x(q);
                p.toggle_z(q);
            }
            return;
        }
        case CliffordKind::S: {
            if (p.x(q)) {
                if (!p.z(q)) p.flip_sign();
                p.toggle_z(q);
            }
            return;
        }
        case CliffordKind::Sdg: {
            if (p.x(q)) {
                if (p.z(q)) p.flip_sign();
                p.toggle_z(q);
            }
            return;
        }
        case CliffordKind::X: {
            if (p.z(q)) p.flip_sign();
            return;
        }
        case CliffordKind::CX: {
            p.check_qubit(g.q1);
            std::size_t c = g.q0, t = g.q1;
            if (c == t) {
                throw InvalidArgument("CX control equals target");
            }
            bool xc = p.x(c), zc = p.z(c), xt = p.x(t), zt = p.z(t);
            if (xc && zt && (xt == zc)) p.flip_sign();
            if (xc) p.toggle_x(t);
            if (zt) p.toggle_z(c);
            return;
        }
        case CliffordKind::Rot: {
            if (g.axis == SingleQubitPauli::I) {
                throw InvalidArgument("rotation axis must be X, Y or Z");
            }
            if (g.quarter_turns & 3) detail::rotate_unchecked(p, g.axis, q, g.quarter_turns & 3);
            return;
        }
    }
}

inline PauliString conjugate_by_clifford_gate(PauliString p, const CliffordGate &g) {
    conjugate_in_place(p, g);
    return p;
}

/// R_axis(t*pi/2)^dagger p R_axis(t*pi/2) with R_V(a) = exp(-i a V / 2). t is reduced mod 4.
inline PauliString conjugate_by_rotation(PauliString p, SingleQubitPauli axis, std::size_t qubit, int quarter_turns) {
    if (axis == SingleQubitPauli::I) {
        throw InvalidArgument("rotation axis must be X, Y or Z");
    }
    p.check_qubit(qubit);
    unsigned t = static_cast<unsigned>(((quarter_turns % 4) + 4) % 4);
    if (t) detail::rotate_unchecked(p, axis, qubit, t);
    return p;
}

/// Heisenberg picture: for U = g_n ... g_1 returns U^dagger p U, walking the list from the back.
inline PauliString conjugate_by_gate_list(PauliString p, const std::vector<CliffordGate> &gates) {
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        conjugate_in_place(p, *it);
    }
    return p;
}

/// Uniform over the 4^n - 1 non-identity words, sign +1.
template <class Rng>
PauliString random_nonidentity_pauli(std::size_t n, Rng &rng) {
    PauliString p(n);
    std::uniform_int_distribution<uint64_t> bits;
    std::size_t tail = n & 63;
    uint64_t last_mask = tail ? ((uint64_t{1} << tail) - 1) : ~uint64_t{0};
    do {
        for (std::size_t w = 0; w < p.num_words(); w++) {
            uint64_t mask = (w + 1 == p.num_words()) ? last_mask : ~uint64_t{0};
            p.x_words()[w] = bits(rng) & mask;
            p.z_words()[w] = bits(rng) & mask;
        }
    } while (p.is_identity());
    return p;
}

}  // namespace cliffpatch
