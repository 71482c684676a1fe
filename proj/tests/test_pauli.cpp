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

#include "cliffpatch/pauli.hpp"

#include <map>
#include <random>

#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace cliffpatch;
using testutil::Mat;

namespace {
using P = SingleQubitPauli;
PauliString ps(const char *s) {
    return PauliString::from_str(s);
}
}  // namespace

TEST(pauli_string, str_round_trip) {
    for (const char *s : {"X", "-XIZY", "IIII", "-Z", "YYYYYYYY"}) {
        EXPECT_EQ(ps(s).str(), s);
    }
    EXPECT_EQ(ps("+XZ").str(), "XZ");
    EXPECT_EQ(ps("_X").str(), "IX");
    std::string wide(130, 'I');
    wide[0] = 'X';
    wide[64] = 'Y';
    wide[129] = 'Z';
    EXPECT_EQ(ps(("-" + wide).c_str()).str(), "-" + wide);
}

TEST(pauli_string, parse_errors) {
    EXPECT_THROW(ps("XQ"), InvalidArgument);
    EXPECT_THROW(ps(""), InvalidArgument);
    EXPECT_THROW(ps("X").get(1), IndexError);
}

TEST(pauli_string, bits_match_letters) {
    auto p = ps("IXYZ");
    EXPECT_FALSE(p.x(0));
    EXPECT_FALSE(p.z(0));
    EXPECT_TRUE(p.x(1));
    EXPECT_FALSE(p.z(1));
    EXPECT_TRUE(p.x(2));
    EXPECT_TRUE(p.z(2));
    EXPECT_FALSE(p.x(3));
    EXPECT_TRUE(p.z(3));
    for (auto l : {P::I, P::X, P::Y, P::Z}) {
        p.set(0, l);
        EXPECT_EQ(p.get(0), l);
    }
}

TEST(conjugate, table_examples) {
    EXPECT_EQ(conjugate_by_clifford_gate(ps("X"), CliffordGate::h(0)), ps("Z"));
    EXPECT_EQ(conjugate_by_clifford_gate(ps("X"), CliffordGate::s(0)), ps("-Y"));
    EXPECT_EQ(conjugate_by_clifford_gate(ps("XI"), CliffordGate::cx(0, 1)), ps("XX"));
    EXPECT_EQ(conjugate_by_gate_list(ps("Z"), {}), ps("Z"));
}

TEST(conjugate, full_tables) {
    // H, S and CX rows.
    EXPECT_EQ(conjugate_by_clifford_gate(ps("Y"), CliffordGate::h(0)), ps("-Y"));
    EXPECT_EQ(conjugate_by_clifford_gate(ps("Z"), CliffordGate::h(0)), ps("X"));
    EXPECT_EQ(conjugate_by_clifford_gate(ps("Y"), CliffordGate::s(0)), ps("X"));
    EXPECT_EQ(conjugate_by_clifford_gate(ps("Z"), CliffordGate::s(0)), ps("Z"));
    EXPECT_EQ(conjugate_by_clifford_gate(ps("YI"), CliffordGate::cx(0, 1)), ps("YX"));
    EXPECT_EQ(conjugate_by_clifford_gate(ps("ZI"), CliffordGate::cx(0, 1)), ps("ZI"));
    EXPECT_EQ(conjugate_by_clifford_gate(ps("IX"), CliffordGate::cx(0, 1)), ps("IX"));
    EXPECT_EQ(conjugate_by_clifford_gate(ps("IY"), CliffordGate::cx(0, 1)), ps("ZY"));
    EXPECT_EQ(conjugate_by_clifford_gate(ps("IZ"), CliffordGate::cx(0, 1)), ps("ZZ"));
    // SH maps X -> Y -> Z -> X.
    std::vector<CliffordGate> sh{CliffordGate::h(0), CliffordGate::s(0)};
    EXPECT_EQ(conjugate_by_gate_list(ps("X"), sh), ps("Y"));
    EXPECT_EQ(conjugate_by_gate_list(ps("Y"), sh), ps("Z"));
    EXPECT_EQ(conjugate_by_gate_list(ps("Z"), sh), ps("X"));
}

TEST(conjugate, rotation_examples) {
    EXPECT_EQ(conjugate_by_rotation(ps("Y"), P::X, 0, 1), ps("-Z"));
    for (int t = 0; t < 8; t++) EXPECT_EQ(conjugate_by_rotation(ps("Z"), P::Z, 0, t), ps("Z"));
    EXPECT_EQ(conjugate_by_rotation(ps("X"), P::Y, 0, 2), ps("-X"));
    EXPECT_EQ(conjugate_by_rotation(ps("X"), P::Y, 0, -1), conjugate_by_rotation(ps("X"), P::Y, 0, 3));
    EXPECT_THROW(conjugate_by_rotation(ps("X"), P::I, 0, 1), InvalidArgument);
}

TEST(conjugate, rotation_table_both_signs) {
    struct Row {
        P axis;
        const char *in;
        const char *plus;
        const char *minus;
    };
    std::vector<Row> rows{{P::X, "Y", "-Z", "Z"}, {P::X, "Z", "Y", "-Y"}, {P::Y, "X", "Z", "-Z"},
                          {P::Y, "Z", "-X", "X"}, {P::Z, "X", "-Y", "Y"}, {P::Z, "Y", "X", "-X"}};
    for (const auto &r : rows) {
        EXPECT_EQ(conjugate_by_rotation(ps(r.in), r.axis, 0, 1), ps(r.plus)) << r.in;
        EXPECT_EQ(conjugate_by_rotation(ps(r.in), r.axis, 0, 3), ps(r.minus)) << r.in;
    }
}

TEST(conjugate, quarter_turn_composition) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; trial++) {
        PauliString p = random_nonidentity_pauli(3, rng);
        for (auto axis : {P::X, P::Y, P::Z}) {
            for (int t = 0; t < 4; t++) {
                PauliString stepwise = p;
                for (int i = 0; i < t; i++) stepwise = conjugate_by_rotation(stepwise, axis, 1, 1);
                EXPECT_EQ(conjugate_by_rotation(p, axis, 1, t), stepwise);
            }
            PauliString by_axis = p;
            PauliString v(3);
            v.set(1, axis);
            if (!commutes(p, v)) by_axis.flip_sign();
            EXPECT_EQ(conjugate_by_rotation(p, axis, 1, 2), by_axis);
        }
    }
}

TEST(conjugate, index_errors) {
    EXPECT_THROW(conjugate_by_clifford_gate(ps("XX"), CliffordGate::h(2)), IndexError);
    EXPECT_THROW(conjugate_by_clifford_gate(ps("XX"), CliffordGate::cx(0, 5)), IndexError);
    EXPECT_THROW(conjugate_by_rotation(ps("XX"), P::Z, 3, 1), IndexError);
}

// g^dagger P g against dense matrices, sign included, for every word on two qubits
// and random words on three.
TEST(conjugate, dense_matrix_oracle) {
    std::mt19937_64 rng(11);
    auto check = [](const PauliString &p, const CliffordGate &g) {
        std::size_t n = p.n_qubits();
        Mat u = testutil::clifford_matrix(g, n);
        Mat expect = u.dagger() * testutil::pauli_matrix(p) * u;
        Mat got = testutil::pauli_matrix(conjugate_by_clifford_gate(p, g));
        EXPECT_LT(expect.dist(got), 1e-12) << p.str();
    };
    std::vector<CliffordGate> gates2{CliffordGate::h(0),  CliffordGate::h(1),     CliffordGate::s(0),
                                     CliffordGate::sdg(1), CliffordGate::x(0),    CliffordGate::cx(0, 1),
                                     CliffordGate::cx(1, 0)};
    for (auto a : {P::X, P::Y, P::Z})
        for (int t = 0; t < 4; t++) {
            gates2.push_back(CliffordGate::rot(a, 0, t));
            gates2.push_back(CliffordGate::rot(a, 1, t));
        }
    for (int w = 0; w < 16; w++) {
        PauliString p(2);
        p.set(0, static_cast<P>(w & 3));
        p.set(1, static_cast<P>(w >> 2));
        for (bool neg : {false, true}) {
            p.set_negative(neg);
            for (const auto &g : gates2) check(p, g);
        }
    }
    for (int trial = 0; trial < 300; trial++) {
        PauliString p = random_nonidentity_pauli(3, rng);
        check(p, testutil::random_clifford_gate(3, rng));
    }
}

TEST(conjugate, gate_list_dense_oracle) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; trial++) {
        std::vector<CliffordGate> gates;
        for (int i = 0; i < 12; i++) gates.push_back(testutil::random_clifford_gate(3, rng));
        Mat u = Mat::identity(8);
        for (const auto &g : gates) u = testutil::clifford_matrix(g, 3) * u;
        PauliString p = random_nonidentity_pauli(3, rng);
        Mat expect = u.dagger() * testutil::pauli_matrix(p) * u;
        EXPECT_LT(expect.dist(testutil::pauli_matrix(conjugate_by_gate_list(p, gates))), 1e-12);
    }
}

TEST(conjugate, group_action_and_inverse) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; trial++) {
        std::size_t n = 1 + trial % 8;
        std::size_t len = 1 + (trial * 37) % 100;
        std::vector<CliffordGate> a, b;
        for (std::size_t i = 0; i < len; i++) (i % 2 ? a : b).push_back(testutil::random_clifford_gate(n, rng));
        PauliString p = random_nonidentity_pauli(n, rng);
        // U = B A (A applied first): U^dag P U = A^dag (B^dag P B) A.
        std::vector<CliffordGate> ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        EXPECT_EQ(conjugate_by_gate_list(p, ab), conjugate_by_gate_list(conjugate_by_gate_list(p, b), a));
        // Undo with inverse gates in reverse order.
        std::vector<CliffordGate> inv;
        for (auto it = ab.rbegin(); it != ab.rend(); ++it) {
            CliffordGate g = *it;
            if (g.kind == CliffordKind::S) {
                g.kind = CliffordKind::Sdg;
            } else if (g.kind == CliffordKind::Sdg) {
                g.kind = CliffordKind::S;
            } else if (g.kind == CliffordKind::Rot) {
                g.quarter_turns = (4 - g.quarter_turns) % 4;
            }
            inv.push_back(g);
        }
        EXPECT_EQ(conjugate_by_gate_list(conjugate_by_gate_list(p, ab), inv), p);
    }
}

TEST(conjugate, preserves_commutation) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 500; trial++) {
        std::size_t n = 1 + trial % 6;
        PauliString p = random_nonidentity_pauli(n, rng), q = random_nonidentity_pauli(n, rng);
        CliffordGate g = testutil::random_clifford_gate(n, rng);
        EXPECT_EQ(commutes(p, q), commutes(conjugate_by_clifford_gate(p, g), conjugate_by_clifford_gate(q, g)));
    }
}

TEST(conjugate, wide_strings_cross_word_boundaries) {
    // A 2-qubit problem embedded at qubits (63, 64) and (5, 130) must behave like the compact one.
    std::mt19937_64 rng(15);
    for (auto [a, b] : std::vector<std::pair<uint32_t, uint32_t>>{{63, 64}, {5, 130}, {127, 0}}) {
        for (int trial = 0; trial < 100; trial++) {
            PauliString small = random_nonidentity_pauli(2, rng);
            CliffordGate g = testutil::random_clifford_gate(2, rng);
            PauliString wide(140);
            wide.set(a, small.get(0));
            wide.set(b, small.get(1));
            CliffordGate gw = g;
            gw.q0 = g.q0 == 0 ? a : b;
            gw.q1 = g.q1 == 0 ? a : b;
            PauliString r = conjugate_by_clifford_gate(small, g);
            PauliString rw = conjugate_by_clifford_gate(wide, gw);
            EXPECT_EQ(rw.get(a), r.get(0));
            EXPECT_EQ(rw.get(b), r.get(1));
            EXPECT_EQ(rw.sign(), r.sign());
            EXPECT_EQ(rw.weight(), r.weight());
        }
    }
}

TEST(commutes, examples) {
    EXPECT_FALSE(commutes(ps("X"), ps("Z")));
    EXPECT_TRUE(commutes(ps("XX"), ps("ZZ")));
    EXPECT_TRUE(commutes(ps("XYZ"), ps("XYZ")));
    EXPECT_THROW(commutes(ps("X"), ps("XX")), DimensionError);
}

TEST(commutes, dense_oracle) {
    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 200; trial++) {
        PauliString p = random_nonidentity_pauli(3, rng), q = random_nonidentity_pauli(3, rng);
        Mat a = testutil::pauli_matrix(p), b = testutil::pauli_matrix(q);
        EXPECT_EQ(commutes(p, q), (a * b).dist(b * a) < 1e-12);
    }
}

TEST(random_pauli, single_qubit_uniform) {
    std::mt19937_64 rng(17);
    std::map<std::string, int> counts;
    const int draws = 10000;
    for (int i = 0; i < draws; i++) {
        PauliString p = random_nonidentity_pauli(1, rng);
        ASSERT_FALSE(p.is_identity());
        ASSERT_EQ(p.sign(), 1);
        counts[p.str()]++;
    }
    ASSERT_EQ(counts.size(), 3u);
    double expect = draws / 3.0, sigma = std::sqrt(draws * (1 / 3.0) * (2 / 3.0)), chi2 = 0;
    for (auto &[k, c] : counts) {
        EXPECT_NEAR(c, expect, 3 * sigma) << k;
        chi2 += (c - expect) * (c - expect) / expect;
    }
    EXPECT_LT(chi2, 13.8);  // 2 dof, p = 0.001
}

TEST(random_pauli, identity_marginal_four_qubits) {
    // Among the 255 non-identity words, qubit 0 carries I in 63 of them.
    std::mt19937_64 rng(18);
    const int draws = 100000;
    int ident = 0;
    for (int i = 0; i < draws; i++) ident += random_nonidentity_pauli(4, rng).get(0) == P::I;
    double p = 63.0 / 255.0, sigma = std::sqrt(draws * p * (1 - p));
    EXPECT_NEAR(ident, draws * p, 3 * sigma);
}

TEST(random_pauli, wide_words_have_no_stray_bits) {
    std::mt19937_64 rng(19);
    for (int i = 0; i < 50; i++) {
        PauliString p = random_nonidentity_pauli(70, rng);
        EXPECT_EQ(p.x_words()[1] >> 6, 0u);
        EXPECT_EQ(p.z_words()[1] >> 6, 0u);
    }
}
