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

#include "cliffpatch/circuit.hpp"

#include <random>
#include <set>

#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace cliffpatch;
using P = SingleQubitPauli;

TEST(ansatz, parameter_counts) {
    for (std::size_t n = 2; n <= 16; n++) {
        for (std::size_t l = 1; l <= 8; l++) {
            EXPECT_EQ(build_ansatz({AnsatzFamily::mHEA, n, l, 0}).n_params(), 2 * n * (l + 1));
            EXPECT_EQ(build_ansatz({AnsatzFamily::fHEA, n, l, 0}).n_params(), 3 * n * (l + 1));
            EXPECT_EQ(build_ansatz({AnsatzFamily::rPQC, n, l, n * 100 + l}).n_params(), n * l);
        }
    }
}

TEST(ansatz, examples) {
    EXPECT_EQ(build_ansatz({AnsatzFamily::mHEA, 2, 1, 0}).n_params(), 8u);
    EXPECT_EQ(build_ansatz({AnsatzFamily::fHEA, 3, 2, 0}).n_params(), 27u);
    EXPECT_EQ(build_ansatz({AnsatzFamily::rPQC, 4, 3, 0}).n_params(), 12u);
}

TEST(ansatz, mhea_layout) {
    Circuit c = build_ansatz({AnsatzFamily::mHEA, 3, 1, 0});
    const auto &g = c.gates();
    ASSERT_EQ(g.size(), 15u);
    for (uint32_t q = 0; q < 3; q++) {
        EXPECT_EQ(g[q], Gate::rot(P::Y, q, q));
        EXPECT_EQ(g[3 + q], Gate::rot(P::Z, q, 3 + q));
        EXPECT_EQ(g[6 + q], Gate::cx(q, (q + 1) % 3));
        EXPECT_EQ(g[9 + q], Gate::rot(P::Y, q, 6 + q));
        EXPECT_EQ(g[12 + q], Gate::rot(P::Z, q, 9 + q));
    }
}

TEST(ansatz, fhea_entangler_is_all_pairs) {
    Circuit c = build_ansatz({AnsatzFamily::fHEA, 4, 2, 0});
    std::size_t cx = 0;
    for (const auto &g : c.gates()) {
        if (g.kind == GateKind::CX) {
            EXPECT_LT(g.q0, g.q1);
            cx++;
        }
    }
    EXPECT_EQ(cx, 2u * 6u);
}

TEST(ansatz, rpqc_is_seeded) {
    AnsatzSpec a{AnsatzFamily::rPQC, 6, 3, 42};
    EXPECT_EQ(build_ansatz(a), build_ansatz(a));
    std::set<std::size_t> distinct;
    for (uint64_t s = 0; s < 10; s++) {
        a.seed = s;
        distinct.insert(std::hash<std::string>{}(nlohmann::json(build_ansatz(a)).dump()));
    }
    EXPECT_GT(distinct.size(), 5u);
}

TEST(ansatz, parameters_are_ordered) {
    for (auto f : {AnsatzFamily::mHEA, AnsatzFamily::fHEA, AnsatzFamily::rPQC}) {
        Circuit c = build_ansatz({f, 5, 2, 3});
        uint32_t next = 0;
        for (const auto &g : c.gates()) {
            if (g.is_param()) {
                EXPECT_EQ(g.param, next++);
            }
        }
        EXPECT_EQ(next, c.n_params());
    }
}

TEST(ansatz, invalid_arguments) {
    EXPECT_THROW(build_ansatz({AnsatzFamily::mHEA, 3, 0, 0}), InvalidArgument);
    EXPECT_THROW(build_ansatz({AnsatzFamily::fHEA, 1, 1, 0}), InvalidArgument);
}

TEST(circuit, validation) {
    EXPECT_THROW(Circuit::from_gates(2, {Gate::h(2)}), IndexError);
    EXPECT_THROW(Circuit::from_gates(2, {Gate::cx(1, 1)}), InvalidArgument);
    EXPECT_THROW(Circuit::from_gates(2, {Gate::rot(P::Z, 0, 1)}), InvalidArgument);
    EXPECT_THROW(Circuit::from_gates(2, {Gate::rot(P::Z, 0, 0), Gate::rot(P::X, 1, 0)}), InvalidArgument);
    EXPECT_NO_THROW(Circuit::from_gates(2, {Gate::rot(P::Z, 0, 1), Gate::rot(P::X, 1, 0)}));
}

TEST(shift_vector, mod_four) {
    ShiftVector s(5);
    s.set(1, 4);
    EXPECT_EQ(s.get(1), 0);
    EXPECT_TRUE(s.entries().empty());
    s.set(2, -1);
    EXPECT_EQ(s.get(2), 3);
    s.set(0, 6);
    EXPECT_EQ(s.get(0), 2);
    ASSERT_EQ(s.entries().size(), 2u);
    EXPECT_EQ(s.entries()[0].first, 0u);
    s.set(0, 0);
    EXPECT_EQ(s.entries().size(), 1u);
    EXPECT_THROW(s.set(5, 1), IndexError);
    EXPECT_EQ(ShiftVector::from_dense({0, 5, 0, 3}), [] {
        ShiftVector t(4);
        t.set(3, 3);
        t.set(1, 1);
        return t;
    }());
}

TEST(clifford_at_shift, zero_and_unit) {
    Circuit c = build_ansatz({AnsatzFamily::mHEA, 3, 1, 0});
    // Identity rotations are dropped, leaving the Clifford skeleton.
    auto zero = clifford_gates_at_shift(c, ShiftVector(c.n_params()));
    std::vector<CliffordGate> skeleton;
    for (const auto &g : c.gates()) {
        if (!g.is_param()) skeleton.push_back(g.to_clifford());
    }
    EXPECT_EQ(zero, skeleton);
    auto one = clifford_gates_at_shift(c, ShiftVector::unit(c.n_params(), 4, 3));
    ASSERT_EQ(one.size(), skeleton.size() + 1);
    EXPECT_EQ(one[0], CliffordGate::rot(P::Z, 1, 3));
    EXPECT_EQ(clifford_gates_at_shift(c, ShiftVector::unit(c.n_params(), 7, 1))[3], CliffordGate::rot(P::Y, 1, 1));
    EXPECT_THROW(clifford_gates_at_shift(c, ShiftVector(c.n_params() + 1)), DimensionError);
}

TEST(lce_transform, identity_pair) {
    Circuit c = build_ansatz({AnsatzFamily::fHEA, 3, 1, 0});
    EXPECT_EQ(lce_transform(c, LcePair::identity(c)), c);
}

TEST(lce_transform, preserves_dimension_and_ordering) {
    Circuit c = build_ansatz({AnsatzFamily::mHEA, 4, 2, 0});
    LcePair p = LcePair::identity(c);
    p.q_gates = {Gate::h(0), Gate::s(1)};
    p.qtilde_gates = {Gate::cx(0, 3), Gate::sdg(2)};
    Circuit t = lce_transform(c, p);
    EXPECT_EQ(t.n_params(), c.n_params());
    EXPECT_EQ(t.n_qubits(), c.n_qubits());
    EXPECT_EQ(t.gates().front(), Gate::h(0));
    EXPECT_EQ(t.gates().back(), Gate::sdg(2));
    EXPECT_EQ(t.gates().size(), c.gates().size() + 4);
    LcePair bad = p;
    bad.n_params++;
    EXPECT_THROW(lce_transform(c, bad), DimensionError);
    bad = p;
    bad.q_gates.push_back(Gate::rot(P::Z, 0, 0));
    EXPECT_THROW(lce_transform(c, bad), InvalidArgument);
}

TEST(gate, inverse) {
    EXPECT_EQ(Gate::s(1).inverse(), Gate::sdg(1));
    EXPECT_EQ(Gate::sdg(1).inverse(), Gate::s(1));
    EXPECT_EQ(Gate::h(0).inverse(), Gate::h(0));
    EXPECT_EQ(Gate::cx(0, 1).inverse(), Gate::cx(0, 1));
    EXPECT_THROW(Gate::rot(P::X, 0, 0).inverse(), InvalidArgument);
}

TEST(json, circuit_round_trip) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; i++) {
        Circuit c = testutil::random_circuit(1 + i % 5, 40, 0.3, rng);
        nlohmann::json j = c;
        EXPECT_EQ(j.get<Circuit>(), c);
        EXPECT_EQ(nlohmann::json::parse(j.dump()).get<Circuit>(), c);
    }
}

TEST(json, lce_pair_round_trip) {
    Circuit c = build_ansatz({AnsatzFamily::mHEA, 3, 1, 0});
    LcePair p = LcePair::identity(c);
    p.q_gates = {Gate::h(1)};
    p.qtilde_gates = {Gate::cx(2, 0), Gate::s(0)};
    p.k = 5;
    p.i0 = 2;
    p.achieved_sign = -1;
    nlohmann::json j = p;
    LcePair back = j.get<LcePair>();
    EXPECT_EQ(back.q_gates, p.q_gates);
    EXPECT_EQ(back.qtilde_gates, p.qtilde_gates);
    EXPECT_EQ(back.k, 5u);
    EXPECT_EQ(back.i0, 2u);
    EXPECT_EQ(back.achieved_sign, -1);
    EXPECT_EQ(back.n_params, c.n_params());
}

TEST(json, rejects_bad_gates) {
    EXPECT_ANY_THROW(nlohmann::json::parse(R"({"n_qubits":2,"gates":[{"kind":"T","qubits":[0]}]})").get<Circuit>());
    EXPECT_ANY_THROW(nlohmann::json::parse(R"({"n_qubits":2,"gates":[{"kind":"H","qubits":[3]}]})").get<Circuit>());
}
