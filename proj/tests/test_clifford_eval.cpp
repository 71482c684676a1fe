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

#include "cliffpatch/clifford_eval.hpp"

#include <random>

#include "cliffpatch/statevector.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace cliffpatch;
using P = SingleQubitPauli;

namespace {

std::vector<double> shift_angles(const ShiftVector &s) {
    std::vector<double> theta(s.dim(), 0.0);
    for (auto [k, t] : s.entries()) theta[k] = t * M_PI / 2;
    return theta;
}

template <class R>
ShiftVector random_shift(std::size_t dim, R &rng) {
    std::uniform_int_distribution<int> t(0, 3);
    ShiftVector s(dim);
    for (std::size_t k = 0; k < dim; k++) s.set(k, t(rng));
    return s;
}

}  // namespace

TEST(vacuum, examples) {
    EXPECT_EQ(vacuum_expectation(PauliString::from_str("ZIZ")), 1);
    EXPECT_EQ(vacuum_expectation(PauliString::from_str("-ZII")), -1);
    EXPECT_EQ(vacuum_expectation(PauliString::from_str("XII")), 0);
    EXPECT_EQ(vacuum_expectation(PauliString::from_str("IYI")), 0);
    EXPECT_EQ(vacuum_expectation(PauliString::from_str("III")), 1);
}

TEST(cost_at_shift, matches_statevector) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 150; trial++) {
        std::size_t n = 1 + trial % 6;
        Circuit c = testutil::random_circuit(n, 30, 0.4, rng);
        if (c.n_params() == 0) c.add_rotation(P::Y, 0);
        auto obs = random_observable(n, 1 + trial % 4, true, rng);
        ShiftVector s = random_shift(c.n_params(), rng);
        ShiftCache cache;
        double fast = cost_at_shift(c, obs, s, cache);
        double exact = exact_cost(c, obs, shift_angles(s));
        EXPECT_NEAR(fast, exact, 1e-10) << trial;
    }
}

TEST(cost_at_shift, examples) {
    // R_Y(pi/2)|0> has <Z> = 0, R_Y(pi)|0> has <Z> = -1.
    Circuit c(1);
    c.add_rotation(P::Y, 0);
    auto z = PauliObservable::single(PauliString::from_str("Z"));
    ShiftCache cache;
    EXPECT_EQ(cost_at_shift(c, z, ShiftVector::unit(1, 0, 1), cache), 0.0);
    EXPECT_EQ(cost_at_shift(c, z, ShiftVector::unit(1, 0, 2), cache), -1.0);
    EXPECT_EQ(cost_at_shift(c, z, ShiftVector(1), cache), 1.0);
    EXPECT_THROW(cost_at_shift(c, z, ShiftVector(2), cache), DimensionError);
}

TEST(cost_at_shift, observable_linearity) {
    std::mt19937_64 rng(22);
    Circuit c = build_ansatz({AnsatzFamily::fHEA, 4, 1, 0});
    for (int trial = 0; trial < 20; trial++) {
        auto a = random_observable(4, 3, true, rng);
        auto b = random_observable(4, 2, true, rng);
        std::vector<PauliTerm> both = a.terms();
        for (const auto &t : b.terms()) both.push_back({-2.5 * t.coeff, t.word});
        PauliObservable comb(4, both);
        ShiftVector s = random_shift(c.n_params(), rng);
        ShiftCache c1, c2, c3;
        EXPECT_NEAR(cost_at_shift(c, comb, s, c1), cost_at_shift(c, a, s, c2) - 2.5 * cost_at_shift(c, b, s, c3),
                    1e-12);
    }
}

TEST(cost_at_shift, lattice_values) {
    // Each term contributes one of {-c, 0, +c}.
    std::mt19937_64 rng(23);
    Circuit c = build_ansatz({AnsatzFamily::mHEA, 5, 2, 0});
    for (int trial = 0; trial < 200; trial++) {
        auto obs = random_observable(5, 1, true, rng);
        ShiftCache cache;
        double v = cost_at_shift(c, obs, random_shift(c.n_params(), rng), cache);
        double ratio = v / obs[0].coeff;
        EXPECT_TRUE(ratio == 0.0 || ratio == 1.0 || ratio == -1.0) << ratio;
    }
}

TEST(cache, counters) {
    Circuit c = build_ansatz({AnsatzFamily::mHEA, 3, 1, 0});
    auto obs = PauliObservable::single(PauliString::from_str("ZZZ"));
    ShiftCache cache;
    ShiftVector s = ShiftVector::unit(c.n_params(), 2, 1);
    double first = cost_at_shift(c, obs, s, cache);
    double second = cost_at_shift(c, obs, s, cache);
    EXPECT_EQ(first, second);
    EXPECT_EQ(cache.misses(), 1u);
    EXPECT_EQ(cache.hits(), 1u);
    EXPECT_EQ(cache.size(), 1u);
    cache.clear();
    EXPECT_EQ(cache.size(), 0u);
}

TEST(cache, lru_capacity) {
    ShiftCache cache(4);
    for (int k = 0; k < 10; k++) cache.insert(ShiftVector::unit(10, k, 1), k);
    EXPECT_LE(cache.size(), 4u);
    EXPECT_TRUE(cache.lookup(ShiftVector::unit(10, 9, 1)).has_value());
    EXPECT_FALSE(cache.lookup(ShiftVector::unit(10, 0, 1)).has_value());
}

TEST(evaluator, agrees_with_direct_backprop) {
    std::mt19937_64 rng(24);
    for (auto f : {AnsatzFamily::mHEA, AnsatzFamily::fHEA, AnsatzFamily::rPQC}) {
        Circuit c = build_ansatz({f, 5, 2, 9});
        auto obs = random_observable(5, 4, true, rng);
        CliffordEvaluator ev(c, obs);
        for (int trial = 0; trial < 100; trial++) {
            ShiftVector s(c.n_params());
            std::uniform_int_distribution<std::size_t> k(0, c.n_params() - 1);
            for (int j = 0; j < trial % 5; j++) s.set(k(rng), 1 + j % 3);
            ShiftCache cache;
            EXPECT_NEAR(ev.cost(s), cost_at_shift(c, obs, s, cache), 1e-12);
        }
    }
}

TEST(gradient, examples) {
    // Z-rotation on |0> measured in Z: zero gradient.
    Circuit rz(1);
    rz.add_rotation(P::Z, 0);
    auto z = PauliObservable::single(PauliString::from_str("Z"));
    EXPECT_EQ(gradient_at_zero(rz, z)[0], 0.0);
    // R_Y measured in X: d/dt sin(t) = 1 at t = 0.
    Circuit ry(1);
    ry.add_rotation(P::Y, 0);
    auto x = PauliObservable::single(PauliString::from_str("X"));
    EXPECT_EQ(gradient_at_zero(ry, x)[0], 1.0);
}

TEST(gradient, matches_statevector_parameter_shift) {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 40; trial++) {
        std::size_t n = 2 + trial % 5;
        Circuit c = testutil::random_circuit(n, 40, 0.5, rng);
        if (c.n_params() == 0) c.add_rotation(P::X, 0);
        auto obs = random_observable(n, 3, true, rng);
        auto fast = gradient_at_zero(c, obs);
        auto ref = gradient(c, obs, std::vector<double>(c.n_params(), 0.0), GradientMode::central_difference(1e-4));
        for (std::size_t k = 0; k < fast.size(); k++) EXPECT_NEAR(fast[k], ref[k], 1e-6);
    }
}

TEST(gradient, thread_count_does_not_change_result) {
    std::mt19937_64 rng(26);
    Circuit c = build_ansatz({AnsatzFamily::fHEA, 6, 2, 0});
    auto obs = random_observable(6, 5, true, rng);
    auto one = gradient_at_zero(c, obs, 1);
    auto four = gradient_at_zero(c, obs, 4);
    EXPECT_EQ(one, four);
}

TEST(evaluator, evolved_word_is_heisenberg_image) {
    Circuit c = build_ansatz({AnsatzFamily::mHEA, 3, 1, 0});
    auto obs = PauliObservable::parse("1*XXZ");
    CliffordEvaluator ev(c, obs);
    ShiftVector s = ShiftVector::unit(c.n_params(), 4, 1);
    auto gates = clifford_gates_at_shift(c, s);
    EXPECT_EQ(ev.evolved_word(0, s), conjugate_by_gate_list(obs[0].word, gates));
}

TEST(evaluator, dimension_mismatch) {
    Circuit c = build_ansatz({AnsatzFamily::mHEA, 3, 1, 0});
    EXPECT_THROW(CliffordEvaluator(c, PauliObservable::parse("1*XX")), DimensionError);
}
