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

#include <atomic>
#include <cmath>
#include <cstdint>
#include <list>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "cliffpatch/circuit.hpp"
#include "cliffpatch/observable.hpp"
#include "cliffpatch/parallel.hpp"
#include "cliffpatch/pauli.hpp"

namespace cliffpatch {

/// <0|p|0>: the sign if p is diagonal, else 0.
inline int vacuum_expectation(const PauliString &p) {
    return p.is_diagonal() ? p.sign() : 0;
}

namespace detail {

using ShiftKey = std::vector<uint32_t>;

inline ShiftKey shift_key(const ShiftVector &s) {
    ShiftKey k;
    k.reserve(s.entries().size());
    for (auto [param, t] : s.entries()) k.push_back((param << 2) | t);
    return k;
}

struct ShiftKeyHash {
    std::size_t operator()(const ShiftKey &k) const noexcept {
        uint64_t h = 1469598103934665603ull;
        for (uint32_t v : k) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

}  // namespace detail

/// Memo of C(xi) keyed by the canonical mod-4 shift. Safe for concurrent use.
/// A nonzero capacity turns on LRU eviction.
class ShiftCache {
   public:
    explicit ShiftCache(std::size_t lru_capacity = 0) : cap_(lru_capacity) {
    }

    std::optional<double> lookup(const ShiftVector &s) {
        auto key = detail::shift_key(s);
        if (cap_ == 0) {
            std::shared_lock lock(mu_);
            auto it = map_.find(key);
            if (it == map_.end()) return std::nullopt;
            hits_.fetch_add(1, std::memory_order_relaxed);
            return it->second.value;
        }
        std::unique_lock lock(mu_);
        auto it = map_.find(key);
        if (it == map_.end()) return std::nullopt;
        lru_.splice(lru_.begin(), lru_, it->second.pos);
        hits_.fetch_add(1, std::memory_order_relaxed);
        return it->second.value;
    }

    /// Stores a value. Returns true if the key was new; only new keys count as misses.
    bool insert(const ShiftVector &s, double value) {
        auto key = detail::shift_key(s);
        std::unique_lock lock(mu_);
        auto it = map_.find(key);
        if (it != map_.end()) {
            it->second.value = value;
            return false;
        }
        Entry e{value, {}};
        if (cap_) {
            lru_.push_front(key);
            e.pos = lru_.begin();
        }
        map_.emplace(std::move(key), e);
        misses_.fetch_add(1, std::memory_order_relaxed);
        if (cap_ && map_.size() > cap_) {
            map_.erase(lru_.back());
            lru_.pop_back();
        }
        return true;
    }

    uint64_t hits() const {
        return hits_.load();
    }
    uint64_t misses() const {
        return misses_.load();
    }
    std::size_t size() const {
        std::shared_lock lock(mu_);
        return map_.size();
    }
    void clear() {
        std::unique_lock lock(mu_);
        map_.clear();
        lru_.clear();
        hits_ = 0;
        misses_ = 0;
    }

   private:
    struct Entry {
        double value;
        std::list<detail::ShiftKey>::iterator pos;
    };
    std::size_t cap_;
    mutable std::shared_mutex mu_;
    std::unordered_map<detail::ShiftKey, Entry, detail::ShiftKeyHash> map_;
    std::list<detail::ShiftKey> lru_;
    std::atomic<uint64_t> hits_{0};
    std::atomic<uint64_t> misses_{0};
};

namespace detail {

inline void check_dims(const Circuit &c, const PauliObservable &obs) {
    if (obs.n_qubits() != c.n_qubits()) {
        throw DimensionError("observable has " + std::to_string(obs.n_qubits()) + " qubits, circuit has " +
                             std::to_string(c.n_qubits()));
    }
}

// Conjugates p backwards through gates[begin, end) at the given shift.
inline void backprop(PauliString &p, const std::vector<Gate> &gates, std::size_t begin, std::size_t end,
                     const ShiftVector &s) {
    for (std::size_t i = end; i-- > begin;) {
        const Gate &g = gates[i];
        if (g.is_param()) {
            int t = s.get(g.param);
            if (t) conjugate_in_place(p, g.to_clifford(t));
        } else {
            conjugate_in_place(p, g.to_clifford());
        }
    }
}

}  // namespace detail

/// Direct evaluation of C(pi/2 * s) by Heisenberg backpropagation of every term through the whole
/// Clifford-ized circuit. The cache must only ever be used with this (circuit, observable) pair.
inline double cost_at_shift(const Circuit &c, const PauliObservable &obs, const ShiftVector &s, ShiftCache &cache) {
    detail::check_dims(c, obs);
    if (s.dim() != c.n_params()) throw DimensionError("shift dimension does not match circuit D");
    if (auto v = cache.lookup(s)) return *v;
    double total = 0;
    for (const auto &term : obs.terms()) {
        PauliString p = term.word;
        detail::backprop(p, c.gates(), 0, c.gates().size(), s);
        total += term.coeff * vacuum_expectation(p);
    }
    cache.insert(s, total);
    return total;
}

/// Cost evaluator bound to one circuit and observable. Precomputes, for every parameter, each term
/// backpropagated through the unshifted gates that follow its rotation, so an evaluation only walks
/// the prefix up to the last shifted rotation.
class CliffordEvaluator {
   public:
    CliffordEvaluator(Circuit c, PauliObservable obs, std::size_t lru_capacity = 0)
        : c_(std::move(c)), obs_(std::move(obs)), cache_(lru_capacity) {
        detail::check_dims(c_, obs_);
        pos_ = c_.param_positions();
        const auto &gates = c_.gates();
        suffix_.assign(obs_.size(), {});
        zero_value_ = 0;
        for (std::size_t i = 0; i < obs_.size(); i++) {
            auto &row = suffix_[i];
            row.resize(c_.n_params());
            PauliString p = obs_[i].word;
            for (std::size_t gi = gates.size(); gi-- > 0;) {
                const Gate &g = gates[gi];
                if (g.is_param()) {
                    row[g.param] = p;
                } else {
                    conjugate_in_place(p, g.to_clifford());
                }
            }
            zero_value_ += obs_[i].coeff * vacuum_expectation(p);
        }
    }

    const Circuit &circuit() const {
        return c_;
    }
    const PauliObservable &observable() const {
        return obs_;
    }
    ShiftCache &cache() {
        return cache_;
    }
    const ShiftCache &cache() const {
        return cache_;
    }

    double cost(const ShiftVector &s) {
        if (s.dim() != c_.n_params()) throw DimensionError("shift dimension does not match circuit D");
        if (auto v = cache_.lookup(s)) return *v;
        double total = s.entries().empty() ? zero_value_ : compute(s);
        cache_.insert(s, total);
        return total;
    }

    /// Heisenberg-evolved word of term i at shift s, before taking the vacuum expectation.
    PauliString evolved_word(std::size_t i, const ShiftVector &s) const {
        PauliString p = obs_[i].word;
        detail::backprop(p, c_.gates(), 0, c_.gates().size(), s);
        return p;
    }

    /// Vanilla parameter-shift gradient at theta = 0.
    std::vector<double> gradient_at_zero(std::size_t threads = 1) {
        std::size_t d = c_.n_params();
        std::vector<double> grad(d);
        parallel_for(d, threads, [&](std::size_t k) { grad[k] = gradient_component(k); });
        return grad;
    }

    double gradient_component(std::size_t k) {
        double plus = cost(ShiftVector::unit(c_.n_params(), k, 1));
        double minus = cost(ShiftVector::unit(c_.n_params(), k, 3));
        return 0.5 * (plus - minus);
    }

   private:
    double compute(const ShiftVector &s) const {
        std::size_t last_param = 0, last_pos = 0;
        for (auto [param, t] : s.entries()) {
            if (pos_[param] >= last_pos) {
                last_pos = pos_[param];
                last_param = param;
            }
        }
        double total = 0;
        for (std::size_t i = 0; i < obs_.size(); i++) {
            PauliString p = suffix_[i][last_param];
            detail::backprop(p, c_.gates(), 0, last_pos + 1, s);
            total += obs_[i].coeff * vacuum_expectation(p);
        }
        return total;
    }

    Circuit c_;
    PauliObservable obs_;
    std::vector<std::size_t> pos_;
    std::vector<std::vector<PauliString>> suffix_;
    double zero_value_ = 0;
    ShiftCache cache_;
};

inline std::vector<double> gradient_at_zero(const Circuit &c, const PauliObservable &obs, std::size_t threads = 1) {
    CliffordEvaluator ev(c, obs);
    return ev.gradient_at_zero(threads);
}

}  // namespace cliffpatch
