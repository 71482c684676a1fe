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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cliffpatch/clifford_eval.hpp"
#include "cliffpatch/errors.hpp"
#include "cliffpatch/parallel.hpp"
#include "json.hpp"

namespace cliffpatch {

/// Sparse exponent vector: sorted (param, exponent) pairs, exponents >= 1.
class MultiIndex {
   public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<std::pair<uint32_t, uint32_t>> entries) : e_(std::move(entries)) {
        std::sort(e_.begin(), e_.end());
        for (std::size_t i = 0; i < e_.size(); i++) {
            if (e_[i].second == 0) throw InvalidArgument("multi-index exponents must be positive");
            if (i && e_[i].first == e_[i - 1].first) throw InvalidArgument("duplicate multi-index coordinate");
        }
    }
    static MultiIndex from_dense(const std::vector<uint32_t> &alpha) {
        std::vector<std::pair<uint32_t, uint32_t>> e;
        for (std::size_t k = 0; k < alpha.size(); k++) {
            if (alpha[k]) e.push_back({static_cast<uint32_t>(k), alpha[k]});
        }
        return MultiIndex(std::move(e));
    }
    static MultiIndex unit(uint32_t k, uint32_t exponent = 1) {
        return MultiIndex({{k, exponent}});
    }

    const std::vector<std::pair<uint32_t, uint32_t>> &entries() const {
        return e_;
    }
    std::vector<std::pair<uint32_t, uint32_t>> &mutable_entries() {
        return e_;
    }
    uint32_t order() const {
        uint32_t s = 0;
        for (auto [k, a] : e_) s += a;
        return s;
    }
    uint32_t get(uint32_t k) const {
        for (auto [i, a] : e_) {
            if (i == k) return a;
        }
        return 0;
    }
    std::vector<uint32_t> to_dense(std::size_t dim) const {
        std::vector<uint32_t> d(dim, 0);
        for (auto [k, a] : e_) d.at(k) = a;
        return d;
    }
    bool operator==(const MultiIndex &) const = default;
    bool operator<(const MultiIndex &o) const {
        return e_ < o.e_;
    }

   private:
    std::vector<std::pair<uint32_t, uint32_t>> e_;
};

/// Lazy depth-first stream of every alpha with |alpha|_1 < m over D coordinates. Each node
/// extends its last nonzero coordinate c with (c', s), c' > c, in (c', s) order.
class MultiIndexEnumerator {
   public:
    MultiIndexEnumerator(uint32_t m, std::size_t dim) : m_(m), dim_(dim) {
        if (m < 1 || dim < 1) throw InvalidArgument("enumeration needs m >= 1 and D >= 1");
    }

    /// Advances to the next index. Returns false when exhausted.
    bool next(MultiIndex &out) {
        auto &e = cur_.mutable_entries();
        if (!started_) {
            started_ = true;
            out = cur_;
            return true;
        }
        if (done_) return false;
        std::size_t next_coord = e.empty() ? 0 : e.back().first + 1;
        if (sum_ + 1 <= m_ - 1 && next_coord < dim_) {
            e.push_back({static_cast<uint32_t>(next_coord), 1});
            sum_++;
            out = cur_;
            return true;
        }
        while (!e.empty()) {
            if (sum_ + 1 <= m_ - 1) {
                e.back().second++;
                sum_++;
                out = cur_;
                return true;
            }
            auto [c, s] = e.back();
            e.pop_back();
            sum_ -= s;
            if (c + 1 < dim_ && sum_ + 1 <= m_ - 1) {
                e.push_back({c + 1, 1});
                sum_++;
                out = cur_;
                return true;
            }
        }
        done_ = true;
        return false;
    }

   private:
    uint32_t m_;
    std::size_t dim_;
    MultiIndex cur_;
    uint32_t sum_ = 0;
    bool started_ = false;
    bool done_ = false;
};

template <class Fn>
void for_each_multi_index(uint32_t m, std::size_t dim, Fn &&fn) {
    MultiIndexEnumerator en(m, dim);
    MultiIndex a;
    while (en.next(a)) fn(a);
}

inline std::vector<MultiIndex> enumerate_multi_indices(uint32_t m, std::size_t dim) {
    std::vector<MultiIndex> out;
    for_each_multi_index(m, dim, [&](const MultiIndex &a) { out.push_back(a); });
    return out;
}

/// #A_{m,D} = sum_{i<m} C(D+i-1, i) = C(D+m-1, m-1), as a double.
inline double multi_index_count(uint32_t m, std::size_t dim) {
    if (m < 1) return 0;
    double n = static_cast<double>(dim) + m - 1;
    double k = m - 1;
    return std::round(std::exp(std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1)));
}

/// Exact binomial; throws on 64-bit overflow.
inline uint64_t binomial(uint64_t n, uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (uint64_t i = 1; i <= k; i++) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<uint64_t>::max()) throw DomainError("binomial overflow");
    }
    return static_cast<uint64_t>(r);
}

/// (D^alpha C)(0) = 2^{-|alpha|} sum_{j<=alpha} (-1)^{|j|} C(alpha,j) C(xi_{j,alpha}), xi_k = (alpha_k - 2 j_k) pi/2.
/// Terms are grouped per coordinate by their mod-4 shift before touching the cache.
inline double taylor_coefficient(CliffordEvaluator &ev, const MultiIndex &alpha) {
    const std::size_t dim = ev.circuit().n_params();
    struct Option {
        int turns;
        double weight;
    };
    std::vector<std::vector<Option>> opts;
    for (auto [k, a] : alpha.entries()) {
        if (k >= dim) throw IndexError("multi-index coordinate out of range");
        double w[4] = {0, 0, 0, 0};
        for (uint32_t j = 0; j <= a; j++) {
            int t = static_cast<int>(((static_cast<int64_t>(a) - 2 * static_cast<int64_t>(j)) % 4 + 4) % 4);
            double b = static_cast<double>(binomial(a, j));
            w[t] += (j % 2) ? -b : b;
        }
        std::vector<Option> o;
        for (int t = 0; t < 4; t++) {
            if (w[t] != 0) o.push_back({t, w[t]});
        }
        opts.push_back(std::move(o));
    }
    for (const auto &o : opts) {
        if (o.empty()) return 0.0;
    }
    ShiftVector s(dim);
    std::vector<std::size_t> pick(opts.size(), 0);
    double total = 0;
    while (true) {
        double w = 1;
        for (std::size_t i = 0; i < opts.size(); i++) {
            const auto &o = opts[i][pick[i]];
            s.set(alpha.entries()[i].first, o.turns);
            w *= o.weight;
        }
        total += w * ev.cost(s);
        std::size_t i = 0;
        for (; i < opts.size(); i++) {
            if (++pick[i] < opts[i].size()) break;
            pick[i] = 0;
        }
        if (i == opts.size()) break;
    }
    return std::ldexp(total, -static_cast<int>(alpha.order()));
}

inline double taylor_coefficient(const Circuit &c, const PauliObservable &obs, const MultiIndex &alpha) {
    CliffordEvaluator ev(c, obs);
    return taylor_coefficient(ev, alpha);
}

struct TaylorSurrogate {
    std::size_t dim = 0;
    uint32_t m = 1;
    /// (alpha, (D^alpha C)(0) / alpha!) in enumeration order.
    std::vector<std::pair<MultiIndex, double>> coeffs;
    uint64_t n_clifford_evals = 0;
};

struct SurrogateOptions {
    double index_budget = 2e7;
    std::size_t threads = 1;
    std::size_t cache_capacity = 0;
};

inline double factorial_of(const MultiIndex &a) {
    double f = 1;
    for (auto [k, e] : a.entries()) f *= std::tgamma(static_cast<double>(e) + 1);
    return f;
}

/// log of the op-count estimate O(D |I| 2^m #A_{m,D}).
inline double surrogate_log_op_estimate(uint32_t m, std::size_t dim, std::size_t n_terms) {
    return std::log(static_cast<double>(dim)) + std::log(static_cast<double>(n_terms)) + m * std::log(2.0) +
           std::log(std::max(1.0, multi_index_count(m, dim)));
}

inline TaylorSurrogate build_surrogate(CliffordEvaluator &ev, uint32_t m, const SurrogateOptions &opt = {}) {
    if (m < 1) throw InvalidArgument("truncation order m must be >= 1");
    const std::size_t dim = ev.circuit().n_params();
    const double predicted = dim == 0 ? 1.0 : multi_index_count(m, dim);
    if (predicted > opt.index_budget) {
        double est = surrogate_log_op_estimate(m, std::max<std::size_t>(dim, 1), ev.observable().size());
        throw BudgetExceeded("surrogate needs ~" + std::to_string(predicted) + " multi-indices (budget " +
                                 std::to_string(opt.index_budget) + "); estimated log op count " + std::to_string(est),
                             predicted, est);
    }
    TaylorSurrogate s;
    s.dim = dim;
    s.m = m;
    uint64_t before = ev.cache().misses();
    std::vector<MultiIndex> idx;
    if (dim == 0) {
        idx.push_back(MultiIndex());
    } else {
        idx = enumerate_multi_indices(m, dim);
    }
    std::vector<double> vals(idx.size());
    parallel_for(idx.size(), opt.threads, [&](std::size_t i) {
        vals[i] = taylor_coefficient(ev, idx[i]) / factorial_of(idx[i]);
    });
    s.coeffs.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); i++) s.coeffs.emplace_back(std::move(idx[i]), vals[i]);
    s.n_clifford_evals = ev.cache().misses() - before;
    return s;
}

inline TaylorSurrogate build_surrogate(const Circuit &c, const PauliObservable &obs, uint32_t m,
                                       const SurrogateOptions &opt = {}) {
    CliffordEvaluator ev(c, obs, opt.cache_capacity);
    return build_surrogate(ev, m, opt);
}

inline double evaluate(const TaylorSurrogate &s, const std::vector<double> &theta) {
    if (theta.size() != s.dim) {
        throw DimensionError("theta has length " + std::to_string(theta.size()) + ", surrogate D=" +
                             std::to_string(s.dim));
    }
    double total = 0;
    for (const auto &[a, c] : s.coeffs) {
        double mono = c;
        for (auto [k, e] : a.entries()) mono *= std::pow(theta[k], static_cast<int>(e));
        total += mono;
    }
    return total;
}

// ---------------------------------------------------------------------------------------------
// Truncation thresholds.

/// Smallest m >= 1 with norm * l1^m / m! <= eps, searched in log domain.
inline uint32_t worst_case_threshold(double l1_norm, double norm_surrogate, double epsilon) {
    if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
    if (!(l1_norm >= 0)) throw DomainError("l1 norm must be nonnegative");
    if (l1_norm == 0 || norm_surrogate <= 0) return 1;
    const double log_eps = std::log(epsilon), log_norm = std::log(norm_surrogate), log_l1 = std::log(l1_norm);
    double log_fact = 0;
    for (uint32_t m = 1;; m++) {
        log_fact += std::log(static_cast<double>(m));
        if (log_norm + m * log_l1 - log_fact <= log_eps) return m;
        if (m == std::numeric_limits<uint32_t>::max()) throw DomainError("threshold search overflow");
    }
}

namespace detail {

// Principal branch on [-1/e, inf). Halley from log(1+x), bisection if it stalls.
inline double lambert_w0(double x) {
    const double branch = -std::exp(-1.0);
    if (x < branch) throw DomainError("Lambert W undefined below -1/e");
    if (x == 0) return 0;
    if (x == branch) return -1;
    auto f = [x](double w) { return w * std::exp(w) - x; };
    double w = x > 0 ? std::log1p(x) : x;
    bool ok = false;
    if (x > 0) {
        for (int it = 0; it < 80; it++) {
            double ew = std::exp(w);
            double fw = w * ew - x;
            double denom = ew * (w + 1) - (w + 2) * fw / (2 * w + 2);
            double step = fw / denom;
            w -= step;
            if (std::abs(step) <= 1e-12 * (1 + std::abs(w))) {
                ok = true;
                break;
            }
        }
    }
    if (!ok || !std::isfinite(w)) {
        double lo = x > 0 ? 0.0 : -1.0, hi = x > 0 ? std::log1p(x) + 1 : 0.0;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * (1 + std::abs(lo)); it++) {
            double mid = 0.5 * (lo + hi);
            (f(mid) < 0 ? lo : hi) = mid;
        }
        w = 0.5 * (lo + hi);
    }
    return w;
}

}  // namespace detail

/// Principal Lambert W on x >= 0.
inline double lambert_w(double x) {
    if (!(x >= 0)) throw DomainError("lambert_w requires x >= 0");
    if (std::isinf(x)) return x;
    return detail::lambert_w0(x);
}

/// Closed-form lower bound m >= e l1 exp(W((1/(e l1)) log(norm/(eps sqrt(e^3 l1))))) - 1/2.
/// Arguments below zero use the principal branch on [-1/e, 0).
inline double lambert_lower_bound(double l1_norm, double norm_surrogate, double epsilon) {
    if (!(l1_norm > 0)) throw DomainError("lambert_lower_bound requires l1 > 0");
    if (!(epsilon > 0) || !(norm_surrogate > 0)) throw DomainError("epsilon and norm must be positive");
    const double e = std::exp(1.0);
    double arg = std::log(norm_surrogate / (epsilon * std::sqrt(e * e * e * l1_norm))) / (e * l1_norm);
    arg = std::max(arg, -std::exp(-1.0));
    return e * l1_norm * std::exp(detail::lambert_w0(arg)) - 0.5;
}

struct SigmaMode {
    enum Kind { Asymptotic, NonAsymptotic } kind = Asymptotic;
    double delta = 1.0;  // sigma = O(D^{-delta/2}) family
    double q = 0.5;      // sigma = q ||H||^{-1/m} D^{-1/2}

    static SigmaMode asymptotic(double delta) {
        return {Asymptotic, delta, 0};
    }
    static SigmaMode nonasymptotic(double q) {
        return {NonAsymptotic, 0, q};
    }
};

namespace detail {
inline uint32_t ceil_at_least_one(double x) {
    if (!std::isfinite(x)) throw DomainError("threshold is not finite");
    double c = std::ceil(x - 1e-9);
    return c < 1 ? 1u : static_cast<uint32_t>(c);
}
}  // namespace detail

/// Order making the mean-square truncation error small with probability >= 1 - rho.
inline uint32_t mse_threshold(double dim, const SigmaMode &mode, double epsilon, double rho, double c_const) {
    if (!(epsilon > 0 && epsilon < 1) || !(rho > 0 && rho < 1)) throw DomainError("epsilon and rho must lie in (0,1)");
    if (!(c_const > 0)) throw DomainError("c must be positive");
    const double l = std::log(c_const / (rho * epsilon * epsilon));
    if (mode.kind == SigmaMode::Asymptotic) {
        if (!(mode.delta > 0)) throw DomainError("delta must be positive");
        if (!(dim > 1)) throw DomainError("asymptotic mode needs D > 1");
        return detail::ceil_at_least_one(l / (mode.delta * std::log(dim)));
    }
    if (!(mode.q > 0 && mode.q < 1)) throw DomainError("q must lie in (0,1)");
    return detail::ceil_at_least_one(0.5 * l / std::log(1 / mode.q));
}

struct ThresholdReport {
    uint32_t m_worst_case = 1;
    double m_lower_bound_lambert = std::numeric_limits<double>::quiet_NaN();
    std::optional<uint32_t> m_mse;
    double epsilon = 0;
    double rho = 0;
    double norm_surrogate = 0;
};

inline ThresholdReport threshold_report(double l1_norm, double norm_surrogate, double epsilon,
                                        std::optional<std::pair<double, SigmaMode>> mse = std::nullopt,
                                        double rho = 0.01, double c_const = 1.0) {
    ThresholdReport r;
    r.epsilon = epsilon;
    r.rho = rho;
    r.norm_surrogate = norm_surrogate;
    r.m_worst_case = worst_case_threshold(l1_norm, norm_surrogate, epsilon);
    if (l1_norm > 0) r.m_lower_bound_lambert = lambert_lower_bound(l1_norm, norm_surrogate, epsilon);
    if (mse) r.m_mse = mse_threshold(mse->first, mse->second, epsilon, rho, c_const);
    return r;
}

// ---------------------------------------------------------------------------------------------
// Complexity estimates.

enum class Regime { Polynomial, Superpolynomial, Exponential };

inline const char *regime_name(Regime r) {
    switch (r) {
        case Regime::Polynomial:
            return "polynomial";
        case Regime::Superpolynomial:
            return "superpolynomial";
        case Regime::Exponential:
            return "exponential";
    }
    return "?";
}

/// Regime boundaries are configuration: l1 <= poly_l1_max counts as O(1), l1 >= exp_fraction * D as Theta(D).
struct ComplexityConfig {
    double poly_l1_max = 1.0;
    double exp_fraction = 1.0;
    double epsilon = 1e-6;
    std::optional<double> norm;  // defaults to n_terms
};

struct ComplexityReport {
    Regime regime = Regime::Polynomial;
    double log_op_count_bound = 0;
    uint32_t m = 1;
};

inline ComplexityReport complexity_estimate(double dim, double n_terms, double l1_norm,
                                            const ComplexityConfig &cfg = {}) {
    if (!(dim > 0) || !(n_terms > 0) || !(l1_norm >= 0)) throw DomainError("complexity_estimate: invalid arguments");
    ComplexityReport r;
    const double norm = cfg.norm.value_or(n_terms);
    r.m = worst_case_threshold(l1_norm, norm, cfg.epsilon);
    const double e = std::exp(1.0);
    if (l1_norm <= cfg.poly_l1_max) {
        r.regime = Regime::Polynomial;
        r.log_op_count_bound = r.m * std::log(dim) + std::log(n_terms);
    } else if (l1_norm >= cfg.exp_fraction * dim) {
        r.regime = Regime::Exponential;
        r.log_op_count_bound = std::log(n_terms) + std::log(dim) + 2 * dim * std::log(2.0);
    } else {
        r.regime = Regime::Superpolynomial;
        const double el = e * l1_norm;
        r.log_op_count_bound = std::log(n_terms) + 0.5 * std::log(dim * (dim + el) / (2 * M_PI * el)) +
                               el * (1 + std::log(2 + 2 * dim / el));
    }
    return r;
}

struct PauliPathComparison {
    bool faster = false;
    double q_threshold = 0;
    std::optional<double> d_threshold;
};

inline PauliPathComparison pauli_path_comparison(double q, double epsilon, double rho, double c_const, double gamma,
                                                 double dim) {
    if (!(q > 0 && q < 1) || !(epsilon > 0 && epsilon < 1) || !(rho > 0 && rho < 1) || !(c_const > 0) ||
        !(gamma > 0) || !(dim > 1)) {
        throw DomainError("pauli_path_comparison: argument out of range");
    }
    PauliPathComparison r;
    const double l_eps = std::log(1 / (rho * epsilon * epsilon));
    const double denom = 2 * l_eps + 2 * std::log(gamma) / std::log(dim);
    bool feasible = true;
    if (gamma < 1) {
        r.d_threshold = std::exp(std::log(gamma) / (std::log(rho) + 2 * std::log(epsilon)));
        feasible = dim > *r.d_threshold;
    }
    r.q_threshold = denom > 0 ? std::exp(-std::log(c_const / (rho * epsilon * epsilon)) / denom) : 0.0;
    r.faster = feasible && q < r.q_threshold;
    return r;
}

// ---------------------------------------------------------------------------------------------
// JSON: {D, m, coeffs:[{alpha:{idx:exp}, value}]}

inline nlohmann::json surrogate_to_json(const TaylorSurrogate &s) {
    nlohmann::json j;
    j["D"] = s.dim;
    j["m"] = s.m;
    j["n_clifford_evals"] = s.n_clifford_evals;
    auto &arr = j["coeffs"] = nlohmann::json::array();
    for (const auto &[a, v] : s.coeffs) {
        nlohmann::json alpha = nlohmann::json::object();
        for (auto [k, e] : a.entries()) alpha[std::to_string(k)] = e;
        arr.push_back({{"alpha", alpha}, {"value", v}});
    }
    return j;
}

inline TaylorSurrogate surrogate_from_json(const nlohmann::json &j) {
    TaylorSurrogate s;
    s.dim = j.at("D").get<std::size_t>();
    s.m = j.at("m").get<uint32_t>();
    s.n_clifford_evals = j.value("n_clifford_evals", uint64_t{0});
    for (const auto &c : j.at("coeffs")) {
        std::vector<std::pair<uint32_t, uint32_t>> e;
        for (const auto &[key, val] : c.at("alpha").items()) {
            e.push_back({static_cast<uint32_t>(std::stoul(key)), val.get<uint32_t>()});
        }
        MultiIndex a(std::move(e));
        if (a.order() >= s.m) throw InvalidArgument("stored multi-index violates |alpha| < m");
        for (auto [k, x] : a.entries()) {
            if (k >= s.dim) throw IndexError("stored multi-index coordinate out of range");
        }
        s.coeffs.emplace_back(std::move(a), c.at("value").get<double>());
    }
    return s;
}

}  // namespace cliffpatch
