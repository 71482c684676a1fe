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

#include <cctype>
#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "cliffpatch/errors.hpp"
#include "cliffpatch/pauli.hpp"
#include "json.hpp"

namespace cliffpatch {

struct PauliTerm {
    double coeff = 1.0;
    PauliString word;
};

/// H = sum_i c_i P_i over non-identity words.
class PauliObservable {
   public:
    PauliObservable() = default;
    PauliObservable(std::size_t n_qubits, std::vector<PauliTerm> terms) : n_(n_qubits), terms_(std::move(terms)) {
        if (terms_.empty()) throw InvalidArgument("observable needs at least one term");
        for (auto &t : terms_) {
            if (t.word.n_qubits() != n_) throw DimensionError("observable term width mismatch");
            if (t.word.is_identity()) throw InvalidArgument("observable terms must be non-identity");
            if (!std::isfinite(t.coeff)) throw InvalidArgument("observable coefficient is not finite");
            // Fold the word sign into the coefficient so every stored word is +1.
            if (t.word.negative()) {
                t.word.set_negative(false);
                t.coeff = -t.coeff;
            }
        }
    }

    static PauliObservable single(const PauliString &p, double coeff = 1.0) {
        return PauliObservable(p.n_qubits(), {{coeff, p}});
    }

    /// Parses "0.5*XXZ + -1*ZZI" style sums; bare words have coefficient 1.
    static PauliObservable parse(const std::string &text);

    std::size_t n_qubits() const {
        return n_;
    }
    std::size_t size() const {
        return terms_.size();
    }
    const std::vector<PauliTerm> &terms() const {
        return terms_;
    }
    const PauliTerm &operator[](std::size_t i) const {
        return terms_[i];
    }

    /// Sum |c_i|, the norm surrogate used for thresholds and bounds.
    double l1_norm() const {
        double s = 0;
        for (const auto &t : terms_) s += std::abs(t.coeff);
        return s;
    }

    PauliObservable scaled(double lambda) const {
        PauliObservable r = *this;
        for (auto &t : r.terms_) t.coeff *= lambda;
        return r;
    }

   private:
    std::size_t n_ = 0;
    std::vector<PauliTerm> terms_;
};

inline PauliObservable global_z(std::size_t n) {
    PauliString p(n);
    for (std::size_t q = 0; q < n; q++) p.set(q, SingleQubitPauli::Z);
    return PauliObservable::single(p);
}

/// Open-chain Heisenberg model, 3(N-1) unit-weight terms.
inline PauliObservable heisenberg_chain(std::size_t n) {
    if (n < 2) throw InvalidArgument("Heisenberg chain needs N >= 2");
    std::vector<PauliTerm> terms;
    for (std::size_t j = 0; j + 1 < n; j++) {
        for (auto v : {SingleQubitPauli::X, SingleQubitPauli::Y, SingleQubitPauli::Z}) {
            PauliString p(n);
            p.set(j, v);
            p.set(j + 1, v);
            terms.push_back({1.0, p});
        }
    }
    return PauliObservable(n, std::move(terms));
}

/// n_terms i.i.d. uniform non-identity words; coefficients 1 or Unif[-1,1].
template <class Rng>
PauliObservable random_observable(std::size_t n, std::size_t n_terms, bool weighted, Rng &rng) {
    if (n_terms == 0) throw InvalidArgument("observable needs at least one term");
    std::vector<PauliTerm> terms;
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    for (std::size_t i = 0; i < n_terms; i++) {
        PauliString w = random_nonidentity_pauli(n, rng);
        double c = weighted ? coeff(rng) : 1.0;
        terms.push_back({c, std::move(w)});
    }
    return PauliObservable(n, std::move(terms));
}

inline PauliObservable PauliObservable::parse(const std::string &text) {
    std::vector<PauliTerm> terms;
    std::size_t pos = 0;
    std::size_t n = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) pos++;
    };
    while (true) {
        skip_ws();
        if (pos >= text.size()) break;
        std::size_t end = text.find('+', pos);
        // A '+' that is part of an exponent or a leading sign does not split terms.
        while (end != std::string::npos && end > pos &&
               (text[end - 1] == 'e' || text[end - 1] == 'E' || text[end - 1] == '*')) {
            end = text.find('+', end + 1);
        }
        std::string piece = text.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        pos = end == std::string::npos ? text.size() : end + 1;
        while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.back()))) piece.pop_back();
        if (piece.empty()) continue;
        double c = 1.0;
        std::string word = piece;
        auto star = piece.find('*');
        if (star != std::string::npos) {
            try {
                c = std::stod(piece.substr(0, star));
            } catch (const std::exception &) {
                throw InvalidArgument("bad coefficient in '" + piece + "'");
            }
            word = piece.substr(star + 1);
        }
        while (!word.empty() && std::isspace(static_cast<unsigned char>(word.front()))) word.erase(word.begin());
        PauliString p = PauliString::from_str(word);
        if (n == 0) n = p.n_qubits();
        if (p.n_qubits() != n) throw DimensionError("observable terms have different widths");
        terms.push_back({c, std::move(p)});
    }
    if (terms.empty()) throw InvalidArgument("empty observable");
    return PauliObservable(n, std::move(terms));
}

inline void to_json(nlohmann::json &j, const PauliObservable &o) {
    j = nlohmann::json::array();
    for (const auto &t : o.terms()) {
        j.push_back({{"coeff", t.coeff}, {"word", t.word.str()}});
    }
}

inline void from_json(const nlohmann::json &j, PauliObservable &o) {
    std::vector<PauliTerm> terms;
    std::size_t n = 0;
    for (const auto &e : j) {
        PauliString p = PauliString::from_str(e.at("word").get<std::string>());
        if (n == 0) n = p.n_qubits();
        terms.push_back({e.value("coeff", 1.0), std::move(p)});
    }
    o = PauliObservable(n, std::move(terms));
}

}  // namespace cliffpatch
