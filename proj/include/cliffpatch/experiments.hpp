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
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "cliffpatch/circuit.hpp"
#include "cliffpatch/clifford_eval.hpp"
#include "cliffpatch/lce.hpp"
#include "cliffpatch/observable.hpp"
#include "cliffpatch/parallel.hpp"
#include "cliffpatch/rng.hpp"
#include "cliffpatch/statevector.hpp"
#include "cliffpatch/surrogate.hpp"
#include "cliffpatch/table.hpp"
#include "json.hpp"

namespace cliffpatch {

#ifndef CLIFFPATCH_VERSION
#define CLIFFPATCH_VERSION "0.1.0"
#endif

inline const char *version_string() {
    return CLIFFPATCH_VERSION;
}

struct ObservableModel {
    enum Kind { SinglePauli, Unweighted, Weighted, GlobalZ, Heisenberg } kind = SinglePauli;
    std::size_t n_terms = 1;
    bool n_terms_sqrt = false;  // floor(sqrt(N)) terms

    std::size_t terms_for(std::size_t n) const {
        if (kind == SinglePauli) return 1;
        if (n_terms_sqrt) return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(double(n)))));
        return n_terms;
    }

    template <class R>
    PauliObservable sample(std::size_t n, R &rng) const {
        switch (kind) {
            case SinglePauli:
                return random_observable(n, 1, false, rng);
            case Unweighted:
                return random_observable(n, terms_for(n), false, rng);
            case Weighted:
                return random_observable(n, terms_for(n), true, rng);
            case GlobalZ:
                return global_z(n);
            case Heisenberg:
                return heisenberg_chain(n);
        }
        return global_z(n);
    }
};

/// Initialization patch. Disabled means theta = 0 exactly.
struct PatchSpec {
    bool enabled = false;
    enum Dist { Gaussian, Uniform } dist = Gaussian;
    std::optional<double> r;
    std::optional<double> sigma;

    double sigma_for(std::size_t dim) const {
        if (sigma) return *sigma;
        return std::pow(static_cast<double>(dim), -r.value_or(0.5));
    }

    template <class R>
    std::vector<double> sample(std::size_t dim, R &rng) const {
        std::vector<double> th(dim, 0.0);
        if (!enabled) return th;
        double s = sigma_for(dim);
        if (dist == Gaussian) {
            std::normal_distribution<double> nd(0.0, s);
            for (auto &t : th) t = nd(rng);
        } else {
            std::uniform_real_distribution<double> ud(-s, s);
            for (auto &t : th) t = ud(rng);
        }
        return th;
    }
};

struct LceSpec {
    enum Mode { Off, On, Both } mode = Off;
    bool random = true;
    std::size_t k = 0;
    std::size_t i0 = 0;

    std::vector<int> flags() const {
        if (mode == Both) return {0, 1};
        return {mode == On ? 1 : 0};
    }
};

struct OptimizerSpec {
    double eta = 0.01;
    std::size_t iterations = 300;
    uint64_t shots = 0;  // 0 = exact expectation
};

struct ExperimentConfig {
    AnsatzSpec ansatz;
    bool layers_equal_n = false;
    std::vector<std::size_t> n_qubits{4};
    ObservableModel observable;
    PatchSpec patch;
    LceSpec lce;
    OptimizerSpec optimizer;
    uint64_t seed = 0;
    std::size_t runs = 1;
    std::size_t threads = 1;
    std::size_t statevector_cap = kDefaultStatevectorCap;

    AnsatzSpec ansatz_for(std::size_t n, uint64_t rpqc_seed) const {
        AnsatzSpec s = ansatz;
        s.n_qubits = n;
        if (layers_equal_n) s.layers = n;
        if (s.family == AnsatzFamily::rPQC) s.seed = rpqc_seed;
        return s;
    }

    void validate() const {
        if (n_qubits.empty()) throw ConfigError("n_qubits: at least one size is required");
        for (auto n : n_qubits) {
            if (n < 2) throw ConfigError("n_qubits: every size must be >= 2");
        }
        if (!layers_equal_n && ansatz.layers < 1) throw ConfigError("ansatz.layers must be >= 1");
        if (runs < 1) throw ConfigError("runs must be >= 1");
        if (optimizer.iterations < 1) throw ConfigError("optimizer.iterations must be >= 1");
        if (patch.enabled && patch.sigma && !(*patch.sigma > 0)) throw ConfigError("patch.sigma must be > 0");
        if ((observable.kind == ObservableModel::Unweighted || observable.kind == ObservableModel::Weighted) &&
            !observable.n_terms_sqrt && observable.n_terms < 1) {
            throw ConfigError("observable.n_terms must be >= 1");
        }
    }
};

/// Everything one run needs, drawn from that run's own stream in a fixed order so that the
/// LCE and plain variants of a run share observable and initial point.
struct RunSetup {
    Circuit circuit;
    PauliObservable observable;
    std::vector<double> theta0;
    std::size_t k = 0;
    std::size_t i0 = 0;
    uint64_t sampling_seed = 0;
};

inline RunSetup make_run(const ExperimentConfig &cfg, std::size_t n, std::size_t run) {
    Rng rng = derive_rng(cfg.seed, run, n);
    RunSetup s;
    uint64_t rpqc_seed = rng();
    s.circuit = build_ansatz(cfg.ansatz_for(n, rpqc_seed));
    s.observable = cfg.observable.sample(n, rng);
    s.theta0 = cfg.patch.sample(s.circuit.n_params(), rng);
    std::uniform_int_distribution<std::size_t> pk(0, s.circuit.n_params() - 1), pi(0, s.observable.size() - 1);
    s.k = pk(rng);
    s.i0 = pi(rng);
    if (!cfg.lce.random) {
        s.k = cfg.lce.k;
        s.i0 = cfg.lce.i0;
    }
    s.sampling_seed = rng();
    return s;
}

inline Circuit maybe_lce(const RunSetup &s, bool lce) {
    if (!lce) return s.circuit;
    return lce_transform(s.circuit, construct_lce(s.circuit, s.observable, s.k, s.i0));
}

inline double l2_norm(const std::vector<double> &v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double l1_norm(const std::vector<double> &v) {
    double s = 0;
    for (double x : v) s += std::abs(x);
    return s;
}

/// Rows {N, run, lce, grad_norm}: initial gradient norms with and without LCE.
inline Table gradient_scaling(const ExperimentConfig &cfg) {
    cfg.validate();
    if (cfg.patch.enabled) {
        for (auto n : cfg.n_qubits) {
            if (n > cfg.statevector_cap) {
                throw ResourceError("patch mode uses the statevector simulator, limited to N <= " +
                                    std::to_string(cfg.statevector_cap) + " (requested N=" + std::to_string(n) + ")");
            }
        }
    }
    struct Job {
        std::size_t n, run;
    };
    std::vector<Job> jobs;
    for (auto n : cfg.n_qubits) {
        for (std::size_t r = 0; r < cfg.runs; r++) jobs.push_back({n, r});
    }
    auto flags = cfg.lce.flags();
    std::vector<std::vector<double>> norms(jobs.size(), std::vector<double>(flags.size()));
    parallel_for(jobs.size(), cfg.threads, [&](std::size_t j) {
        RunSetup s = make_run(cfg, jobs[j].n, jobs[j].run);
        for (std::size_t f = 0; f < flags.size(); f++) {
            Circuit c = maybe_lce(s, flags[f]);
            std::vector<double> g = cfg.patch.enabled
                                        ? adjoint_gradient(c, s.observable, s.theta0, cfg.statevector_cap)
                                        : gradient_at_zero(c, s.observable);
            norms[j][f] = l2_norm(g);
        }
    });
    Table t({"N", "run", "lce", "grad_norm"});
    for (std::size_t j = 0; j < jobs.size(); j++) {
        for (std::size_t f = 0; f < flags.size(); f++) {
            t.add_row({int64_t(jobs[j].n), int64_t(jobs[j].run), int64_t(flags[f]), norms[j][f]});
        }
    }
    return t;
}

struct VqeStep {
    double cost = 0;
    double grad_norm = 0;
    double param_l2 = 0;
    double param_l1 = 0;
};

struct VqeTrace {
    std::vector<VqeStep> steps;  // iterations + 1 entries, t = 0 first
    std::vector<double> final_theta;
};

/// Vanilla gradient descent theta <- theta - eta grad. The recorded cost is always exact;
/// with shots > 0 the update uses per-term binomial parameter-shift estimates.
inline VqeTrace gradient_descent(const Circuit &c, const PauliObservable &obs, std::vector<double> theta,
                                 const OptimizerSpec &opt, uint64_t sampling_seed,
                                 std::size_t cap = kDefaultStatevectorCap) {
    VqeTrace tr;
    tr.steps.reserve(opt.iterations + 1);
    Rng rng(sampling_seed);
    for (std::size_t t = 0;; t++) {
        CostAndGradient cg = adjoint_cost_and_gradient(c, obs, theta, cap);
        if (opt.shots) cg.grad = sampled_gradient(c, obs, theta, opt.shots, rng, cap);
        if (!std::isfinite(cg.cost)) {
            throw DomainError("VQE diverged: cost is not finite at iteration " + std::to_string(t));
        }
        tr.steps.push_back({cg.cost, l2_norm(cg.grad), l2_norm(theta), l1_norm(theta)});
        if (t == opt.iterations) break;
        for (std::size_t k = 0; k < theta.size(); k++) theta[k] -= opt.eta * cg.grad[k];
    }
    tr.final_theta = std::move(theta);
    return tr;
}

inline VqeTrace vqe_run(const ExperimentConfig &cfg, std::size_t n, std::size_t run, bool lce) {
    if (n > cfg.statevector_cap) {
        throw ResourceError("VQE uses the statevector simulator, limited to N <= " + std::to_string(cfg.statevector_cap));
    }
    RunSetup s = make_run(cfg, n, run);
    Circuit c = maybe_lce(s, lce);
    return gradient_descent(c, s.observable, s.theta0, cfg.optimizer, s.sampling_seed, cfg.statevector_cap);
}

inline VqeTrace heisenberg_vqe(ExperimentConfig cfg, std::size_t n, std::size_t run, bool lce) {
    cfg.observable.kind = ObservableModel::Heisenberg;
    return vqe_run(cfg, n, run, lce);
}

/// Rows {N, run, lce, iter, cost, grad_norm, param_l2, param_l1} for every configured run.
inline Table vqe_table(const ExperimentConfig &cfg) {
    cfg.validate();
    struct Job {
        std::size_t n, run;
        int lce;
    };
    std::vector<Job> jobs;
    for (auto n : cfg.n_qubits) {
        if (n > cfg.statevector_cap) {
            throw ResourceError("VQE uses the statevector simulator, limited to N <= " +
                                std::to_string(cfg.statevector_cap) + " (requested N=" + std::to_string(n) + ")");
        }
        for (std::size_t r = 0; r < cfg.runs; r++) {
            for (int f : cfg.lce.flags()) jobs.push_back({n, r, f});
        }
    }
    std::vector<VqeTrace> traces(jobs.size());
    parallel_for(jobs.size(), cfg.threads,
                 [&](std::size_t j) { traces[j] = vqe_run(cfg, jobs[j].n, jobs[j].run, jobs[j].lce != 0); });
    Table t({"N", "run", "lce", "iter", "cost", "grad_norm", "param_l2", "param_l1"});
    for (std::size_t j = 0; j < jobs.size(); j++) {
        for (std::size_t it = 0; it < traces[j].steps.size(); it++) {
            const auto &st = traces[j].steps[it];
            t.add_row({int64_t(jobs[j].n), int64_t(jobs[j].run), int64_t(jobs[j].lce), int64_t(it), st.cost,
                       st.grad_norm, st.param_l2, st.param_l1});
        }
    }
    return t;
}

struct SweepConfig {
    std::vector<AnsatzFamily> families{AnsatzFamily::mHEA, AnsatzFamily::fHEA};
    std::vector<std::size_t> n_qubits{6};
    std::size_t layers = 1;
    /// Expansion orders: order m keeps every alpha with |alpha|_1 <= m.
    std::vector<uint32_t> orders{1, 2, 3};
    std::size_t runs = 1;
    uint64_t seed = 0;
    double index_budget = 2e7;
    bool timing = false;
    std::size_t threads = 1;
};

/// Rows {family, N, m, run, D, n_indices, eval_count, wall_time, status}.
/// wall_time is 0 unless timing is on, which keeps the default output reproducible.
inline Table surrogate_complexity_sweep(const SweepConfig &cfg) {
    Table t({"family", "N", "m", "run", "D", "n_indices", "eval_count", "wall_time", "status"});
    for (auto fam : cfg.families) {
        for (auto n : cfg.n_qubits) {
            for (auto order : cfg.orders) {
                for (std::size_t run = 0; run < cfg.runs; run++) {
                    Rng rng = derive_rng(cfg.seed, run, n);
                    AnsatzSpec spec{fam, n, cfg.layers, rng()};
                    Circuit c = build_ansatz(spec);
                    PauliObservable obs = random_observable(n, 1, false, rng);
                    SurrogateOptions opt;
                    opt.index_budget = cfg.index_budget;
                    opt.threads = cfg.threads;
                    auto t0 = std::chrono::steady_clock::now();
                    std::string status = "ok";
                    int64_t n_idx = -1, evals = -1;
                    try {
                        TaylorSurrogate s = build_surrogate(c, obs, order + 1, opt);
                        n_idx = static_cast<int64_t>(s.coeffs.size());
                        evals = static_cast<int64_t>(s.n_clifford_evals);
                    } catch (const BudgetExceeded &) {
                        status = "budget_exceeded";
                    }
                    double wall = 0;
                    if (cfg.timing) {
                        wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                    }
                    t.add_row({std::string(family_name(fam)), int64_t(n), int64_t(order), int64_t(run),
                               int64_t(c.n_params()), n_idx, evals, wall, status});
                }
            }
        }
    }
    return t;
}

/// Mean fHEA/mHEA eval-count ratio per (N, m) from a sweep table.
inline std::vector<std::tuple<int64_t, int64_t, double>> eval_count_ratios(const Table &t) {
    std::map<std::pair<int64_t, int64_t>, std::pair<std::vector<double>, std::vector<double>>> acc;
    auto fi = t.column("family"), ni = t.column("N"), mi = t.column("m"), ei = t.column("eval_count");
    for (const auto &row : t.rows) {
        int64_t ev = std::get<int64_t>(row[ei]);
        if (ev < 0) continue;
        auto key = std::make_pair(std::get<int64_t>(row[ni]), std::get<int64_t>(row[mi]));
        const auto &fam = std::get<std::string>(row[fi]);
        if (fam == "fHEA") acc[key].first.push_back(double(ev));
        if (fam == "mHEA") acc[key].second.push_back(double(ev));
    }
    std::vector<std::tuple<int64_t, int64_t, double>> out;
    for (auto &[key, v] : acc) {
        if (v.first.empty() || v.second.empty()) continue;
        double f = 0, m = 0;
        for (double x : v.first) f += x;
        for (double x : v.second) m += x;
        out.emplace_back(key.first, key.second, (f / v.first.size()) / (m / v.second.size()));
    }
    return out;
}

struct PhaseDiagramConfig {
    /// Either explicit dimensions or qubit counts with D = 2N(N+1).
    std::vector<std::size_t> dims;
    std::vector<std::size_t> n_qubits;
    std::vector<double> r_values{0, 0.25, 0.5, 0.75, 1.0};
    std::size_t samples = 20;
    double epsilon = 1e-6;
    double norm = 1.0;
    PatchSpec::Dist dist = PatchSpec::Gaussian;
    uint64_t seed = 0;
};

/// Rows {N, D, r, expected_m, mean_l1}. N is 0 when dimensions were given directly.
inline Table threshold_phase_diagram(const PhaseDiagramConfig &cfg) {
    std::vector<std::pair<std::size_t, std::size_t>> grid;  // (N, D)
    for (auto n : cfg.n_qubits) grid.push_back({n, 2 * n * (n + 1)});
    for (auto d : cfg.dims) grid.push_back({0, d});
    if (grid.empty()) throw ConfigError("phase diagram needs dims or n_qubits");
    if (cfg.samples < 1) throw ConfigError("samples must be >= 1");
    Table t({"N", "D", "r", "expected_m", "mean_l1"});
    for (std::size_t gi = 0; gi < grid.size(); gi++) {
        auto [n, d] = grid[gi];
        for (std::size_t ri = 0; ri < cfg.r_values.size(); ri++) {
            double r = cfg.r_values[ri];
            Rng rng = derive_rng(cfg.seed, gi, ri);
            PatchSpec patch;
            patch.enabled = true;
            patch.dist = cfg.dist;
            patch.r = r;
            double msum = 0, lsum = 0;
            for (std::size_t s = 0; s < cfg.samples; s++) {
                double l1 = l1_norm(patch.sample(d, rng));
                msum += worst_case_threshold(l1, cfg.norm, cfg.epsilon);
                lsum += l1;
            }
            t.add_row({int64_t(n), int64_t(d), r, msum / cfg.samples, lsum / cfg.samples});
        }
    }
    return t;
}

/// Least-squares slope of log E[m] against log D for each r.
inline std::vector<std::pair<double, double>> phase_diagram_slopes(const Table &t) {
    std::map<double, std::vector<std::pair<double, double>>> pts;
    for (std::size_t i = 0; i < t.rows.size(); i++) {
        pts[t.number(i, "r")].push_back({std::log(t.number(i, "D")), std::log(t.number(i, "expected_m"))});
    }
    std::vector<std::pair<double, double>> out;
    for (auto &[r, v] : pts) {
        double mx = 0, my = 0;
        for (auto [x, y] : v) {
            mx += x;
            my += y;
        }
        mx /= v.size();
        my /= v.size();
        double sxy = 0, sxx = 0;
        for (auto [x, y] : v) {
            sxy += (x - mx) * (y - my);
            sxx += (x - mx) * (x - mx);
        }
        out.push_back({r, sxx > 0 ? sxy / sxx : 0.0});
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// JSON config ingestion. Errors name the offending key path.

namespace detail {

inline void check_keys(const nlohmann::json &j, const std::string &where, std::initializer_list<const char *> allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char *a : allowed) ok = ok || it.key() == a;
        if (!ok) throw ConfigError(where + ": unknown key '" + it.key() + "'");
    }
}

template <class T>
T get_as(const nlohmann::json &j, const std::string &path) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception &) {
        throw ConfigError(path + ": wrong type (" + std::string(j.type_name()) + ")");
    }
}

template <class T>
T field(const nlohmann::json &j, const char *key, const std::string &where, T fallback) {
    if (!j.contains(key)) return fallback;
    return get_as<T>(j.at(key), where + "." + key);
}

inline std::vector<std::size_t> size_list(const nlohmann::json &j, const std::string &path) {
    if (j.is_number_integer()) return {get_as<std::size_t>(j, path)};
    return get_as<std::vector<std::size_t>>(j, path);
}

inline AnsatzFamily parse_family(const nlohmann::json &j, const std::string &path) {
    try {
        return family_from_name(get_as<std::string>(j, path));
    } catch (const InvalidArgument &e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace detail

inline ExperimentConfig parse_experiment_config(const nlohmann::json &j) {
    using namespace detail;
    check_keys(j, "config", {"ansatz", "n_qubits", "observable", "patch", "lce", "optimizer", "seed", "runs",
                             "threads", "statevector_cap"});
    ExperimentConfig c;
    if (j.contains("ansatz")) {
        const auto &a = j["ansatz"];
        check_keys(a, "ansatz", {"family", "layers", "seed"});
        if (a.contains("family")) c.ansatz.family = parse_family(a["family"], "ansatz.family");
        if (a.contains("layers")) {
            if (a["layers"].is_string()) {
                if (a["layers"] != "N") throw ConfigError("ansatz.layers: expected an integer or \"N\"");
                c.layers_equal_n = true;
            } else {
                c.ansatz.layers = get_as<std::size_t>(a["layers"], "ansatz.layers");
            }
        }
        c.ansatz.seed = field<uint64_t>(a, "seed", "ansatz", 0);
    }
    if (j.contains("n_qubits")) c.n_qubits = size_list(j["n_qubits"], "n_qubits");
    if (j.contains("observable")) {
        const auto &o = j["observable"];
        check_keys(o, "observable", {"model", "n_terms"});
        auto model = field<std::string>(o, "model", "observable", "single_pauli");
        if (model == "single_pauli") {
            c.observable.kind = ObservableModel::SinglePauli;
        } else if (model == "unweighted") {
            c.observable.kind = ObservableModel::Unweighted;
        } else if (model == "weighted") {
            c.observable.kind = ObservableModel::Weighted;
        } else if (model == "global_Z") {
            c.observable.kind = ObservableModel::GlobalZ;
        } else if (model == "heisenberg") {
            c.observable.kind = ObservableModel::Heisenberg;
        } else {
            throw ConfigError("observable.model: unknown model '" + model + "'");
        }
        if (o.contains("n_terms")) {
            if (o["n_terms"].is_string()) {
                if (o["n_terms"] != "sqrtN") throw ConfigError("observable.n_terms: expected an integer or \"sqrtN\"");
                c.observable.n_terms_sqrt = true;
            } else {
                c.observable.n_terms = get_as<std::size_t>(o["n_terms"], "observable.n_terms");
            }
        }
    }
    if (j.contains("patch") && !j["patch"].is_null()) {
        const auto &p = j["patch"];
        check_keys(p, "patch", {"distribution", "r", "sigma"});
        c.patch.enabled = true;
        auto dist = field<std::string>(p, "distribution", "patch", "gaussian");
        if (dist == "gaussian") {
            c.patch.dist = PatchSpec::Gaussian;
        } else if (dist == "uniform") {
            c.patch.dist = PatchSpec::Uniform;
        } else {
            throw ConfigError("patch.distribution: expected \"gaussian\" or \"uniform\"");
        }
        if (p.contains("r")) c.patch.r = get_as<double>(p["r"], "patch.r");
        if (p.contains("sigma")) c.patch.sigma = get_as<double>(p["sigma"], "patch.sigma");
        if (!c.patch.r && !c.patch.sigma) throw ConfigError("patch: give either r or sigma");
        if (c.patch.r && c.patch.sigma) throw ConfigError("patch: r and sigma are mutually exclusive");
    }
    if (j.contains("lce")) {
        const auto &l = j["lce"];
        check_keys(l, "lce", {"mode", "policy", "k", "i0"});
        auto mode = field<std::string>(l, "mode", "lce", "off");
        if (mode == "off") {
            c.lce.mode = LceSpec::Off;
        } else if (mode == "on") {
            c.lce.mode = LceSpec::On;
        } else if (mode == "both") {
            c.lce.mode = LceSpec::Both;
        } else {
            throw ConfigError("lce.mode: expected \"off\", \"on\" or \"both\"");
        }
        auto policy = field<std::string>(l, "policy", "lce", "random");
        if (policy != "random" && policy != "fixed") throw ConfigError("lce.policy: expected \"random\" or \"fixed\"");
        c.lce.random = policy == "random";
        c.lce.k = field<std::size_t>(l, "k", "lce", 0);
        c.lce.i0 = field<std::size_t>(l, "i0", "lce", 0);
    }
    if (j.contains("optimizer")) {
        const auto &o = j["optimizer"];
        check_keys(o, "optimizer", {"eta", "iterations", "shots"});
        c.optimizer.eta = field<double>(o, "eta", "optimizer", 0.01);
        c.optimizer.iterations = field<std::size_t>(o, "iterations", "optimizer", 300);
        if (o.contains("shots") && !(o["shots"].is_string() && o["shots"] == "exact")) {
            c.optimizer.shots = get_as<uint64_t>(o["shots"], "optimizer.shots");
            if (c.optimizer.shots == 0) throw ConfigError("optimizer.shots: must be >= 1 or \"exact\"");
        }
    }
    c.seed = field<uint64_t>(j, "seed", "config", 0);
    c.runs = field<std::size_t>(j, "runs", "config", 1);
    c.threads = field<std::size_t>(j, "threads", "config", 1);
    c.statevector_cap = field<std::size_t>(j, "statevector_cap", "config", kDefaultStatevectorCap);
    c.validate();
    return c;
}

inline SweepConfig parse_sweep_config(const nlohmann::json &j) {
    using namespace detail;
    check_keys(j, "config", {"families", "n_qubits", "layers", "orders", "runs", "seed", "index_budget", "timing",
                             "threads"});
    SweepConfig c;
    if (j.contains("families")) {
        c.families.clear();
        for (std::size_t i = 0; i < j["families"].size(); i++) {
            c.families.push_back(parse_family(j["families"][i], "families[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("n_qubits")) c.n_qubits = size_list(j["n_qubits"], "n_qubits");
    c.layers = field<std::size_t>(j, "layers", "config", 1);
    if (j.contains("orders")) c.orders = get_as<std::vector<uint32_t>>(j["orders"], "orders");
    c.runs = field<std::size_t>(j, "runs", "config", 1);
    c.seed = field<uint64_t>(j, "seed", "config", 0);
    c.index_budget = field<double>(j, "index_budget", "config", 2e7);
    c.timing = field<bool>(j, "timing", "config", false);
    c.threads = field<std::size_t>(j, "threads", "config", 1);
    for (auto n : c.n_qubits) {
        if (n < 2) throw ConfigError("n_qubits: every size must be >= 2");
    }
    if (c.layers < 1) throw ConfigError("layers must be >= 1");
    if (c.runs < 1) throw ConfigError("runs must be >= 1");
    return c;
}

inline PhaseDiagramConfig parse_phase_config(const nlohmann::json &j) {
    using namespace detail;
    // "threads" is accepted for CLI uniformity; the diagram is pure arithmetic and runs serially.
    check_keys(j, "config", {"dims", "n_qubits", "r_values", "samples", "epsilon", "norm", "distribution", "seed",
                             "threads"});
    PhaseDiagramConfig c;
    if (j.contains("dims")) c.dims = size_list(j["dims"], "dims");
    if (j.contains("n_qubits")) c.n_qubits = size_list(j["n_qubits"], "n_qubits");
    if (j.contains("r_values")) c.r_values = get_as<std::vector<double>>(j["r_values"], "r_values");
    c.samples = field<std::size_t>(j, "samples", "config", 20);
    c.epsilon = field<double>(j, "epsilon", "config", 1e-6);
    c.norm = field<double>(j, "norm", "config", 1.0);
    c.seed = field<uint64_t>(j, "seed", "config", 0);
    auto dist = field<std::string>(j, "distribution", "config", "gaussian");
    if (dist != "gaussian" && dist != "uniform") throw ConfigError("distribution: expected \"gaussian\" or \"uniform\"");
    c.dist = dist == "gaussian" ? PatchSpec::Gaussian : PatchSpec::Uniform;
    if (!(c.epsilon > 0)) throw ConfigError("epsilon must be > 0");
    if (c.dims.empty() && c.n_qubits.empty()) throw ConfigError("config: give dims or n_qubits");
    return c;
}

}  // namespace cliffpatch
