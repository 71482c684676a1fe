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

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cliffpatch/experiments.hpp"
#include "cliffpatch/lce.hpp"
#include "cliffpatch/surrogate.hpp"
#include "cliffpatch/table.hpp"
#include "json.hpp"

namespace cliffpatch::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kResourceGuard = 2 };

struct Options {
    std::string config_path;
    std::string out_path;
    std::optional<uint64_t> seed;
    std::optional<std::size_t> threads;
    bool json_errors = false;
    int verbosity = 0;
    // threshold / complexity flags
    std::optional<double> l1, norm, eps, dim, terms, q, rho, c_const, gamma;
};

/// Error carrying its exit code and extra JSON fields for --json-errors.
struct CliError : std::runtime_error {
    int code;
    nlohmann::json extra;
    CliError(int c, const std::string &msg, nlohmann::json x = nlohmann::json::object())
        : std::runtime_error(msg), code(c), extra(std::move(x)) {
    }
};

inline std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw CliError(kConfigError, path + ": cannot open config file");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Parses JSON; syntax errors are reported as path:line:column.
inline nlohmann::json load_config(const std::string &path) {
    if (path.empty()) throw CliError(kConfigError, "--config is required for this subcommand");
    std::string text = read_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); i++) {
            if (text[i] == '\n') {
                line++;
                col = 1;
            } else {
                col++;
            }
        }
        std::string what = e.what();
        auto p = what.find("syntax error");
        throw CliError(kConfigError, path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                                         (p == std::string::npos ? what : what.substr(p)));
    }
}

class Runner {
   public:
    Runner(Options o, std::ostream &out) : opt_(std::move(o)), out_(out) {
    }

    /// Applies --seed and --threads overrides to a config object.
    nlohmann::json with_overrides(nlohmann::json j) const {
        if (opt_.seed) j["seed"] = *opt_.seed;
        if (opt_.threads) j["threads"] = *opt_.threads;
        return j;
    }

    void write_table(const Table &t, const nlohmann::json &cfg) {
        CsvMeta meta{fnv1a_hex(cfg.dump()), cfg.value("seed", uint64_t{0}), version_string()};
        if (opt_.out_path.empty()) {
            out_ << to_csv(t, meta);
        } else {
            emit_csv(t, opt_.out_path, meta);
        }
    }

    void write_json(const nlohmann::json &j) {
        if (opt_.out_path.empty()) {
            out_ << j.dump(2) << "\n";
            return;
        }
        std::ofstream f(opt_.out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open '" + opt_.out_path + "' for writing");
        f << j.dump(2) << "\n";
    }

    std::size_t threads() const {
        return opt_.threads.value_or(default_thread_count());
    }

    void grad_scaling() {
        auto j = with_overrides(load_config(opt_.config_path));
        ExperimentConfig c = parse_experiment_config(j);
        c.threads = j.contains("threads") ? c.threads : threads();
        write_table(gradient_scaling(c), j);
    }

    void vqe(bool heisenberg) {
        auto j = with_overrides(load_config(opt_.config_path));
        if (heisenberg) j["observable"] = {{"model", "heisenberg"}};
        ExperimentConfig c = parse_experiment_config(j);
        c.threads = j.contains("threads") ? c.threads : threads();
        write_table(vqe_table(c), j);
    }

    static PauliObservable observable_from(const nlohmann::json &j, std::size_t n, Rng &rng) {
        if (j.is_string()) return PauliObservable::parse(j.get<std::string>());
        if (j.is_array()) return j.get<PauliObservable>();
        ExperimentConfig tmp = parse_experiment_config(nlohmann::json{{"observable", j}});
        return tmp.observable.sample(n, rng);
    }

    static Circuit circuit_from(const nlohmann::json &j, uint64_t seed) {
        if (j.contains("circuit")) return j["circuit"].get<Circuit>();
        const auto &a = j.at("ansatz");
        detail::check_keys(a, "ansatz", {"family", "n_qubits", "layers", "seed"});
        AnsatzSpec s;
        s.family = detail::parse_family(a.at("family"), "ansatz.family");
        s.n_qubits = detail::field<std::size_t>(a, "n_qubits", "ansatz", 2);
        s.layers = detail::field<std::size_t>(a, "layers", "ansatz", 1);
        s.seed = detail::field<uint64_t>(a, "seed", "ansatz", seed);
        try {
            return build_ansatz(s);
        } catch (const InvalidArgument &e) {
            throw ConfigError(std::string("ansatz: ") + e.what());
        }
    }

    void surrogate() {
        auto j = with_overrides(load_config(opt_.config_path));
        if (j.contains("sweep")) {
            auto sj = j["sweep"];
            if (j.contains("seed")) sj["seed"] = j["seed"];
            if (j.contains("threads")) sj["threads"] = j["threads"];
            SweepConfig c = parse_sweep_config(sj);
            write_table(surrogate_complexity_sweep(c), j);
            return;
        }
        detail::check_keys(j, "config", {"ansatz", "circuit", "observable", "m", "epsilon", "l1", "index_budget",
                                         "seed", "threads"});
        uint64_t seed = j.value("seed", uint64_t{0});
        Rng rng = derive_rng(seed, 0);
        Circuit c = circuit_from(j, seed);
        nlohmann::json oj = j.contains("observable") ? j["observable"] : nlohmann::json{{"model", "single_pauli"}};
        PauliObservable obs = observable_from(oj, c.n_qubits(), rng);
        uint32_t m;
        if (j.contains("m")) {
            m = detail::get_as<uint32_t>(j["m"], "m");
        } else if (j.contains("l1")) {
            m = worst_case_threshold(j["l1"].get<double>(), obs.l1_norm(), j.value("epsilon", 1e-6));
        } else {
            throw ConfigError("config: give m, or l1 (and optionally epsilon)");
        }
        SurrogateOptions so;
        so.index_budget = j.value("index_budget", 2e7);
        so.threads = threads();
        TaylorSurrogate s = build_surrogate(c, obs, m, so);
        auto out = surrogate_to_json(s);
        out["observable"] = obs;
        write_json(out);
    }

    void threshold() {
        if (!opt_.config_path.empty()) {
            auto j = with_overrides(load_config(opt_.config_path));
            PhaseDiagramConfig c = parse_phase_config(j);
            Table t = threshold_phase_diagram(c);
            write_table(t, j);
            return;
        }
        if (!opt_.l1 || !opt_.eps) throw ConfigError("threshold: give --config, or --l1 and --eps (and --norm)");
        double norm = opt_.norm.value_or(1.0);
        ThresholdReport r = threshold_report(*opt_.l1, norm, *opt_.eps);
        std::ostringstream s;
        s << "m=" << r.m_worst_case << "\n";
        if (*opt_.l1 > 0) s << "lambert_lower_bound=" << detail::format_double(r.m_lower_bound_lambert) << "\n";
        emit_text(s.str());
    }

    void complexity() {
        if (!opt_.dim || !opt_.terms || !opt_.l1) throw ConfigError("complexity: --D, --terms and --l1 are required");
        ComplexityConfig cc;
        if (opt_.eps) cc.epsilon = *opt_.eps;
        if (opt_.norm) cc.norm = *opt_.norm;
        ComplexityReport r = complexity_estimate(*opt_.dim, *opt_.terms, *opt_.l1, cc);
        std::ostringstream s;
        s << "regime=" << regime_name(r.regime) << "\n";
        s << "m=" << r.m << "\n";
        s << "log_op_count_bound=" << detail::format_double(r.log_op_count_bound) << "\n";
        if (opt_.q) {
            PauliPathComparison p = pauli_path_comparison(*opt_.q, opt_.eps.value_or(1e-2), opt_.rho.value_or(1e-2),
                                                          opt_.c_const.value_or(1.0), opt_.gamma.value_or(1.0),
                                                          *opt_.dim);
            s << "q_threshold=" << detail::format_double(p.q_threshold) << "\n";
            s << "d_threshold=" << (p.d_threshold ? detail::format_double(*p.d_threshold) : "none") << "\n";
            s << "faster=" << (p.faster ? "true" : "false") << "\n";
        }
        emit_text(s.str());
    }

    void lce() {
        auto j = with_overrides(load_config(opt_.config_path));
        detail::check_keys(j, "config", {"ansatz", "circuit", "observable", "k", "i0", "seed", "threads",
                                         "statevector_cap"});
        uint64_t seed = j.value("seed", uint64_t{0});
        Rng rng = derive_rng(seed, 0);
        Circuit c = circuit_from(j, seed);
        if (!j.contains("observable")) throw ConfigError("config: observable is required");
        PauliObservable obs = observable_from(j["observable"], c.n_qubits(), rng);
        std::uniform_int_distribution<std::size_t> pk(0, c.n_params() - 1), pi(0, obs.size() - 1);
        std::size_t k = j.contains("k") ? detail::get_as<std::size_t>(j["k"], "k") : pk(rng);
        std::size_t i0 = j.contains("i0") ? detail::get_as<std::size_t>(j["i0"], "i0") : pi(rng);
        if (k >= c.n_params()) throw ConfigError("k: out of range for D=" + std::to_string(c.n_params()));
        if (i0 >= obs.size()) throw ConfigError("i0: out of range");
        LcePair pair = construct_lce(c, obs, k, i0);
        Circuit t = lce_transform(c, pair);
        CliffordEvaluator ev(t, obs);
        nlohmann::json out = pair;
        nlohmann::json ver;
        ver["gradient_component"] = ev.gradient_component(k);
        ver["beta"] = beta(c, obs, pair);
        ver["c_i0"] = obs[i0].coeff;
        std::size_t cap = j.value("statevector_cap", kDefaultStatevectorCap);
        if (c.n_qubits() <= cap) {
            std::vector<double> th(t.n_params(), 0.0);
            ver["statevector_gradient_component"] = gradient(t, obs, th, GradientMode::parameter_shift(), cap)[k];
        }
        out["verification"] = ver;
        out["observable"] = obs;
        write_json(out);
    }

    void cancellation() {
        auto j = with_overrides(load_config(opt_.config_path));
        detail::check_keys(j, "config", {"n_qubits", "n_terms", "trials", "seed", "family", "layers", "verify_every",
                                         "threads"});
        auto ns = detail::size_list(j.value("n_qubits", nlohmann::json(4)), "n_qubits");
        std::size_t terms = detail::field<std::size_t>(j, "n_terms", "config", 3);
        std::size_t trials = detail::field<std::size_t>(j, "trials", "config", 1000);
        uint64_t seed = j.value("seed", uint64_t{0});
        CancellationOptions co;
        if (j.contains("family")) co.family = detail::parse_family(j["family"], "family");
        co.layers = detail::field<std::size_t>(j, "layers", "config", 1);
        co.verify_every = detail::field<std::size_t>(j, "verify_every", "config", 0);
        if (trials < 1 || terms < 1) throw ConfigError("trials and n_terms must be >= 1");
        Table t({"N", "n_terms", "trials", "hits", "frequency", "verified", "max_verify_error"});
        for (std::size_t idx = 0; idx < ns.size(); idx++) {
            if (ns[idx] < 2) throw ConfigError("n_qubits: every size must be >= 2");
            Rng rng = derive_rng(seed, idx, ns[idx]);
            CancellationReport r = cancellation_study(ns[idx], terms, trials, rng, co);
            t.add_row({int64_t(ns[idx]), int64_t(terms), int64_t(r.trials), int64_t(r.hits), r.frequency(),
                       int64_t(r.verified), r.max_verify_error});
        }
        write_table(t, j);
    }

   private:
    void emit_text(const std::string &s) {
        if (opt_.out_path.empty()) {
            out_ << s;
            return;
        }
        std::ofstream f(opt_.out_path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open '" + opt_.out_path + "' for writing");
        f << s;
    }

    Options opt_;
    std::ostream &out_;
};

inline void report_error(std::ostream &err, bool json, int code, const std::string &kind, const std::string &msg,
                         const nlohmann::json &extra = nlohmann::json::object()) {
    if (json) {
        nlohmann::json j = extra;
        j["error"] = kind;
        j["message"] = msg;
        j["exit_code"] = code;
        err << j.dump() << "\n";
    } else {
        err << "error: " << msg << "\n";
    }
}

inline int run(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    CLI::App app{"cliffpatch: Clifford-point tools for parameterized quantum circuits"};
    app.require_subcommand(1);
    Options o;
    app.add_flag("--json-errors", o.json_errors, "Emit errors as JSON on stderr");
    app.set_version_flag("--version", version_string());

    auto common = [&](CLI::App *sub, bool needs_config) {
        auto *c = sub->add_option("--config", o.config_path, "JSON config file");
        if (needs_config) c->required();
        sub->add_option("--out", o.out_path, "Output path (stdout if omitted)");
        sub->add_option("--seed", o.seed, "Override the master seed");
        sub->add_option("--threads", o.threads, "Worker threads (default: $CLIFFPATCH_THREADS or 1)");
        sub->add_flag("--json-errors", o.json_errors, "Emit errors as JSON on stderr");
        sub->add_flag("-v,--verbose", o.verbosity, "Verbosity");
    };
    auto *gs = app.add_subcommand("grad-scaling", "Initial gradient norms with and without LCE");
    auto *vq = app.add_subcommand("vqe", "Gradient-descent VQE traces");
    auto *hz = app.add_subcommand("heisenberg", "VQE on the Heisenberg chain");
    auto *sg = app.add_subcommand("surrogate", "Build a Taylor surrogate or run the complexity sweep");
    auto *th = app.add_subcommand("threshold", "Truncation thresholds or the phase diagram");
    auto *cx = app.add_subcommand("complexity", "Runtime regime and op-count estimate");
    auto *lc = app.add_subcommand("lce", "Construct an LCE pair");
    auto *cn = app.add_subcommand("cancellation", "Residual cancellation frequency study");
    for (auto *s : {gs, vq, hz, sg, lc, cn}) common(s, true);
    common(th, false);
    common(cx, false);
    th->add_option("--l1", o.l1, "l1 norm of theta");
    th->add_option("--norm", o.norm, "Norm surrogate of H");
    th->add_option("--eps", o.eps, "Target error");
    cx->add_option("--D", o.dim, "Number of parameters");
    cx->add_option("--terms", o.terms, "Number of observable terms");
    cx->add_option("--l1", o.l1, "l1 norm of theta");
    cx->add_option("--eps", o.eps, "Target error");
    cx->add_option("--norm", o.norm, "Norm surrogate of H");
    cx->add_option("--q", o.q, "Patch parameter q for the Pauli-path comparison");
    cx->add_option("--rho", o.rho, "Failure probability");
    cx->add_option("--c", o.c_const, "MSE constant c");
    cx->add_option("--gamma", o.gamma, "Runtime constant ratio");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion &e) {
        out << version_string() << "\n";
        return kOk;
    } catch (const CLI::ParseError &e) {
        report_error(err, o.json_errors, kConfigError, "usage", e.what());
        return kConfigError;
    }

    try {
        Runner r(o, out);
        if (*gs) r.grad_scaling();
        if (*vq) r.vqe(false);
        if (*hz) r.vqe(true);
        if (*sg) r.surrogate();
        if (*th) r.threshold();
        if (*cx) r.complexity();
        if (*lc) r.lce();
        if (*cn) r.cancellation();
        return kOk;
    } catch (const CliError &e) {
        report_error(err, o.json_errors, e.code, "config", e.what(), e.extra);
        return e.code;
    } catch (const BudgetExceeded &e) {
        report_error(err, o.json_errors, kResourceGuard, "resource", e.what(),
                     {{"predicted_indices", e.predicted_indices}, {"log_op_bound", e.log_op_bound}});
        return kResourceGuard;
    } catch (const ResourceError &e) {
        report_error(err, o.json_errors, kResourceGuard, "resource", e.what());
        return kResourceGuard;
    } catch (const nlohmann::json::exception &e) {
        report_error(err, o.json_errors, kConfigError, "config", e.what());
        return kConfigError;
    } catch (const std::exception &e) {
        report_error(err, o.json_errors, kConfigError, "config", e.what());
        return kConfigError;
    }
}

}  // namespace cliffpatch::cli
