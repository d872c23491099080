// Copyright 2026 The vqalab Authors
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

#ifndef VQALAB_EXPERIMENTS_CONFIG_HPP
#define VQALAB_EXPERIMENTS_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "vqalab/circuits.hpp"
#include "vqalab/observables.hpp"

namespace vqalab::experiments {

using json = nlohmann::json;

/// Invalid or unreadable experiment configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Variance, GradVariance, Learn, CkNorm, PauliDist, Verify };

inline const char *to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Variance:
            return "variance";
        case ExperimentKind::GradVariance:
            return "grad-variance";
        case ExperimentKind::Learn:
            return "learn";
        case ExperimentKind::CkNorm:
            return "cknorm";
        case ExperimentKind::PauliDist:
            return "pauli-dist";
        case ExperimentKind::Verify:
            return "verify";
    }
    return "?";
}

inline ExperimentKind parse_experiment_kind(const std::string &s) {
    for (auto k : {ExperimentKind::Variance, ExperimentKind::GradVariance, ExperimentKind::Learn,
                   ExperimentKind::CkNorm, ExperimentKind::PauliDist, ExperimentKind::Verify}) {
        if (s == to_string(k)) return k;
    }
    throw ConfigError("experiment: unknown kind '" + s + "'");
}

/// Integer knob that may also be "log", meaning floor(log2 n).
struct SizeKnob {
    bool log = false;
    std::size_t value = 0;

    std::size_t resolve(std::size_t n) const { return log ? floor_log2(n) : value; }
    json to_json() const { return log ? json("log") : json(value); }
};

struct AnsatzSpec {
    AnsatzKind kind = AnsatzKind::Mps;
    SizeKnob k{false, 2};
    std::optional<SizeKnob> depth;  // default: k for MPS, floor(log2 n) otherwise

    Ansatz build(std::size_t n) const {
        const std::size_t kk = k.resolve(n);
        switch (kind) {
            case AnsatzKind::Mps:
                return Ansatz::mps(n, kk, depth ? depth->resolve(n) : kk);
            case AnsatzKind::Hea:
                return Ansatz::hea(n, depth ? depth->resolve(n) : floor_log2(n));
            case AnsatzKind::Qcnn:
                return Ansatz::qcnn(n, depth ? depth->resolve(n) : 1);
        }
        throw std::logic_error("unreachable");
    }
};

/// "zero", "product:<polar>,<azimuth>", "random-product", "random-hea:<depth|log>".
struct InputStateSpec {
    enum class Kind { Zero, Product, RandomProduct, RandomHea };
    Kind kind = Kind::Zero;
    double polar = 0.0;
    double azimuth = 0.0;
    SizeKnob hea_depth{true, 0};
    std::string text = "zero";

    bool is_product() const { return kind != Kind::RandomHea; }
};

struct SpsaSpec {
    double a = 0.4;
    double c = 0.4;
    std::size_t iterations = 300;
    double init_low = 0.0;
    double init_high = std::numbers::pi / 2.0;
    bool decaying = false;
    double stability = 0.0;  // A in a / (j + 1 + A)^alpha
    double alpha = 0.602;
    double gamma = 0.101;
};

struct VerifySpec {
    std::string suite = "analytic";
    std::size_t samples = 200000;      // analytic Monte-Carlo samples
    std::size_t tuples = 20;           // random bitstring tuples per (n, k)
    std::size_t design_width = 2;
    std::size_t design_depth = 8;
    std::size_t design_trials = 20000;
    std::size_t design_random_cases = 3;
    std::size_t norm_pairs = 50;
    std::size_t norm_samples = 100;
    std::size_t norm_n = 4;
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Variance;
    AnsatzSpec ansatz;
    std::vector<std::size_t> n_values;
    std::vector<std::string> observables{"global0"};
    InputStateSpec input_state;
    std::size_t input_states = 1;
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    double theta_low = 0.0;
    double theta_high = 2.0 * std::numbers::pi;
    std::size_t threads = 1;
    std::optional<std::size_t> param_indices;  // empty: all
    SpsaSpec spsa;
    std::size_t seeds = 5;
    std::variant<std::string, std::vector<std::string>> queries = std::string("z-singles");
    std::string path = "auto";
    std::string norm = "normalized";
    VerifySpec verify;
};

namespace detail {

inline const std::set<std::string> &allowed_top_keys() {
    static const std::set<std::string> keys{
        "experiment", "ansatz", "n", "observables", "observable", "input_state", "input_states", "samples", "seed",
        "theta_range", "threads", "param_indices", "spsa", "seeds", "queries", "path", "norm", "suite", "verify",
        "output", "description"};
    return keys;
}

inline void reject_unknown(const json &obj, const std::set<std::string> &allowed, const std::string &where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) throw ConfigError(where + it.key() + ": unknown field");
    }
}

inline std::size_t get_count(const json &v, const std::string &field, std::size_t min_value = 0) {
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min_value)) {
        throw ConfigError(field + ": expected an integer >= " + std::to_string(min_value));
    }
    return static_cast<std::size_t>(v.get<long long>());
}

inline double get_real(const json &v, const std::string &field) {
    if (!v.is_number()) throw ConfigError(field + ": expected a number");
    return v.get<double>();
}

inline SizeKnob get_knob(const json &v, const std::string &field, std::size_t min_value) {
    if (v.is_string() && v.get<std::string>() == "log") return {true, 0};
    return {false, get_count(v, field, min_value)};
}

inline InputStateSpec parse_input_state(const std::string &s) {
    InputStateSpec spec;
    spec.text = s;
    if (s == "zero") return spec;
    if (s == "random-product") {
        spec.kind = InputStateSpec::Kind::RandomProduct;
        return spec;
    }
    if (s.starts_with("product:")) {
        spec.kind = InputStateSpec::Kind::Product;
        std::istringstream is(s.substr(8));
        char comma = 0;
        if (!(is >> spec.polar >> comma >> spec.azimuth) || comma != ',' || !is.eof()) {
            throw ConfigError("input_state: expected product:<polar>,<azimuth>");
        }
        return spec;
    }
    if (s.starts_with("random-hea:")) {
        spec.kind = InputStateSpec::Kind::RandomHea;
        const std::string d = s.substr(11);
        if (d == "log") {
            spec.hea_depth = {true, 0};
        } else {
            try {
                std::size_t pos = 0;
                spec.hea_depth = {false, std::stoul(d, &pos)};
                if (pos != d.size()) throw std::invalid_argument(d);
            } catch (const std::exception &) {
                throw ConfigError("input_state: expected random-hea:<depth|log>");
            }
        }
        return spec;
    }
    throw ConfigError("input_state: unknown spec '" + s + "'");
}

}  // namespace detail

/// Builds a validated config; field errors are reported as "<field>: <reason>".
inline ExperimentConfig parse_config(const json &j, std::optional<ExperimentKind> expected = std::nullopt) {
    using namespace detail;
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
    reject_unknown(j, allowed_top_keys(), "");
    ExperimentConfig cfg;
    if (j.contains("experiment")) {
        if (!j["experiment"].is_string()) throw ConfigError("experiment: expected a string");
        cfg.experiment = parse_experiment_kind(j["experiment"].get<std::string>());
        if (expected && *expected != cfg.experiment) {
            throw ConfigError(std::string("experiment: config is for '") + to_string(cfg.experiment) +
                              "' but subcommand is '" + to_string(*expected) + "'");
        }
    } else if (expected) {
        cfg.experiment = *expected;
    } else {
        throw ConfigError("experiment: missing");
    }

    std::optional<std::size_t> ansatz_n;
    if (j.contains("ansatz")) {
        const json &a = j["ansatz"];
        if (!a.is_object()) throw ConfigError("ansatz: expected an object");
        reject_unknown(a, {"kind", "n", "k", "subcircuit_depth", "depth"}, "ansatz.");
        if (a.contains("kind")) {
            if (!a["kind"].is_string()) throw ConfigError("ansatz.kind: expected a string");
            const auto kind = a["kind"].get<std::string>();
            if (kind == "mps") cfg.ansatz.kind = AnsatzKind::Mps;
            else if (kind == "hea") cfg.ansatz.kind = AnsatzKind::Hea;
            else if (kind == "qcnn") cfg.ansatz.kind = AnsatzKind::Qcnn;
            else throw ConfigError("ansatz.kind: expected mps, hea, or qcnn");
        }
        if (a.contains("k")) cfg.ansatz.k = get_knob(a["k"], "ansatz.k", 2);
        if (a.contains("subcircuit_depth") && a.contains("depth")) {
            throw ConfigError("ansatz.depth: give either depth or subcircuit_depth");
        }
        if (a.contains("subcircuit_depth")) cfg.ansatz.depth = get_knob(a["subcircuit_depth"], "ansatz.subcircuit_depth", 0);
        if (a.contains("depth")) cfg.ansatz.depth = get_knob(a["depth"], "ansatz.depth", 0);
        if (a.contains("n")) ansatz_n = get_count(a["n"], "ansatz.n", 1);
    }
    if (j.contains("n")) {
        const json &n = j["n"];
        if (n.is_array()) {
            for (std::size_t i = 0; i < n.size(); ++i) cfg.n_values.push_back(get_count(n[i], "n[" + std::to_string(i) + "]", 1));
        } else {
            cfg.n_values.push_back(get_count(n, "n", 1));
        }
    } else if (ansatz_n) {
        cfg.n_values.push_back(*ansatz_n);
    }
    if (cfg.experiment != ExperimentKind::Verify && cfg.n_values.empty()) {
        throw ConfigError("n: required (top-level list or ansatz.n)");
    }
    for (std::size_t n : cfg.n_values) {
        if (n > kMaxStatevectorQubits) throw ConfigError("n: " + std::to_string(n) + " exceeds the simulator cap");
        try {
            (void)cfg.ansatz.build(n);
        } catch (const std::invalid_argument &e) {
            throw ConfigError("ansatz: invalid for n=" + std::to_string(n) + ": " + e.what());
        }
    }

    if (j.contains("observables") && j.contains("observable")) {
        throw ConfigError("observables: give either observable or observables");
    }
    if (j.contains("observable")) {
        if (!j["observable"].is_string()) throw ConfigError("observable: expected a string");
        cfg.observables = {j["observable"].get<std::string>()};
    }
    if (j.contains("observables")) {
        const json &o = j["observables"];
        if (!o.is_array() || o.empty()) throw ConfigError("observables: expected a non-empty array of strings");
        cfg.observables.clear();
        for (std::size_t i = 0; i < o.size(); ++i) {
            if (!o[i].is_string()) throw ConfigError("observables[" + std::to_string(i) + "]: expected a string");
            cfg.observables.push_back(o[i].get<std::string>());
        }
    }
    for (std::size_t n : cfg.n_values) {
        for (const auto &spec : cfg.observables) {
            try {
                (void)Observable::parse(spec, n);
            } catch (const std::invalid_argument &e) {
                throw ConfigError(std::string("observables: ") + e.what());
            }
        }
    }

    if (j.contains("input_state")) {
        if (!j["input_state"].is_string()) throw ConfigError("input_state: expected a string");
        cfg.input_state = parse_input_state(j["input_state"].get<std::string>());
    }
    if (j.contains("input_states")) cfg.input_states = get_count(j["input_states"], "input_states", 1);
    if (j.contains("samples")) cfg.samples = get_count(j["samples"], "samples", 0);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) throw ConfigError("seed: expected an integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("theta_range")) {
        const json &r = j["theta_range"];
        if (!r.is_array() || r.size() != 2) throw ConfigError("theta_range: expected [low, high]");
        cfg.theta_low = get_real(r[0], "theta_range[0]");
        cfg.theta_high = get_real(r[1], "theta_range[1]");
        if (!(cfg.theta_low < cfg.theta_high)) throw ConfigError("theta_range: low must be below high");
    }
    if (j.contains("threads")) cfg.threads = get_count(j["threads"], "threads", 1);
    if (j.contains("param_indices")) {
        const json &p = j["param_indices"];
        if (p.is_string() && p.get<std::string>() == "all") cfg.param_indices.reset();
        else cfg.param_indices = get_count(p, "param_indices", 1);
    }
    if (j.contains("spsa")) {
        const json &s = j["spsa"];
        if (!s.is_object()) throw ConfigError("spsa: expected an object");
        reject_unknown(s, {"a", "c", "iterations", "init_range", "schedule", "A", "alpha", "gamma"}, "spsa.");
        if (s.contains("a")) cfg.spsa.a = get_real(s["a"], "spsa.a");
        if (s.contains("c")) cfg.spsa.c = get_real(s["c"], "spsa.c");
        if (!(cfg.spsa.c > 0.0)) throw ConfigError("spsa.c: must be positive");
        if (s.contains("iterations")) cfg.spsa.iterations = get_count(s["iterations"], "spsa.iterations", 0);
        if (s.contains("init_range")) {
            const json &r = s["init_range"];
            if (!r.is_array() || r.size() != 2) throw ConfigError("spsa.init_range: expected [low, high]");
            cfg.spsa.init_low = get_real(r[0], "spsa.init_range[0]");
            cfg.spsa.init_high = get_real(r[1], "spsa.init_range[1]");
            if (!(cfg.spsa.init_low <= cfg.spsa.init_high)) throw ConfigError("spsa.init_range: low must not exceed high");
        }
        if (s.contains("schedule")) {
            if (!s["schedule"].is_string()) throw ConfigError("spsa.schedule: expected a string");
            const auto sch = s["schedule"].get<std::string>();
            if (sch == "constant") cfg.spsa.decaying = false;
            else if (sch == "decaying") cfg.spsa.decaying = true;
            else throw ConfigError("spsa.schedule: expected constant or decaying");
        }
        if (s.contains("A")) cfg.spsa.stability = get_real(s["A"], "spsa.A");
        if (s.contains("alpha")) cfg.spsa.alpha = get_real(s["alpha"], "spsa.alpha");
        if (s.contains("gamma")) cfg.spsa.gamma = get_real(s["gamma"], "spsa.gamma");
    }
    if (j.contains("seeds")) cfg.seeds = get_count(j["seeds"], "seeds", 1);
    if (j.contains("queries")) {
        const json &q = j["queries"];
        if (q.is_string()) {
            const auto s = q.get<std::string>();
            if (s != "z-singles" && s != "all") throw ConfigError("queries: expected z-singles, all, or a list");
            cfg.queries = s;
        } else if (q.is_array()) {
            std::vector<std::string> list;
            for (std::size_t i = 0; i < q.size(); ++i) {
                if (!q[i].is_string()) throw ConfigError("queries[" + std::to_string(i) + "]: expected a Pauli string");
                const auto s = q[i].get<std::string>();
                try {
                    const auto p = PauliString::parse(s);
                    for (std::size_t n : cfg.n_values)
                        if (p.size() != n) throw std::invalid_argument("length differs from n=" + std::to_string(n));
                } catch (const std::invalid_argument &e) {
                    throw ConfigError("queries[" + std::to_string(i) + "]: " + e.what());
                }
                list.push_back(s);
            }
            cfg.queries = list;
        } else {
            throw ConfigError("queries: expected a string or a list of Pauli strings");
        }
    }
    if (j.contains("path")) {
        if (!j["path"].is_string()) throw ConfigError("path: expected a string");
        cfg.path = j["path"].get<std::string>();
        if (cfg.path != "auto" && cfg.path != "mps" && cfg.path != "dense") throw ConfigError("path: expected auto, mps, or dense");
    }
    if (j.contains("norm")) {
        if (!j["norm"].is_string()) throw ConfigError("norm: expected a string");
        cfg.norm = j["norm"].get<std::string>();
        if (cfg.norm != "normalized" && cfg.norm != "kernel") throw ConfigError("norm: expected normalized or kernel");
    }
    if (j.contains("suite")) {
        if (!j["suite"].is_string()) throw ConfigError("suite: expected a string");
        cfg.verify.suite = j["suite"].get<std::string>();
    }
    if (j.contains("verify")) {
        const json &v = j["verify"];
        if (!v.is_object()) throw ConfigError("verify: expected an object");
        reject_unknown(v, {"samples", "tuples", "design_width", "design_depth", "design_trials", "design_random_cases",
                           "norm_pairs", "norm_samples", "norm_n"},
                       "verify.");
        auto &vs = cfg.verify;
        if (v.contains("samples")) vs.samples = get_count(v["samples"], "verify.samples", 2);
        if (v.contains("tuples")) vs.tuples = get_count(v["tuples"], "verify.tuples", 1);
        if (v.contains("design_width")) vs.design_width = get_count(v["design_width"], "verify.design_width", 2);
        if (v.contains("design_depth")) vs.design_depth = get_count(v["design_depth"], "verify.design_depth", 0);
        if (v.contains("design_trials")) vs.design_trials = get_count(v["design_trials"], "verify.design_trials", 2);
        if (v.contains("design_random_cases")) vs.design_random_cases = get_count(v["design_random_cases"], "verify.design_random_cases", 0);
        if (v.contains("norm_pairs")) vs.norm_pairs = get_count(v["norm_pairs"], "verify.norm_pairs", 1);
        if (v.contains("norm_samples")) vs.norm_samples = get_count(v["norm_samples"], "verify.norm_samples", 2);
        if (v.contains("norm_n")) vs.norm_n = get_count(v["norm_n"], "verify.norm_n", 2);
        if (vs.design_width > 6) throw ConfigError("verify.design_width: at most 6");
        if (vs.norm_n > 6) throw ConfigError("verify.norm_n: at most 6");
    }
    if (cfg.experiment == ExperimentKind::Verify && cfg.verify.suite != "analytic" && cfg.verify.suite != "design" &&
        cfg.verify.suite != "norm") {
        throw ConfigError("suite: expected analytic, design, or norm");
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string &path, std::optional<ExperimentKind> expected = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    return parse_config(j, expected);
}

}  // namespace vqalab::experiments

#endif  // VQALAB_EXPERIMENTS_CONFIG_HPP
