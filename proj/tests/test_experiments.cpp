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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gtest/gtest.h"

#include "vqalab/experiments/config.hpp"
#include "vqalab/experiments/csv.hpp"
#include "vqalab/experiments/runners.hpp"
#include "vqalab/experiments/verify.hpp"

using namespace vqalab;
using namespace vqalab::experiments;
using nlohmann::json;

namespace {

ExperimentConfig cfg_from(const std::string &text, std::optional<ExperimentKind> kind = std::nullopt) {
    return parse_config(json::parse(text), kind);
}

double value_of(const CsvTable &t, const std::string &n, const std::string &obs, const std::string &stat,
                std::string *se = nullptr) {
    const std::size_t cn = t.column("n"), co = t.column("observable"), cs = t.column("statistic"),
                      cv = t.column("value"), ce = t.column("se");
    for (const auto &r : t.rows) {
        if (r[cn] == n && r[co] == obs && r[cs] == stat) {
            if (se) *se = r[ce];
            return std::stod(r[cv]);
        }
    }
    throw std::runtime_error("row not found: " + n + " " + obs + " " + stat);
}

}  // namespace

TEST(config, parses_full_variance_config) {
    const auto cfg = cfg_from(R"({
        "experiment": "variance",
        "ansatz": {"kind": "mps", "k": 2, "subcircuit_depth": 4},
        "n": [6, 8],
        "observables": ["global0", "local-avg"],
        "input_state": "random-hea:log",
        "input_states": 5,
        "samples": 2000,
        "seed": 42,
        "threads": 2
    })");
    EXPECT_EQ(cfg.experiment, ExperimentKind::Variance);
    EXPECT_EQ(cfg.n_values, (std::vector<std::size_t>{6, 8}));
    EXPECT_EQ(cfg.observables.size(), 2u);
    EXPECT_EQ(cfg.input_state.kind, InputStateSpec::Kind::RandomHea);
    EXPECT_TRUE(cfg.input_state.hea_depth.log);
    EXPECT_EQ(cfg.input_states, 5u);
    EXPECT_EQ(cfg.seed, 42u);
    const Ansatz a = cfg.ansatz.build(8);
    EXPECT_EQ(a.depth(), 4u);
    EXPECT_EQ(a.num_subcircuits(), 7u);
}

TEST(config, defaults_and_log_knobs) {
    const auto cfg = cfg_from(R"({"ansatz": {"kind": "mps", "n": 8, "k": "log"}})", ExperimentKind::Learn);
    EXPECT_EQ(cfg.experiment, ExperimentKind::Learn);
    EXPECT_EQ(cfg.n_values, (std::vector<std::size_t>{8}));
    const Ansatz a = cfg.ansatz.build(8);
    EXPECT_EQ(a.width(), 3u);
    EXPECT_EQ(a.depth(), 3u);
    EXPECT_DOUBLE_EQ(cfg.spsa.a, 0.4);
    EXPECT_DOUBLE_EQ(cfg.spsa.c, 0.4);
    EXPECT_EQ(cfg.spsa.iterations, 300u);
    EXPECT_DOUBLE_EQ(cfg.spsa.init_high, std::numbers::pi / 2.0);
    EXPECT_EQ(cfg_from(R"({"ansatz": {"kind": "hea"}, "n": 8})", ExperimentKind::Variance).ansatz.build(8).depth(), 3u);
}

TEST(config, field_level_errors) {
    const std::vector<std::pair<std::string, std::string>> bad{
        {R"({"experiment": "variance"})", "n:"},
        {R"({"experiment": "variance", "n": 4, "bogus": 1})", "bogus"},
        {R"({"experiment": "variance", "n": 4, "ansatz": {"kind": "tree"}})", "ansatz.kind"},
        {R"({"experiment": "variance", "n": 4, "ansatz": {"k": 5}})", "ansatz"},
        {R"({"experiment": "variance", "n": 6, "ansatz": {"kind": "qcnn"}})", "ansatz"},
        {R"({"experiment": "variance", "n": 4, "observable": "z:9"})", "observables"},
        {R"({"experiment": "variance", "n": 4, "samples": -3})", "samples"},
        {R"({"experiment": "variance", "n": 4, "theta_range": [1, 0]})", "theta_range"},
        {R"({"experiment": "variance", "n": 4, "input_state": "product:1"})", "input_state"},
        {R"({"experiment": "learn", "n": 4, "spsa": {"schedule": "fast"}})", "spsa.schedule"},
        {R"({"experiment": "pauli-dist", "n": 4, "queries": ["ZZ"]})", "queries[0]"},
        {R"({"experiment": "verify", "suite": "everything"})", "suite"},
        {R"({"experiment": "cknorm", "n": 4, "path": "gpu"})", "path"},
        {R"({"experiment": "nope", "n": 4})", "experiment"},
        {R"([1, 2])", "config"},
    };
    for (const auto &[text, field] : bad) {
        try {
            (void)cfg_from(text);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const ConfigError &e) {
            EXPECT_NE(std::string(e.what()).find(field), std::string::npos) << e.what();
        }
    }
    EXPECT_THROW(cfg_from(R"({"experiment": "variance", "n": 4})", ExperimentKind::Learn), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(config, verify_defaults) {
    const auto cfg = cfg_from(R"({"experiment": "verify", "suite": "norm", "verify": {"norm_pairs": 3}})");
    EXPECT_EQ(cfg.verify.suite, "norm");
    EXPECT_EQ(cfg.verify.norm_pairs, 3u);
    EXPECT_EQ(cfg.verify.norm_n, 4u);
    EXPECT_TRUE(cfg.n_values.empty());
}

TEST(config, shipped_configs_parse) {
    const std::filesystem::path dir = std::filesystem::path(VQALAB_SOURCE_DIR) / "configs";
    std::size_t count = 0;
    for (const auto &entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() != ".json") continue;
        EXPECT_NO_THROW(load_config(entry.path().string())) << entry.path();
        ++count;
    }
    EXPECT_GE(count, 6u);
}

TEST(csv, number_format) {
    EXPECT_EQ(format_double(0.0), "0");
    EXPECT_EQ(format_double(-0.0), "0");
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1.0 / 3.0), "0.3333333333333333");
    EXPECT_EQ(format_double(1e-20), "1e-20");
    EXPECT_EQ(format_double(2.5e6), "2500000");
    for (double x : {0.1, 1.0 / 7.0, 6.02e23, -3.25e-9}) EXPECT_EQ(std::stod(format_double(x)), x);
    EXPECT_EQ(format_double(std::nan("")), "nan");
}

TEST(csv, writing_and_escaping) {
    CsvTable t{{"a", "b"}, {}};
    t.add({"1", "x,y"});
    t.add({"say \"hi\"", ""});
    EXPECT_EQ(to_csv_string(t), "a,b\n1,\"x,y\"\n\"say \"\"hi\"\"\",\n");
    EXPECT_THROW(t.add({"1"}), std::logic_error);
    EXPECT_EQ(t.column("b"), 1u);
    EXPECT_THROW(t.column("c"), std::out_of_range);
}

TEST(runners, variance_zero_samples_is_header_only) {
    auto cfg = cfg_from(R"({"experiment": "variance", "n": 4, "samples": 0})");
    const auto t = run_variance(cfg);
    EXPECT_TRUE(t.rows.empty());
    EXPECT_EQ(to_csv_string(t), "experiment,n,k,observable,statistic,index,value,se,samples,seed\n");
}

TEST(runners, variance_bounds_at_n6) {
    auto cfg = cfg_from(R"({"experiment": "variance", "n": 6, "ansatz": {"k": 2, "subcircuit_depth": 4},
                            "observables": ["global0", "local-avg"], "samples": 2000, "seed": 3})");
    const auto t = run_variance(cfg);
    std::string se;
    const double vg = value_of(t, "6", "global0", "variance", &se);
    EXPECT_LE(vg, theorem1_bound(6, 2, 1.0) + 3.0 * std::stod(se));
    const double vl = value_of(t, "6", "local-avg", "variance", &se);
    EXPECT_GE(vl, theorem2_bound(6, 2, 0.0) - 3.0 * std::stod(se));
    // Direct variance against the per-qubit decomposition.
    std::string se_dec;
    const double dec = value_of(t, "6", "local-avg", "z_decomposition", &se_dec);
    EXPECT_LE(std::abs(vl - dec), 3.0 * std::hypot(std::stod(se), std::stod(se_dec)));
    // Every Monte-Carlo row carries a positive SE.
    for (const auto &r : t.rows) EXPECT_GT(std::stod(r[t.column("se")]), 0.0) << r[t.column("statistic")];
}

TEST(runners, deterministic_across_threads) {
    const std::string text = R"({"experiment": "variance", "n": [4, 5], "observables": ["global0", "local-avg"],
                                 "input_state": "random-product", "input_states": 2, "samples": 300, "seed": 9})";
    auto one = cfg_from(text), four = cfg_from(text);
    four.threads = 4;
    EXPECT_EQ(to_csv_string(run_variance(one)), to_csv_string(run_variance(four)));
    EXPECT_EQ(to_csv_string(run_variance(one)), to_csv_string(run_variance(one)));
    auto other = one;
    other.seed = 10;
    EXPECT_NE(to_csv_string(run_variance(one)), to_csv_string(run_variance(other)));
}

TEST(runners, grad_variance_rows) {
    auto cfg = cfg_from(R"({"experiment": "grad-variance", "n": 4, "observables": ["global0"],
                            "param_indices": 3, "samples": 500, "seed": 1})");
    const auto t = run_grad_variance(cfg);
    ASSERT_EQ(t.rows.size(), 3u * 2u + 2u);
    const std::size_t cs = t.column("statistic"), cv = t.column("value"), ce = t.column("se");
    for (const auto &r : t.rows) {
        if (r[cs] == "grad_mean") {
            EXPECT_LE(std::abs(std::stod(r[cv])), 3.0 * std::stod(r[ce]));
        }
        if (r[cs] == "grad_variance") {
            EXPECT_GT(std::stod(r[cv]), 0.0);
        }
    }
}

TEST(runners, learn_single_iteration) {
    auto cfg = cfg_from(R"({"experiment": "learn", "n": 4, "observables": ["local-avg"], "seeds": 3,
                            "spsa": {"iterations": 1}, "seed": 5})");
    const auto t = run_learn(cfg);
    EXPECT_EQ(t.rows.size(), 3u);
    for (const auto &r : t.rows) {
        const double infid = std::stod(r[t.column("infidelity")]);
        EXPECT_GE(infid, -1e-12);
        EXPECT_LE(infid, 1.0 + 1e-12);
    }
}

TEST(runners, learn_improves_local_objective) {
    auto cfg = cfg_from(R"({"experiment": "learn", "n": 4, "observables": ["local-avg"], "seeds": 3,
                            "spsa": {"iterations": 150}, "seed": 5})");
    EXPECT_LT(median_final_infidelity(run_learn(cfg), 4, "local-avg"), 0.2);
}

TEST(runners, cknorm_identity_ansatz_is_one) {
    auto cfg = cfg_from(R"({"experiment": "cknorm", "n": 5, "ansatz": {"k": 2, "subcircuit_depth": 0},
                            "observables": ["z:5"], "samples": 4})");
    const auto t = run_cknorm(cfg);
    std::string se;
    EXPECT_NEAR(value_of(t, "5", "z:5", "k_norm_mean", &se), 1.0, 1e-15);
    EXPECT_EQ(se, "0");
}

TEST(runners, cknorm_paths_agree) {
    const std::string text = R"({"experiment": "cknorm", "n": [4, 5], "observables": ["proj0:5"], "samples": 6,
                                 "seed": 2, "path": "%"})";
    auto cfg_text = [&](const std::string &path, const std::string &n, const std::string &obs) {
        std::string s = text;
        s.replace(s.find('%'), 1, path);
        s.replace(s.find("[4, 5]"), 6, n);
        s.replace(s.find("proj0:5"), 7, obs);
        return cfg_from(s);
    };
    for (const auto &[n, obs] : {std::pair<std::string, std::string>{"4", "proj0:4"}, {"5", "z:2"}}) {
        const auto mps = run_cknorm(cfg_text("mps", n, obs));
        const auto dense = run_cknorm(cfg_text("dense", n, obs));
        EXPECT_NEAR(value_of(mps, n, obs, "k_norm_mean"), value_of(dense, n, obs, "k_norm_mean"), 1e-9);
        EXPECT_LE(value_of(mps, n, obs, "max_bond"), std::pow(2.0, value_of(mps, n, obs, "cover_max")));
    }
}

TEST(runners, pauli_dist_exhaustive_normalization) {
    for (const char *obs : {"proj0:4", "global0"}) {
        auto cfg = cfg_from(std::string(R"({"experiment": "pauli-dist", "n": 4, "samples": 3, "queries": "all",
                                             "observables": [")") + obs + R"("]})");
        const auto res = run_pauli_dist(cfg);
        ASSERT_EQ(res.samples.rows.size(), 3u * 256u);
        std::vector<double> totals(3, 0.0);
        const std::size_t cid = res.samples.column("theta_sample_id"), cp = res.samples.column("probability");
        for (const auto &r : res.samples.rows) {
            const double p = std::stod(r[cp]);
            EXPECT_GE(p, 0.0);
            EXPECT_LE(p, 1.0 + 1e-12);
            totals[std::stoul(r[cid])] += p;
        }
        for (double s : totals) EXPECT_NEAR(s, 1.0, 1e-9) << obs;
        EXPECT_EQ(res.summary.rows.size(), 256u);
    }
}

TEST(runners, pauli_dist_default_queries) {
    auto cfg = cfg_from(R"({"experiment": "pauli-dist", "n": 6, "samples": 4, "observables": ["proj0:6"]})");
    const auto res = run_pauli_dist(cfg);
    EXPECT_EQ(res.samples.rows.size(), 24u);
    EXPECT_EQ(res.summary.rows.size(), 6u);
    EXPECT_EQ(res.summary.rows.front()[res.summary.column("pauli_string")], "ZIIIII");
}

TEST(verify, norm_suite_small) {
    auto cfg = cfg_from(R"({"experiment": "verify", "suite": "norm", "seed": 4,
                            "verify": {"norm_pairs": 3, "norm_samples": 20, "norm_n": 3}})");
    const auto res = run_verify(cfg);
    EXPECT_TRUE(res.pass);
    EXPECT_EQ(res.table.rows.size(), 3u * 3u + 1u);
}

TEST(verify, design_suite_flags_identity_family) {
    auto cfg = cfg_from(R"({"experiment": "verify", "suite": "design",
                            "verify": {"design_depth": 0, "design_trials": 200, "design_random_cases": 0}})");
    EXPECT_FALSE(run_verify(cfg).pass);
    cfg.verify.design_depth = 8;
    cfg.verify.design_trials = 4000;
    cfg.verify.design_random_cases = 2;
    EXPECT_TRUE(run_verify(cfg).pass);
}

TEST(verify, shallow_hea_second_moment_is_resolvable) {
    // Depth 2 is a 1-design but visibly not a 2-design.
    VerifySpec spec;
    spec.design_depth = 2;
    spec.design_trials = 4000;
    spec.design_random_cases = 0;
    const auto res = verify_design(spec, 3);
    const std::size_t cf = res.table.column("family"), cm = res.table.column("moment"), cp = res.table.column("pass");
    bool second_moment_flagged = false;
    for (const auto &r : res.table.rows) {
        if (r[cf] == "haar" || r[cm] == "1") {
            EXPECT_EQ(r[cp], "true") << r[cf] << " moment " << r[cm];
        } else if (r[cp] == "false") {
            second_moment_flagged = true;
        }
    }
    EXPECT_TRUE(second_moment_flagged);
}

TEST(verify, analytic_suite_small) {
    auto cfg = cfg_from(R"({"experiment": "verify", "suite": "analytic", "seed": 8,
                            "verify": {"samples": 20000, "tuples": 4}})");
    const auto res = run_verify(cfg);
    EXPECT_TRUE(res.pass) << to_csv_string(res.table);
    EXPECT_EQ(res.table.rows.size(), 3u * 4u + 4u);
}

TEST(verify, bit_tuples) {
    const auto t = random_bit_tuples(5, 10, 1);
    ASSERT_EQ(t.size(), 10u);
    EXPECT_EQ(to_string(t[0].p), "00000");
    EXPECT_EQ(to_string(t[0].s), "00000");
    EXPECT_EQ(to_string(random_bit_tuples(5, 10, 1)[7].q), to_string(t[7].q));
}

TEST(experiments, csv_headers_match_column_contract) {
    std::ifstream in(std::filesystem::path(VQALAB_SOURCE_DIR) / "schema" / "csv_columns.json");
    ASSERT_TRUE(in.good());
    const auto contract = nlohmann::json::parse(in)["tables"];
    auto columns = [&](const char *table) { return contract[table]["columns"].get<std::vector<std::string>>(); };
    for (const char *t : {"variance", "grad-variance", "cknorm"}) EXPECT_EQ(columns(t), result_header()) << t;
    EXPECT_EQ(columns("learn"), learn_header());

    auto cfg = cfg_from(R"({"experiment": "pauli-dist", "n": 3, "observables": ["proj0:3"], "samples": 2})");
    const auto pd = run_pauli_dist(cfg);
    EXPECT_EQ(columns("pauli-dist"), pd.samples.header);
    EXPECT_EQ(columns("pauli-dist-summary"), pd.summary.header);

    VerifySpec spec;
    spec.samples = 10;
    spec.tuples = 1;
    spec.design_trials = 10;
    spec.design_random_cases = 0;
    spec.norm_pairs = 1;
    spec.norm_samples = 2;
    spec.norm_n = 2;
    EXPECT_EQ(columns("verify-design"), verify_design(spec, 1).table.header);
    EXPECT_EQ(columns("verify-norm"), verify_norm(spec, 1).table.header);
    EXPECT_EQ(columns("verify-analytic"), verify_analytic(spec, 1, 1).table.header);
}
