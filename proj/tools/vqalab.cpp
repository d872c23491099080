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

// Command-line front end:
//   vqalab <subcommand> --config <path.json> --out <path.csv> [--threads N] [--seed S]
// Exit codes: 0 success, 1 configuration error, 2 verify-suite failure.

#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "vqalab/experiments/config.hpp"
#include "vqalab/experiments/csv.hpp"
#include "vqalab/experiments/runners.hpp"
#include "vqalab/experiments/verify.hpp"

namespace ex = vqalab::experiments;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::size_t> threads;
    std::optional<std::uint64_t> seed;
    std::string suite;
};

std::string summary_path(const std::string &out) {
    std::filesystem::path p(out);
    return (p.parent_path() / (p.stem().string() + ".summary" + p.extension().string())).string();
}

int run(ex::ExperimentKind kind, const Options &opt) {
    ex::ExperimentConfig cfg;
    try {
        if (opt.config.empty()) {
            if (kind != ex::ExperimentKind::Verify) throw ex::ConfigError("--config: required");
            cfg = ex::parse_config(nlohmann::json::object(), kind);
        } else {
            cfg = ex::load_config(opt.config, kind);
        }
        if (opt.threads) cfg.threads = *opt.threads;
        if (opt.seed) cfg.seed = *opt.seed;
        if (!opt.suite.empty()) {
            cfg.verify.suite = opt.suite;
            if (opt.suite != "analytic" && opt.suite != "design" && opt.suite != "norm")
                throw ex::ConfigError("--suite: expected analytic, design, or norm");
        }
    } catch (const ex::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    switch (kind) {
        case ex::ExperimentKind::Variance:
            ex::write_csv_file(opt.out, ex::run_variance(cfg));
            return 0;
        case ex::ExperimentKind::GradVariance:
            ex::write_csv_file(opt.out, ex::run_grad_variance(cfg));
            return 0;
        case ex::ExperimentKind::Learn:
            ex::write_csv_file(opt.out, ex::run_learn(cfg));
            return 0;
        case ex::ExperimentKind::CkNorm:
            ex::write_csv_file(opt.out, ex::run_cknorm(cfg));
            return 0;
        case ex::ExperimentKind::PauliDist: {
            const auto res = ex::run_pauli_dist(cfg);
            ex::write_csv_file(opt.out, res.samples);
            ex::write_csv_file(summary_path(opt.out), res.summary);
            return 0;
        }
        case ex::ExperimentKind::Verify: {
            const auto res = ex::run_verify(cfg);
            ex::write_csv_file(opt.out, res.table);
            std::size_t failed = 0;
            const std::size_t col = res.table.column("pass");
            for (const auto &r : res.table.rows) failed += r[col] != "true";
            std::cout << "verify " << cfg.verify.suite << ": " << res.table.rows.size() - failed << "/"
                      << res.table.rows.size() << " rows pass\n";
            return res.pass ? 0 : 2;
        }
    }
    return 1;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"vqalab: MPS-ansatz trainability laboratory"};
    app.require_subcommand(1);
    Options opt;
    std::optional<ex::ExperimentKind> chosen;

    for (auto kind : {ex::ExperimentKind::Variance, ex::ExperimentKind::GradVariance, ex::ExperimentKind::Learn,
                      ex::ExperimentKind::CkNorm, ex::ExperimentKind::PauliDist, ex::ExperimentKind::Verify}) {
        auto *sub = app.add_subcommand(ex::to_string(kind));
        auto *cfg_opt = sub->add_option("--config", opt.config, "experiment config (JSON)");
        if (kind != ex::ExperimentKind::Verify) cfg_opt->required();
        sub->add_option("--out", opt.out, "output CSV path")->required();
        sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--seed", opt.seed, "base seed (overrides config)");
        if (kind == ex::ExperimentKind::Verify) sub->add_option("--suite", opt.suite, "analytic | design | norm");
        sub->callback([&chosen, kind] { chosen = kind; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    try {
        return run(*chosen, opt);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
