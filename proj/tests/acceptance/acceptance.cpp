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

// Acceptance gate. Prints one PASS/FAIL line per criterion, writes the
// supporting CSVs to --workdir, and exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vqalab/analytic.hpp"
#include "vqalab/experiments/config.hpp"
#include "vqalab/experiments/csv.hpp"
#include "vqalab/experiments/runners.hpp"
#include "vqalab/experiments/verify.hpp"
#include "vqalab/haar.hpp"
#include "vqalab/parallel.hpp"
#include "vqalab/stats.hpp"
#include "vqalab/tensornet.hpp"

using namespace vqalab;
using namespace vqalab::experiments;

namespace {

// Pinned tolerances.
constexpr double kSigmas = 3.0;
constexpr double kMomentSeconds = 120.0;
constexpr double kAnalyticSeconds = 600.0;
constexpr double kSlopeLow = -2.6;
constexpr double kSlopeHigh = -1.4;
constexpr double kGradSlopeMax = -1.4;
constexpr double kLocalGradFloor = 1e-4;
constexpr double kFiniteDifferenceStep = 1e-5;
constexpr double kGradientTolerance = 1e-6;
constexpr double kTensorTolerance = 1e-9;
constexpr double kLocalRatioMin = 100.0;
constexpr double kGlobalRatioMax = 10.0;
constexpr double kNonDecayFactor = 4.0;
constexpr double kDecayFactor = 8.0;
constexpr double kLocalInfidelityMax = 0.2;
constexpr double kGlobalInfidelityMin = 0.5;

struct Context {
    std::filesystem::path workdir;
    std::size_t threads = 1;
    std::uint64_t seed = 20260101;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail << " [violated: " << what << "]";
        }
    }
};

std::pair<double, double> lookup(const CsvTable &t, std::size_t n, const std::string &obs, const std::string &stat) {
    const std::size_t cn = t.column("n"), co = t.column("observable"), cs = t.column("statistic"),
                      cv = t.column("value"), ce = t.column("se");
    for (const auto &r : t.rows) {
        if (r[cn] == format_count(n) && r[co] == obs && r[cs] == stat && r[t.column("index")].empty())
            return {std::stod(r[cv]), std::stod(r[ce])};
    }
    throw std::out_of_range("lookup: no row for n=" + std::to_string(n) + " " + obs + " " + stat);
}

std::string read_file(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig base_config(const Context &ctx, ExperimentKind kind) {
    ExperimentConfig cfg;
    cfg.experiment = kind;
    cfg.seed = ctx.seed;
    cfg.threads = ctx.threads;
    return cfg;
}

double log2_slope(const std::vector<std::size_t> &ns, const std::vector<double> &values) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        x.push_back(static_cast<double>(ns[i]));
        y.push_back(std::log2(values[i]));
    }
    return least_squares_slope(x, y);
}

// 1: Haar moments against closed forms.
Outcome ac1(const Context &ctx) {
    Outcome out;
    const auto t0 = Clock::now();
    CsvTable table{{"dim", "moment", "test_id", "analytic", "estimate", "se", "pass"}, {}};
    double worst = 0.0;
    for (std::size_t dim : {2u, 4u}) {
        const auto cases = standard_moment_cases(dim, 8, ctx.seed ^ dim);
        const std::function<ComplexMatrix(Rng &)> haar = [dim](Rng &rng) { return HaarSampler::sample_with(rng, dim); };
        for (int moment : {1, 2}) {
            const auto report = design_check("haar", dim, 0, haar, moment, cases, 200000, ctx.seed + dim, kSigmas);
            for (const auto &r : report.rows) {
                table.add({format_count(dim), std::to_string(moment), r.test_id, format_double(r.analytic),
                           format_double(r.estimate), format_double(r.se), r.pass ? "true" : "false"});
            }
            worst = std::max(worst, report.max_deviation_se());
            out.require(report.all_pass(), "dim " + std::to_string(dim) + " moment " + std::to_string(moment));
        }
    }
    const double secs = seconds_since(t0);
    write_csv_file((ctx.workdir / "ac01_moments.csv").string(), table);
    out.require(secs < kMomentSeconds, "runtime");
    out.detail << "max deviation " << worst << " SE over " << table.rows.size() << " rows; " << secs << " s";
    return out;
}

// 2: transfer-matrix moments against brute-force sampling.
Outcome ac2(const Context &ctx) {
    Outcome out;
    const auto t0 = Clock::now();
    VerifySpec spec;
    spec.samples = 1000000;
    spec.tuples = 20;
    const auto res = verify_analytic(spec, ctx.seed, ctx.threads);
    const double secs = seconds_since(t0);
    write_csv_file((ctx.workdir / "ac02_analytic.csv").string(), res.table);
    std::size_t failed = 0;
    for (const auto &r : res.table.rows) failed += r.back() != "true";
    out.require(res.pass, std::to_string(failed) + " rows outside 3 SE");
    out.require(secs < kAnalyticSeconds, "runtime");
    out.detail << res.table.rows.size() - failed << "/" << res.table.rows.size() << " rows within 3 SE; " << secs
               << " s";
    return out;
}

ExperimentConfig variance_sweep(const Context &ctx) {
    ExperimentConfig cfg = base_config(ctx, ExperimentKind::Variance);
    cfg.ansatz.k = {false, 2};
    cfg.ansatz.depth = SizeKnob{false, 4};
    cfg.n_values = {6, 8, 10};
    cfg.observables = {"global0", "local-avg"};
    cfg.samples = 2000;
    return cfg;
}

// 3 and 4 share one sweep.
std::pair<Outcome, Outcome> ac3_ac4(const Context &ctx) {
    Outcome o3, o4;
    const ExperimentConfig cfg = variance_sweep(ctx);
    const CsvTable t = run_variance(cfg);
    write_csv_file((ctx.workdir / "ac03_variance.csv").string(), t);

    std::vector<double> global;
    for (std::size_t n : cfg.n_values) {
        const auto [v, se] = lookup(t, n, "global0", "variance");
        global.push_back(v);
        const double bound = std::pow(4.0, -(static_cast<double>(n) - 3.0));
        o3.require(v <= bound + kSigmas * se, "n=" + std::to_string(n) + " above 4^-(n-3)");
        o3.detail << "n=" << n << " var " << v << " (bound " << bound << "); ";
    }
    const double slope = log2_slope(cfg.n_values, global);
    o3.require(slope >= kSlopeLow && slope <= kSlopeHigh, "slope");
    o3.detail << "slope " << slope;

    for (std::size_t n : cfg.n_values) {
        const auto [v, se] = lookup(t, n, "local-avg", "variance");
        const double floor = 1.0 / (36.0 * static_cast<double>(n));
        const double exact = local_average_variance(n, 2);
        o4.require(v >= floor - kSigmas * se, "n=" + std::to_string(n) + " below 1/(36n)");
        o4.require(std::abs(v - exact) <= kSigmas * se, "n=" + std::to_string(n) + " differs from exact");
        o4.detail << "n=" << n << " var " << v << " se " << se << " exact " << exact << " floor " << floor << "; ";
    }
    return {std::move(o3), std::move(o4)};
}

// 5: gradient variance contrast.
Outcome ac5(const Context &ctx) {
    Outcome out;
    ExperimentConfig cfg = base_config(ctx, ExperimentKind::GradVariance);
    cfg.n_values = {4, 6, 8};
    cfg.observables = {"global0", "local-avg"};
    cfg.samples = 2000;
    const CsvTable t = run_grad_variance(cfg);
    write_csv_file((ctx.workdir / "ac05_grad_variance.csv").string(), t);
    std::vector<double> global;
    for (std::size_t n : cfg.n_values) global.push_back(lookup(t, n, "global0", "grad_variance_avg").first);
    const double slope = log2_slope(cfg.n_values, global);
    out.require(slope <= kGradSlopeMax, "global slope");
    const double local8 = lookup(t, 8, "local-avg", "grad_variance_avg").first;
    out.require(local8 > kLocalGradFloor, "local variance at n=8");
    for (std::size_t n : cfg.n_values) {
        for (const std::string obs : {"global0", "local-avg"}) {
            const auto [m, se] = lookup(t, n, obs, "grad_mean_avg");
            out.require(std::abs(m) <= kSigmas * se, "mean gradient " + obs + " n=" + std::to_string(n));
        }
    }
    out.detail << "global slope " << slope << "; local grad variance at n=8 " << local8;
    return out;
}

// 6: parameter shift against central differences.
Outcome ac6(const Context &ctx) {
    Outcome out;
    const std::size_t n = 6;
    const Ansatz ansatz = Ansatz::mps(n, 2, 2);
    const std::vector<std::string> observables{"global0", "local-avg", "z:3", "proj0:6", "pauli:XZIYZX"};
    double worst = 0.0;
    for (std::size_t inst = 0; inst < 5; ++inst) {
        Rng rng = Rng::substream(ctx.seed, sample_key(6, inst, 0));
        const ParamVector theta = random_params(ansatz, rng, 0.0, 2.0 * std::numbers::pi);
        const Statevector sigma = random_hea_state(n, 2, rng);
        const Observable w = Observable::parse(observables[inst], n);
        for (std::size_t i = 0; i < theta.size(); ++i) {
            ParamVector tp = theta, tm = theta;
            tp[i] += kFiniteDifferenceStep;
            tm[i] -= kFiniteDifferenceStep;
            const double fd =
                (expectation(sigma, w, ansatz, tp) - expectation(sigma, w, ansatz, tm)) / (2.0 * kFiniteDifferenceStep);
            worst = std::max(worst, std::abs(fd - parameter_shift_grad(sigma, w, ansatz, theta, i)));
        }
    }
    out.require(worst < kGradientTolerance, "max error");
    out.detail << "max |shift - fd| " << worst << " over 5 instances x " << ansatz.num_params() << " parameters";
    return out;
}

// 7: tensor-train path against dense path.
Outcome ac7(const Context &ctx) {
    Outcome out;
    double coeff_err = 0.0, norm_err = 0.0, prob_err = 0.0;
    std::size_t worst_bond = 0, worst_cap = 0;
    for (std::size_t n : {4u, 5u, 6u}) {
        const Ansatz ansatz = Ansatz::mps(n, 2, 2);
        const Observable w = Observable::parse("proj0:n", n);
        for (std::size_t j = 0; j < 20; ++j) {
            Rng rng = Rng::substream(ctx.seed, sample_key(7, n, j));
            const ParamVector theta = random_params(ansatz, rng, 0.0, 2.0 * std::numbers::pi);
            const ConjugatedObservable mps(w, ansatz, theta, "mps");
            const ConjugatedObservable dense(w, ansatz, theta, "dense");
            const auto cm = mps.all_coefficients(), cd = dense.all_coefficients();
            for (std::size_t i = 0; i < cm.size(); ++i) coeff_err = std::max(coeff_err, std::abs(cm[i] - cd[i]));
            norm_err = std::max(norm_err, std::abs(k_norm(mps.moments()) - k_norm(dense.moments())));
            for (std::size_t q = 0; q < n; ++q) {
                const PauliString z = PauliString::single(n, q, PauliOp::Z);
                const double pm = std::pow(mps.coefficient(z), 2) / w.hilbert_schmidt_norm_squared();
                const double pd = std::pow(dense.coefficient(z), 2) / w.hilbert_schmidt_norm_squared();
                prob_err = std::max(prob_err, std::abs(pm - pd));
            }
            const auto &evo = mps.evolution();
            const std::size_t cap = std::size_t{1} << evo.cover_max;
            out.require(evo.max_bond <= cap, "bond cap");
            if (evo.max_bond > worst_bond) {
                worst_bond = evo.max_bond;
                worst_cap = cap;
            }
        }
    }
    out.require(coeff_err <= kTensorTolerance, "coefficients");
    out.require(norm_err <= kTensorTolerance, "K-norm");
    out.require(prob_err <= kTensorTolerance, "probabilities");
    out.detail << "max errors: coefficient " << coeff_err << ", K-norm " << norm_err << ", probability " << prob_err
               << "; max bond " << worst_bond << " (cap " << worst_cap << ")";
    return out;
}

double median_probability(const CsvTable &summary, std::size_t n, const std::string &pauli) {
    const std::size_t cn = summary.column("n"), cp = summary.column("pauli_string"), cm = summary.column("median");
    for (const auto &r : summary.rows)
        if (r[cn] == format_count(n) && r[cp] == pauli) return std::stod(r[cm]);
    throw std::out_of_range("median_probability: no row for " + pauli);
}

ExperimentConfig pauli_dist_config(const Context &ctx, std::size_t n, const std::string &obs) {
    ExperimentConfig cfg = base_config(ctx, ExperimentKind::PauliDist);
    cfg.n_values = {n};
    cfg.observables = {obs};
    cfg.samples = 10;
    return cfg;
}

// 8: weight concentration near the last qubit.
Outcome ac8(const Context &ctx) {
    Outcome out;
    auto ratio = [&](std::size_t n, const std::string &obs, const std::string &stem) {
        const auto res = run_pauli_dist(pauli_dist_config(ctx, n, obs));
        write_csv_file((ctx.workdir / (stem + ".csv")).string(), res.samples);
        write_csv_file((ctx.workdir / (stem + ".summary.csv")).string(), res.summary);
        const double last = median_probability(res.summary, n, PauliString::single(n, n - 1, PauliOp::Z).str());
        const double first = median_probability(res.summary, n, PauliString::single(n, 0, PauliOp::Z).str());
        return last / first;
    };
    const double local = ratio(12, "proj0:12", "ac08_pauli_dist_local");
    const double global = ratio(10, "global0", "ac08_pauli_dist_global");
    out.require(local > kLocalRatioMin, "local ratio");
    out.require(global < kGlobalRatioMax, "global ratio");
    out.detail << "median P(Z_n)/P(Z_1): proj0:12 " << local << ", global0 (n=10) " << global;
    return out;
}

ExperimentConfig cknorm_mps_config(const Context &ctx) {
    ExperimentConfig cfg = base_config(ctx, ExperimentKind::CkNorm);
    cfg.n_values = {4, 5, 6, 7, 8, 9, 10};
    cfg.observables = {"proj0:n", "global0"};
    cfg.samples = 50;
    return cfg;
}

double drop_factor(const CsvTable &t, const std::vector<std::size_t> &ns, const std::string &obs_first,
                   const std::string &obs_last) {
    return lookup(t, ns.front(), obs_first, "k_norm_mean").first / lookup(t, ns.back(), obs_last, "k_norm_mean").first;
}

// 9: C-K norm trends.
Outcome ac9(const Context &ctx) {
    Outcome out;
    const ExperimentConfig mps = cknorm_mps_config(ctx);
    const CsvTable t = run_cknorm(mps);
    write_csv_file((ctx.workdir / "ac09_cknorm_mps.csv").string(), t);
    const std::size_t lo = mps.n_values.front(), hi = mps.n_values.back();
    const double local = drop_factor(t, mps.n_values, "proj0:" + std::to_string(lo), "proj0:" + std::to_string(hi));
    const double global = drop_factor(t, mps.n_values, "global0", "global0");
    out.require(local < kNonDecayFactor, "mps local drop");
    out.require(global > kDecayFactor, "mps global drop");

    ExperimentConfig hea = base_config(ctx, ExperimentKind::CkNorm);
    hea.ansatz.kind = AnsatzKind::Hea;
    hea.n_values = mps.n_values;
    hea.observables = {"proj0:n"};
    hea.samples = 50;
    const CsvTable th = run_cknorm(hea);
    write_csv_file((ctx.workdir / "ac09_cknorm_hea.csv").string(), th);
    const double hea_drop = drop_factor(th, hea.n_values, "proj0:" + std::to_string(lo), "proj0:" + std::to_string(hi));
    out.require(hea_drop < kNonDecayFactor, "hea local drop");

    ExperimentConfig qcnn = base_config(ctx, ExperimentKind::CkNorm);
    qcnn.ansatz.kind = AnsatzKind::Qcnn;
    qcnn.n_values = {4, 8};
    qcnn.observables = {"z:n"};
    qcnn.samples = 50;
    const CsvTable tq = run_cknorm(qcnn);
    write_csv_file((ctx.workdir / "ac09_cknorm_qcnn.csv").string(), tq);
    const double qcnn_drop = drop_factor(tq, qcnn.n_values, "z:4", "z:8");
    out.require(qcnn_drop < kNonDecayFactor, "qcnn local drop");

    out.detail << "mean K-norm drop over n=" << lo << ".." << hi << ": mps proj0:n " << local << ", mps global0 "
               << global << ", hea proj0:n " << hea_drop << ", qcnn z:n (n=4..8) " << qcnn_drop;
    return out;
}

ExperimentConfig learn_config(const Context &ctx, std::size_t n, std::size_t k, const std::string &obs) {
    ExperimentConfig cfg = base_config(ctx, ExperimentKind::Learn);
    cfg.n_values = {n};
    cfg.ansatz.k = {false, k};
    cfg.observables = {obs};
    cfg.seeds = 5;
    cfg.spsa.a = 0.4;
    cfg.spsa.c = 0.4;
    cfg.spsa.iterations = 300;
    cfg.spsa.init_low = 0.0;
    cfg.spsa.init_high = std::numbers::pi / 2.0;
    return cfg;
}

// 10: learning contrast and width sweep.
Outcome ac10(const Context &ctx) {
    Outcome out;
    auto run = [&](std::size_t n, std::size_t k, const std::string &obs, const std::string &stem) {
        const CsvTable t = run_learn(learn_config(ctx, n, k, obs));
        write_csv_file((ctx.workdir / (stem + ".csv")).string(), t);
        return median_final_infidelity(t, n, obs);
    };
    const double local = run(8, 2, "local-avg", "ac10_learn_local_n8");
    const double global = run(12, 2, "global0", "ac10_learn_global_n12");
    out.require(local < kLocalInfidelityMax, "local median");
    out.require(global > kGlobalInfidelityMin, "global median");
    out.detail << "median final infidelity: local n=8 " << local << ", global n=12 " << global << "; width sweep n=10:";
    double prev = -1.0;
    for (std::size_t k : {2u, 3u, 4u}) {
        const double m = run(10, k, "local-avg", "ac10_learn_width_k" + std::to_string(k));
        out.require(m >= prev, "non-decreasing at k=" + std::to_string(k));
        out.detail << " k=" << k << " " << m;
        prev = m;
    }
    return out;
}

// 11: norm axioms.
Outcome ac11(const Context &ctx) {
    Outcome out;
    VerifySpec spec;
    spec.norm_pairs = 50;
    spec.norm_n = 4;
    const auto res = verify_norm(spec, ctx.seed);
    write_csv_file((ctx.workdir / "ac11_norm.csv").string(), res.table);
    std::size_t failed = 0;
    for (const auto &r : res.table.rows) failed += r.back() != "true";
    out.require(res.pass, std::to_string(failed) + " violations");
    out.detail << res.table.rows.size() - failed << "/" << res.table.rows.size() << " checks hold";
    return out;
}

// 12: reruns reproduce earlier CSVs byte for byte, at several thread counts.
Outcome ac12(const Context &ctx) {
    Outcome out;
    std::size_t compared = 0;
    auto same = [&](const std::string &file, const CsvTable &t) {
        ++compared;
        out.require(read_file(ctx.workdir / file) == to_csv_string(t), file);
    };
    for (std::size_t threads : {std::size_t{1}, std::size_t{3}}) {
        Context c = ctx;
        c.threads = threads;
        const auto local = run_pauli_dist(pauli_dist_config(c, 12, "proj0:12"));
        same("ac08_pauli_dist_local.csv", local.samples);
        same("ac08_pauli_dist_local.summary.csv", local.summary);
        same("ac09_cknorm_mps.csv", run_cknorm(cknorm_mps_config(c)));
        same("ac10_learn_local_n8.csv", run_learn(learn_config(c, 8, 2, "local-avg")));
        VerifySpec spec;
        same("ac11_norm.csv", verify_norm(spec, c.seed).table);
        ExperimentConfig v = variance_sweep(c);
        v.n_values = {6};
        v.samples = 500;
        const CsvTable first = run_variance(v);
        const auto path = ctx.workdir / ("ac12_variance_t" + std::to_string(threads) + ".csv");
        write_csv_file(path.string(), first);
        ++compared;
        out.require(read_file(path) == read_file(ctx.workdir / "ac12_variance_t1.csv"), "variance across threads");
    }
    out.detail << compared << " CSV comparisons byte-identical across reruns with 1 and 3 threads";
    return out;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"vqalab acceptance gate"};
    Context ctx;
    std::string workdir = "acceptance_out";
    std::vector<int> only;
    app.add_option("--workdir", workdir, "directory for CSV outputs");
    app.add_option("--threads", ctx.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--only", only, "run only these criteria (AC12 needs 8-11)");
    CLI11_PARSE(app, argc, argv);
    if (!app.count("--threads")) ctx.threads = default_thread_count();
    ctx.workdir = workdir;
    std::filesystem::create_directories(ctx.workdir);

    bool all = true;
    auto wanted = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };
    auto report = [&](int id, const std::string &title, Outcome o, double secs) {
        all = all && o.pass;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << "AC" << id << " " << title << ": " << o.detail.str() << " ("
                  << secs << " s)" << std::endl;
    };
    auto timed = [&](int id, const std::string &title, const std::function<Outcome()> &fn) {
        if (!wanted(id)) return;
        const auto t0 = Clock::now();
        try {
            Outcome o = fn();
            report(id, title, std::move(o), seconds_since(t0));
        } catch (const std::exception &e) {
            Outcome o;
            o.require(false, std::string("exception: ") + e.what());
            report(id, title, std::move(o), seconds_since(t0));
        }
    };

    timed(1, "Haar moment oracles", [&] { return ac1(ctx); });
    timed(2, "transfer-matrix moments vs sampling", [&] { return ac2(ctx); });
    if (wanted(3) || wanted(4)) {
        const auto t0 = Clock::now();
        try {
            auto [o3, o4] = ac3_ac4(ctx);
            const double secs = seconds_since(t0);
            report(3, "global variance decay", std::move(o3), secs);
            report(4, "local variance floor and exact value", std::move(o4), secs);
        } catch (const std::exception &e) {
            for (int id : {3, 4}) {
                Outcome o;
                o.require(false, std::string("exception: ") + e.what());
                report(id, "variance sweep", std::move(o), seconds_since(t0));
            }
        }
    }
    timed(5, "gradient variance contrast", [&] { return ac5(ctx); });
    timed(6, "parameter-shift gradients", [&] { return ac6(ctx); });
    timed(7, "tensor-train vs dense", [&] { return ac7(ctx); });
    timed(8, "Pauli weight near the last qubit", [&] { return ac8(ctx); });
    timed(9, "C-K norm trends", [&] { return ac9(ctx); });
    timed(10, "learning contrast", [&] { return ac10(ctx); });
    timed(11, "norm axioms", [&] { return ac11(ctx); });
    timed(12, "determinism", [&] { return ac12(ctx); });

    std::cout << (all ? "acceptance: all criteria pass" : "acceptance: FAILED") << std::endl;
    return all ? 0 : 1;
}
