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

#ifndef VQALAB_EXPERIMENTS_VERIFY_HPP
#define VQALAB_EXPERIMENTS_VERIFY_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "vqalab/analytic.hpp"
#include "vqalab/circuits.hpp"
#include "vqalab/experiments/config.hpp"
#include "vqalab/experiments/csv.hpp"
#include "vqalab/haar.hpp"
#include "vqalab/observables.hpp"
#include "vqalab/parallel.hpp"
#include "vqalab/pauli.hpp"
#include "vqalab/stats.hpp"

namespace vqalab::experiments {

struct VerifyResult {
    CsvTable table;
    bool pass = true;
};

/// Tuple of basis strings for the global second-moment oracle.
struct BitTuple {
    Bitstring p, q, r, s;
};

/// Random tuples mixing per-bit "trace" (q=p, s=r), "swap" (q=r, s=p)
/// and unconstrained patterns, so that most tuples have nonzero moments.
/// The all-zero tuple comes first.
inline std::vector<BitTuple> random_bit_tuples(std::size_t n, std::size_t count, std::uint64_t seed) {
    std::vector<BitTuple> out;
    if (count == 0) return out;
    out.push_back({Bitstring(n, 0), Bitstring(n, 0), Bitstring(n, 0), Bitstring(n, 0)});
    Rng rng(seed);
    while (out.size() < count) {
        BitTuple t{Bitstring(n), Bitstring(n), Bitstring(n), Bitstring(n)};
        for (std::size_t j = 0; j < n; ++j) {
            const auto pj = static_cast<std::uint8_t>(rng.below(2));
            const auto rj = static_cast<std::uint8_t>(rng.below(2));
            const double u = rng.uniform();
            t.p[j] = pj;
            t.r[j] = rj;
            if (u < 0.45) {
                t.q[j] = pj;
                t.s[j] = rj;
            } else if (u < 0.9) {
                t.q[j] = rj;
                t.s[j] = pj;
            } else {
                t.q[j] = static_cast<std::uint8_t>(rng.below(2));
                t.s[j] = static_cast<std::uint8_t>(rng.below(2));
            }
        }
        out.push_back(std::move(t));
    }
    return out;
}

/// Draws the T Haar subcircuits of an MPS ansatz; index 0 acts first.
inline std::vector<ComplexMatrix> sample_mps_haar(std::size_t n, std::size_t k, Rng &rng) {
    std::vector<ComplexMatrix> us;
    for (std::size_t t = 0; t + k <= n; ++t) us.push_back(HaarSampler::sample_with(rng, std::size_t{1} << k));
    return us;
}

/// Monte-Carlo estimates of mu_global for several tuples sharing samples.
inline std::vector<Summary> mc_mu_global(std::size_t n, std::size_t k, const std::vector<BitTuple> &tuples,
                                         std::size_t samples, std::uint64_t seed, std::size_t threads) {
    std::vector<std::vector<double>> vals(tuples.size(), std::vector<double>(samples));
    std::vector<std::uint64_t> idx;
    for (const auto &t : tuples) {
        for (const auto *b : {&t.p, &t.q, &t.r, &t.s}) idx.push_back(basis_index(*b));
    }
    parallel_for(samples, threads, [&](std::size_t j) {
        Rng rng = Rng::substream(seed, sample_key(n, k, j));
        const auto us = sample_mps_haar(n, k, rng);
        // v = C^dag |0>, so <0|C|x> = conj(v[x]).
        Statevector v = Statevector::zero(n);
        for (std::size_t t = us.size(); t-- > 0;) v.apply_window(t, us[t].adjoint());
        for (std::size_t i = 0; i < tuples.size(); ++i) {
            const Complex rp = std::conj(v[idx[4 * i]]), rq = std::conj(v[idx[4 * i + 1]]);
            const Complex rr = std::conj(v[idx[4 * i + 2]]), rs = std::conj(v[idx[4 * i + 3]]);
            vals[i][j] = (rp * std::conj(rq) * rr * std::conj(rs)).real();
        }
    });
    std::vector<Summary> out;
    for (auto &v : vals) out.push_back(summarize(v));
    return out;
}

/// Monte-Carlo estimate of E[<Z_qubit>^2] on |0...0> with Haar subcircuits.
inline Summary mc_mu_local(std::size_t n, std::size_t k, std::size_t qubit, std::size_t samples, std::uint64_t seed,
                           std::size_t threads) {
    std::vector<double> vals(samples);
    parallel_for(samples, threads, [&](std::size_t j) {
        Rng rng = Rng::substream(seed, sample_key(n, k, j));
        const auto us = sample_mps_haar(n, k, rng);
        Statevector psi = Statevector::zero(n);
        for (std::size_t t = 0; t < us.size(); ++t) psi.apply_window(t, us[t]);
        const double z = Observable::z(n, qubit).expectation_on(psi);
        vals[j] = z * z;
    });
    return summarize(vals);
}

/// Closed-form mu values against brute-force Haar Monte-Carlo.
inline VerifyResult verify_analytic(const VerifySpec &spec, std::uint64_t seed, std::size_t threads) {
    VerifyResult res{{{"test_id", "n", "k", "exact", "mc_estimate", "se", "pass"}, {}}, true};
    auto add = [&](const std::string &id, std::size_t n, std::size_t k, double exact, const Summary &s) {
        const double diff = std::abs(s.mean - exact);
        const bool ok = s.se_mean > 0.0 ? diff <= 3.0 * s.se_mean : diff < 1e-12;
        res.pass = res.pass && ok;
        res.table.add({id, format_count(n), format_count(k), format_double(exact), format_double(s.mean),
                       format_double(s.se_mean), ok ? "true" : "false"});
    };
    for (std::size_t n : {3u, 4u, 5u}) {
        const std::size_t k = 2;
        const auto tuples = random_bit_tuples(n, spec.tuples, seed ^ (0x7u << 8) ^ n);
        const auto est = mc_mu_global(n, k, tuples, spec.samples, seed, threads);
        for (std::size_t i = 0; i < tuples.size(); ++i) {
            const auto &t = tuples[i];
            const std::string id = "mu_global/" + vqalab::to_string(t.p) + "," + vqalab::to_string(t.q) + "," +
                                   vqalab::to_string(t.r) + "," + vqalab::to_string(t.s);
            add(id, n, k, mu_global(n, k, t.p, t.q, t.r, t.s), est[i]);
        }
    }
    for (auto [n, k] : {std::pair<std::size_t, std::size_t>{4, 2}, {5, 2}, {6, 3}}) {
        add("mu_local_zero", n, k, mu_local_zero(n, k), mc_mu_local(n, k, n - 1, spec.samples, seed, threads));
    }
    // Any qubit of the last window gives the same value.
    add("mu_local_zero/qubit4", 5, 2, mu_local_zero(5, 2), mc_mu_local(5, 2, 3, spec.samples, seed ^ 0x51u, threads));
    return res;
}

/// Design moments of the HEA subcircuit and of exact Haar sampling.
inline VerifyResult verify_design(const VerifySpec &spec, std::uint64_t seed) {
    VerifyResult res{{{"family", "width", "depth", "moment", "test_id", "analytic", "estimate", "se", "pass"}, {}}, true};
    const std::size_t w = spec.design_width;
    const std::size_t dim = std::size_t{1} << w;
    const auto cases = standard_moment_cases(dim, spec.design_random_cases, seed ^ 0xcafeu);
    const Ansatz hea = Ansatz::hea(w, spec.design_depth);
    const std::function<ComplexMatrix(Rng &)> hea_family = [&](Rng &rng) {
        const ParamVector theta = random_params(hea, rng, 0.0, 2.0 * std::numbers::pi);
        return dense_unitary(hea, theta);
    };
    const std::function<ComplexMatrix(Rng &)> haar_family = [&](Rng &rng) {
        return HaarSampler::sample_with(rng, dim);
    };
    for (int moment : {1, 2}) {
        for (auto *fam : {&haar_family, &hea_family}) {
            const bool is_hea = fam == &hea_family;
            const auto report = design_check(is_hea ? "hea" : "haar", w, is_hea ? spec.design_depth : 0, *fam,
                                             moment, cases, spec.design_trials, seed ^ (is_hea ? 0x11u : 0x22u));
            for (const auto &r : report.rows) {
                res.pass = res.pass && r.pass;
                res.table.add({r.family, format_count(r.width), format_count(r.depth), std::to_string(r.moment),
                               r.test_id, format_double(r.analytic), format_double(r.estimate), format_double(r.se),
                               r.pass ? "true" : "false"});
            }
        }
    }
    return res;
}

/// Norm axioms of the averaged unnormalized kernel (sum_K tr(K W_{C^dag})^4)^{1/4}.
inline VerifyResult verify_norm(const VerifySpec &spec, std::uint64_t seed) {
    VerifyResult res{{{"test_id", "check", "lhs", "rhs", "se", "pass"}, {}}, true};
    const std::size_t n = spec.norm_n;
    const std::size_t dim = std::size_t{1} << n;
    const Ansatz ansatz = Ansatz::mps(n, 2, 2);
    auto kernel = [](const ComplexMatrix &w) { return k_norm_kernel(coefficient_moments(pauli_coefficients(w))); };
    auto add = [&](const std::string &id, const std::string &check, double lhs, double rhs, double se, bool ok) {
        res.pass = res.pass && ok;
        res.table.add({id, check, format_double(lhs), format_double(rhs), format_double(se), ok ? "true" : "false"});
    };
    for (std::size_t pair = 0; pair < spec.norm_pairs; ++pair) {
        Rng rng = Rng::substream(seed, sample_key(0x4e, pair, 0));
        const ComplexMatrix w1 = random_hermitian(rng, dim);
        const ComplexMatrix w2 = random_hermitian(rng, dim);
        const double c = rng.uniform(-3.0, 3.0);
        std::vector<double> n1(spec.norm_samples), n2(spec.norm_samples), n12(spec.norm_samples),
            nc(spec.norm_samples), tri(spec.norm_samples), hom(spec.norm_samples);
        for (std::size_t j = 0; j < spec.norm_samples; ++j) {
            Rng trng = Rng::substream(seed, sample_key(0x4e, pair, j + 1));
            const ParamVector theta = random_params(ansatz, trng, 0.0, 2.0 * std::numbers::pi);
            const ComplexMatrix u = dense_unitary(ansatz, theta);
            const ComplexMatrix ud = u.adjoint();
            n1[j] = kernel(ud * w1 * u);
            n2[j] = kernel(ud * w2 * u);
            n12[j] = kernel(ud * (w1 + w2) * u);
            nc[j] = kernel(ud * (c * w1) * u);
            tri[j] = n12[j] - n1[j] - n2[j];
            hom[j] = nc[j] - std::abs(c) * n1[j];
        }
        const std::string id = "pair-" + std::to_string(pair);
        const Summary s1 = summarize(n1), s2 = summarize(n2), s12 = summarize(n12), sc = summarize(nc);
        const Summary st = summarize(tri), sh = summarize(hom);
        add(id, "triangle", s12.mean, s1.mean + s2.mean, st.se_mean, st.mean <= 3.0 * st.se_mean + 1e-12);
        add(id, "homogeneity", sc.mean, std::abs(c) * s1.mean, sh.se_mean,
            std::abs(sh.mean) <= sh.se_mean + 1e-12 * std::max(1.0, s1.mean));
        bool positive = true;
        for (double x : n1) positive = positive && x > 0.0;
        add(id, "positivity", s1.mean, 0.0, s1.se_mean, positive);
    }
    const double zero = kernel(ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
    add("zero", "positivity", zero, 0.0, 0.0, zero == 0.0);
    return res;
}

inline VerifyResult run_verify(const ExperimentConfig &cfg) {
    if (cfg.verify.suite == "analytic") return verify_analytic(cfg.verify, cfg.seed, cfg.threads);
    if (cfg.verify.suite == "design") return verify_design(cfg.verify, cfg.seed);
    if (cfg.verify.suite == "norm") return verify_norm(cfg.verify, cfg.seed);
    throw ConfigError("suite: unknown suite '" + cfg.verify.suite + "'");
}

}  // namespace vqalab::experiments

#endif  // VQALAB_EXPERIMENTS_VERIFY_HPP
