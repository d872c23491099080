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

#ifndef VQALAB_EXPERIMENTS_RUNNERS_HPP
#define VQALAB_EXPERIMENTS_RUNNERS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vqalab/analytic.hpp"
#include "vqalab/circuits.hpp"
#include "vqalab/experiments/config.hpp"
#include "vqalab/experiments/csv.hpp"
#include "vqalab/observables.hpp"
#include "vqalab/parallel.hpp"
#include "vqalab/pauli.hpp"
#include "vqalab/stats.hpp"
#include "vqalab/tensornet.hpp"

namespace vqalab::experiments {

/// Column layout shared by the statistic-producing experiments.
inline std::vector<std::string> result_header() {
    return {"experiment", "n", "k", "observable", "statistic", "index", "value", "se", "samples", "seed"};
}

struct ResultRecord {
    std::string experiment;
    std::size_t n = 0;
    std::size_t k = 0;
    std::string observable;
    std::string statistic;
    std::string index;  // empty when not per-parameter
    double value = 0.0;
    double se = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;

    std::vector<std::string> fields() const {
        return {experiment, format_count(n), format_count(k), observable, statistic, index,
                format_double(value), format_double(se), format_count(samples), format_count(seed)};
    }
};

namespace detail {

// Substream layout: sample_key(n, slot, sample) where slot separates
// input states, observables and seeds inside one experiment.
inline constexpr std::uint64_t kInputStateSalt = 0x5eedULL << 20;

inline Statevector make_input_state(const InputStateSpec &spec, std::size_t n, std::size_t state_index,
                                    std::uint64_t seed) {
    switch (spec.kind) {
        case InputStateSpec::Kind::Zero:
            return Statevector::zero(n);
        case InputStateSpec::Kind::Product:
            return product_state(std::vector<std::pair<double, double>>(n, {spec.polar, spec.azimuth}));
        case InputStateSpec::Kind::RandomProduct: {
            Rng rng = Rng::substream(seed, sample_key(n, kInputStateSalt + state_index, 0));
            std::vector<std::pair<double, double>> angles(n);
            for (auto &a : angles) a = {std::acos(1.0 - 2.0 * rng.uniform()), 2.0 * std::numbers::pi * rng.uniform()};
            return product_state(angles);
        }
        case InputStateSpec::Kind::RandomHea: {
            Rng rng = Rng::substream(seed, sample_key(n, kInputStateSalt + state_index, 0));
            return random_hea_state(n, spec.hea_depth.resolve(n), rng);
        }
    }
    throw std::logic_error("unreachable");
}

/// Averages per-input-state summaries of one statistic.
struct Pooled {
    double value = 0.0;
    double se = 0.0;
};

inline Pooled pool(const std::vector<std::pair<double, double>> &per_state) {
    Pooled p;
    double var = 0.0;
    for (auto [v, se] : per_state) {
        p.value += v;
        var += se * se;
    }
    const double m = static_cast<double>(per_state.size());
    p.value /= m;
    p.se = std::sqrt(var) / m;
    return p;
}

inline std::vector<std::size_t> selected_indices(std::size_t total, const std::optional<std::size_t> &count) {
    std::vector<std::size_t> idx;
    if (!count || *count >= total) {
        for (std::size_t i = 0; i < total; ++i) idx.push_back(i);
        return idx;
    }
    for (std::size_t j = 0; j < *count; ++j) idx.push_back(j * total / *count);
    return idx;
}

}  // namespace detail

/// Monte-Carlo mean, second moment and variance of f over uniform theta.
/// For local-avg, also the per-qubit decomposition (1/4n^2) sum_i <Z_i>^2.
inline CsvTable run_variance(const ExperimentConfig &cfg) {
    CsvTable table{result_header(), {}};
    for (std::size_t n : cfg.n_values) {
        const Ansatz ansatz = cfg.ansatz.build(n);
        std::vector<Observable> obs;
        for (const auto &s : cfg.observables) obs.push_back(Observable::parse(s, n));
        const std::size_t samples = cfg.samples;
        // stats[o][statistic] -> per-state (value, se)
        std::vector<std::vector<std::vector<std::pair<double, double>>>> stats(
            obs.size(), std::vector<std::vector<std::pair<double, double>>>(4));
        for (std::size_t s = 0; s < cfg.input_states; ++s) {
            const Statevector sigma = detail::make_input_state(cfg.input_state, n, s, cfg.seed);
            std::vector<std::vector<double>> values(obs.size(), std::vector<double>(samples));
            std::vector<std::vector<double>> decomposition(obs.size(), std::vector<double>(samples));
            parallel_for(samples, cfg.threads, [&](std::size_t j) {
                Rng rng = Rng::substream(cfg.seed, sample_key(n, s, j));
                const ParamVector theta = random_params(ansatz, rng, cfg.theta_low, cfg.theta_high);
                const Statevector psi = apply(ansatz, theta, sigma);
                for (std::size_t o = 0; o < obs.size(); ++o) {
                    values[o][j] = obs[o].expectation_on(psi);
                    if (obs[o].kind() == Observable::Kind::LocalAverage) {
                        double acc = 0.0;
                        for (std::size_t q = 0; q < n; ++q) {
                            const double z = Observable::z(n, q).expectation_on(psi);
                            acc += z * z;
                        }
                        decomposition[o][j] = acc / (4.0 * static_cast<double>(n * n));
                    }
                }
            });
            for (std::size_t o = 0; o < obs.size(); ++o) {
                const Summary sm = summarize(values[o]);
                stats[o][0].push_back({sm.mean, sm.se_mean});
                stats[o][1].push_back({sm.second_moment, sm.se_second_moment});
                stats[o][2].push_back({sm.variance, sm.se_variance});
                const Summary sd = summarize(decomposition[o]);
                stats[o][3].push_back({sd.mean, sd.se_mean});
            }
        }
        if (samples == 0) continue;
        static const char *names[] = {"mean", "second_moment", "variance", "z_decomposition"};
        for (std::size_t o = 0; o < obs.size(); ++o) {
            const std::size_t last = obs[o].kind() == Observable::Kind::LocalAverage ? 4 : 3;
            for (std::size_t st = 0; st < last; ++st) {
                const auto p = detail::pool(stats[o][st]);
                table.add(ResultRecord{"variance", n, ansatz.width(), obs[o].spec(), names[st], "", p.value, p.se,
                                       samples * cfg.input_states, cfg.seed}
                              .fields());
            }
        }
    }
    return table;
}

/// Per-parameter mean and variance of parameter-shift derivatives, plus
/// parameter-averaged aggregates.
inline CsvTable run_grad_variance(const ExperimentConfig &cfg) {
    CsvTable table{result_header(), {}};
    for (std::size_t n : cfg.n_values) {
        const Ansatz ansatz = cfg.ansatz.build(n);
        const auto indices = detail::selected_indices(ansatz.num_params(), cfg.param_indices);
        for (std::size_t o = 0; o < cfg.observables.size(); ++o) {
            const Observable w = Observable::parse(cfg.observables[o], n);
            const Statevector sigma = detail::make_input_state(cfg.input_state, n, 0, cfg.seed);
            const std::size_t samples = cfg.samples;
            std::vector<std::vector<double>> g(indices.size(), std::vector<double>(samples));
            parallel_for(samples, cfg.threads, [&](std::size_t j) {
                Rng rng = Rng::substream(cfg.seed, sample_key(n, o, j));
                const ParamVector theta = random_params(ansatz, rng, cfg.theta_low, cfg.theta_high);
                for (std::size_t i = 0; i < indices.size(); ++i)
                    g[i][j] = parameter_shift_grad(sigma, w, ansatz, theta, indices[i]);
            });
            if (samples == 0 || indices.empty()) continue;
            std::vector<double> mean_avg(samples, 0.0), sq_avg(samples, 0.0);
            const double m = static_cast<double>(indices.size());
            for (std::size_t i = 0; i < indices.size(); ++i) {
                const Summary s = summarize(g[i]);
                const std::string idx = format_count(indices[i]);
                table.add(ResultRecord{"grad-variance", n, ansatz.width(), w.spec(), "grad_mean", idx, s.mean,
                                       s.se_mean, samples, cfg.seed}
                              .fields());
                table.add(ResultRecord{"grad-variance", n, ansatz.width(), w.spec(), "grad_variance", idx, s.variance,
                                       s.se_variance, samples, cfg.seed}
                              .fields());
                const double bessel = samples > 1 ? static_cast<double>(samples) / (samples - 1.0) : 1.0;
                for (std::size_t j = 0; j < samples; ++j) {
                    mean_avg[j] += g[i][j] / m;
                    const double d = g[i][j] - s.mean;
                    sq_avg[j] += bessel * d * d / m;
                }
            }
            const Summary sm = summarize(mean_avg);
            const Summary sv = summarize(sq_avg);
            table.add(ResultRecord{"grad-variance", n, ansatz.width(), w.spec(), "grad_mean_avg", "", sm.mean,
                                   sm.se_mean, samples, cfg.seed}
                          .fields());
            table.add(ResultRecord{"grad-variance", n, ansatz.width(), w.spec(), "grad_variance_avg", "", sv.mean,
                                   sv.se_mean, samples, cfg.seed}
                          .fields());
        }
    }
    return table;
}

/// One SPSA trajectory; returns (objective, infidelity) after each update.
/// Maximizes f; infidelity is 1 - f for the global projector.
inline std::vector<std::pair<double, double>> spsa_maximize(const Statevector &sigma, const Observable &w,
                                                            const Ansatz &ansatz, const SpsaSpec &spsa, Rng &rng) {
    ParamVector theta = random_params(ansatz, rng, spsa.init_low, spsa.init_high);
    if (spsa.init_low == spsa.init_high) std::fill(theta.begin(), theta.end(), spsa.init_low);
    const Observable global = Observable::global_zero(ansatz.num_qubits());
    std::vector<std::pair<double, double>> trace;
    std::vector<int> delta(theta.size());
    ParamVector plus(theta.size()), minus(theta.size());
    for (std::size_t it = 0; it < spsa.iterations; ++it) {
        double a = spsa.a, c = spsa.c;
        if (spsa.decaying) {
            a = spsa.a / std::pow(static_cast<double>(it) + 1.0 + spsa.stability, spsa.alpha);
            c = spsa.c / std::pow(static_cast<double>(it) + 1.0, spsa.gamma);
        }
        for (std::size_t i = 0; i < theta.size(); ++i) {
            delta[i] = rng.rademacher();
            plus[i] = theta[i] + c * delta[i];
            minus[i] = theta[i] - c * delta[i];
        }
        const double diff = expectation(sigma, w, ansatz, plus) - expectation(sigma, w, ansatz, minus);
        for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += a * diff / (2.0 * c * delta[i]);
        const Statevector out = apply(ansatz, theta, sigma);
        trace.emplace_back(w.expectation_on(out), 1.0 - global.expectation_on(out));
    }
    return trace;
}

inline std::vector<std::string> learn_header() {
    return {"experiment", "n", "k", "observable", "seed", "iteration", "objective", "infidelity"};
}

/// SPSA learning curves per (n, observable, seed index).
inline CsvTable run_learn(const ExperimentConfig &cfg) {
    CsvTable table{learn_header(), {}};
    for (std::size_t n : cfg.n_values) {
        const Ansatz ansatz = cfg.ansatz.build(n);
        const Statevector sigma = detail::make_input_state(cfg.input_state, n, 0, cfg.seed);
        for (std::size_t o = 0; o < cfg.observables.size(); ++o) {
            const Observable w = Observable::parse(cfg.observables[o], n);
            std::vector<std::vector<std::pair<double, double>>> traces(cfg.seeds);
            parallel_for(cfg.seeds, cfg.threads, [&](std::size_t s) {
                Rng rng = Rng::substream(cfg.seed, sample_key(n, o, s));
                traces[s] = spsa_maximize(sigma, w, ansatz, cfg.spsa, rng);
            });
            for (std::size_t s = 0; s < cfg.seeds; ++s) {
                for (std::size_t it = 0; it < traces[s].size(); ++it) {
                    table.add({"learn", format_count(n), format_count(ansatz.width()), w.spec(), format_count(s),
                               format_count(it + 1), format_double(traces[s][it].first),
                               format_double(traces[s][it].second)});
                }
            }
        }
    }
    return table;
}

/// Median over seeds of the final infidelity for one (n, observable).
inline double median_final_infidelity(const CsvTable &learn, std::size_t n, const std::string &observable) {
    const std::size_t cn = learn.column("n"), co = learn.column("observable"), cs = learn.column("seed"),
                      ci = learn.column("infidelity");
    std::map<std::string, double> last;
    for (const auto &r : learn.rows) {
        if (r[cn] == format_count(n) && r[co] == observable) last[r[cs]] = std::stod(r[ci]);
    }
    std::vector<double> v;
    for (auto &[k, x] : last) v.push_back(x);
    if (v.empty()) throw std::invalid_argument("median_final_infidelity: no rows");
    return median(v);
}

/// Evaluates W_{C(theta)^dag} through either the tensor-train or a dense path.
class ConjugatedObservable {
   public:
    ConjugatedObservable(const Observable &w, const Ansatz &ansatz, std::span<const double> theta,
                         const std::string &path)
        : n_(w.num_qubits()), norm_sq_(w.hilbert_schmidt_norm_squared()) {
        std::string p = path;
        if (p == "auto") p = w.is_product() && w.kind() != Observable::Kind::GlobalZero ? "mps" : "dense";
        if (p == "mps") {
            if (!w.is_product()) throw std::invalid_argument("tensor-network path needs a product observable");
            if (n_ > 16) throw std::invalid_argument("tensor-network path limited to n <= 16");
            evo_ = heisenberg_evolve(w, ansatz, theta);
            mode_ = Mode::Mps;
        } else if (w.kind() == Observable::Kind::GlobalZero) {
            if (n_ > 12) throw std::invalid_argument("dense path limited to n <= 12");
            phi_ = apply_adjoint(ansatz, theta, Statevector::zero(n_));
            mode_ = Mode::Pure;
        } else {
            if (n_ > 8) throw std::invalid_argument("dense operator path limited to n <= 8");
            const ComplexMatrix u = dense_unitary(ansatz, theta);
            dense_ = u.adjoint() * w.dense() * u;
            mode_ = Mode::Dense;
        }
    }

    bool uses_mps() const { return mode_ == Mode::Mps; }
    const EvolutionResult &evolution() const { return *evo_; }
    double norm_squared() const { return norm_sq_; }

    double coefficient(const PauliString &p) const {
        switch (mode_) {
            case Mode::Mps:
                return evo_->mps.coefficient(p);
            case Mode::Pure:
                return Observable::pauli(p).expectation_on(phi_) * std::pow(2.0, -0.5 * static_cast<double>(n_));
            case Mode::Dense:
                return pauli_coefficient(dense_, p);
        }
        return 0.0;
    }

    std::vector<double> all_coefficients() const {
        if (n_ > 6) throw std::invalid_argument("exhaustive enumeration limited to n <= 6");
        if (mode_ == Mode::Pure) return pauli_coefficients(phi_);
        if (mode_ == Mode::Dense) return pauli_coefficients(dense_);
        std::vector<double> c(std::size_t{1} << (2 * n_));
        for (std::uint64_t i = 0; i < c.size(); ++i) c[i] = evo_->mps.coefficient(PauliString::from_index(n_, i));
        return c;
    }

    CoefficientMoments moments() const {
        switch (mode_) {
            case Mode::Mps:
                return {norm_sq_, evo_->mps.sum_fourth_powers()};
            case Mode::Pure:
                return projector_coefficient_moments(phi_);
            case Mode::Dense:
                return coefficient_moments(pauli_coefficients(dense_));
        }
        return {};
    }

   private:
    enum class Mode { Mps, Pure, Dense };
    std::size_t n_;
    double norm_sq_;
    Mode mode_ = Mode::Dense;
    std::optional<EvolutionResult> evo_;
    Statevector phi_;
    ComplexMatrix dense_;
};

/// Mean K-norm of W_{C(theta)^dag} over theta samples.
inline CsvTable run_cknorm(const ExperimentConfig &cfg) {
    CsvTable table{result_header(), {}};
    for (std::size_t n : cfg.n_values) {
        const Ansatz ansatz = cfg.ansatz.build(n);
        for (std::size_t o = 0; o < cfg.observables.size(); ++o) {
            const Observable w = Observable::parse(cfg.observables[o], n);
            std::vector<double> norms(cfg.samples);
            std::vector<double> bonds(cfg.samples, 0.0);
            std::size_t cover = 0;
            bool mps = false;
            parallel_for(cfg.samples, cfg.threads, [&](std::size_t j) {
                Rng rng = Rng::substream(cfg.seed, sample_key(n, o, j));
                const ParamVector theta = random_params(ansatz, rng, cfg.theta_low, cfg.theta_high);
                const ConjugatedObservable c(w, ansatz, theta, cfg.path);
                const CoefficientMoments m = c.moments();
                norms[j] = cfg.norm == "kernel" ? k_norm_kernel(m) : k_norm(m);
                if (c.uses_mps()) {
                    bonds[j] = static_cast<double>(c.evolution().max_bond);
                    if (j == 0) {
                        cover = c.evolution().cover_max;
                        mps = true;
                    }
                }
            });
            if (cfg.samples == 0) continue;
            const Summary s = summarize(norms);
            table.add(ResultRecord{"cknorm", n, ansatz.width(), w.spec(), "k_norm_mean", "", s.mean, s.se_mean,
                                   cfg.samples, cfg.seed}
                          .fields());
            if (mps) {
                const double max_bond = *std::max_element(bonds.begin(), bonds.end());
                table.add(ResultRecord{"cknorm", n, ansatz.width(), w.spec(), "max_bond", "", max_bond, 0.0,
                                       cfg.samples, cfg.seed}
                              .fields());
                table.add(ResultRecord{"cknorm", n, ansatz.width(), w.spec(), "cover_max", "",
                                       static_cast<double>(cover), 0.0, cfg.samples, cfg.seed}
                              .fields());
            }
        }
    }
    return table;
}

struct PauliDistResult {
    CsvTable samples;
    CsvTable summary;
};

inline std::vector<PauliString> query_set(const ExperimentConfig &cfg, std::size_t n) {
    std::vector<PauliString> out;
    if (const auto *list = std::get_if<std::vector<std::string>>(&cfg.queries)) {
        for (const auto &s : *list) out.push_back(PauliString::parse(s));
        return out;
    }
    const auto &mode = std::get<std::string>(cfg.queries);
    if (mode == "all") {
        if (n > 6) throw std::invalid_argument("queries=all limited to n <= 6");
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << (2 * n)); ++i) out.push_back(PauliString::from_index(n, i));
        return out;
    }
    for (std::size_t q = 0; q < n; ++q) out.push_back(PauliString::single(n, q, PauliOp::Z));
    return out;
}

/// Probabilities c_K^2 / ||W||_2^2 of queried Paulis for each theta sample.
inline PauliDistResult run_pauli_dist(const ExperimentConfig &cfg) {
    PauliDistResult res;
    res.samples.header = {"experiment", "n", "k", "observable", "theta_sample_id", "pauli_string", "coefficient",
                          "probability"};
    res.summary.header = {"experiment", "n", "k", "observable", "pauli_string", "samples",
                          "min", "q1", "median", "q3", "max"};
    for (std::size_t n : cfg.n_values) {
        const Ansatz ansatz = cfg.ansatz.build(n);
        const auto queries = query_set(cfg, n);
        for (std::size_t o = 0; o < cfg.observables.size(); ++o) {
            const Observable w = Observable::parse(cfg.observables[o], n);
            std::vector<std::vector<double>> coeff(cfg.samples);
            parallel_for(cfg.samples, cfg.threads, [&](std::size_t j) {
                Rng rng = Rng::substream(cfg.seed, sample_key(n, o, j));
                const ParamVector theta = random_params(ansatz, rng, cfg.theta_low, cfg.theta_high);
                const ConjugatedObservable c(w, ansatz, theta, cfg.path);
                if (std::holds_alternative<std::string>(cfg.queries) && std::get<std::string>(cfg.queries) == "all") {
                    coeff[j] = c.all_coefficients();
                } else {
                    for (const auto &p : queries) coeff[j].push_back(c.coefficient(p));
                }
            });
            const double norm_sq = w.hilbert_schmidt_norm_squared();
            std::vector<std::vector<double>> probs(queries.size());
            for (std::size_t j = 0; j < cfg.samples; ++j) {
                for (std::size_t qi = 0; qi < queries.size(); ++qi) {
                    const double c = coeff[j][qi];
                    const double p = c * c / norm_sq;
                    probs[qi].push_back(p);
                    res.samples.add({"pauli-dist", format_count(n), format_count(ansatz.width()), w.spec(),
                                     format_count(j), queries[qi].str(), format_double(c), format_double(p)});
                }
            }
            if (cfg.samples == 0) continue;
            for (std::size_t qi = 0; qi < queries.size(); ++qi) {
                res.summary.add({"pauli-dist", format_count(n), format_count(ansatz.width()), w.spec(),
                                 queries[qi].str(), format_count(cfg.samples), format_double(quantile(probs[qi], 0.0)),
                                 format_double(quantile(probs[qi], 0.25)), format_double(quantile(probs[qi], 0.5)),
                                 format_double(quantile(probs[qi], 0.75)), format_double(quantile(probs[qi], 1.0))});
            }
        }
    }
    return res;
}

}  // namespace vqalab::experiments

#endif  // VQALAB_EXPERIMENTS_RUNNERS_HPP
