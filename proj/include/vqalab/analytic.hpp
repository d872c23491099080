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

#ifndef VQALAB_ANALYTIC_HPP
#define VQALAB_ANALYTIC_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vqalab/circuits.hpp"
#include "vqalab/linalg.hpp"
#include "vqalab/random.hpp"

namespace vqalab {

/// Computational basis string, qubit 0 first.
using Bitstring = std::vector<std::uint8_t>;

inline Bitstring parse_bitstring(std::string_view s) {
    Bitstring b;
    for (char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("bitstring must contain only 0 and 1");
        b.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return b;
}

inline std::string to_string(const Bitstring &b) {
    std::string s;
    for (auto x : b) s.push_back(static_cast<char>('0' + x));
    return s;
}

inline std::uint64_t basis_index(const Bitstring &b) {
    std::uint64_t idx = 0;
    for (auto x : b) idx = (idx << 1) | x;
    return idx;
}

/// 2x2 real matrix [[a, b], [c, d]] acting on (I-class, P-class) weights.
struct TransferMatrix2 {
    std::array<double, 4> m{};

    double operator()(int r, int c) const { return m[static_cast<std::size_t>(2 * r + c)]; }

    std::array<double, 2> apply(const std::array<double, 2> &v) const {
        return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
    }

    /// Eigenvalues, larger real part first.
    std::array<std::complex<double>, 2> eigenvalues() const {
        const double tr = m[0] + m[3];
        const double det = m[0] * m[3] - m[1] * m[2];
        const std::complex<double> root = std::sqrt(std::complex<double>(tr * tr / 4.0 - det, 0.0));
        return {tr / 2.0 + root, tr / 2.0 - root};
    }
};

namespace detail {

struct Deltas {
    int tr = 0;  // [p = q][r = s]
    int ip = 0;  // [q = r][p = s]
};

inline Deltas deltas(const Bitstring &p, const Bitstring &q, const Bitstring &r, const Bitstring &s, std::size_t lo,
                     std::size_t hi) {
    bool pq = true, rs = true, qr = true, ps = true;
    for (std::size_t j = lo; j < hi; ++j) {
        pq = pq && p[j] == q[j];
        rs = rs && r[j] == s[j];
        qr = qr && q[j] == r[j];
        ps = ps && p[j] == s[j];
    }
    return {pq && rs ? 1 : 0, qr && ps ? 1 : 0};
}

struct WidthConstants {
    double N, D, L;
    explicit WidthConstants(std::size_t k)
        : N(std::ldexp(1.0, static_cast<int>(k))),
          D(std::ldexp(1.0, static_cast<int>(k) - 1)),
          L(std::ldexp(1.0, 2 * (static_cast<int>(k) - 1)) - 1.0) {}
};

// Operator classes carried across one overlap qubit between consecutive
// windows: identity-like (tau = D^2, iota = D) and traceless Pauli-like
// (tau = 0, iota = D). tau/iota are the partial traces of the class
// against the "trace" and "swap" pairings of the next window.
inline constexpr int kClasses = 2;

inline double class_tau(const WidthConstants &w, int ci) { return ci == 0 ? w.D * w.D : 0.0; }
inline double class_iota(const WidthConstants &w, int) { return w.D; }

/// Weingarten combination for one Haar window.
inline double weingarten(const WidthConstants &w, double tau, double iota, int dtr, int dip) {
    return (w.N * iota * dip - tau * dtr) / (w.N * w.N - 1.0);
}

}  // namespace detail

/// Interior transfer matrix of the global recursion for one bit position
/// with the given deltas.
inline TransferMatrix2 global_interior_matrix(std::size_t k, int delta_tr, int delta_ip) {
    const detail::WidthConstants w(k);
    TransferMatrix2 t;
    for (int ci = 0; ci < detail::kClasses; ++ci) {
        const double tau = detail::class_tau(w, ci);
        const double c = detail::weingarten(w, tau, detail::class_iota(w, ci), delta_tr, delta_ip);
        t.m[static_cast<std::size_t>(ci)] = (tau * delta_tr + c) / (w.N * w.N);
        t.m[static_cast<std::size_t>(2 + ci)] = 2.0 * w.L * c / (w.N * w.N);
    }
    return t;
}

/// E[<0|C|p><q|C^dag|0> <0|C|r><s|C^dag|0>] over Haar subcircuits of the
/// MPS ansatz with width k (global projector observable).
inline double mu_global(std::size_t n, std::size_t k, const Bitstring &p, const Bitstring &q, const Bitstring &r,
                        const Bitstring &s) {
    if (p.size() != n || q.size() != n || r.size() != n || s.size() != n) {
        throw std::invalid_argument("mu_global: bitstrings must have length n");
    }
    if (k < 2 || k > n) {
        throw std::invalid_argument("mu_global: requires 2 <= k <= n");
    }
    const detail::WidthConstants w(k);
    if (n == k) {
        const auto d = detail::deltas(p, q, r, s, 0, n);
        return (d.tr + d.ip) / (w.N * (w.N + 1.0));
    }
    const std::size_t steps = n - k + 1;
    auto d = detail::deltas(p, q, r, s, 0, k);
    const double c0 = detail::weingarten(w, 1.0, 1.0, d.tr, d.ip);
    std::array<double, 2> v{(d.tr + c0) / (w.N * w.N), 2.0 * w.L * c0 / (w.N * w.N)};
    for (std::size_t t = 2; t < steps; ++t) {
        const std::size_t j = t + k - 2;
        d = detail::deltas(p, q, r, s, j, j + 1);
        v = global_interior_matrix(k, d.tr, d.ip).apply(v);
    }
    d = detail::deltas(p, q, r, s, n - 1, n);
    double mu = 0.0;
    for (int ci = 0; ci < detail::kClasses; ++ci) {
        mu += v[static_cast<std::size_t>(ci)] *
              (detail::class_tau(w, ci) * d.tr + detail::class_iota(w, ci) * d.ip) / (w.N * (w.N + 1.0));
    }
    return mu;
}

/// Transfer matrix of the local recursion (Z on the last qubit, |0...0> input).
inline TransferMatrix2 local_transfer_matrix(std::size_t k) {
    const detail::WidthConstants w(k);
    const double c_identity = w.D * w.D / (w.N * w.N - 1.0);
    TransferMatrix2 t;
    t.m = {1.0, 0.0, 4.0 * w.L * c_identity / (w.N * w.N), 2.0 * w.L / (w.N * w.N - 1.0)};
    return t;
}

/// E[<Z_n>^2] for the MPS ansatz with Haar subcircuits on input |0...0>.
inline double mu_local_zero(std::size_t n, std::size_t k) {
    if (k < 2 || k > n) {
        throw std::invalid_argument("mu_local_zero: requires 2 <= k <= n");
    }
    const detail::WidthConstants w(k);
    if (n == k) return 1.0 / (w.N + 1.0);
    const double c_identity = w.D * w.D / (w.N * w.N - 1.0);
    const double c_pauli = 2.0 * w.D * w.D / (w.N * w.N - 1.0);
    std::array<double, 2> v{4.0 / (w.N * w.N), 4.0 * w.L / (w.N * w.N * (w.N + 1.0))};
    const TransferMatrix2 m = local_transfer_matrix(k);
    for (std::size_t t = 0; t + k + 1 < n; ++t) v = m.apply(v);
    return v[0] * c_identity + v[1] * c_pauli;
}

/// mu_local_zero(n, k) = B0 + B1 * B2^{n-k-1} for n > k.
struct LocalDecayConstants {
    double b0 = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;

    double evaluate(std::size_t n, std::size_t k) const {
        return b0 + b1 * std::pow(b2, static_cast<double>(n - k - 1));
    }
};

inline LocalDecayConstants local_decay_constants(std::size_t k) {
    const double four_k = std::ldexp(1.0, 2 * static_cast<int>(k));
    LocalDecayConstants c;
    c.b0 = 1.0 / (four_k / 2.0 + 1.0);
    c.b2 = 2.0 * (four_k / 4.0 - 1.0) / (four_k - 1.0);
    c.b1 = mu_local_zero(k + 1, k) - c.b0;
    return c;
}

/// E[<Z_i>^2] on |0...0> for qubit i (0-based). Subcircuits that only
/// touch qubits after i cancel, leaving an instance with i+k qubits
/// (or k qubits when i falls in the first window).
inline double local_second_moment(std::size_t n, std::size_t k, std::size_t qubit) {
    if (qubit >= n) throw std::invalid_argument("local_second_moment: qubit out of range");
    const std::size_t reduced = std::min(n, std::max(k, qubit + k));
    return mu_local_zero(reduced, k);
}

/// Exact Var(f) for W = (1/n) sum_i |0><0|_i on any product pure input.
inline double local_average_variance(std::size_t n, std::size_t k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += local_second_moment(n, k, i);
    return s / (4.0 * static_cast<double>(n) * static_cast<double>(n));
}

/// h1(sigma) / 4^{n-k-1}.
inline double theorem1_bound(std::size_t n, std::size_t k, double h1) {
    if (h1 < 0.0) throw std::invalid_argument("theorem1_bound: h1 must be nonnegative");
    return h1 * std::pow(4.0, -(static_cast<double>(n) - static_cast<double>(k) - 1.0));
}

/// 1/(n (2^{2k+1} + 4)) - h2/(2n). May be negative.
inline double theorem2_bound(std::size_t n, std::size_t k, double h2) {
    if (h2 < 0.0) throw std::invalid_argument("theorem2_bound: h2 must be nonnegative");
    const double nn = static_cast<double>(n);
    return 1.0 / (nn * (std::ldexp(2.0, 2 * static_cast<int>(k)) + 4.0)) - h2 / (2.0 * nn);
}

struct BoundReport {
    int theorem = 1;
    std::size_t n = 0;
    std::size_t k = 0;
    double bound = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
};

namespace detail {

/// Sum of |amplitudes| after applying u3(theta, 0, lambda) to one qubit.
inline double rotated_l1(const ComplexVector &a, std::size_t n, std::size_t qubit, double theta, double lambda) {
    const Matrix2 g = u3(theta, 0.0, lambda);
    const std::size_t stride = std::size_t{1} << bit_position(n, qubit);
    double s = 0.0;
    for (std::size_t base = 0; base < static_cast<std::size_t>(a.size()); base += 2 * stride) {
        for (std::size_t off = 0; off < stride; ++off) {
            const Complex x0 = a(static_cast<Eigen::Index>(base + off));
            const Complex x1 = a(static_cast<Eigen::Index>(base + off + stride));
            s += std::abs(g(0, 0) * x0 + g(0, 1) * x1) + std::abs(g(1, 0) * x0 + g(1, 1) * x1);
        }
    }
    return s;
}

template <typename F>
double golden_minimize(F &&f, double lo, double hi, double &best_x, double tol = 1e-11) {
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - ratio * (b - a), d = a + ratio * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    best_x = (a + b) / 2.0;
    return f(best_x);
}

/// One restart of the per-qubit descent; returns min sum |amplitudes|.
inline double minimize_l1(Statevector psi) {
    const std::size_t n = psi.num_qubits();
    const double two_pi = 2.0 * std::numbers::pi;
    const int grid = 24;
    double current = psi.amplitudes().cwiseAbs().sum();
    for (int sweep = 0; sweep < 50; ++sweep) {
        const double before = current;
        for (std::size_t q = 0; q < n; ++q) {
            const ComplexVector &a = psi.amplitudes();
            double bt = 0.0, bl = 0.0, bv = current;
            for (int i = 0; i < grid; ++i) {
                for (int j = 0; j < grid; ++j) {
                    const double t = two_pi * i / grid, l = two_pi * j / grid;
                    const double v = rotated_l1(a, n, q, t, l);
                    if (v < bv) {
                        bv = v;
                        bt = t;
                        bl = l;
                    }
                }
            }
            const double step = two_pi / grid;
            for (int round = 0; round < 6; ++round) {
                double x = bt;
                golden_minimize([&](double t) { return rotated_l1(a, n, q, t, bl); }, bt - step, bt + step, x);
                bt = x;
                golden_minimize([&](double l) { return rotated_l1(a, n, q, bt, l); }, bl - step, bl + step, x);
                bl = x;
            }
            const double v = rotated_l1(a, n, q, bt, bl);
            if (v < current) {
                psi.apply_1q(q, u3(bt, 0.0, bl));
                current = psi.amplitudes().cwiseAbs().sum();
            }
        }
        if (before - current < 1e-13) break;
    }
    return current;
}

/// Maximum overlap |<prod|psi>|^2 over product states from one start.
inline double max_product_overlap(const Statevector &psi, std::vector<Eigen::Vector2cd> s) {
    const std::size_t n = psi.num_qubits();
    const ComplexVector &a = psi.amplitudes();
    double best = 0.0;
    for (int sweep = 0; sweep < 200; ++sweep) {
        double norm_sq = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
            Eigen::Vector2cd v = Eigen::Vector2cd::Zero();
            for (std::size_t x = 0; x < psi.dimension(); ++x) {
                Complex w = a(static_cast<Eigen::Index>(x));
                for (std::size_t r = 0; r < n && w != Complex(0.0); ++r) {
                    if (r != q) w *= std::conj(s[r](qubit_bit(x, n, r)));
                }
                v(qubit_bit(x, n, q)) += w;
            }
            norm_sq = v.squaredNorm();
            if (norm_sq > 0.0) s[q] = v / std::sqrt(norm_sq);
        }
        if (norm_sq - best < 1e-15) {
            best = std::max(best, norm_sq);
            break;
        }
        best = norm_sq;
    }
    return best;
}

inline Eigen::Vector2cd random_qubit(Rng &rng) {
    Eigen::Vector2cd v(rng.complex_normal(), rng.complex_normal());
    return v / v.norm();
}

}  // namespace detail

/// Upper bound on min_V ||sigma_V||_1^2 over local unitaries, by per-qubit
/// descent with random restarts. For a pure state this is (sum|a_x|)^4.
inline double h1_surrogate(const Statevector &sigma, std::size_t restarts, std::uint64_t seed = 1) {
    if (sigma.num_qubits() > 8) throw std::invalid_argument("h1_surrogate: limited to n <= 8");
    double best = detail::minimize_l1(sigma);
    for (std::size_t r = 0; r < restarts; ++r) {
        Rng rng = Rng::substream(seed, r);
        Statevector start = sigma;
        for (std::size_t q = 0; q < sigma.num_qubits(); ++q) start.apply_1q(q, HaarSampler::sample_with(rng, 2));
        best = std::min(best, detail::minimize_l1(start));
    }
    return std::pow(best, 4.0);
}

/// Upper bound on the minimum trace distance from sigma to a pure product
/// state, by alternating single-qubit updates with random restarts.
inline double h2_surrogate(const Statevector &sigma, std::size_t restarts, std::uint64_t seed = 1) {
    const std::size_t n = sigma.num_qubits();
    if (n > 8) throw std::invalid_argument("h2_surrogate: limited to n <= 8");
    // Start from the dominant eigenvector of each single-qubit marginal.
    std::vector<Eigen::Vector2cd> start(n);
    for (std::size_t q = 0; q < n; ++q) {
        Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
        for (std::size_t x = 0; x < sigma.dimension(); ++x) {
            const std::size_t xq = static_cast<std::size_t>(qubit_bit(x, n, q));
            const std::size_t partner = x ^ (std::size_t{1} << bit_position(n, q));
            rho(static_cast<Eigen::Index>(xq), static_cast<Eigen::Index>(xq)) += std::norm(sigma[x]);
            rho(static_cast<Eigen::Index>(xq), static_cast<Eigen::Index>(1 - xq)) += sigma[x] * std::conj(sigma[partner]);
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho);
        start[q] = es.eigenvectors().col(1);
    }
    double best = detail::max_product_overlap(sigma, start);
    for (std::size_t r = 0; r < restarts; ++r) {
        Rng rng = Rng::substream(seed, r);
        for (auto &v : start) v = detail::random_qubit(rng);
        best = std::max(best, detail::max_product_overlap(sigma, start));
    }
    return 2.0 * std::sqrt(std::max(0.0, 1.0 - best));
}

}  // namespace vqalab

#endif  // VQALAB_ANALYTIC_HPP
