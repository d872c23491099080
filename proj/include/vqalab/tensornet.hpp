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

#ifndef VQALAB_TENSORNET_HPP
#define VQALAB_TENSORNET_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vqalab/circuits.hpp"
#include "vqalab/linalg.hpp"
#include "vqalab/observables.hpp"
#include "vqalab/pauli.hpp"

namespace vqalab {

/// Relative singular-value cutoff used when refactorizing after a gate.
inline constexpr double kSvdRelativeCutoff = 1e-12;

/// Pauli transfer matrix R[(a,b),(c,d)] = tr((K_a x K_b) G^dag (K_c x K_d) G)
/// with K = P / sqrt(2). Index (a,b) = 4a + b using codes I, X, Z, Y.
inline Eigen::Matrix<double, 16, 16> pauli_transfer_matrix(const Matrix4 &g) {
    std::array<Matrix4, 16> basis;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            basis[static_cast<std::size_t>(4 * a + b)] =
                kron2(single_qubit_pauli(static_cast<PauliOp>(a)), single_qubit_pauli(static_cast<PauliOp>(b))) / 2.0;
        }
    }
    Eigen::Matrix<double, 16, 16> r;
    for (int cd = 0; cd < 16; ++cd) {
        const Matrix4 conj = g.adjoint() * basis[static_cast<std::size_t>(cd)] * g;
        for (int ab = 0; ab < 16; ++ab) {
            const Complex t = (basis[static_cast<std::size_t>(ab)] * conj).trace();
            if (std::abs(t.imag()) > 1e-10) {
                throw NumericalError("pauli_transfer_matrix: non-real entry, gate is not unitary");
            }
            r(ab, cd) = t.real();
        }
    }
    return r;
}

/// Tensor train of orthonormal-Pauli coefficients. Core i is stored as a
/// (left_bond * 4) x right_bond matrix with row index l * 4 + a.
class PauliMPS {
   public:
    /// Product operator from n single-qubit Hermitian factors, qubit 0 first.
    static PauliMPS from_product_observable(const std::vector<Matrix2> &factors) {
        if (factors.empty()) throw std::invalid_argument("from_product_observable: no factors");
        PauliMPS w;
        for (const Matrix2 &f : factors) {
            require_hermitian(f, "from_product_observable");
            RealMatrix core(4, 1);
            for (int a = 0; a < 4; ++a) {
                core(a, 0) = (single_qubit_pauli(static_cast<PauliOp>(a)) * f).trace().real() / std::sqrt(2.0);
            }
            w.cores_.push_back(std::move(core));
        }
        return w;
    }

    static PauliMPS from_observable(const Observable &obs) {
        return from_product_observable(obs.product_factors());
    }

    std::size_t num_sites() const { return cores_.size(); }
    const RealMatrix &core(std::size_t i) const { return cores_.at(i); }

    std::size_t left_bond(std::size_t i) const { return static_cast<std::size_t>(cores_[i].rows() / 4); }
    std::size_t right_bond(std::size_t i) const { return static_cast<std::size_t>(cores_[i].cols()); }

    /// Bond dimension across the cut between sites i and i+1.
    std::size_t bond(std::size_t cut) const { return right_bond(cut); }

    std::vector<std::size_t> bonds() const {
        std::vector<std::size_t> b;
        for (std::size_t i = 0; i + 1 < cores_.size(); ++i) b.push_back(bond(i));
        return b;
    }

    std::size_t max_bond() const {
        std::size_t m = 1;
        for (std::size_t b : bonds()) m = std::max(m, b);
        return m;
    }

    /// tr(K_p W) for one Pauli string.
    double coefficient(const PauliString &p) const {
        if (p.size() != cores_.size()) throw std::invalid_argument("coefficient: Pauli length mismatch");
        RealMatrix v = RealMatrix::Ones(1, 1);
        for (std::size_t i = 0; i < cores_.size(); ++i) v = v * slice(i, static_cast<int>(p[i]));
        return v(0, 0);
    }

    /// sum_K tr(K W)^2 = ||W||_2^2.
    double sum_squares() const {
        RealMatrix env = RealMatrix::Ones(1, 1);
        for (std::size_t i = 0; i < cores_.size(); ++i) {
            RealMatrix next = RealMatrix::Zero(cores_[i].cols(), cores_[i].cols());
            for (int a = 0; a < 4; ++a) {
                const RealMatrix s = slice(i, a);
                next.noalias() += s.transpose() * env * s;
            }
            env = std::move(next);
        }
        return env(0, 0);
    }

    /// sum_K tr(K W)^4, the squared norm of the Hadamard self-product.
    double sum_fourth_powers() const {
        RealMatrix env = RealMatrix::Ones(1, 1);
        for (std::size_t i = 0; i < cores_.size(); ++i) {
            const Eigen::Index r = cores_[i].cols();
            RealMatrix next = RealMatrix::Zero(r * r, r * r);
            for (int a = 0; a < 4; ++a) {
                const RealMatrix s = slice(i, a);
                const RealMatrix h = real_kron(s, s);
                next.noalias() += h.transpose() * env * h;
            }
            env = std::move(next);
        }
        return env(0, 0);
    }

    /// W <- G^dag W G for a 2-qubit unitary on adjacent sites (site, site+1);
    /// the local basis of G is ordered (site, site+1).
    void conjugate_gate(const Matrix4 &gate, std::size_t site) {
        if (site + 1 >= cores_.size()) {
            throw std::invalid_argument("conjugate_gate: sites must be adjacent and in range");
        }
        if (!is_unitary(gate, 1e-10)) throw std::invalid_argument("conjugate_gate: gate is not unitary");
        apply_transfer(pauli_transfer_matrix(gate), site);
    }

    /// Applies a 16x16 real map to the two-site block (site, site+1). The
    /// train is kept in mixed-canonical form with its center at `site`, so
    /// the relative SVD cutoff bounds the global error.
    void apply_transfer(const Eigen::Matrix<double, 16, 16> &r, std::size_t site) {
        move_center(site);
        const RealMatrix &a = cores_[site];
        const RealMatrix &b = cores_[site + 1];
        const Eigen::Index chi_l = a.rows() / 4;
        const Eigen::Index chi_m = a.cols();
        const Eigen::Index chi_r = b.cols();
        RealMatrix b_wide(chi_m, 4 * chi_r);
        for (Eigen::Index m = 0; m < chi_m; ++m)
            for (Eigen::Index s = 0; s < 4; ++s) b_wide.block(m, s * chi_r, 1, chi_r) = b.row(m * 4 + s);
        RealMatrix theta = a * b_wide;  // rows l*4+c, cols d*chi_r+r
        RealMatrix out(4 * chi_l, 4 * chi_r);
        Eigen::Matrix<double, 16, 1> v;
        for (Eigen::Index l = 0; l < chi_l; ++l) {
            for (Eigen::Index rr = 0; rr < chi_r; ++rr) {
                for (int c = 0; c < 4; ++c)
                    for (int d = 0; d < 4; ++d) v(4 * c + d) = theta(l * 4 + c, d * chi_r + rr);
                const Eigen::Matrix<double, 16, 1> w = r * v;
                for (int c = 0; c < 4; ++c)
                    for (int d = 0; d < 4; ++d) out(l * 4 + c, d * chi_r + rr) = w(4 * c + d);
            }
        }
        Eigen::BDCSVD<RealMatrix> svd(out, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (svd.info() != Eigen::Success) throw NumericalError("conjugate_gate: SVD did not converge");
        const auto &sv = svd.singularValues();
        Eigen::Index rank = 0;
        const double smax = sv.size() > 0 ? sv(0) : 0.0;
        while (rank < sv.size() && sv(rank) > kSvdRelativeCutoff * smax) ++rank;
        rank = std::max<Eigen::Index>(rank, 1);
        RealMatrix left = svd.matrixU().leftCols(rank);
        RealMatrix right_wide = sv.head(rank).asDiagonal() * svd.matrixV().leftCols(rank).transpose();
        RealMatrix right(rank * 4, chi_r);
        for (Eigen::Index m = 0; m < rank; ++m)
            for (Eigen::Index s = 0; s < 4; ++s) right.row(m * 4 + s) = right_wide.block(m, s * chi_r, 1, chi_r);
        cores_[site] = std::move(left);
        cores_[site + 1] = std::move(right);
        center_ = site + 1;
    }

    /// Dense operator sum_K tr(K W) K, for small n.
    ComplexMatrix to_dense() const {
        const std::size_t n = cores_.size();
        if (n > 8) throw std::invalid_argument("PauliMPS::to_dense: limited to n <= 8");
        const std::size_t dim = dimension_of(n);
        ComplexMatrix w = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        const double scale = std::pow(2.0, -0.5 * static_cast<double>(n));
        for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << (2 * n)); ++idx) {
            const PauliString p = PauliString::from_index(n, idx);
            const double c = coefficient(p);
            if (c != 0.0) w += c * scale * pauli_matrix(p);
        }
        return w;
    }

   private:
    // Cores left of center_ are left-orthonormal, cores right of it are
    // right-orthonormal. Core layout: rows l*4+a, columns r.
    void move_center(std::size_t target) {
        if (!canonical_) {
            center_ = 0;
            canonical_ = true;
            move_center(cores_.size() - 1);
        }
        while (center_ < target) {
            RealMatrix &a = cores_[center_];
            RealMatrix &b = cores_[center_ + 1];
            Eigen::HouseholderQR<RealMatrix> qr(a);
            const Eigen::Index r = std::min(a.rows(), a.cols());
            const RealMatrix q = qr.householderQ() * RealMatrix::Identity(a.rows(), r);
            const RealMatrix rf = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
            const Eigen::Index chi_r = b.cols();
            RealMatrix nb(r * 4, chi_r);
            for (int s = 0; s < 4; ++s) {
                const RealMatrix slab = b(Eigen::seqN(s, a.cols(), 4), Eigen::all);
                nb(Eigen::seqN(s, r, 4), Eigen::all) = rf * slab;
            }
            a = q;
            b = std::move(nb);
            ++center_;
        }
        while (center_ > target) {
            RealMatrix &b = cores_[center_];
            RealMatrix &a = cores_[center_ - 1];
            const Eigen::Index chi_l = b.rows() / 4, chi_r = b.cols();
            RealMatrix wide_t(4 * chi_r, chi_l);  // transpose of the (chi_l x 4 chi_r) grouping
            for (Eigen::Index l = 0; l < chi_l; ++l)
                for (int s = 0; s < 4; ++s) wide_t.block(s * chi_r, l, chi_r, 1) = b.row(l * 4 + s).transpose();
            Eigen::HouseholderQR<RealMatrix> qr(wide_t);
            const Eigen::Index r = std::min(wide_t.rows(), wide_t.cols());
            const RealMatrix q = qr.householderQ() * RealMatrix::Identity(wide_t.rows(), r);
            const RealMatrix rf = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
            RealMatrix nb(r * 4, chi_r);
            for (Eigen::Index m = 0; m < r; ++m)
                for (int s = 0; s < 4; ++s) nb.row(m * 4 + s) = q.block(s * chi_r, m, chi_r, 1).transpose();
            b = std::move(nb);
            a = a * rf.transpose();
            --center_;
        }
    }

    /// (left x right) matrix for physical index a.
    RealMatrix slice(std::size_t i, int a) const {
        const RealMatrix &c = cores_[i];
        return c(Eigen::seqN(a, c.rows() / 4, 4), Eigen::all);
    }

    static RealMatrix real_kron(const RealMatrix &x, const RealMatrix &y) {
        RealMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            for (Eigen::Index j = 0; j < x.cols(); ++j)
                out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        return out;
    }

    std::vector<RealMatrix> cores_;
    std::size_t center_ = 0;
    bool canonical_ = false;
};

/// ||W||_K from the tensor train, given ||W||_2 (unchanged by conjugation).
inline double k_norm_mps(const PauliMPS &w, double w_two_norm) {
    if (!(w_two_norm > 0.0)) throw std::invalid_argument("k_norm_mps: zero operator norm");
    return std::pow(w.sum_fourth_powers(), 0.25) / w_two_norm;
}

/// Sequence of adjacent gates realizing a circuit in application order,
/// with long-range pairs routed through SWAPs.
inline std::vector<TwoQubitGate> route_adjacent(const std::vector<TwoQubitGate> &gates) {
    std::vector<TwoQubitGate> out;
    for (const auto &g : gates) {
        if (g.first >= g.second) throw std::invalid_argument("route_adjacent: expected first < second");
        if (g.second == g.first + 1) {
            out.push_back(g);
            continue;
        }
        for (std::size_t q = g.second; q > g.first + 1; --q) out.push_back({q - 1, q, swap_matrix()});
        out.push_back({g.first, g.first + 1, g.matrix});
        for (std::size_t q = g.first + 1; q < g.second; ++q) out.push_back({q, q + 1, swap_matrix()});
    }
    return out;
}

/// R_V: largest number of routed 2-qubit gates covering one qubit.
inline std::size_t routed_cover_max(const Ansatz &ansatz, std::span<const double> theta) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto &g : route_adjacent(ansatz.gates(theta))) pairs.emplace_back(g.first, g.second);
    const auto counts = gate_cover_counts(ansatz.num_qubits(), pairs);
    return counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
}

struct EvolutionResult {
    PauliMPS mps;
    std::size_t max_bond = 1;
    std::size_t cover_max = 0;  // R_V
    std::vector<std::size_t> straddle_counts;  // gates applied across each cut
};

/// Pauli tensor train of W_{C(theta)^dag} = C^dag W C. Gates are conjugated
/// from the last-applied to the first-applied.
inline EvolutionResult heisenberg_evolve(const Observable &w, const Ansatz &ansatz, std::span<const double> theta) {
    if (w.num_qubits() != ansatz.num_qubits()) {
        throw std::invalid_argument("heisenberg_evolve: observable and ansatz qubit counts differ");
    }
    const auto routed = route_adjacent(ansatz.gates(theta));
    EvolutionResult res{PauliMPS::from_observable(w), 1, 0, std::vector<std::size_t>(w.num_qubits() - 1, 0)};
    const double norm_sq = w.hilbert_schmidt_norm_squared();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (auto it = routed.rbegin(); it != routed.rend(); ++it) {
        res.mps.conjugate_gate(it->matrix, it->first);
        ++res.straddle_counts[it->first];
        pairs.emplace_back(it->first, it->second);
        res.max_bond = std::max(res.max_bond, res.mps.max_bond());
        const double s = res.mps.sum_squares();
        if (std::abs(s - norm_sq) > 1e-9 * norm_sq) {
            throw NumericalError("heisenberg_evolve: operator norm drifted during evolution");
        }
    }
    const auto counts = gate_cover_counts(w.num_qubits(), pairs);
    res.cover_max = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
    return res;
}

}  // namespace vqalab

#endif  // VQALAB_TENSORNET_HPP
