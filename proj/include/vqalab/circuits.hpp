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

#ifndef VQALAB_CIRCUITS_HPP
#define VQALAB_CIRCUITS_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vqalab/haar.hpp"
#include "vqalab/linalg.hpp"
#include "vqalab/random.hpp"

namespace vqalab {

using ParamVector = std::vector<double>;

/// Euler-angle single-qubit gate Rz(phi) Ry(theta) Rz(lambda), with
/// R_a(x) = exp(-i x P_a / 2). Each angle obeys the +-pi/2 shift rule.
inline Matrix2 u3(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    const Complex ep = std::polar(1.0, phi / 2.0);
    const Complex el = std::polar(1.0, lambda / 2.0);
    Matrix2 m;
    m << c / (ep * el), -s * el / ep, s * ep / el, c * ep * el;
    return m;
}

/// CNOT with control on the first qubit of the local pair.
inline Matrix4 cnot_matrix() {
    Matrix4 m = Matrix4::Zero();
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
    return m;
}

inline Matrix4 swap_matrix() {
    Matrix4 m = Matrix4::Zero();
    m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1.0;
    return m;
}

inline Matrix4 kron2(const Matrix2 &a, const Matrix2 &b) {
    Matrix4 m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return m;
}

/// Parameterized block: U3 on each qubit, then CNOT. Six angles.
inline Matrix4 block_unitary(std::span<const double> angles) {
    if (angles.size() != 6) {
        throw std::invalid_argument("block_unitary: expected 6 angles");
    }
    return cnot_matrix() * kron2(u3(angles[0], angles[1], angles[2]), u3(angles[3], angles[4], angles[5]));
}

/// Width-k, depth-d brickwork of parameterized blocks.
struct SubcircuitTemplate {
    static constexpr std::size_t kParamsPerBlock = 6;

    std::size_t width = 2;
    std::size_t depth = 1;

    /// Local qubit pairs in application order. Width 2 repeats (0,1);
    /// wider templates alternate even pairs (0,1),(2,3),... and odd
    /// pairs (1,2),(3,4),... layer by layer.
    std::vector<std::pair<std::size_t, std::size_t>> block_pairs() const {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t layer = 0; layer < depth; ++layer) {
            const std::size_t start = (width == 2) ? 0 : layer % 2;
            for (std::size_t a = start; a + 1 < width; a += 2) {
                pairs.emplace_back(a, a + 1);
            }
        }
        return pairs;
    }

    std::size_t num_blocks() const { return block_pairs().size(); }
    std::size_t num_params() const { return kParamsPerBlock * num_blocks(); }
};

enum class AnsatzKind { Mps, Hea, Qcnn };

inline std::string to_string(AnsatzKind kind) {
    switch (kind) {
        case AnsatzKind::Mps:
            return "mps";
        case AnsatzKind::Hea:
            return "hea";
        case AnsatzKind::Qcnn:
            return "qcnn";
    }
    return "?";
}

/// Parameterized block placed on absolute qubits (first < second).
struct Block {
    std::size_t first = 0;
    std::size_t second = 0;
    std::size_t param_offset = 0;
};

/// A 2-qubit gate on absolute qubits; local index 2*bit(first)+bit(second).
struct TwoQubitGate {
    std::size_t first = 0;
    std::size_t second = 0;
    Matrix4 matrix;
};

/// Subcircuit p (1-based, as in theta = theta_1 + ... + theta_T) acting on
/// qubits [first_qubit, first_qubit + width).
struct SubcircuitPlacement {
    std::size_t id = 1;
    std::size_t first_qubit = 0;
    std::size_t width = 0;
    std::size_t param_offset = 0;
    std::size_t num_params = 0;
};

inline std::size_t floor_log2(std::size_t x) {
    std::size_t r = 0;
    while ((std::size_t{2} << r) <= x) ++r;
    return r;
}

/// Circuit layout. Blocks are stored in the order they act on the state.
///
/// MPS ordering: subcircuit U_T sits on qubits [0, k) and acts first; the
/// window then slides right by one qubit per subcircuit, ending with U_1 on
/// [n-k, n). The parameter vector is theta_1 + ... + theta_T, so the
/// first-applied subcircuit reads the last parameter block. The operator
/// product is therefore C = U_1 ... U_T in the usual matrix sense.
class Ansatz {
   public:
    static Ansatz mps(std::size_t n, std::size_t k, std::size_t depth) {
        if (k < 2 || k > n) {
            throw std::invalid_argument("MPS ansatz requires 2 <= k <= n");
        }
        check_qubits(n);
        Ansatz a(AnsatzKind::Mps, n, k, depth);
        const SubcircuitTemplate tpl{k, depth};
        const std::size_t t_count = n - k + 1;
        const std::size_t per = tpl.num_params();
        a.num_params_ = t_count * per;
        for (std::size_t step = 0; step < t_count; ++step) {
            const std::size_t id = t_count - step;  // U_T first
            const std::size_t start = step;
            const std::size_t offset = (id - 1) * per;
            a.subcircuits_.push_back({id, start, k, offset, per});
            std::size_t block_offset = offset;
            for (auto [x, y] : tpl.block_pairs()) {
                a.blocks_.push_back({start + x, start + y, block_offset});
                block_offset += SubcircuitTemplate::kParamsPerBlock;
            }
        }
        return a;
    }

    /// Hardware-efficient ansatz: one brickwork subcircuit over all n qubits.
    static Ansatz hea(std::size_t n, std::size_t depth) {
        if (n < 2) {
            throw std::invalid_argument("HEA ansatz requires n >= 2");
        }
        check_qubits(n);
        Ansatz a(AnsatzKind::Hea, n, n, depth);
        const SubcircuitTemplate tpl{n, depth};
        a.num_params_ = tpl.num_params();
        a.subcircuits_.push_back({1, 0, n, 0, a.num_params_});
        std::size_t offset = 0;
        for (auto [x, y] : tpl.block_pairs()) {
            a.blocks_.push_back({x, y, offset});
            offset += SubcircuitTemplate::kParamsPerBlock;
        }
        return a;
    }

    /// Measurement-free QCNN. Each stage applies `depth` brickwork layers on
    /// the active qubits, then pooling blocks on (a[2j], a[2j+1]) after which
    /// a[2j] leaves the active set. The last qubit survives all log2(n) stages.
    static Ansatz qcnn(std::size_t n, std::size_t depth) {
        if (n < 2 || (n & (n - 1)) != 0) {
            throw std::invalid_argument("QCNN ansatz requires n to be a power of two");
        }
        check_qubits(n);
        Ansatz a(AnsatzKind::Qcnn, n, 2, depth);
        std::vector<std::size_t> active(n);
        for (std::size_t q = 0; q < n; ++q) active[q] = q;
        std::size_t offset = 0;
        std::size_t stage = 0;
        auto add = [&](std::size_t x, std::size_t y) {
            a.blocks_.push_back({x, y, offset});
            offset += SubcircuitTemplate::kParamsPerBlock;
        };
        while (active.size() > 1) {
            const std::size_t stage_offset = offset;
            for (std::size_t rep = 0; rep < depth; ++rep) {
                for (std::size_t j = 0; j + 1 < active.size(); j += 2) add(active[j], active[j + 1]);
                for (std::size_t j = 1; j + 1 < active.size(); j += 2) add(active[j], active[j + 1]);
            }
            std::vector<std::size_t> kept;
            for (std::size_t j = 0; j + 1 < active.size(); j += 2) {
                add(active[j], active[j + 1]);
                kept.push_back(active[j + 1]);
            }
            ++stage;
            a.subcircuits_.push_back({stage, active.front(), active.back() - active.front() + 1, stage_offset,
                                      offset - stage_offset});
            active = std::move(kept);
        }
        a.num_params_ = offset;
        a.pooling_stages_ = stage;
        return a;
    }

    AnsatzKind kind() const { return kind_; }
    std::size_t num_qubits() const { return n_; }
    /// Subcircuit width (MPS), n for HEA, 2 for QCNN.
    std::size_t width() const { return k_; }
    std::size_t depth() const { return depth_; }
    std::size_t num_params() const { return num_params_; }
    std::size_t num_subcircuits() const { return subcircuits_.size(); }
    std::size_t pooling_stages() const { return pooling_stages_; }
    const std::vector<Block> &blocks() const { return blocks_; }
    /// Placements in application order.
    const std::vector<SubcircuitPlacement> &subcircuits() const { return subcircuits_; }

    const SubcircuitPlacement &subcircuit(std::size_t id) const {
        for (const auto &s : subcircuits_)
            if (s.id == id) return s;
        throw std::invalid_argument("subcircuit id " + std::to_string(id) + " does not exist");
    }

    /// Flat index of parameter q inside subcircuit p (1-based p).
    std::size_t flat_index(std::size_t p, std::size_t q) const {
        const auto &s = subcircuit(p);
        if (q >= s.num_params) {
            throw std::invalid_argument("parameter index out of range for subcircuit");
        }
        return s.param_offset + q;
    }

    void check_params(std::span<const double> theta) const {
        if (theta.size() != num_params_) {
            throw std::invalid_argument("parameter vector has length " + std::to_string(theta.size()) +
                                        ", ansatz expects " + std::to_string(num_params_));
        }
    }

    /// Concrete gates in application order.
    std::vector<TwoQubitGate> gates(std::span<const double> theta) const {
        check_params(theta);
        std::vector<TwoQubitGate> out;
        out.reserve(blocks_.size());
        for (const Block &b : blocks_) {
            out.push_back({b.first, b.second,
                           block_unitary(theta.subspan(b.param_offset, SubcircuitTemplate::kParamsPerBlock))});
        }
        return out;
    }

    std::string describe() const {
        return to_string(kind_) + "(n=" + std::to_string(n_) + ",k=" + std::to_string(k_) +
               ",depth=" + std::to_string(depth_) + ")";
    }

   private:
    Ansatz(AnsatzKind kind, std::size_t n, std::size_t k, std::size_t depth) : kind_(kind), n_(n), k_(k), depth_(depth) {}

    static void check_qubits(std::size_t n) {
        if (n > kMaxStatevectorQubits) {
            throw std::invalid_argument("ansatz qubit count exceeds simulator limit");
        }
    }

    AnsatzKind kind_;
    std::size_t n_;
    std::size_t k_;
    std::size_t depth_;
    std::size_t num_params_ = 0;
    std::size_t pooling_stages_ = 0;
    std::vector<Block> blocks_;
    std::vector<SubcircuitPlacement> subcircuits_;
};

inline void apply_gates(const std::vector<TwoQubitGate> &gates, Statevector &psi) {
    for (const auto &g : gates) psi.apply_2q(g.first, g.second, g.matrix);
}

/// psi <- C(theta) psi.
inline void apply_in_place(const Ansatz &ansatz, std::span<const double> theta, Statevector &psi) {
    if (psi.num_qubits() != ansatz.num_qubits()) {
        throw std::invalid_argument("apply: state and ansatz qubit counts differ");
    }
    apply_gates(ansatz.gates(theta), psi);
}

inline Statevector apply(const Ansatz &ansatz, std::span<const double> theta, Statevector psi) {
    apply_in_place(ansatz, theta, psi);
    return psi;
}

/// psi <- C(theta)^dag psi.
inline Statevector apply_adjoint(const Ansatz &ansatz, std::span<const double> theta, Statevector psi) {
    if (psi.num_qubits() != ansatz.num_qubits()) {
        throw std::invalid_argument("apply_adjoint: state and ansatz qubit counts differ");
    }
    const auto gates = ansatz.gates(theta);
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        psi.apply_2q(it->first, it->second, it->matrix.adjoint());
    }
    return psi;
}

inline ComplexMatrix dense_unitary(const Ansatz &ansatz, std::span<const double> theta) {
    const std::size_t n = ansatz.num_qubits();
    if (n > 12) {
        throw std::invalid_argument("dense_unitary: limited to n <= 12");
    }
    const auto gates = ansatz.gates(theta);
    const std::size_t dim = dimension_of(n);
    ComplexMatrix u(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t col = 0; col < dim; ++col) {
        Statevector e = Statevector::basis(n, col);
        apply_gates(gates, e);
        u.col(static_cast<Eigen::Index>(col)) = e.amplitudes();
    }
    return u;
}

/// Uniform parameters on [lo, hi).
inline ParamVector random_params(const Ansatz &ansatz, Rng &rng, double lo, double hi) {
    ParamVector theta(ansatz.num_params());
    for (double &x : theta) x = rng.uniform(lo, hi);
    return theta;
}

/// Per-qubit counts of 2-qubit gates whose span [min, max] covers the qubit.
inline std::vector<std::size_t> gate_cover_counts(std::size_t n,
                                                  const std::vector<std::pair<std::size_t, std::size_t>> &pairs) {
    std::vector<std::size_t> counts(n, 0);
    for (auto [a, b] : pairs) {
        const std::size_t lo = std::min(a, b), hi = std::max(a, b);
        for (std::size_t q = lo; q <= hi; ++q) ++counts[q];
    }
    return counts;
}

/// State prepared by an n-qubit HEA brickwork of the given depth whose
/// single-qubit gates are Haar random, applied to |0...0>.
inline Statevector random_hea_state(std::size_t n, std::size_t depth, Rng &rng) {
    Statevector psi = Statevector::zero(n);
    if (n == 1) {
        Matrix2 g = HaarSampler::sample_with(rng, 2);
        psi.apply_1q(0, g);
        return psi;
    }
    const SubcircuitTemplate tpl{n, depth};
    for (auto [a, b] : tpl.block_pairs()) {
        const Matrix2 ga = HaarSampler::sample_with(rng, 2);
        const Matrix2 gb = HaarSampler::sample_with(rng, 2);
        psi.apply_2q(a, b, cnot_matrix() * kron2(ga, gb));
    }
    return psi;
}

/// Product state with each qubit at Bloch angles (polar, azimuth).
inline Statevector product_state(const std::vector<std::pair<double, double>> &angles) {
    std::vector<Eigen::Vector2cd> f;
    for (auto [polar, azimuth] : angles) {
        Eigen::Vector2cd v;
        v << std::cos(polar / 2.0), std::polar(std::sin(polar / 2.0), azimuth);
        f.push_back(v);
    }
    return Statevector::product(f);
}

}  // namespace vqalab

#endif  // VQALAB_CIRCUITS_HPP
