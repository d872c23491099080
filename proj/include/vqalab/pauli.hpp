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

#ifndef VQALAB_PAULI_HPP
#define VQALAB_PAULI_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vqalab/linalg.hpp"

namespace vqalab {

/// Single-qubit Pauli codes: 0=I, 1=X, 2=Z, 3=Y. The code equals
/// xbit + 2*zbit of the symplectic representation.
enum class PauliOp : std::uint8_t { I = 0, X = 1, Z = 2, Y = 3 };

inline char pauli_char(PauliOp op) {
    static constexpr char table[] = {'I', 'X', 'Z', 'Y'};
    return table[static_cast<int>(op)];
}

inline Matrix2 single_qubit_pauli(PauliOp op) {
    Matrix2 m;
    switch (op) {
        case PauliOp::I:
            m << 1, 0, 0, 1;
            break;
        case PauliOp::X:
            m << 0, 1, 1, 0;
            break;
        case PauliOp::Z:
            m << 1, 0, 0, -1;
            break;
        case PauliOp::Y:
            m << 0, Complex(0, -1), Complex(0, 1), 0;
            break;
    }
    return m;
}

class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(std::size_t num_qubits) : ops_(num_qubits, PauliOp::I) {}
    explicit PauliString(std::vector<PauliOp> ops) : ops_(std::move(ops)) {}

    /// Parses text such as "IZXY", qubit 0 leftmost.
    static PauliString parse(std::string_view text) {
        std::vector<PauliOp> ops;
        ops.reserve(text.size());
        for (char c : text) {
            switch (c) {
                case 'I':
                case 'i':
                    ops.push_back(PauliOp::I);
                    break;
                case 'X':
                case 'x':
                    ops.push_back(PauliOp::X);
                    break;
                case 'Z':
                case 'z':
                    ops.push_back(PauliOp::Z);
                    break;
                case 'Y':
                case 'y':
                    ops.push_back(PauliOp::Y);
                    break;
                default:
                    throw std::invalid_argument("PauliString: invalid character '" + std::string(1, c) + "'");
            }
        }
        if (ops.empty()) {
            throw std::invalid_argument("PauliString: empty string");
        }
        return PauliString(std::move(ops));
    }

    /// Inverse of index(): lexicographic base-4 order, qubit 0 most significant.
    static PauliString from_index(std::size_t num_qubits, std::uint64_t index) {
        PauliString p(num_qubits);
        for (std::size_t q = num_qubits; q-- > 0;) {
            p.ops_[q] = static_cast<PauliOp>(index & 3u);
            index >>= 2;
        }
        return p;
    }

    static PauliString single(std::size_t num_qubits, std::size_t qubit, PauliOp op) {
        PauliString p(num_qubits);
        p.ops_.at(qubit) = op;
        return p;
    }

    std::size_t size() const { return ops_.size(); }
    PauliOp operator[](std::size_t q) const { return ops_[q]; }
    void set(std::size_t q, PauliOp op) { ops_.at(q) = op; }
    const std::vector<PauliOp> &ops() const { return ops_; }

    std::uint64_t index() const {
        std::uint64_t idx = 0;
        for (PauliOp op : ops_) {
            idx = (idx << 2) | static_cast<std::uint64_t>(op);
        }
        return idx;
    }

    std::size_t weight() const {
        std::size_t w = 0;
        for (PauliOp op : ops_) {
            w += op != PauliOp::I;
        }
        return w;
    }

    std::string str() const {
        std::string s;
        s.reserve(ops_.size());
        for (PauliOp op : ops_) {
            s.push_back(pauli_char(op));
        }
        return s;
    }

    bool operator==(const PauliString &) const = default;

   private:
    std::vector<PauliOp> ops_;
};

inline ComplexMatrix pauli_matrix(const PauliString &p) {
    if (p.size() == 0 || p.size() > kMaxDenseOperatorQubits) {
        throw std::invalid_argument("pauli_matrix: qubit count outside dense guard");
    }
    ComplexMatrix m = single_qubit_pauli(p[0]);
    for (std::size_t q = 1; q < p.size(); ++q) {
        m = kron(m, single_qubit_pauli(p[q]));
    }
    return m;
}

namespace detail {

/// Spreads the low 32 bits of x to the even bit positions.
inline std::uint64_t spread_bits(std::uint64_t x) {
    x &= 0xffffffffULL;
    x = (x | (x << 16)) & 0x0000ffff0000ffffULL;
    x = (x | (x << 8)) & 0x00ff00ff00ff00ffULL;
    x = (x | (x << 4)) & 0x0f0f0f0f0f0f0f0fULL;
    x = (x | (x << 2)) & 0x3333333333333333ULL;
    x = (x | (x << 1)) & 0x5555555555555555ULL;
    return x;
}

/// Lexicographic Pauli index from basis-index bit masks.
inline std::uint64_t lex_index(std::uint64_t xmask, std::uint64_t zmask) {
    return spread_bits(xmask) | (spread_bits(zmask) << 1);
}

inline void walsh_hadamard(std::vector<Complex> &v) {
    const std::size_t dim = v.size();
    for (std::size_t h = 1; h < dim; h <<= 1) {
        for (std::size_t i = 0; i < dim; i += 2 * h) {
            for (std::size_t j = i; j < i + h; ++j) {
                const Complex a = v[j];
                const Complex b = v[j + h];
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
    }
}

inline Complex i_power(int e) {
    switch (e & 3) {
        case 0:
            return {1, 0};
        case 1:
            return {0, 1};
        case 2:
            return {-1, 0};
        default:
            return {0, -1};
    }
}

/// For a fixed x-mask, fills out[z] = tr(P_{x,z} W) for all z, where
/// entry(u) returns W[u, u ^ x].
template <typename Entry>
void traces_for_xmask(std::size_t num_qubits, std::uint64_t xmask, Entry &&entry, std::vector<Complex> &buf) {
    const std::size_t dim = dimension_of(num_qubits);
    buf.resize(dim);
    for (std::size_t u = 0; u < dim; ++u) {
        buf[u] = entry(u);
    }
    walsh_hadamard(buf);
    for (std::size_t z = 0; z < dim; ++z) {
        buf[z] *= i_power(std::popcount(xmask & z));
    }
}

/// Visits (lex index, orthonormal coefficient) for all 4^n Paulis.
template <typename EntryFactory, typename Visit>
void for_each_coefficient(std::size_t num_qubits, EntryFactory &&entry_for, Visit &&visit) {
    const std::size_t dim = dimension_of(num_qubits);
    const double scale = std::pow(2.0, -0.5 * static_cast<double>(num_qubits));
    std::vector<Complex> buf;
    for (std::uint64_t x = 0; x < dim; ++x) {
        traces_for_xmask(num_qubits, x, entry_for(x), buf);
        for (std::uint64_t z = 0; z < dim; ++z) {
            visit(lex_index(x, z), buf[z].real() * scale);
        }
    }
}

}  // namespace detail

/// tr(K W) with K = P / 2^{n/2}.
inline double pauli_coefficient(const ComplexMatrix &w, const PauliString &p) {
    require_hermitian(w, "pauli_coefficient");
    const std::size_t n = qubits_of_dimension(static_cast<std::size_t>(w.rows()));
    if (p.size() != n) {
        throw std::invalid_argument("pauli_coefficient: Pauli length does not match operator");
    }
    std::uint64_t xmask = 0, zmask = 0;
    int y_count = 0;
    for (std::size_t q = 0; q < n; ++q) {
        const auto code = static_cast<unsigned>(p[q]);
        const std::uint64_t bit = std::uint64_t{1} << bit_position(n, q);
        if (code & 1u) xmask |= bit;
        if (code & 2u) zmask |= bit;
        y_count += code == 3u;
    }
    // P = i^{|x & z|} X^x Z^z, so tr(P W) = i^{|x&z|} sum_u (-1)^{z.u} W[u, u^x].
    Complex acc = 0.0;
    for (std::uint64_t u = 0; u < dimension_of(n); ++u) {
        const double sign = (std::popcount(zmask & u) & 1) ? -1.0 : 1.0;
        acc += sign * w(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u ^ xmask));
    }
    acc *= detail::i_power(y_count);
    return acc.real() * std::pow(2.0, -0.5 * static_cast<double>(n));
}

/// All 4^n orthonormal coefficients of a Hermitian matrix, lexicographic order.
inline std::vector<double> pauli_coefficients(const ComplexMatrix &w) {
    require_hermitian(w, "pauli_coefficients");
    const std::size_t n = qubits_of_dimension(static_cast<std::size_t>(w.rows()));
    if (n > 10) {
        throw std::invalid_argument("pauli_coefficients: dense enumeration limited to n <= 10");
    }
    std::vector<double> out(std::size_t{1} << (2 * n));
    detail::for_each_coefficient(
        n,
        [&](std::uint64_t x) {
            return [&w, x](std::uint64_t u) {
                return w(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u ^ x));
            };
        },
        [&](std::uint64_t idx, double c) { out[idx] = c; });
    return out;
}

/// All 4^n orthonormal coefficients of the projector |phi><phi|.
inline std::vector<double> pauli_coefficients(const Statevector &phi) {
    const std::size_t n = phi.num_qubits();
    if (n > 12) {
        throw std::invalid_argument("pauli_coefficients: enumeration limited to n <= 12");
    }
    const ComplexVector &a = phi.amplitudes();
    std::vector<double> out(std::size_t{1} << (2 * n));
    detail::for_each_coefficient(
        n,
        [&](std::uint64_t x) {
            return [&a, x](std::uint64_t u) {
                return a(static_cast<Eigen::Index>(u)) * std::conj(a(static_cast<Eigen::Index>(u ^ x)));
            };
        },
        [&](std::uint64_t idx, double c) { out[idx] = c; });
    return out;
}

/// Power sums of the coefficient vector.
struct CoefficientMoments {
    double sum_squares = 0.0;
    double sum_fourth = 0.0;
};

inline CoefficientMoments coefficient_moments(std::span<const double> coefficients) {
    CoefficientMoments m;
    for (double c : coefficients) {
        const double c2 = c * c;
        m.sum_squares += c2;
        m.sum_fourth += c2 * c2;
    }
    return m;
}

/// ||W||_K = (sum c^4)^{1/4} / ||W||_2. Scale invariant.
inline double k_norm(const CoefficientMoments &m) {
    if (!(m.sum_squares > 0.0)) {
        throw std::invalid_argument("k_norm: zero operator");
    }
    return std::pow(m.sum_fourth, 0.25) / std::sqrt(m.sum_squares);
}

/// Unnormalized kernel (sum c^4)^{1/4}; absolutely homogeneous.
inline double k_norm_kernel(const CoefficientMoments &m) {
    return std::pow(m.sum_fourth, 0.25);
}

inline double k_norm_dense(const ComplexMatrix &w) {
    if (w.rows() > (1 << 8)) {
        throw std::invalid_argument("k_norm_dense: limited to n <= 8");
    }
    const auto c = pauli_coefficients(w);
    return k_norm(coefficient_moments(c));
}

/// K-norm moments of |phi><phi| without storing the 4^n coefficients.
inline CoefficientMoments projector_coefficient_moments(const Statevector &phi) {
    const std::size_t n = phi.num_qubits();
    if (n > 14) {
        throw std::invalid_argument("projector_coefficient_moments: limited to n <= 14");
    }
    const ComplexVector &a = phi.amplitudes();
    CoefficientMoments m;
    detail::for_each_coefficient(
        n,
        [&](std::uint64_t x) {
            return [&a, x](std::uint64_t u) {
                return a(static_cast<Eigen::Index>(u)) * std::conj(a(static_cast<Eigen::Index>(u ^ x)));
            };
        },
        [&](std::uint64_t, double c) {
            const double c2 = c * c;
            m.sum_squares += c2;
            m.sum_fourth += c2 * c2;
        });
    return m;
}

}  // namespace vqalab

#endif  // VQALAB_PAULI_HPP
