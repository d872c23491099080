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

#ifndef VQALAB_LINALG_HPP
#define VQALAB_LINALG_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vqalab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;

/// Raised when a dense factorization does not converge.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Largest qubit count for which dense 2^n x 2^n matrices are built.
inline constexpr std::size_t kMaxDenseOperatorQubits = 14;

/// Largest qubit count for statevector simulation.
inline constexpr std::size_t kMaxStatevectorQubits = 24;

// Bit-order convention, used everywhere in the library:
// qubits are indexed 0..n-1 from left to right in string notation, and
// qubit q is bit (n-1-q) of a basis index, so qubit 0 is the most
// significant bit. "|q0 q1 ... q_{n-1}>" reads as a binary number.
inline std::size_t bit_position(std::size_t num_qubits, std::size_t qubit) {
    return num_qubits - 1 - qubit;
}

inline int qubit_bit(std::uint64_t basis_index, std::size_t num_qubits, std::size_t qubit) {
    return static_cast<int>((basis_index >> bit_position(num_qubits, qubit)) & 1u);
}

inline std::size_t dimension_of(std::size_t num_qubits) {
    return std::size_t{1} << num_qubits;
}

/// Returns log2(dim) if dim is a power of two, throws otherwise.
inline std::size_t qubits_of_dimension(std::size_t dim) {
    if (dim == 0 || (dim & (dim - 1)) != 0) {
        throw std::invalid_argument("dimension " + std::to_string(dim) + " is not a power of two");
    }
    std::size_t n = 0;
    while ((std::size_t{1} << n) < dim) {
        ++n;
    }
    return n;
}

inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Sum of absolute values of all entries.
inline double entrywise_one_norm(const ComplexMatrix &a) {
    return a.cwiseAbs().sum();
}

/// Sum of singular values.
inline double trace_norm(const ComplexMatrix &a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("trace_norm: matrix must be square");
    }
    Eigen::BDCSVD<ComplexMatrix> svd(a);
    if (svd.info() != Eigen::Success) {
        throw NumericalError("trace_norm: SVD did not converge");
    }
    return svd.singularValues().sum();
}

inline double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    }
    if (a.size() == 0) {
        return 0.0;
    }
    return (a - b).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix &a, double tol = 1e-12) {
    return a.rows() == a.cols() && max_abs_diff(a, a.adjoint()) < tol;
}

inline bool is_unitary(const ComplexMatrix &u, double tol = 1e-10) {
    if (u.rows() != u.cols()) {
        return false;
    }
    ComplexMatrix id = ComplexMatrix::Identity(u.rows(), u.cols());
    return max_abs_diff(u.adjoint() * u, id) < tol;
}

/// Hermiticity check with a tolerance relative to the largest entry.
inline void require_hermitian(const ComplexMatrix &a, const char *where) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument(std::string(where) + ": matrix must be square");
    }
    double scale = a.size() == 0 ? 1.0 : std::max(1.0, a.cwiseAbs().maxCoeff());
    if (max_abs_diff(a, a.adjoint()) > 1e-10 * scale) {
        throw std::invalid_argument(std::string(where) + ": matrix is not Hermitian");
    }
}

/// Normalized pure state on n qubits.
class Statevector {
   public:
    Statevector() = default;

    static Statevector zero(std::size_t num_qubits) {
        return basis(num_qubits, 0);
    }

    static Statevector basis(std::size_t num_qubits, std::uint64_t index) {
        check_size(num_qubits);
        Statevector s;
        s.n_ = num_qubits;
        s.amps_ = ComplexVector::Zero(static_cast<Eigen::Index>(dimension_of(num_qubits)));
        if (index >= dimension_of(num_qubits)) {
            throw std::invalid_argument("Statevector::basis: index out of range");
        }
        s.amps_(static_cast<Eigen::Index>(index)) = 1.0;
        return s;
    }

    /// Normalizes the given amplitudes; throws on a zero vector.
    static Statevector from_amplitudes(ComplexVector amps) {
        Statevector s;
        s.n_ = qubits_of_dimension(static_cast<std::size_t>(amps.size()));
        check_size(s.n_);
        double norm = amps.norm();
        if (!(norm > 0.0)) {
            throw std::invalid_argument("Statevector: zero vector");
        }
        s.amps_ = amps / norm;
        return s;
    }

    /// Tensor product of single-qubit states, qubit 0 first.
    static Statevector product(const std::vector<Eigen::Vector2cd> &factors) {
        if (factors.empty()) {
            throw std::invalid_argument("Statevector::product: no factors");
        }
        ComplexVector v = factors[0];
        for (std::size_t q = 1; q < factors.size(); ++q) {
            ComplexVector next(v.size() * 2);
            for (Eigen::Index i = 0; i < v.size(); ++i) {
                next(2 * i) = v(i) * factors[q](0);
                next(2 * i + 1) = v(i) * factors[q](1);
            }
            v = std::move(next);
        }
        return from_amplitudes(std::move(v));
    }

    std::size_t num_qubits() const { return n_; }
    std::size_t dimension() const { return static_cast<std::size_t>(amps_.size()); }
    const ComplexVector &amplitudes() const { return amps_; }
    ComplexVector &mutable_amplitudes() { return amps_; }
    Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

    double norm() const { return amps_.norm(); }

    double probability(std::uint64_t index) const {
        return std::norm(amps_(static_cast<Eigen::Index>(index)));
    }

    /// Dense projector |psi><psi|.
    ComplexMatrix density_matrix() const {
        if (n_ > kMaxDenseOperatorQubits) {
            throw std::invalid_argument("density_matrix: too many qubits for dense realization");
        }
        return amps_ * amps_.adjoint();
    }

    /// Applies a 2x2 matrix to one qubit.
    void apply_1q(std::size_t qubit, const Matrix2 &g) {
        const std::size_t stride = std::size_t{1} << bit_position(n_, qubit);
        const std::size_t dim = dimension();
        Complex *a = amps_.data();
        for (std::size_t base = 0; base < dim; base += 2 * stride) {
            for (std::size_t off = 0; off < stride; ++off) {
                const std::size_t i0 = base + off;
                const std::size_t i1 = i0 + stride;
                const Complex x0 = a[i0];
                const Complex x1 = a[i1];
                a[i0] = g(0, 0) * x0 + g(0, 1) * x1;
                a[i1] = g(1, 0) * x0 + g(1, 1) * x1;
            }
        }
    }

    /// Applies a 4x4 matrix to the ordered pair (qa, qb); the local basis
    /// index is 2*bit(qa) + bit(qb).
    void apply_2q(std::size_t qa, std::size_t qb, const Matrix4 &g) {
        if (qa == qb || qa >= n_ || qb >= n_) {
            throw std::invalid_argument("apply_2q: invalid qubit pair");
        }
        const std::uint64_t ma = std::uint64_t{1} << bit_position(n_, qa);
        const std::uint64_t mb = std::uint64_t{1} << bit_position(n_, qb);
        const std::uint64_t dim = dimension();
        Complex *a = amps_.data();
        for (std::uint64_t i = 0; i < dim; ++i) {
            if ((i & ma) || (i & mb)) {
                continue;
            }
            const std::uint64_t idx[4] = {i, i | mb, i | ma, i | ma | mb};
            Complex x[4] = {a[idx[0]], a[idx[1]], a[idx[2]], a[idx[3]]};
            for (int r = 0; r < 4; ++r) {
                a[idx[r]] = g(r, 0) * x[0] + g(r, 1) * x[1] + g(r, 2) * x[2] + g(r, 3) * x[3];
            }
        }
    }

    /// Applies a 2^k x 2^k matrix to the contiguous window [first, first+k).
    void apply_window(std::size_t first, const ComplexMatrix &g) {
        const std::size_t k = qubits_of_dimension(static_cast<std::size_t>(g.rows()));
        if (g.cols() != g.rows() || first + k > n_) {
            throw std::invalid_argument("apply_window: window exceeds register");
        }
        const std::size_t low = n_ - first - k;  // bits below the window
        const std::size_t block = std::size_t{1} << k;
        const std::size_t low_dim = std::size_t{1} << low;
        const std::size_t high_dim = std::size_t{1} << first;
        ComplexVector buf(static_cast<Eigen::Index>(block));
        ComplexVector out(static_cast<Eigen::Index>(block));
        Complex *a = amps_.data();
        for (std::size_t h = 0; h < high_dim; ++h) {
            for (std::size_t l = 0; l < low_dim; ++l) {
                const std::size_t base = (h << (k + low)) | l;
                for (std::size_t j = 0; j < block; ++j) {
                    buf(static_cast<Eigen::Index>(j)) = a[base | (j << low)];
                }
                out.noalias() = g * buf;
                for (std::size_t j = 0; j < block; ++j) {
                    a[base | (j << low)] = out(static_cast<Eigen::Index>(j));
                }
            }
        }
    }

   private:
    static void check_size(std::size_t num_qubits) {
        if (num_qubits == 0 || num_qubits > kMaxStatevectorQubits) {
            throw std::invalid_argument("Statevector: qubit count out of range");
        }
    }

    std::size_t n_ = 0;
    ComplexVector amps_;
};

/// |<a|b>|^2.
inline double overlap_squared(const Statevector &a, const Statevector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("overlap: qubit count mismatch");
    }
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

/// Embeds a 2^k x 2^k matrix on window [first, first+k) of n qubits.
inline ComplexMatrix embed_window(const ComplexMatrix &g, std::size_t first, std::size_t num_qubits) {
    const std::size_t k = qubits_of_dimension(static_cast<std::size_t>(g.rows()));
    if (first + k > num_qubits || num_qubits > kMaxDenseOperatorQubits) {
        throw std::invalid_argument("embed_window: invalid geometry");
    }
    ComplexMatrix left = ComplexMatrix::Identity(1 << first, 1 << first);
    ComplexMatrix right = ComplexMatrix::Identity(1 << (num_qubits - first - k), 1 << (num_qubits - first - k));
    return kron(kron(left, g), right);
}

}  // namespace vqalab

#endif  // VQALAB_LINALG_HPP
