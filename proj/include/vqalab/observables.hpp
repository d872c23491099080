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

#ifndef VQALAB_OBSERVABLES_HPP
#define VQALAB_OBSERVABLES_HPP

#include <charconv>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vqalab/circuits.hpp"
#include "vqalab/linalg.hpp"
#include "vqalab/pauli.hpp"

namespace vqalab {

/// Observable W. Qubit indices are 0-based in code; the text form
/// ("z:<i>", "proj0:<i>") uses 1-based qubit numbers.
class Observable {
   public:
    enum class Kind { GlobalZero, LocalAverage, Proj0, ZString, Pauli };

    static Observable global_zero(std::size_t n) { return Observable(Kind::GlobalZero, n, 0, {}); }
    static Observable local_average(std::size_t n) { return Observable(Kind::LocalAverage, n, 0, {}); }
    static Observable proj0(std::size_t n, std::size_t qubit) { return Observable(Kind::Proj0, n, qubit, {}); }
    static Observable z(std::size_t n, std::size_t qubit) { return Observable(Kind::ZString, n, qubit, {}); }
    static Observable pauli(const PauliString &p) { return Observable(Kind::Pauli, p.size(), 0, p); }

    /// Parses "global0", "local-avg", "z:<i>", "proj0:<i>", "pauli:<string>";
    /// the qubit may also be written "n" for the last qubit.
    static Observable parse(std::string_view spec, std::size_t n) {
        auto qubit_arg = [&](std::string_view rest) {
            if (rest == "n") return n - 1;
            std::size_t i = 0;
            auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), i);
            if (ec != std::errc() || ptr != rest.data() + rest.size() || i < 1 || i > n) {
                throw std::invalid_argument("observable '" + std::string(spec) + "': qubit must be in 1.." +
                                            std::to_string(n));
            }
            return i - 1;
        };
        if (spec == "global0") return global_zero(n);
        if (spec == "local-avg") return local_average(n);
        if (spec.starts_with("z:")) return z(n, qubit_arg(spec.substr(2)));
        if (spec.starts_with("proj0:")) return proj0(n, qubit_arg(spec.substr(6)));
        if (spec.starts_with("pauli:")) {
            PauliString p = PauliString::parse(spec.substr(6));
            if (p.size() != n) {
                throw std::invalid_argument("observable '" + std::string(spec) + "': length differs from n=" +
                                            std::to_string(n));
            }
            return pauli(p);
        }
        throw std::invalid_argument("unknown observable spec '" + std::string(spec) + "'");
    }

    Kind kind() const { return kind_; }
    std::size_t num_qubits() const { return n_; }
    std::size_t qubit() const { return qubit_; }
    const PauliString &pauli_string() const { return pauli_; }

    std::string spec() const {
        switch (kind_) {
            case Kind::GlobalZero:
                return "global0";
            case Kind::LocalAverage:
                return "local-avg";
            case Kind::Proj0:
                return "proj0:" + std::to_string(qubit_ + 1);
            case Kind::ZString:
                return "z:" + std::to_string(qubit_ + 1);
            case Kind::Pauli:
                return "pauli:" + pauli_.str();
        }
        return "?";
    }

    /// True when W is a tensor product of single-qubit operators.
    bool is_product() const { return kind_ != Kind::LocalAverage; }

    std::vector<Matrix2> product_factors() const {
        if (!is_product()) {
            throw std::invalid_argument("observable " + spec() + " is not a product operator");
        }
        Matrix2 proj = Matrix2::Zero();
        proj(0, 0) = 1.0;
        std::vector<Matrix2> f(n_, Matrix2::Identity());
        switch (kind_) {
            case Kind::GlobalZero:
                for (auto &m : f) m = proj;
                break;
            case Kind::Proj0:
                f[qubit_] = proj;
                break;
            case Kind::ZString:
                f[qubit_] = single_qubit_pauli(PauliOp::Z);
                break;
            case Kind::Pauli:
                for (std::size_t q = 0; q < n_; ++q) f[q] = single_qubit_pauli(pauli_[q]);
                break;
            case Kind::LocalAverage:
                break;
        }
        return f;
    }

    /// ||W||_2^2 = tr(W^2).
    double hilbert_schmidt_norm_squared() const {
        const double n = static_cast<double>(n_);
        switch (kind_) {
            case Kind::GlobalZero:
                return 1.0;
            case Kind::Proj0:
                return std::pow(2.0, n - 1.0);
            case Kind::ZString:
            case Kind::Pauli:
                return std::pow(2.0, n);
            case Kind::LocalAverage:
                // (1/n^2) [n 2^{n-1} + n(n-1) 2^{n-2}]
                return std::pow(2.0, n - 2.0) * (n + 1.0) / n;
        }
        return 0.0;
    }

    ComplexMatrix dense() const {
        if (n_ > 12) {
            throw std::invalid_argument("Observable::dense: limited to n <= 12");
        }
        const std::size_t dim = dimension_of(n_);
        const auto d = static_cast<Eigen::Index>(dim);
        if (kind_ == Kind::Pauli) return pauli_matrix(pauli_);
        ComplexMatrix w = ComplexMatrix::Zero(d, d);
        for (std::size_t u = 0; u < dim; ++u) {
            w(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(u)) = diagonal(u);
        }
        return w;
    }

    /// <psi|W|psi>, evaluated without densifying W.
    double expectation_on(const Statevector &psi) const {
        if (psi.num_qubits() != n_) {
            throw std::invalid_argument("expectation: state has " + std::to_string(psi.num_qubits()) +
                                        " qubits, observable has " + std::to_string(n_));
        }
        if (kind_ == Kind::GlobalZero) return psi.probability(0);
        if (kind_ == Kind::Pauli) return pauli_expectation(psi);
        const ComplexVector &a = psi.amplitudes();
        if (kind_ == Kind::LocalAverage) {
            std::vector<double> p0(n_, 0.0);
            for (std::size_t u = 0; u < psi.dimension(); ++u) {
                const double pu = std::norm(a(static_cast<Eigen::Index>(u)));
                for (std::size_t q = 0; q < n_; ++q) {
                    if (!qubit_bit(u, n_, q)) p0[q] += pu;
                }
            }
            double s = 0.0;
            for (double x : p0) s += x;
            return s / static_cast<double>(n_);
        }
        double acc = 0.0;
        for (std::size_t u = 0; u < psi.dimension(); ++u) {
            acc += diagonal(u) * std::norm(a(static_cast<Eigen::Index>(u)));
        }
        return acc;
    }

   private:
    Observable(Kind kind, std::size_t n, std::size_t qubit, PauliString p)
        : kind_(kind), n_(n), qubit_(qubit), pauli_(std::move(p)) {
        if (n == 0) throw std::invalid_argument("observable on zero qubits");
        if (qubit >= n) throw std::invalid_argument("observable qubit out of range");
    }

    /// Diagonal entry for the diagonal kinds.
    double diagonal(std::uint64_t u) const {
        switch (kind_) {
            case Kind::GlobalZero:
                return u == 0 ? 1.0 : 0.0;
            case Kind::Proj0:
                return qubit_bit(u, n_, qubit_) ? 0.0 : 1.0;
            case Kind::ZString:
                return qubit_bit(u, n_, qubit_) ? -1.0 : 1.0;
            case Kind::LocalAverage: {
                double s = 0.0;
                for (std::size_t q = 0; q < n_; ++q) s += qubit_bit(u, n_, q) ? 0.0 : 1.0;
                return s / static_cast<double>(n_);
            }
            case Kind::Pauli:
                break;
        }
        throw std::logic_error("diagonal: not a diagonal observable");
    }

    double pauli_expectation(const Statevector &psi) const {
        std::uint64_t xmask = 0, zmask = 0;
        int y_count = 0;
        for (std::size_t q = 0; q < n_; ++q) {
            const auto code = static_cast<unsigned>(pauli_[q]);
            const std::uint64_t bit = std::uint64_t{1} << bit_position(n_, q);
            if (code & 1u) xmask |= bit;
            if (code & 2u) zmask |= bit;
            y_count += code == 3u;
        }
        // <psi|P|psi> = i^{|x&z|} sum_v (-1)^{z.v} conj(psi[v^x]) psi[v]
        const ComplexVector &a = psi.amplitudes();
        Complex acc = 0.0;
        for (std::uint64_t v = 0; v < psi.dimension(); ++v) {
            const double sign = (std::popcount(zmask & v) & 1) ? -1.0 : 1.0;
            acc += sign * std::conj(a(static_cast<Eigen::Index>(v ^ xmask))) * a(static_cast<Eigen::Index>(v));
        }
        return (acc * detail::i_power(y_count)).real();
    }

    Kind kind_;
    std::size_t n_;
    std::size_t qubit_;
    PauliString pauli_;
};

/// f(theta) = tr(W C(theta) sigma C(theta)^dag).
inline double expectation(const Statevector &sigma, const Observable &w, const Ansatz &ansatz,
                          std::span<const double> theta) {
    if (w.num_qubits() != ansatz.num_qubits()) {
        throw std::invalid_argument("expectation: observable and ansatz qubit counts differ");
    }
    return w.expectation_on(apply(ansatz, theta, sigma));
}

/// F = |<rho|sigma>|^2.
inline double fidelity(const Statevector &rho, const Statevector &sigma) { return overlap_squared(rho, sigma); }

/// Exact partial derivative by the +-pi/2 shift rule.
inline double parameter_shift_grad(const Statevector &sigma, const Observable &w, const Ansatz &ansatz,
                                   std::span<const double> theta, std::size_t flat_index) {
    ansatz.check_params(theta);
    if (flat_index >= theta.size()) {
        throw std::invalid_argument("parameter_shift_grad: index " + std::to_string(flat_index) + " out of range");
    }
    ParamVector shifted(theta.begin(), theta.end());
    shifted[flat_index] = theta[flat_index] + std::numbers::pi / 2.0;
    const double plus = expectation(sigma, w, ansatz, shifted);
    shifted[flat_index] = theta[flat_index] - std::numbers::pi / 2.0;
    const double minus = expectation(sigma, w, ansatz, shifted);
    return 0.5 * (plus - minus);
}

/// Derivative with respect to parameter q of subcircuit p (1-based p).
inline double parameter_shift_grad(const Statevector &sigma, const Observable &w, const Ansatz &ansatz,
                                   std::span<const double> theta, std::size_t p, std::size_t q) {
    return parameter_shift_grad(sigma, w, ansatz, theta, ansatz.flat_index(p, q));
}

inline std::vector<double> grad(const Statevector &sigma, const Observable &w, const Ansatz &ansatz,
                                std::span<const double> theta) {
    ansatz.check_params(theta);
    std::vector<double> g(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) g[i] = parameter_shift_grad(sigma, w, ansatz, theta, i);
    return g;
}

}  // namespace vqalab

#endif  // VQALAB_OBSERVABLES_HPP
