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

#ifndef VQALAB_HAAR_HPP
#define VQALAB_HAAR_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqalab/linalg.hpp"
#include "vqalab/random.hpp"
#include "vqalab/stats.hpp"

namespace vqalab {

/// Haar-distributed unitaries: complex Ginibre matrix, Householder QR,
/// then Q times the phases of diag(R).
class HaarSampler {
   public:
    explicit HaarSampler(std::uint64_t seed) : seed_(seed), rng_(seed) {}

    static HaarSampler for_sample(std::uint64_t base_seed, std::uint64_t sample_index) {
        return HaarSampler(base_seed ^ sample_index);
    }

    std::uint64_t seed() const { return seed_; }
    Rng &rng() { return rng_; }

    ComplexMatrix sample(std::size_t dim) { return sample_with(rng_, dim); }

    static ComplexMatrix sample_with(Rng &rng, std::size_t dim) {
        if (dim < 2) {
            throw std::invalid_argument("sample_haar: dimension must be at least 2");
        }
        const auto d = static_cast<Eigen::Index>(dim);
        ComplexMatrix g(d, d);
        for (Eigen::Index j = 0; j < d; ++j) {
            for (Eigen::Index i = 0; i < d; ++i) {
                g(i, j) = rng.complex_normal();
            }
        }
        Eigen::HouseholderQR<ComplexMatrix> qr(g);
        ComplexMatrix q = qr.householderQ();
        const ComplexMatrix &r = qr.matrixQR();
        for (Eigen::Index j = 0; j < d; ++j) {
            const Complex diag = r(j, j);
            const double mag = std::abs(diag);
            q.col(j) *= mag > 0.0 ? diag / mag : Complex(1.0, 0.0);
        }
        return q;
    }

   private:
    std::uint64_t seed_;
    Rng rng_;
};

inline ComplexMatrix sample_haar(HaarSampler &sampler, std::size_t dim) {
    return sampler.sample(dim);
}

namespace detail {
inline void require_same_square(std::initializer_list<const ComplexMatrix *> ms, const char *where) {
    const ComplexMatrix *first = *ms.begin();
    for (const ComplexMatrix *m : ms) {
        if (m->rows() != m->cols() || m->rows() != first->rows()) {
            throw std::invalid_argument(std::string(where) + ": matrices must be square with equal dimensions");
        }
    }
}
}  // namespace detail

/// Haar average of tr(B U A U^dag): tr(A) tr(B) / N.
inline Complex first_moment_analytic(const ComplexMatrix &a, const ComplexMatrix &b) {
    detail::require_same_square({&a, &b}, "first_moment_analytic");
    return a.trace() * b.trace() / static_cast<double>(a.rows());
}

/// Haar average of tr(B U A U^dag) tr(D U C U^dag).
inline Complex second_moment_analytic(const ComplexMatrix &a, const ComplexMatrix &b, const ComplexMatrix &c,
                                      const ComplexMatrix &d) {
    detail::require_same_square({&a, &b, &c, &d}, "second_moment_analytic");
    const double n = static_cast<double>(a.rows());
    if (n < 2) {
        throw std::invalid_argument("second_moment_analytic: dimension must be at least 2");
    }
    const Complex ta = a.trace(), tb = b.trace(), tc = c.trace(), td = d.trace();
    const Complex tac = (a * c).trace(), tbd = (b * d).trace();
    return (ta * tb * tc * td + tac * tbd) / (n * n - 1.0) - (tac * tb * td + ta * tc * tbd) / (n * (n * n - 1.0));
}

/// Fixed matrices whose moments are compared against Haar values.
struct MomentCase {
    std::string id;
    ComplexMatrix a, b, c, d;  // c, d unused for first moments
};

/// Random Hermitian matrix with Gaussian entries.
inline ComplexMatrix random_hermitian(Rng &rng, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    ComplexMatrix g(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            g(i, j) = rng.complex_normal();
        }
    }
    return (g + g.adjoint()) / 2.0;
}

/// Structured cases (|0><0|, Z on the first qubit) plus random Hermitian ones.
inline std::vector<MomentCase> standard_moment_cases(std::size_t dim, std::size_t random_cases, std::uint64_t seed) {
    ComplexMatrix proj = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    proj(0, 0) = 1.0;
    ComplexMatrix z = ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = dim / 2; i < dim; ++i) {
        z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = -1.0;
    }
    std::vector<MomentCase> cases;
    cases.push_back({"proj0-proj0", proj, proj, proj, proj});
    cases.push_back({"proj0-z1", proj, z, proj, z});
    Rng rng(seed);
    for (std::size_t i = 0; i < random_cases; ++i) {
        MomentCase m{"random-" + std::to_string(i), random_hermitian(rng, dim), random_hermitian(rng, dim),
                     random_hermitian(rng, dim), random_hermitian(rng, dim)};
        cases.push_back(std::move(m));
    }
    return cases;
}

struct MomentEstimate {
    Summary real;
    Summary imag;
};

/// Monte-Carlo moment estimates for every case from one set of samples.
/// `family(rng)` draws one unitary; sample i uses Rng::substream(seed, i).
inline std::vector<MomentEstimate> estimate_moments(const std::function<ComplexMatrix(Rng &)> &family, int moment,
                                                    const std::vector<MomentCase> &cases, std::size_t trials,
                                                    std::uint64_t seed) {
    if (moment != 1 && moment != 2) {
        throw std::invalid_argument("estimate_moments: moment must be 1 or 2");
    }
    std::vector<std::vector<double>> re(cases.size(), std::vector<double>(trials));
    std::vector<std::vector<double>> im(cases.size(), std::vector<double>(trials));
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = Rng::substream(seed, t);
        const ComplexMatrix u = family(rng);
        const ComplexMatrix ud = u.adjoint();
        for (std::size_t i = 0; i < cases.size(); ++i) {
            const MomentCase &mc = cases[i];
            Complex v = (mc.b * u * mc.a * ud).trace();
            if (moment == 2) {
                v *= (mc.d * u * mc.c * ud).trace();
            }
            re[i][t] = v.real();
            im[i][t] = v.imag();
        }
    }
    std::vector<MomentEstimate> out;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        out.push_back({summarize(re[i]), summarize(im[i])});
    }
    return out;
}

/// One row of a design check.
struct DesignRow {
    std::string family;
    std::size_t width = 0;
    std::size_t depth = 0;
    int moment = 1;
    std::string test_id;
    double analytic = 0.0;
    double estimate = 0.0;
    double se = 0.0;
    bool pass = false;

    /// |estimate - analytic| in SE units (infinite when SE is zero and they differ).
    double deviation_se() const {
        const double diff = std::abs(estimate - analytic);
        if (se > 0.0) return diff / se;
        return diff < 1e-12 ? 0.0 : INFINITY;
    }
};

struct DesignReport {
    std::vector<DesignRow> rows;

    double max_deviation_se() const {
        double m = 0.0;
        for (const auto &r : rows) m = std::max(m, r.deviation_se());
        return m;
    }
    bool all_pass() const {
        for (const auto &r : rows)
            if (!r.pass) return false;
        return true;
    }
};

/// Compares parameter-averaged moments of a unitary family with Haar values.
/// A row passes when the estimate lies within `sigmas` standard errors.
inline DesignReport design_check(const std::string &family_name, std::size_t width, std::size_t depth,
                                 const std::function<ComplexMatrix(Rng &)> &family, int moment,
                                 const std::vector<MomentCase> &cases, std::size_t trials, std::uint64_t seed,
                                 double sigmas = 3.0) {
    const auto est = estimate_moments(family, moment, cases, trials, seed);
    DesignReport report;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const MomentCase &mc = cases[i];
        const Complex exact = moment == 1 ? first_moment_analytic(mc.a, mc.b)
                                          : second_moment_analytic(mc.a, mc.b, mc.c, mc.d);
        DesignRow row{family_name, width, depth, moment, mc.id, exact.real(), est[i].real.mean,
                      est[i].real.se_mean, false};
        row.pass = row.deviation_se() <= sigmas;
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace vqalab

#endif  // VQALAB_HAAR_HPP
