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

#ifndef VQALAB_STATS_HPP
#define VQALAB_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace vqalab {

/// Sample statistics with standard errors. Inputs are reduced in index
/// order, so results do not depend on how samples were scheduled.
struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    double se_mean = 0.0;
    double second_moment = 0.0;
    double se_second_moment = 0.0;
    double variance = 0.0;
    double se_variance = 0.0;
};

inline Summary summarize(std::span<const double> xs) {
    Summary s;
    s.count = xs.size();
    if (xs.empty()) {
        return s;
    }
    const double count = static_cast<double>(xs.size());
    double sum = 0.0, sum_sq = 0.0;
    for (double x : xs) {
        sum += x;
        sum_sq += x * x;
    }
    s.mean = sum / count;
    s.second_moment = sum_sq / count;
    if (xs.size() < 2) {
        return s;
    }
    double m2 = 0.0, m4 = 0.0, q2 = 0.0;
    for (double x : xs) {
        const double d = x - s.mean;
        m2 += d * d;
        m4 += d * d * d * d;
        const double e = x * x - s.second_moment;
        q2 += e * e;
    }
    s.variance = m2 / (count - 1.0);
    s.se_mean = std::sqrt(s.variance / count);
    s.se_second_moment = std::sqrt(q2 / (count - 1.0) / count);
    const double central2 = m2 / count;
    const double central4 = m4 / count;
    s.se_variance = std::sqrt(std::max(0.0, central4 - central2 * central2) / count);
    return s;
}

/// Ordinary least-squares slope of y against x.
inline double least_squares_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("least_squares_slope: need at least two paired points");
    }
    const double count = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= count;
    my /= count;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("least_squares_slope: degenerate x values");
    }
    return sxy / sxx;
}

/// Linear-interpolation quantile (type 7) of unsorted data.
inline double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) {
        throw std::invalid_argument("quantile: empty sample");
    }
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, xs.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return xs[lo] + frac * (xs[hi] - xs[lo]);
}

inline double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

}  // namespace vqalab

#endif  // VQALAB_STATS_HPP
