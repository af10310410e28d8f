// SPDX-License-Identifier: Apache-2.0
//
// ris-covert: statistical-CSI design of RIS-aided covert links
// Copyright (C) 2026 The ris-covert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "ris_covert/types.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace ris_covert::quadrature {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

// Legendre polynomial P_n(x) and its derivative by the three-term recurrence.
inline std::pair<double, double> legendre_with_derivative(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    if (n == 0) return {1.0, 0.0};
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

inline Rule compute_gauss_legendre(int n) {
    Rule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre_with_derivative(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = legendre_with_derivative(n, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace detail

/// Gauss-Legendre rule on [-1, 1]. Rules are computed once per order and cached.
inline const Rule& gauss_legendre(int n) {
    ris_covert::detail::require(n >= 1, "Gauss-Legendre order must be >= 1");
    static std::mutex guard;
    static std::map<int, Rule> cache;
    std::lock_guard lock(guard);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
    return it->second;
}

/// Nodes and weights of a composite Gauss-Legendre rule on [a, b] with `panels`
/// equal sub-intervals. Weights sum to (b - a).
inline Rule composite_gauss_legendre(double a, double b, int order, int panels) {
    const Rule& base = gauss_legendre(order);
    Rule out;
    out.nodes.reserve(static_cast<std::size_t>(order) * panels);
    out.weights.reserve(static_cast<std::size_t>(order) * panels);
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double half = 0.5 * width;
        for (int i = 0; i < order; ++i) {
            out.nodes.push_back(lo + half * (base.nodes[i] + 1.0));
            out.weights.push_back(half * base.weights[i]);
        }
    }
    return out;
}

/// Adaptive Gauss-Kronrod integral of a complex-valued integrand, split at the
/// supplied breakpoints. `error_out` receives the relative error estimate.
template <class F>
cdouble integrate_complex(F&& f, std::vector<double> breakpoints, double rel_tol, double* error_out = nullptr) {
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end(),
                                  [](double x, double y) { return std::abs(x - y) < 1e-15; }),
                      breakpoints.end());
    using boost::math::quadrature::gauss_kronrod;
    cdouble total{0.0, 0.0};
    double abs_err = 0.0;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        double err = 0.0;
        total += gauss_kronrod<double, 31>::integrate([&](double x) -> cdouble { return f(x); },
                                                      breakpoints[i], breakpoints[i + 1], 20, rel_tol, &err);
        abs_err += err;
    }
    if (error_out) *error_out = abs_err / std::max(std::abs(total), 1e-300);
    return total;
}

}  // namespace ris_covert::quadrature
