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

// Radiometer warden under bounded (log-uniform) noise-power uncertainty.
//
// The warden's noise power is sigma2 = ref * rho^u with u uniform on [-1, 1];
// it compares the received power against a threshold. All powers are linear.

#pragma once

#include "ris_covert/types.hpp"

#include <cmath>
#include <limits>

namespace ris_covert {

struct WillieDetector {
    double uncertainty = 2.0;      // rho >= 1
    double reference_noise = 1.0;  // nominal noise power
    double covert_slack = 0.05;    // delta_min: required average DEP is 1 - delta_min
    // Denominator constant of the averaged linear DEP bound. 2 keeps the
    // pointwise approximation's factor; 1 reproduces the dropped-factor form.
    double budget_coefficient = 2.0;

    void validate() const {
        detail::require(uncertainty >= 1.0, "noise uncertainty rho must be >= 1");
        detail::require(reference_noise > 0.0, "reference noise power must be positive");
        detail::require(covert_slack > 0.0 && covert_slack < 1.0, "covert slack must lie in (0, 1)");
        detail::require(budget_coefficient > 0.0, "budget coefficient must be positive");
    }

    double log_rho() const { return std::log(uncertainty); }
};

/// CDF of the uncertain noise power.
inline double noise_cdf(double x, const WillieDetector& det) {
    const double rho = det.uncertainty, s = det.reference_noise;
    if (rho == 1.0) return x >= s ? 1.0 : 0.0;
    if (x <= s / rho) return 0.0;
    if (x >= s * rho) return 1.0;
    return std::log(x * rho / s) / (2.0 * std::log(rho));
}

/// Density 1 / (2 ln(rho) x) on [ref / rho, ref * rho].
inline double noise_pdf(double x, const WillieDetector& det) {
    const double rho = det.uncertainty, s = det.reference_noise;
    if (rho == 1.0 || x < s / rho || x > s * rho) return 0.0;
    return 1.0 / (2.0 * std::log(rho) * x);
}

/// False alarm plus missed detection at threshold `threshold` when the
/// warden receives `received` (= P_a * mu) on top of the noise.
inline double dep(double threshold, double received, const WillieDetector& det) {
    return 1.0 - noise_cdf(threshold, det) + noise_cdf(threshold - received, det);
}

inline double optimal_threshold(double received, const WillieDetector& det) {
    const double rho = det.uncertainty, s = det.reference_noise;
    return std::min(received + s / rho, s * rho);
}

inline double min_dep(double received, const WillieDetector& det) {
    const double rho = det.uncertainty, s = det.reference_noise;
    if (received <= 0.0) return 1.0;
    if (received >= s * (rho - 1.0 / rho)) return 0.0;
    return 1.0 - 0.5 * std::log1p(rho * received / s) / std::log(rho);
}

/// First-order lower bound 1 - rho P_a mu / (2 ref ln rho).
inline double approx_min_dep(double received, const WillieDetector& det) {
    if (received <= 0.0) return 1.0;
    if (det.uncertainty == 1.0) return -std::numeric_limits<double>::infinity();
    return 1.0 - det.uncertainty * received / (2.0 * det.reference_noise * det.log_rho());
}

/// Average-DEP model in terms of the warden's mean received power P_a * P_W.
inline double average_dep(double received_mean, const WillieDetector& det) {
    if (received_mean <= 0.0) return 1.0;
    if (det.uncertainty == 1.0) return -std::numeric_limits<double>::infinity();
    return 1.0 - det.uncertainty * received_mean / (det.budget_coefficient * det.reference_noise * det.log_rho());
}

/// Largest warden mean received power keeping the average DEP at 1 - delta_min.
inline double covert_budget(const WillieDetector& det) {
    det.validate();
    return det.budget_coefficient * det.covert_slack * det.reference_noise * det.log_rho() / det.uncertainty;
}

}  // namespace ris_covert
