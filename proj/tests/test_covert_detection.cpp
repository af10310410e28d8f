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

#include "ris_covert/channel_stats.hpp"
#include "ris_covert/covert_detection.hpp"

#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

using namespace ris_covert;

namespace {

WillieDetector detector(double rho, double s, double slack = 0.05) {
    WillieDetector d;
    d.uncertainty = rho;
    d.reference_noise = s;
    d.covert_slack = slack;
    return d;
}

}  // namespace

TEST(NoiseCdf, SupportAndMidpoint) {
    const WillieDetector d = detector(2.0, 1.0);
    EXPECT_EQ(noise_cdf(0.5, d), 0.0);
    EXPECT_NEAR(noise_cdf(1.0, d), 0.5, 1e-15);
    EXPECT_EQ(noise_cdf(2.0, d), 1.0);
    EXPECT_EQ(noise_cdf(-3.0, d), 0.0);
    EXPECT_EQ(noise_cdf(7.0, d), 1.0);
}

TEST(NoiseCdf, MatchesIntegratedDensity) {
    const WillieDetector d = detector(2.0, 1.0);
    const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double x) { return noise_pdf(x, d); }, 0.5, 1.5, 10, 1e-13);
    EXPECT_NEAR(integral, 0.7924812503605781, 1e-12);
    EXPECT_NEAR(noise_cdf(1.5, d), integral, 1e-12);
}

TEST(NoiseCdf, ValidDistribution) {
    const WillieDetector d = detector(3.7, 0.2);
    double prev = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double x = 1.0 * i / 2000;
        const double f = noise_cdf(x, d);
        EXPECT_GE(f, prev);
        EXPECT_GE(f, 0.0);
        EXPECT_LE(f, 1.0);
        prev = f;
    }
}

TEST(NoiseCdf, NoUncertaintyIsStep) {
    const WillieDetector d = detector(1.0, 1.0);
    EXPECT_EQ(noise_cdf(0.999, d), 0.0);
    EXPECT_EQ(noise_cdf(1.0, d), 1.0);
    EXPECT_EQ(min_dep(0.0, d), 1.0);
    EXPECT_EQ(min_dep(1e-6, d), 0.0);
    EXPECT_EQ(covert_budget(d), 0.0);
}

TEST(Dep, HandValues) {
    const WillieDetector d = detector(2.0, 1.0);
    for (double g : {0.0, 0.5, 1.0, 1.7, 3.0}) EXPECT_NEAR(dep(g, 0.0, d), 1.0, 1e-15);
    EXPECT_NEAR(dep(0.5, 0.5, d), 1.0, 1e-15);
    EXPECT_NEAR(dep(1.0, 0.5, d), 0.5, 1e-15);
}

TEST(OptimalThreshold, ClosedFormAndSweep) {
    const WillieDetector d = detector(2.0, 1.0);
    EXPECT_NEAR(optimal_threshold(0.0, d), 0.5, 1e-15);
    EXPECT_NEAR(optimal_threshold(1.5, d), 2.0, 1e-15);
    EXPECT_NEAR(optimal_threshold(5.0, d), 2.0, 1e-15);
    for (double x : {0.05, 0.3, 0.9, 1.4}) {
        const double best = dep(optimal_threshold(x, d), x, d);
        for (int i = 0; i <= 1000; ++i) {
            const double g = -0.5 + 4.0 * i / 1000;
            EXPECT_LE(best, dep(g, x, d) + 1e-15);
        }
    }
}

TEST(MinDep, HandValuesAndThresholdIdentity) {
    const WillieDetector d = detector(2.0, 1.0);
    EXPECT_EQ(min_dep(0.0, d), 1.0);
    EXPECT_NEAR(min_dep(1.5, d), 0.0, 1e-15);
    EXPECT_NEAR(min_dep(0.5, d), 0.5, 1e-15);
    const WillieDetector e = detector(3.1, 0.7);
    double prev = 1.0;
    for (int i = 0; i <= 5000; ++i) {
        const double x = 3.0 * i / 5000;
        const double z = min_dep(x, e);
        EXPECT_NEAR(z, dep(optimal_threshold(x, e), x, e), 1e-10);
        EXPECT_LE(z, prev + 1e-15);
        prev = z;
    }
    EXPECT_EQ(min_dep(0.7 * (3.1 - 1 / 3.1), e), 0.0);
}

TEST(ApproxMinDep, TaylorRegimeAndBound) {
    const WillieDetector d = detector(2.0, 1.0);
    EXPECT_EQ(approx_min_dep(0.0, d), 1.0);
    // the gap is the second-order remainder rho^2 x^2 / (4 ln rho), about 1.44e-8 here
    const double x0 = 1e-4;
    const double gap = min_dep(x0, d) - approx_min_dep(x0, d);
    EXPECT_NEAR(gap, 4.0 * x0 * x0 / (4.0 * std::log(2.0)), 1e-11);
    EXPECT_LT(gap, 2e-8);
    Rng rng = make_stream(1);
    for (int i = 0; i < 10000; ++i) {
        const WillieDetector e = detector(1.0 + 9.0 * uniform01(rng), 0.01 + 10.0 * uniform01(rng));
        const double x = e.reference_noise * (e.uncertainty - 1.0 / e.uncertainty) * uniform01(rng);
        if (min_dep(x, e) > 0.0) {
            ASSERT_LE(approx_min_dep(x, e), min_dep(x, e) + 1e-15);
        }
    }
}

TEST(CovertBudget, HandValues) {
    EXPECT_NEAR(covert_budget(detector(2.0, 1.0, 0.05)), 0.05 * std::log(2.0), 1e-15);
    EXPECT_NEAR(covert_budget(detector(2.0, 1.0, 1e-12)), 0.0, 1e-12);
    WillieDetector unit_coefficient = detector(2.0, 1.0, 0.05);
    unit_coefficient.budget_coefficient = 1.0;
    EXPECT_NEAR(covert_budget(unit_coefficient), 0.025 * std::log(2.0), 1e-15);
    EXPECT_THROW(covert_budget(detector(0.5, 1.0)), PreconditionError);
    EXPECT_THROW(covert_budget(detector(2.0, 1.0, 1.0)), PreconditionError);
}

TEST(CovertBudget, AverageDepAtBudget) {
    const WillieDetector d = detector(2.0, 1.0, 0.05);
    EXPECT_NEAR(average_dep(covert_budget(d), d), 0.95, 1e-15);
    // averaged linear bound over exponential warden gains with mean P_W
    Rng rng = make_stream(99);
    const double pw = 0.3, pa = covert_budget(d) / pw;
    const int n = 100000;
    double acc = 0.0, acc2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double mu = pw * std::norm(complex_normal(rng));
        const double z = approx_min_dep(pa * mu, d);
        acc += z;
        acc2 += z * z;
    }
    const double mean = acc / n, se = std::sqrt((acc2 / n - mean * mean) / n);
    EXPECT_NEAR(mean, 0.95, 1.96 * se + 1e-12);
}
