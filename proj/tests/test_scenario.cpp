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

#include "ris_covert/scenario.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>

using namespace ris_covert;

namespace {

// Small arrays keep model construction and optimization fast.
Scenario small_scenario(int id, int ris_h = 4, int ris_v = 2) {
    Scenario s = build_scenario(id);
    s.alice_h = 2, s.alice_v = 1;
    s.ris_h = ris_h, s.ris_v = ris_v;
    calibrate_bob_noise(s);
    return s;
}

const ScenarioModel& small_model() {
    static const ScenarioModel m = make_model(small_scenario(1));
    return m;
}

OptimizerConfig short_config(int iters = 60) {
    OptimizerConfig c;
    c.max_iters = iters;
    return c;
}

}  // namespace

TEST(BuildScenario, TableRows) {
    const Scenario s1 = build_scenario(1);
    EXPECT_DOUBLE_EQ(s1.alice_angle, 3 * pi / 4);
    EXPECT_DOUBLE_EQ(s1.bob_center, pi / 8);
    EXPECT_DOUBLE_EQ(s1.willie_center, 3 * pi / 8);
    EXPECT_DOUBLE_EQ(s1.alice_distance, 30.0);
    EXPECT_DOUBLE_EQ(s1.willie_distance, 30.0);
    EXPECT_DOUBLE_EQ(2 * s1.willie_halfwidth, pi / 4);
    const Scenario s4 = build_scenario(4);
    EXPECT_DOUBLE_EQ(s4.alice_angle, 3 * pi / 4);
    EXPECT_DOUBLE_EQ(s4.bob_center, pi / 8);
    EXPECT_DOUBLE_EQ(s4.willie_center, pi / 4);
    EXPECT_DOUBLE_EQ(s4.alice_distance, 40.0);
    EXPECT_DOUBLE_EQ(s4.willie_distance, 21.0);
    EXPECT_DOUBLE_EQ(2 * s4.willie_halfwidth, pi / 16);
    EXPECT_DOUBLE_EQ(build_scenario(3).bob_distance, 45.0);
    for (int id : {1, 2, 4}) EXPECT_DOUBLE_EQ(build_scenario(id).bob_distance, 30.0);
}

TEST(BuildScenario, HardwareAndPropagationDefaults) {
    const Scenario s = build_scenario(2, true);
    EXPECT_DOUBLE_EQ(s.carrier, 3.6e9);
    EXPECT_EQ(s.ris_h * s.ris_v, 128);
    EXPECT_EQ(s.alice_h * s.alice_v, 16);
    EXPECT_DOUBLE_EQ(s.direct.rice_factor, 1.0);
    EXPECT_DOUBLE_EQ(s.direct.pathloss_exponent, 3.5);
    EXPECT_DOUBLE_EQ(s.direct.angular_spread, pi / 6);
    EXPECT_DOUBLE_EQ(s.reflected.rice_factor, 10.0);
    EXPECT_DOUBLE_EQ(s.reflected.pathloss_exponent, 2.0);
    EXPECT_DOUBLE_EQ(s.reflected.angular_spread, pi / 64);
    EXPECT_DOUBLE_EQ(2 * s.bob_halfwidth, pi / 64);
    EXPECT_DOUBLE_EQ(s.ris_height, 5.0);
    EXPECT_DOUBLE_EQ(s.node_height, 3.0);
    EXPECT_DOUBLE_EQ(s.dipole_length, 0.46);
    EXPECT_DOUBLE_EQ(s.dipole_radius, 1.0 / 500);
    const Scenario d = build_scenario(2);
    EXPECT_EQ(d.ris_h * d.ris_v, 64);
    EXPECT_EQ(d.alice_h * d.alice_v, 8);
    EXPECT_THROW(build_scenario(0), PreconditionError);
    EXPECT_THROW(build_scenario(5), PreconditionError);
}

TEST(BuildScenario, NoiseGivesTwentyDbDirectSnrInScenarioOne) {
    for (int id : {1, 3}) {
        const Scenario s = build_scenario(id);
        Scenario ref = build_scenario(1);
        const Deployment d = make_deployment(ref);
        const MatrixXc r = position_averaged_stats(d.alice_bob, d.bob).correlation;
        // power iteration as an independent largest-eigenvalue oracle
        VectorXc x = VectorXc::Ones(r.rows());
        double lam = 0.0;
        for (int i = 0; i < 500; ++i) {
            const VectorXc y = r * x;
            lam = y.norm() / x.norm();
            x = y.normalized();
        }
        EXPECT_NEAR(lam / s.noise_bob, 100.0, 1e-6);
        EXPECT_EQ(s.detector.reference_noise, s.noise_bob);
    }
}

TEST(Deployment, NodesOnTheirArcs) {
    const Scenario s = build_scenario(3);
    const Deployment d = make_deployment(s);
    EXPECT_NEAR(std::hypot(d.alice.origin.x, d.alice.origin.y), 50.0, 1e-12);
    EXPECT_NEAR(std::atan2(d.alice.origin.y, d.alice.origin.x), 3 * pi / 4, 1e-12);
    EXPECT_DOUBLE_EQ(d.alice.origin.z, 3.0);
    EXPECT_DOUBLE_EQ(d.ris.origin.z, 5.0);
    EXPECT_DOUBLE_EQ(d.bob.distance, 45.0);
    EXPECT_DOUBLE_EQ(d.willie.angular_halfwidth, pi / 8);
}

TEST(Methods, NamesRoundTrip) {
    for (Method m : all_methods()) EXPECT_EQ(parse_method(method_name(m)), m);
    EXPECT_EQ(parse_method("w/o-ris"), Method::NoRIS);
    try {
        parse_method("mmse");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "methods");
    }
}

TEST(PrepareMethod, SoaUsesIsotropicWardenStatistics) {
    const ScenarioModel& mdl = small_model();
    const MethodSetup ms = prepare_method(mdl, Method::SoA_MP);
    const auto n = mdl.truth.tx_size();
    const double beta = mdl.truth.willie_direct.correlation.trace().real() / n;
    EXPECT_NEAR(ms.inputs.willie_direct.correlation.trace().real(), n * beta, 1e-12 * n * beta);
    EXPECT_LT((ms.inputs.willie_direct.correlation - beta * MatrixXc::Identity(n, n)).norm(), 1e-12 * beta);
    // Bob statistics and hardware stay those of the truth
    EXPECT_EQ(ms.inputs.bob_direct.correlation, mdl.truth.bob_direct.correlation);
    EXPECT_EQ(ms.hardware.model, RisModel::MP);
}

TEST(PrepareMethod, CtOptimizesIdealHardwareButEvaluatesMp) {
    const ScenarioModel& mdl = small_model();
    const MethodSetup ms = prepare_method(mdl, Method::sCSI_CT);
    const auto m = mdl.truth.ris_size();
    EXPECT_EQ(ms.hardware.model, RisModel::CT);
    EXPECT_EQ(ms.hardware.parasitic_resistance, 0.0);
    EXPECT_EQ(ms.hardware.impedance_matrix, MatrixXc::Identity(m, m) * ms.hardware.reference_impedance);
    const VectorXd b = phases_to_reactances(initial_phases(m, 3));
    const MatrixXc phi = evaluation_cascade(mdl, Method::sCSI_CT, b);
    EXPECT_EQ(phi, cascade_for(mdl.hardware, b, mdl.truth.alice_ris));
}

TEST(PrepareMethod, NoRisHasNoSurfacePath) {
    const ScenarioModel& mdl = small_model();
    const MethodSetup ms = prepare_method(mdl, Method::NoRIS);
    EXPECT_EQ(ms.inputs.ris_size(), 0);
    const MethodDesign d = design_method(mdl, Method::NoRIS, short_config(), 1);
    EXPECT_EQ(d.phi_eval.norm(), 0.0);
    EXPECT_EQ(d.true_power.bob_ris, 0.0);
    EXPECT_EQ(d.true_power.willie_ris, 0.0);
}

TEST(Evaluate, TightBudgetAndMonotoneRates) {
    const ScenarioModel& mdl = small_model();
    EvaluationOptions opt;
    opt.trials = 200;
    opt.willie_draws = 2000;
    opt.optimizer = short_config();
    const std::vector<double> grid{0.01, 0.05, 0.1, 0.3};
    for (const MethodEvaluation& e : evaluate_methods(mdl, {all_methods().begin(), all_methods().end()}, grid, opt)) {
        double prev = -1.0;
        for (const RateCurvePoint& p : e.curve) {
            WillieDetector det = mdl.scenario.detector;
            det.covert_slack = p.delta;
            EXPECT_NEAR(p.p_a * p.p_w, covert_budget(det), 1e-12 * covert_budget(det));
            EXPECT_GE(p.mean_rate, prev);
            EXPECT_GE(p.mean_rate, 0.0);
            EXPECT_FALSE(p.infeasible);
            EXPECT_GE(p.empirical_dep, 1.0 - p.delta - 3.0 * p.empirical_dep_se);
            prev = p.mean_rate;
        }
    }
}

TEST(Evaluate, PowerCapBindsWhenSmall) {
    Scenario s = small_scenario(1);
    s.p_max = 1e-30;
    const ScenarioModel mdl = make_model(s);
    EvaluationOptions opt;
    opt.trials = 20;
    opt.willie_draws = 100;
    opt.optimizer = short_config(10);
    const MethodEvaluation e = evaluate_method(mdl, Method::NoRIS, {0.05}, opt);
    EXPECT_EQ(e.curve[0].p_a, 1e-30);
    EXPECT_LT(e.curve[0].p_a * e.curve[0].p_w, covert_budget(s.detector));
    EXPECT_NEAR(e.curve[0].mean_rate, 0.0, 1e-12);
}

TEST(Evaluate, DeterministicLosMatchesClosedForm) {
    Scenario s = small_scenario(2);
    s.direct.rice_factor = INFINITY;
    s.willie_halfwidth = 0.0;
    s.bob_halfwidth = 0.0;
    const ScenarioModel mdl = make_model(s);
    EvaluationOptions opt;
    opt.trials = 25;
    opt.willie_draws = 50;
    opt.optimizer = short_config(20);
    const MethodEvaluation e = evaluate_method(mdl, Method::NoRIS, {0.05}, opt);
    const Deployment& d = mdl.deployment;
    const VectorXc h = los_mean(d.alice, s.direct, d.bob.at(d.bob.center_angle));
    const double g = std::norm(h.dot(e.design.v));  // |h^H v|^2
    const double expected = std::log2(1.0 + e.curve[0].p_a * g / s.noise_bob);
    EXPECT_NEAR(e.curve[0].mean_rate, expected, 1e-12 * expected);
    EXPECT_NEAR(e.curve[0].ci_halfwidth, 0.0, 1e-9 * expected);
}

TEST(Evaluate, ForwardModelIndependentOfOptimizationModel) {
    const ScenarioModel& mdl = small_model();
    const EvaluationDraws draws = draw_channels(mdl, 50, 200, 9);
    MethodDesign mp = design_method(mdl, Method::sCSI_MP, short_config(20), 4);
    MethodDesign ct = mp;
    ct.method = Method::sCSI_CT;
    ct.phi_eval = evaluation_cascade(mdl, Method::sCSI_CT, ct.b);
    const auto a = evaluate_design(mdl, mp, {0.05, 0.1}, draws);
    const auto b = evaluate_design(mdl, ct, {0.05, 0.1}, draws);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].mean_rate, b[i].mean_rate);
        EXPECT_EQ(a[i].empirical_dep, b[i].empirical_dep);
    }
}

TEST(Evaluate, EmpiricalWardenPowerMatchesStatistics) {
    // zero-mean draws make the sample mean of the warden gain an unbiased estimate of P_W
    const ScenarioModel& mdl = small_model();
    const MethodDesign d = design_method(mdl, Method::sCSI_MP, short_config(20), 2);
    const EvaluationDraws draws = draw_channels(mdl, 10, 40000, 5);
    double sum = 0.0, sum2 = 0.0;
    for (const LinkDraw& w : draws.willie) {
        const double g = received_gain(w, d.phi_eval, d.v);
        sum += g;
        sum2 += g * g;
    }
    const double n = static_cast<double>(draws.willie.size());
    const double mean = sum / n, se = std::sqrt((sum2 / n - mean * mean) / n);
    EXPECT_NEAR(mean, d.true_power.willie(), 4.0 * se);
}

TEST(Evaluate, DeterministicAndThreadInvariant) {
    const ScenarioModel& mdl = small_model();
    EvaluationOptions opt;
    opt.trials = 60;
    opt.willie_draws = 300;
    opt.optimizer = short_config(15);
    const std::vector<Method> methods{Method::sCSI_MP, Method::NoRIS};
    setenv("RIS_COVERT_THREADS", "1", 1);
    const auto a = evaluate_methods(mdl, methods, {0.05}, opt);
    setenv("RIS_COVERT_THREADS", "3", 1);
    const auto b = evaluate_methods(mdl, methods, {0.05}, opt);
    unsetenv("RIS_COVERT_THREADS");
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].design.b, b[i].design.b);
        EXPECT_EQ(a[i].design.v, b[i].design.v);
        EXPECT_EQ(a[i].curve[0].mean_rate, b[i].curve[0].mean_rate);
        EXPECT_EQ(a[i].curve[0].empirical_dep, b[i].curve[0].empirical_dep);
    }
}

TEST(Evaluate, RejectsBadBudgetGrid) {
    for (const std::vector<double>& g : {std::vector<double>{}, {0.0, 0.1}, {0.1, 0.05}, {0.2, 1.0}}) {
        try {
            validate_delta_grid(g);
            FAIL() << "expected ConfigError";
        } catch (const ConfigError& e) {
            EXPECT_EQ(e.field(), "delta");
        }
    }
    EXPECT_THROW(draw_channels(small_model(), 0, 10, 1), PreconditionError);
}

TEST(Pattern, SingleElementIsFlat) {
    ArrayGeometry one = make_planar_array(1, 1, 0.04, 0.06, 0.0833, 0.038, 1.7e-4);
    const MatrixXc delta = MatrixXc::Constant(1, 1, cdouble(0.3, -0.1));
    const MatrixXc s = MatrixXc::Constant(1, 2, cdouble(1.0, 0.5));
    const VectorXc v = VectorXc::Constant(2, 1.0 / std::sqrt(2.0));
    const auto pts = radiation_pattern(one, delta, s, v, angle_grid(91));
    for (const PatternPoint& p : pts) {
        EXPECT_NEAR(p.gain_db, pts.front().gain_db, 1e-9);
        EXPECT_NEAR(p.normalized_db, 0.0, 1e-9);
    }
}

TEST(Pattern, UniformPhasesPeakAtSpecular) {
    const Scenario s = small_scenario(1, 16, 1);
    const ScenarioModel mdl = make_model(s);
    const auto m = mdl.truth.ris_size();
    const RisHardware ct = make_ideal_hardware(mdl.hardware, RisModel::CT);
    const MatrixXc delta = reflection_matrix_ct(ct, VectorXd::Constant(m, 1.3));
    const VectorXc v = VectorXc::Unit(mdl.truth.tx_size(), 0);
    const std::vector<double> grid = angle_grid(3601, 0.01, pi - 0.01);
    const auto pts = radiation_pattern(mdl.deployment.ris.geometry, delta, mdl.truth.alice_ris, v, grid);
    std::size_t best = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (pts[i].gain_db > pts[best].gain_db) best = i;
    // array-factor oracle: the reflected phase front of a uniform surface leaves at pi - theta_A
    EXPECT_NEAR(pts[best].angle, specular_angle(s), 0.01);
    EXPECT_NEAR(specular_angle(s), pi / 4, 1e-15);
    EXPECT_EQ(pts[best].normalized_db, 0.0);
}

TEST(Trace, ComponentsSumAndLengthBound) {
    const ScenarioModel& mdl = small_model();
    const OptimizerConfig cfg = short_config(25);
    const MethodDesign d = design_method(mdl, Method::sCSI_MP, cfg, 7);
    const auto& tr = d.optimization.trace;
    ASSERT_FALSE(tr.empty());
    EXPECT_LE(tr.size(), static_cast<std::size_t>(cfg.max_iters) + 1);
    const MethodSetup ms = prepare_method(mdl, Method::sCSI_MP);
    const VectorXd b0 = phases_to_reactances(initial_phases(ms.inputs.ris_size(), 7)).cwiseMax(-cfg.max_reactance).cwiseMin(cfg.max_reactance);
    const MatrixXc phi0 = cascade_for(ms.hardware, b0, ms.inputs.alice_ris);
    const VectorXc v0 = initial_precoder(ms.inputs);
    const double pb = v0.dot(ms.inputs.bob_direct.correlation * v0).real() +
                      v0.dot(phi0.adjoint() * ms.inputs.bob_reflected.correlation * phi0 * v0).real();
    const double pw = v0.dot(ms.inputs.willie_direct.correlation * v0).real() +
                      v0.dot(phi0.adjoint() * ms.inputs.willie_reflected.correlation * phi0 * v0).real();
    EXPECT_NEAR(tr[0].power.bob(), pb, 1e-12 * pb);
    EXPECT_NEAR(tr[0].power.willie(), pw, 1e-12 * pw);
    EXPECT_EQ(tr[0].power.bob(), tr[0].power.bob_direct + tr[0].power.bob_ris);
    EXPECT_EQ(tr[0].power.willie(), tr[0].power.willie_direct + tr[0].power.willie_ris);
    EXPECT_FALSE(d.optimization.converged);
    EXPECT_EQ(tr.size(), static_cast<std::size_t>(cfg.max_iters) + 1);
}

TEST(Trace, LooseToleranceStopsEarly) {
    const ScenarioModel& mdl = small_model();
    OptimizerConfig cfg = short_config(200);
    cfg.stop_tol = 1e6;  // any step below a megaohm counts as stationary
    const MethodDesign d = design_method(mdl, Method::sCSI_MP, cfg, 7);
    EXPECT_TRUE(d.optimization.converged);
    EXPECT_LT(d.optimization.trace.size(), static_cast<std::size_t>(cfg.max_iters) + 1);
}

// Desk scenario 1, 20 seeds: the stop test on the reactance step must fire
// within 1000 iterations in at least 90% of runs. The failure message also
// reports how far the ratio still moved over the last 500 iterations.
// Runs as its own ctest entry.
TEST(ScenarioConvergence, DeskScenarioOneTwentySeeds) {
    const ScenarioModel mdl = make_model(build_scenario(1));
    const MethodSetup ms = prepare_method(mdl, Method::sCSI_MP);
    std::vector<OptimizerResult> runs(20);
    parallel_for(runs.size(), [&](std::size_t i) { runs[i] = optimize(ms.inputs, ms.hardware, OptimizerConfig{}, i + 1); });
    int converged = 0;
    double worst_late = 0.0;
    for (const OptimizerResult& r : runs) {
        converged += r.converged ? 1 : 0;
        const double mid = r.trace[r.trace.size() / 2].ratio, last = r.trace.back().ratio;
        worst_late = std::max(worst_late, (last - mid) / last);
    }
    EXPECT_GE(converged, 18) << converged << " of 20 runs met the reactance stop test; largest relative ratio gain"
                             << " over the second half of a run " << worst_late;
}
