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

#include "ris_covert/ao_optimizer.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace ris_covert;

namespace {

constexpr double lambda_m = speed_of_light / 3.6e9;

const RisHardware& hardware(int h, int v) {
    static std::map<std::pair<int, int>, RisHardware> cache;
    auto it = cache.find({h, v});
    if (it == cache.end()) {
        const ArrayGeometry g = make_planar_array(h, v, 0.5 * lambda_m, 0.75 * lambda_m, lambda_m, 0.46 * lambda_m, lambda_m / 500);
        it = cache.emplace(std::make_pair(h, v), make_mp_hardware(g, 0.46 * lambda_m, lambda_m / 500)).first;
    }
    return it->second;
}

MatrixXc random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c, double scale = 1.0) {
    MatrixXc x(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) x(i, j) = scale * complex_normal(rng);
    return x;
}

ChannelStatistics random_stats(Rng& rng, Eigen::Index n, Eigen::Index rank, double scale) {
    const MatrixXc t = random_matrix(rng, rank, n, scale);
    return ChannelStatistics::from_correlation(t.adjoint() * t);
}

// Random but well-scaled instance: S is scaled so that Delta S is O(1).
DesignInputs random_inputs(Rng& rng, const RisHardware& hw, Eigen::Index n, Eigen::Index willie_rank = -1) {
    const auto m = hw.size();
    DesignInputs in;
    in.bob_direct = random_stats(rng, n, n, 0.3);
    in.willie_direct = random_stats(rng, n, n, 0.3);
    in.bob_reflected = random_stats(rng, m, m, 1.0);
    in.willie_reflected = random_stats(rng, m, willie_rank < 0 ? m : willie_rank, 1.0);
    in.alice_ris = random_matrix(rng, m, n, 30.0 / std::abs(hw.reference_admittance) / std::sqrt(double(m)));
    return in;
}

VectorXc random_unit(Rng& rng, Eigen::Index n) { return random_matrix(rng, n, 1).col(0).normalized(); }

OptimizerState random_state(Rng& rng, const DesignInputs& in, const RisHardware& hw) {
    OptimizerState st;
    st.phases = initial_phases(in.ris_size(), rng());
    st.b = phases_to_reactances(st.phases);
    st.v = random_unit(rng, in.tx_size());
    st.lambda = lambda_update(st.b, st.v, in, hw);
    return st;
}

double ratio_of(const DesignInputs& in, const RisHardware& hw, const VectorXd& b, const VectorXc& v) {
    const PowerBreakdown p = power_breakdown(in, cascade_for(hw, b, in.alice_ris), v);
    return p.bob() / p.willie();
}

}  // namespace

TEST(QuadraticTransform, IdentityAtOptimalLambda) {
    Rng rng = make_stream(1);
    const std::pair<int, int> shapes[] = {{1, 1}, {2, 1}, {2, 2}, {4, 2}, {4, 4}};
    for (int t = 0; t < 200; ++t) {
        const auto [h, v] = shapes[t % 5];
        const RisHardware& hw = hardware(h, v);
        const DesignInputs in = random_inputs(rng, hw, 1 + t % 4);
        const OptimizerState st = random_state(rng, in, hw);
        const double ratio = ratio_of(in, hw, st.b, st.v);
        const double g = quadratic_objective(st.lambda, st.b, st.v, in, hw);
        EXPECT_LE(std::abs(g - ratio) / ratio, 1e-10);
    }
}

TEST(QuadraticTransform, ZeroLambdaAndConcaveScan) {
    Rng rng = make_stream(2);
    const RisHardware& hw = hardware(4, 2);
    const DesignInputs in = random_inputs(rng, hw, 3);
    const OptimizerState st = random_state(rng, in, hw);
    EXPECT_EQ(quadratic_objective(RowVectorXc::Zero(st.lambda.size()), st.b, st.v, in, hw), 0.0);
    const double g1 = quadratic_objective(st.lambda, st.b, st.v, in, hw);
    for (int i = 0; i <= 200; ++i) {
        const double s = 2.0 * i / 200;
        if (i == 100) continue;
        EXPECT_LT(quadratic_objective(s * st.lambda, st.b, st.v, in, hw), g1);
    }
}

TEST(LambdaUpdate, ScalarHandFormula) {
    const RisHardware& hw = hardware(1, 1);
    DesignInputs in;
    in.bob_direct = ChannelStatistics::from_correlation(MatrixXc::Constant(1, 1, 4.0));
    in.willie_direct = ChannelStatistics::from_correlation(MatrixXc::Constant(1, 1, 1.0));
    in.bob_reflected = ChannelStatistics::from_correlation(MatrixXc::Constant(1, 1, 9.0));
    in.willie_reflected = ChannelStatistics::from_correlation(MatrixXc::Constant(1, 1, 2.0));
    in.alice_ris = MatrixXc::Constant(1, 1, cdouble(1e4, 0.0));
    const VectorXd b = VectorXd::Constant(1, 17.0);
    const VectorXc v = VectorXc::Constant(1, cdouble(0.6, 0.8));
    const cdouble phi = reflection_matrix(hw, b)(0, 0) * 1e4;
    const double pw = 1.0 + 2.0 * std::norm(phi);
    const RowVectorXc lam = lambda_update(b, v, in, hw);
    EXPECT_NEAR(std::abs(lam(0) - std::conj(2.0 * v(0)) / pw), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(lam(1) - std::conj(3.0 * phi * v(0)) / pw), 0.0, 1e-14);
}

TEST(LambdaUpdate, StationaryAndOptimal) {
    Rng rng = make_stream(3);
    const RisHardware& hw = hardware(4, 2);
    const DesignInputs in = random_inputs(rng, hw, 4);
    const OptimizerState st = random_state(rng, in, hw);
    const double g0 = quadratic_objective(st.lambda, st.b, st.v, in, hw);
    const double h = 1e-6 * st.lambda.norm();
    for (Eigen::Index i = 0; i < st.lambda.size(); ++i) {
        for (cdouble dir : {cdouble(1, 0), cdouble(0, 1)}) {
            RowVectorXc lp = st.lambda, lm = st.lambda;
            lp(i) += h * dir;
            lm(i) -= h * dir;
            const double fd = (quadratic_objective(lp, st.b, st.v, in, hw) - quadratic_objective(lm, st.b, st.v, in, hw)) / (2 * h);
            EXPECT_LE(std::abs(fd) * st.lambda.norm() / g0, 1e-6);
        }
    }
    for (int t = 0; t < 100; ++t) {
        const RowVectorXc dl = random_matrix(rng, 1, st.lambda.size(), 0.1 * st.lambda.norm()).row(0);
        EXPECT_GE(g0, quadratic_objective(st.lambda + dl, st.b, st.v, in, hw));
    }
}

TEST(LambdaUpdate, DegenerateWarden) {
    Rng rng = make_stream(4);
    const RisHardware& hw = hardware(2, 1);
    DesignInputs in = random_inputs(rng, hw, 2);
    in.willie_direct = ChannelStatistics::from_correlation(MatrixXc::Zero(2, 2));
    in.willie_reflected = ChannelStatistics::from_correlation(MatrixXc::Zero(2, 2));
    EXPECT_THROW(lambda_update(VectorXd::Zero(2), random_unit(rng, 2), in, hw), DegenerateWardenError);
    EXPECT_THROW(allocate_power(0.0, WillieDetector{}), DegenerateWardenError);
}

TEST(RisWorkspace, JacobianMatchesFiniteDifference) {
    Rng rng = make_stream(5);
    for (RisModel kind : {RisModel::MP, RisModel::CT}) {
        const RisHardware hw = kind == RisModel::MP ? hardware(4, 2) : make_ideal_hardware(hardware(4, 2), RisModel::CT);
        const DesignInputs in = random_inputs(rng, hw, 3);
        const OptimizerState st = random_state(rng, in, hw);
        const RisStepWorkspace ws = build_ris_workspace(st, in, hw, load_inverse(hw, st.b));
        const double h = 1e-6;
        for (int m = 0; m < 8; ++m) {
            VectorXd pp = st.phases, pm = st.phases;
            pp(m) += h;
            pm(m) -= h;
            const VectorXc up = cascade_for(hw, phases_to_reactances(pp), in.alice_ris) * st.v;
            const VectorXc um = cascade_for(hw, phases_to_reactances(pm), in.alice_ris) * st.v;
            const VectorXc fd = (up - um) / (2 * h);
            EXPECT_LT((fd - ws.J.col(m)).norm() / ws.J.col(m).norm(), 1e-6);
            // gradient of the surrogate in the phases is 2 p
            OptimizerState sp = st, sm = st;
            sp.b = phases_to_reactances(pp);
            sm.b = phases_to_reactances(pm);
            const double gfd = (quadratic_objective(st.lambda, sp.b, st.v, in, hw) -
                                quadratic_objective(st.lambda, sm.b, st.v, in, hw)) / (2 * h);
            EXPECT_NEAR(gfd, 2.0 * ws.p(m), 1e-6 * (std::abs(gfd) + ws.p.norm()));
        }
        EXPECT_LT((ws.u0 - cascade_for(hw, st.b, in.alice_ris) * st.v).norm(), 1e-12 * ws.u0.norm());
        for (int m = 0; m < 8; ++m) EXPECT_LT(ws.F(m), 0.0);
    }
}

TEST(RisStep, StationaryPointGivesZeroStep) {
    Rng rng = make_stream(6);
    const RisHardware& hw = hardware(2, 2);
    DesignInputs in = random_inputs(rng, hw, 2);
    in.bob_reflected = ChannelStatistics::from_correlation(MatrixXc::Zero(4, 4));
    in.willie_reflected = ChannelStatistics::from_correlation(MatrixXc::Zero(4, 4));
    const OptimizerState st = random_state(rng, in, hw);
    const RisStepResult step = ris_step(st, in, hw, OptimizerConfig{}, 0.1, load_inverse(hw, st.b));
    EXPECT_TRUE(step.accepted);
    EXPECT_EQ(step.b, st.b);
    EXPECT_EQ(step.step_norm, 0.0);
}

TEST(RisStep, ModelOptimalOverFeasibleSet) {
    Rng rng = make_stream(7);
    const RisHardware& hw = hardware(4, 2);
    for (int willie_rank : {8, 2}) {
        const DesignInputs in = random_inputs(rng, hw, 3, willie_rank);
        const OptimizerState st = random_state(rng, in, hw);
        const RisStepWorkspace ws = build_ris_workspace(st, in, hw, load_inverse(hw, st.b));
        const TrustRegionModel model(ws.H, ws.p, ws.theta, 1e-9);
        const double eps = 0.1;
        const TrustRegionSolution sol = model.solve(eps, 1e-12);
        EXPECT_LE(sol.delta.cwiseProduct(ws.theta).norm(), eps * (1 + 1e-9));
        const double best = model_gain(ws, sol.delta);
        for (int t = 0; t < 1000; ++t) {
            VectorXd y(8);
            for (int i = 0; i < 8; ++i) y(i) = 2 * uniform01(rng) - 1;
            y *= eps * std::sqrt(uniform01(rng)) / y.norm();
            EXPECT_GE(best + 1e-14 * std::abs(best), model_gain(ws, y.cwiseQuotient(ws.theta)));
        }
        // multiplier optimality: gradient of the Lagrangian vanishes
        const VectorXd resid = ws.H * sol.delta + sol.multiplier * ws.theta.cwiseAbs2().cwiseProduct(sol.delta) - ws.p;
        EXPECT_LT(resid.norm(), 1e-6 * ws.p.norm());
    }
}

TEST(RisStep, NeumannRemainderBound) {
    Rng rng = make_stream(8);
    const RisHardware& hw = hardware(4, 4);
    OptimizerConfig cfg;
    cfg.record_neumann = true;
    for (int t = 0; t < 20; ++t) {
        const DesignInputs in = random_inputs(rng, hw, 4);
        const OptimizerState st = random_state(rng, in, hw);
        const RisStepResult step = ris_step(st, in, hw, cfg, cfg.trust_radius, load_inverse(hw, st.b));
        ASSERT_TRUE(step.accepted);
        EXPECT_LE(step.neumann_deviation, cfg.trust_radius / (1 - cfg.trust_radius));
        EXPECT_GE(quadratic_objective(st.lambda, step.b, st.v, in, hw), quadratic_objective(st.lambda, st.b, st.v, in, hw));
    }
}

namespace {
DesignInputs identity_precoder_inputs(double bob_scale) {
    DesignInputs in;
    in.bob_direct = ChannelStatistics::from_correlation(bob_scale * bob_scale * MatrixXc::Identity(3, 3));
    in.bob_direct.factor = bob_scale * MatrixXc::Identity(3, 3);
    in.willie_direct = ChannelStatistics::isotropic(3, 1.0);
    in.bob_reflected = ChannelStatistics::from_correlation(MatrixXc(0, 0));
    in.willie_reflected = ChannelStatistics::from_correlation(MatrixXc(0, 0));
    in.alice_ris = MatrixXc(0, 3);
    return in;
}
}  // namespace

TEST(PrecoderStep, InteriorAndProjection) {
    Rng rng = make_stream(9);
    const RowVectorXc lam = random_unit(rng, 3).transpose();
    const OptimizerConfig cfg;
    const PrecoderStepResult inside = precoder_step(lam, identity_precoder_inputs(0.5), MatrixXc(0, 3), VectorXc::Zero(3), cfg);
    EXPECT_EQ(inside.multiplier, 0.0);
    EXPECT_LT((inside.v - 0.5 * lam.adjoint()).norm(), 1e-12);
    const PrecoderStepResult outside = precoder_step(lam, identity_precoder_inputs(3.0), MatrixXc(0, 3), VectorXc::Zero(3), cfg);
    EXPECT_LT((outside.v - lam.adjoint() / lam.norm()).norm(), 1e-8);
    const PrecoderStepResult zero = precoder_step(RowVectorXc::Zero(3), identity_precoder_inputs(3.0), MatrixXc(0, 3), VectorXc::Ones(3), cfg);
    EXPECT_TRUE(zero.degenerate);
    EXPECT_EQ(zero.v, VectorXc::Ones(3));
}

TEST(PrecoderStep, KktResidualAndAscent) {
    Rng rng = make_stream(10);
    const RisHardware& hw = hardware(4, 2);
    const OptimizerConfig cfg;
    for (int t = 0; t < 50; ++t) {
        const DesignInputs in = random_inputs(rng, hw, 4);
        OptimizerState st = random_state(rng, in, hw);
        const double scale = t % 2 ? 1.0 : 30.0;  // exercise both branches
        st.lambda *= scale;
        const MatrixXc phi = cascade_for(hw, st.b, in.alice_ris);
        const PrecoderStepResult r = precoder_step(st.lambda, in, phi, st.v, cfg);
        MatrixXc W = in.willie_direct.correlation + phi.adjoint() * in.willie_reflected.correlation * phi;
        RowVectorXc w = st.lambda.head(4) * in.bob_direct.factor + st.lambda.tail(8) * in.bob_reflected.factor * phi;
        const VectorXc resid = (st.lambda.squaredNorm() * W + r.multiplier * MatrixXc::Identity(4, 4)) * r.v - w.adjoint();
        EXPECT_LE(resid.norm(), 1e-8 * std::max(1.0, w.norm()));
        EXPECT_LE(r.multiplier * std::abs(r.v.norm() - 1.0), 1e-8);
        EXPECT_LE(r.v.norm(), 1.0 + 1e-12);
        EXPECT_GE(quadratic_objective(st.lambda, in, phi, r.v) + 1e-12, quadratic_objective(st.lambda, in, phi, st.v));
    }
}

TEST(Optimize, NoRisMatchesGeneralizedEigenvector) {
    Rng rng = make_stream(11);
    for (int t = 0; t < 10; ++t) {
        DesignInputs in;
        in.bob_direct = random_stats(rng, 4, 4, 1.0);
        in.willie_direct = random_stats(rng, 4, 4, 1.0);
        in.bob_reflected = ChannelStatistics::from_correlation(MatrixXc(0, 0));
        in.willie_reflected = ChannelStatistics::from_correlation(MatrixXc(0, 0));
        in.alice_ris = MatrixXc(0, 4);
        RisHardware none;
        none.impedance_matrix = MatrixXc(0, 0);
        const OptimizerResult res = optimize(in, none, OptimizerConfig{}, 1);
        Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXc> ge(in.bob_direct.correlation, in.willie_direct.correlation);
        const double best = ge.eigenvalues().maxCoeff();
        EXPECT_NEAR(res.state.ratio / best, 1.0, 1e-6);
        EXPECT_TRUE(res.converged);
    }
}

TEST(Optimize, DeterministicAndMonotone) {
    Rng rng = make_stream(12);
    const RisHardware& hw = hardware(4, 4);
    const DesignInputs in = random_inputs(rng, hw, 4);
    const OptimizerResult a = optimize(in, hw, OptimizerConfig{}, 42);
    const OptimizerResult b = optimize(in, hw, OptimizerConfig{}, 42);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) EXPECT_EQ(a.trace[i].ratio, b.trace[i].ratio);
    EXPECT_EQ(a.state.b, b.state.b);
    for (std::size_t i = 1; i < a.trace.size(); ++i)
        EXPECT_GE(a.trace[i].ratio, a.trace[i - 1].ratio * (1 - 1e-9));
    EXPECT_LE(a.state.v.norm(), 1.0 + 1e-12);
    // the trace decomposition sums to the reported powers
    const TraceRecord& first = a.trace.front();
    EXPECT_NEAR(first.ratio, first.power.bob() / first.power.willie(), 1e-12 * first.ratio);
}

TEST(Optimize, ImprovesOverInitializationForManySeeds) {
    Rng rng = make_stream(13);
    const RisHardware& hw = hardware(4, 4);
    OptimizerConfig cfg;
    cfg.max_iters = 200;
    int converged = 0;
    for (int seed = 0; seed < 100; ++seed) {
        const DesignInputs in = random_inputs(rng, hw, 4);
        const OptimizerResult r = optimize(in, hw, cfg, seed);
        EXPECT_GE(r.state.ratio, r.trace.front().ratio);
        converged += r.converged;
    }
    RecordProperty("converged_of_100", converged);
}

TEST(AllocatePower, BudgetAndCap) {
    WillieDetector det;
    det.uncertainty = 2.0;
    det.reference_noise = 1.0;
    det.covert_slack = 0.05 / std::log(2.0);  // makes Q_max = 0.05
    EXPECT_NEAR(covert_budget(det), 0.05, 1e-15);
    EXPECT_NEAR(allocate_power(0.1, det), 0.5, 1e-14);
    EXPECT_NEAR(allocate_power(0.1, det, 0.3), 0.3, 1e-15);
    for (double pw : {1e-6, 0.02, 3.0, 400.0}) EXPECT_NEAR(allocate_power(pw, det) * pw, covert_budget(det), 1e-9 * covert_budget(det));
}
