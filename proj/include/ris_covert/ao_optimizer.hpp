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

// Alternating maximization of the Bob / Willie average-power ratio over RIS
// reactances and the transmit precoder, via the quadratic transform.
//
// Each outer iteration: refresh the auxiliary vector lambda, take one
// linearized trust-region step on the reactances, then solve the precoder
// subproblem exactly. With lambda fixed both inner steps never decrease the
// surrogate G, and the lambda refresh lifts G back to the ratio, so the ratio
// trace is non-decreasing.

#pragma once

#include "ris_covert/channel_stats.hpp"
#include "ris_covert/covert_detection.hpp"
#include "ris_covert/ris_multiport.hpp"
#include "ris_covert/rng.hpp"
#include "ris_covert/types.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace ris_covert {

/// Second-order statistics the designer sees, plus the Alice-RIS matrix S.
/// RIS-free designs use empty (0 x 0) reflected statistics and a 0 x N S.
struct DesignInputs {
    ChannelStatistics bob_direct;
    ChannelStatistics bob_reflected;
    ChannelStatistics willie_direct;
    ChannelStatistics willie_reflected;
    MatrixXc alice_ris;  // S, M x N

    Eigen::Index tx_size() const { return bob_direct.size(); }
    Eigen::Index ris_size() const { return alice_ris.rows(); }

    void validate() const {
        const auto n = tx_size(), m = ris_size();
        detail::require_dims(alice_ris.cols() == n, "S must have one column per transmit antenna");
        detail::require_dims(willie_direct.size() == n, "direct statistics must match the transmit array");
        detail::require_dims(bob_reflected.size() == m && willie_reflected.size() == m,
                             "reflected statistics must match the RIS size");
        detail::require_dims(bob_direct.factor.cols() == n && bob_reflected.factor.cols() == m,
                             "factor matrices must have one column per element");
    }
};

struct OptimizerConfig {
    double trust_radius = 0.1;      // epsilon, also the cap of the adaptive radius
    double stop_tol = 1e-6;         // eta on ||b_new - b|| in ohms
    int max_iters = 1000;
    double multiplier_tol = 1e-10;  // relative bisection tolerance
    double backtrack_factor = 0.5;
    int max_backtracks = 20;
    double ridge = 1e-9;            // relative (to trace) eigenvalue floor
    double precoder_tol = 1e-10;    // ||v_new - v|| stop when there is no RIS
    double max_reactance = 1e5;     // box |b_m| <= this keeps loads away from phase 0
    bool adaptive_radius = true;    // keep the shrunk radius across iterations
    bool record_neumann = false;    // measure the series remainder of each accepted step

    void validate() const {
        detail::require(trust_radius > 0.0 && trust_radius < 1.0, "trust radius must lie in (0, 1)");
        detail::require(stop_tol > 0.0 && multiplier_tol > 0.0 && ridge > 0.0 && precoder_tol > 0.0,
                        "tolerances must be positive");
        detail::require(max_iters >= 1 && max_backtracks >= 0, "iteration limits must be positive");
        detail::require(backtrack_factor > 0.0 && backtrack_factor < 1.0, "backtrack factor must lie in (0, 1)");
        detail::require(max_reactance > 0.0, "reactance bound must be positive");
    }
};

struct OptimizerState {
    VectorXd b;          // reactances (ohm)
    VectorXd phases;     // matching load phases
    VectorXc v;          // precoder
    RowVectorXc lambda;  // [lambda_1 (N), lambda_2 (M)]
    double ratio = 0.0;
    int iteration = 0;
};

struct PowerBreakdown {
    double bob_direct = 0.0, bob_ris = 0.0, willie_direct = 0.0, willie_ris = 0.0;
    double bob() const { return bob_direct + bob_ris; }
    double willie() const { return willie_direct + willie_ris; }
};

struct TraceRecord {
    int iteration = 0;
    double ratio = 0.0;
    PowerBreakdown power;
    double step_norm = 0.0;  // ||delta|| of the accepted step (phase units)
    double radius = 0.0;     // trust radius of the accepted (or last tried) step
    int backtracks = 0;
    bool accepted = false;
    double neumann_deviation = std::numeric_limits<double>::quiet_NaN();
};

struct OptimizerResult {
    OptimizerState state;
    MatrixXc phi;  // Delta(b) S under the optimization hardware
    PowerBreakdown power;
    bool converged = false;
    int rejected_steps = 0;      // RIS steps that exhausted backtracking
    int degenerate_precoder = 0; // precoder steps skipped because w = 0
    std::vector<TraceRecord> trace;
};

// ---- power forms -------------------------------------------------------------

/// Phi = Delta(b) S for the optimization (or evaluation) hardware.
inline MatrixXc cascade_for(const RisHardware& hw, const VectorXd& b, const MatrixXc& s) {
    if (s.rows() == 0) return MatrixXc(0, s.cols());
    return cascade_matrix(reflection_matrix(hw, b), s);
}

inline PowerBreakdown power_breakdown(const DesignInputs& in, const MatrixXc& phi, const VectorXc& v) {
    PowerBreakdown p;
    p.bob_direct = (v.adjoint() * in.bob_direct.correlation * v)(0).real();
    p.willie_direct = (v.adjoint() * in.willie_direct.correlation * v)(0).real();
    if (phi.rows() > 0) {
        const VectorXc u = phi * v;
        p.bob_ris = (u.adjoint() * in.bob_reflected.correlation * u)(0).real();
        p.willie_ris = (u.adjoint() * in.willie_reflected.correlation * u)(0).real();
    }
    return p;
}

/// Y_B v = [T_hB v; T_tB Phi v].
inline VectorXc stacked_bob(const DesignInputs& in, const MatrixXc& phi, const VectorXc& v) {
    const auto n = in.bob_direct.factor.rows(), m = in.bob_reflected.factor.rows();
    VectorXc y(n + m);
    y.head(n) = in.bob_direct.factor * v;
    if (m > 0) y.tail(m) = in.bob_reflected.factor * (phi * v);
    return y;
}

/// G = 2 Re(lambda Y_B v) - ||lambda||^2 P_W.
inline double quadratic_objective(const RowVectorXc& lambda, const DesignInputs& in, const MatrixXc& phi,
                                  const VectorXc& v) {
    const VectorXc y = stacked_bob(in, phi, v);
    detail::require_dims(lambda.size() == y.size(), "lambda must have N + M entries");
    const double pw = power_breakdown(in, phi, v).willie();
    return 2.0 * (lambda * y)(0).real() - lambda.squaredNorm() * pw;
}

inline double quadratic_objective(const RowVectorXc& lambda, const VectorXd& b, const VectorXc& v,
                                  const DesignInputs& in, const RisHardware& hw) {
    return quadratic_objective(lambda, in, cascade_for(hw, b, in.alice_ris), v);
}

/// lambda* = v^H Y_B^H / P_W.
inline RowVectorXc lambda_update(const DesignInputs& in, const MatrixXc& phi, const VectorXc& v) {
    const double pw = power_breakdown(in, phi, v).willie();
    if (!(pw > 0.0)) throw DegenerateWardenError("warden receives zero average power; the power ratio is undefined");
    return stacked_bob(in, phi, v).adjoint() / pw;
}

inline RowVectorXc lambda_update(const VectorXd& b, const VectorXc& v, const DesignInputs& in, const RisHardware& hw) {
    return lambda_update(in, cascade_for(hw, b, in.alice_ris), v);
}

// ---- trust-region subproblem ---------------------------------------------------

struct TrustRegionSolution {
    VectorXd delta;
    double multiplier = 0.0;
    bool on_boundary = false;
};

namespace detail {

/// Eigen-decomposed form of max_d p^T d - (1/2) ... in scaled variables: the
/// minimizer of (1/2) y^T Hs y - ps^T y on ||y|| <= radius, Hs PSD.
struct ScaledTrustProblem {
    VectorXd eigenvalues;  // clamped at zero below the floor
    MatrixXd eigenvectors;
    VectorXd coeffs;       // Q^T ps
    double floor = 0.0;

    double norm_at(double mu) const {
        double s = 0.0;
        for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
            const double den = eigenvalues(i) + mu;
            if (coeffs(i) == 0.0) continue;
            if (den <= 0.0) return std::numeric_limits<double>::infinity();
            s += (coeffs(i) / den) * (coeffs(i) / den);
        }
        return std::sqrt(s);
    }

    VectorXd solve_at(double mu) const {
        VectorXd c(coeffs.size());
        for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
            const double den = eigenvalues(i) + mu;
            c(i) = coeffs(i) == 0.0 ? 0.0 : coeffs(i) / den;
        }
        return eigenvectors * c;
    }
};

inline double bisect_multiplier(const ScaledTrustProblem& tp, double radius, double hi, double rel_tol) {
    double lo = 0.0;
    for (int it = 0; it < 400 && hi - lo > rel_tol * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (tp.norm_at(mid) > radius ? lo : hi) = mid;
    }
    return hi;  // feasible side
}

}  // namespace detail

/// Pre-factored RIS subproblem: maximize p^T d * 2 - d^T H d subject to
/// sum (theta_m d_m)^2 <= radius^2. The factorization is reused across radii.
class TrustRegionModel {
public:
    TrustRegionModel(const MatrixXd& h, const VectorXd& p, const VectorXd& theta, double ridge) : theta_(theta) {
        const auto m = p.size();
        detail::require_dims(h.rows() == m && h.cols() == m && theta.size() == m, "trust-region model dimensions");
        for (Eigen::Index i = 0; i < m; ++i) detail::require(theta(i) > 0.0, "trust-region weights must be positive");
        const VectorXd inv = theta.cwiseInverse();
        MatrixXd hs = inv.asDiagonal() * h * inv.asDiagonal();
        hs = 0.5 * (hs + hs.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<MatrixXd> eig(hs);
        tp_.eigenvectors = eig.eigenvectors();
        tp_.eigenvalues = eig.eigenvalues();
        tp_.floor = ridge * std::max(hs.trace(), 0.0);
        for (Eigen::Index i = 0; i < m; ++i)
            if (tp_.eigenvalues(i) <= tp_.floor) tp_.eigenvalues(i) = 0.0;
        tp_.coeffs = tp_.eigenvectors.transpose() * inv.cwiseProduct(p);
        const double tiny = 1e-15 * std::max(tp_.coeffs.norm(), 1e-300);
        for (Eigen::Index i = 0; i < m; ++i)
            if (tp_.eigenvalues(i) == 0.0 && std::abs(tp_.coeffs(i)) <= tiny) tp_.coeffs(i) = 0.0;
        pnorm_ = tp_.coeffs.norm();
    }

    TrustRegionSolution solve(double radius, double rel_tol) const {
        TrustRegionSolution s;
        if (pnorm_ == 0.0) {
            s.delta = VectorXd::Zero(theta_.size());
            return s;
        }
        double mu = 0.0;
        if (!(tp_.norm_at(0.0) <= radius)) {
            mu = detail::bisect_multiplier(tp_, radius, pnorm_ / radius, rel_tol);
            s.on_boundary = true;
        }
        s.multiplier = mu;
        s.delta = tp_.solve_at(mu).cwiseQuotient(theta_);
        return s;
    }

private:
    VectorXd theta_;
    detail::ScaledTrustProblem tp_;
    double pnorm_ = 0.0;
};

/// Linearized RIS-step quantities at the current (lambda, b, v).
struct RisStepWorkspace {
    MatrixXc A;      // (Z_SS + r0 I + jB)^{-1}
    VectorXd F;      // db/dphi (negative)
    MatrixXc J;      // column m: d(Phi v)/d(phi_m)
    VectorXc u0;     // Phi v
    VectorXd p;      // half gradient of G in the phase increments
    MatrixXd H;      // curvature of the warden term
    VectorXd theta;  // Neumann weights |F_mm| ||A_m,:||
};

inline RisStepWorkspace build_ris_workspace(const OptimizerState& st, const DesignInputs& in, const RisHardware& hw,
                                            const MatrixXc& a) {
    RisStepWorkspace ws;
    const auto m = in.ris_size(), n = in.tx_size();
    ws.A = a;
    ws.F.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) ws.F(i) = reactance_phase_derivative(st.b(i), hw.reference_impedance);
    const VectorXc sv = in.alice_ris * st.v;
    const VectorXc f = a * sv;  // D v
    ws.u0 = a * sv * (-2.0 * hw.reference_admittance);
    if (hw.structural_weight() != 0.0) ws.u0 += hw.ct_amplitude() * sv;
    VectorXc col_scale(m);
    for (Eigen::Index i = 0; i < m; ++i) col_scale(i) = 2.0 * j_unit * hw.reference_admittance * ws.F(i) * f(i);
    ws.J = a * col_scale.asDiagonal();
    const double l2 = st.lambda.squaredNorm();
    const RowVectorXc lam2 = st.lambda.tail(m);
    const RowVectorXc bob_lin = lam2 * in.bob_reflected.factor * ws.J;
    const RowVectorXc wil_lin = ws.u0.adjoint() * in.willie_reflected.correlation * ws.J;
    ws.p = (bob_lin - l2 * wil_lin).real().transpose();
    ws.H = l2 * (ws.J.adjoint() * in.willie_reflected.correlation * ws.J).real();
    ws.theta.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) ws.theta(i) = std::abs(ws.F(i)) * a.row(i).norm();
    (void)n;
    return ws;
}

namespace detail {

/// Induced 2-norm from the largest eigenvalue of X^H X.
inline double spectral_norm(const MatrixXc& x) {
    if (x.size() == 0) return 0.0;
    const MatrixXc g = x.adjoint() * x;
    Eigen::SelfAdjointEigenSolver<MatrixXc> eig(g, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(eig.eigenvalues().maxCoeff(), 0.0));
}

}  // namespace detail

/// Model increment 2 p^T d - d^T H d of the linearized surrogate.
inline double model_gain(const RisStepWorkspace& ws, const VectorXd& delta) {
    return 2.0 * ws.p.dot(delta) - delta.dot(ws.H * delta);
}

struct RisStepResult {
    VectorXd b;               // accepted reactances (unchanged if rejected)
    MatrixXc A;               // load inverse at the returned b
    bool accepted = false;
    int backtracks = 0;
    double radius = 0.0;      // radius of the returned step
    double step_norm = 0.0;
    double model_gain = 0.0;
    double actual_gain = 0.0;
    bool on_boundary = false;
    double neumann_deviation = std::numeric_limits<double>::quiet_NaN();
};

/// One safeguarded trust-region step on the reactances with lambda and v fixed.
inline RisStepResult ris_step(const OptimizerState& st, const DesignInputs& in, const RisHardware& hw,
                              const OptimizerConfig& cfg, double radius, const MatrixXc& a) {
    RisStepResult out;
    out.b = st.b;
    out.A = a;
    out.radius = radius;
    const RisStepWorkspace ws = build_ris_workspace(st, in, hw, a);
    const TrustRegionModel model(ws.H, ws.p, ws.theta, cfg.ridge);
    const MatrixXc phi0 = cascade_for(hw, st.b, in.alice_ris);
    const double g0 = quadratic_objective(st.lambda, in, phi0, st.v);
    for (int k = 0; k <= cfg.max_backtracks; ++k) {
        const TrustRegionSolution sol = model.solve(radius, cfg.multiplier_tol);
        if (sol.delta.isZero(0.0)) {
            out.accepted = true;  // stationary for the model
            out.radius = radius;
            out.backtracks = k;
            return out;
        }
        const VectorXd b_new =
            (st.b + ws.F.cwiseProduct(sol.delta)).cwiseMax(-cfg.max_reactance).cwiseMin(cfg.max_reactance);
        // the box can only shorten the step, so the trust-region bound still holds
        const VectorXd delta = (b_new - st.b).cwiseQuotient(ws.F);
        const MatrixXc a_new = load_inverse(hw, b_new);
        MatrixXc delta_new = -2.0 * hw.reference_admittance * a_new;
        if (hw.structural_weight() != 0.0) delta_new.diagonal().array() += hw.ct_amplitude();
        const double g1 = quadratic_objective(st.lambda, in, delta_new * in.alice_ris, st.v);
        if (g1 >= g0) {
            out.b = b_new;
            out.A = a_new;
            out.accepted = true;
            out.backtracks = k;
            out.radius = radius;
            out.step_norm = delta.norm();
            out.model_gain = model_gain(ws, delta);
            out.actual_gain = g1 - g0;
            out.on_boundary = sol.on_boundary;
            if (cfg.record_neumann) {
                const VectorXc e = j_unit * (b_new - st.b).cast<cdouble>();
                const MatrixXc first = a - a * e.asDiagonal() * a;
                out.neumann_deviation = detail::spectral_norm(a_new - first) / detail::spectral_norm(a);
            }
            return out;
        }
        radius *= cfg.backtrack_factor;
        out.backtracks = k + 1;
    }
    out.radius = radius;
    return out;  // exhausted: b unchanged
}

// ---- precoder step ------------------------------------------------------------

struct PrecoderStepResult {
    VectorXc v;
    double multiplier = 0.0;
    bool degenerate = false;  // w = 0, previous v returned
};

/// v = (||lambda||^2 W + mu I)^{-1} w^H with W = R_hW + Phi^H R_tW Phi, ||v|| <= 1.
inline PrecoderStepResult precoder_step(const RowVectorXc& lambda, const DesignInputs& in, const MatrixXc& phi,
                                        const VectorXc& v_prev, const OptimizerConfig& cfg) {
    PrecoderStepResult out;
    const auto n = in.tx_size(), m = in.ris_size();
    RowVectorXc w = lambda.head(n) * in.bob_direct.factor;
    MatrixXc W = in.willie_direct.correlation;
    if (m > 0) {
        w += lambda.tail(m) * in.bob_reflected.factor * phi;
        W += phi.adjoint() * in.willie_reflected.correlation * phi;
    }
    if (w.norm() == 0.0) {
        out.v = v_prev;
        out.degenerate = true;
        return out;
    }
    W = 0.5 * (W + W.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXc> eig(lambda.squaredNorm() * W);
    VectorXd ev = eig.eigenvalues();
    const double floor = cfg.ridge * std::max(ev.sum(), 0.0);
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) <= floor) ev(i) = 0.0;
    const VectorXc c = eig.eigenvectors().adjoint() * w.adjoint();
    auto norm_at = [&](double mu) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < c.size(); ++i) {
            if (c(i) == cdouble(0.0)) continue;
            const double den = ev(i) + mu;
            if (den <= 0.0) return std::numeric_limits<double>::infinity();
            s += std::norm(c(i)) / (den * den);
        }
        return std::sqrt(s);
    };
    double mu = 0.0;
    if (!(norm_at(0.0) <= 1.0)) {
        double lo = 0.0, hi = w.norm();
        for (int it = 0; it < 400 && hi - lo > cfg.multiplier_tol * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (norm_at(mid) > 1.0 ? lo : hi) = mid;
        }
        mu = hi;
    }
    VectorXc y(c.size());
    for (Eigen::Index i = 0; i < c.size(); ++i) y(i) = c(i) == cdouble(0.0) ? cdouble(0.0) : c(i) / (ev(i) + mu);
    out.v = eig.eigenvectors() * y;
    out.multiplier = mu;
    return out;
}

// ---- driver --------------------------------------------------------------------

/// Principal eigenvector of R_hB + S^H R_tB S (unit norm).
inline VectorXc initial_precoder(const DesignInputs& in) {
    MatrixXc r = in.bob_direct.correlation;
    if (in.ris_size() > 0) r += in.alice_ris.adjoint() * in.bob_reflected.correlation * in.alice_ris;
    Eigen::SelfAdjointEigenSolver<MatrixXc> eig(0.5 * (r + r.adjoint()));
    VectorXc v = eig.eigenvectors().col(r.rows() - 1);
    // fix the global phase so that the first nonzero entry is real positive
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > 1e-12) {
            v *= std::abs(v(i)) / v(i);
            break;
        }
    return v.normalized();
}

inline VectorXd initial_phases(Eigen::Index m, std::uint64_t seed) {
    Rng rng = make_stream(seed, 0x5eed);
    VectorXd p(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        double u = uniform01(rng);
        while (u == 0.0) u = uniform01(rng);
        p(i) = two_pi * u;
    }
    return p;
}

inline OptimizerResult optimize(const DesignInputs& in, const RisHardware& hw, const OptimizerConfig& cfg,
                                std::uint64_t seed, std::optional<VectorXd> start_phases = std::nullopt) {
    in.validate();
    cfg.validate();
    const auto m = in.ris_size();
    detail::require_dims(hw.size() == m, "hardware size must match the RIS size");
    OptimizerResult res;
    OptimizerState& st = res.state;
    st.phases = start_phases ? *start_phases : initial_phases(m, seed);
    detail::require_dims(st.phases.size() == m, "initial phases must have one entry per RIS element");
    st.b = phases_to_reactances(st.phases, hw.reference_impedance).cwiseMax(-cfg.max_reactance).cwiseMin(cfg.max_reactance);
    st.v = initial_precoder(in);
    MatrixXc a = m > 0 ? load_inverse(hw, st.b) : MatrixXc(0, 0);
    MatrixXc phi = cascade_for(hw, st.b, in.alice_ris);

    auto record = [&](int k, const RisStepResult* step) {
        TraceRecord r;
        r.iteration = k;
        r.power = power_breakdown(in, phi, st.v);
        r.ratio = r.power.bob() / r.power.willie();
        if (step) {
            r.step_norm = step->step_norm;
            r.radius = step->radius;
            r.backtracks = step->backtracks;
            r.accepted = step->accepted;
            r.neumann_deviation = step->neumann_deviation;
        }
        res.trace.push_back(r);
        return r.ratio;
    };
    st.ratio = record(0, nullptr);
    if (!(res.trace.back().power.willie() > 0.0))
        throw DegenerateWardenError("warden receives zero average power at the initial point");

    double radius = cfg.trust_radius;
    for (int k = 1; k <= cfg.max_iters; ++k) {
        st.iteration = k;
        st.lambda = lambda_update(in, phi, st.v);
        RisStepResult step;
        double db = 0.0;
        if (m > 0) {
            step = ris_step(st, in, hw, cfg, cfg.adaptive_radius ? radius : cfg.trust_radius, a);
            if (!step.accepted) ++res.rejected_steps;
            db = (step.b - st.b).norm();
            st.b = step.b;
            a = step.A;
            phi = cascade_for(hw, st.b, in.alice_ris);
            if (cfg.adaptive_radius) {
                radius = step.radius;
                if (step.accepted && step.model_gain > 0.0) {
                    const double agreement = step.actual_gain / step.model_gain;
                    if (agreement > 0.75 && step.on_boundary) radius = std::min(2.0 * radius, cfg.trust_radius);
                    else if (agreement < 0.25) radius *= cfg.backtrack_factor;
                }
                // keep the radius from collapsing below what the stop test can resolve
                radius = std::max(radius, 1e-12 * cfg.trust_radius);
            }
        }
        const PrecoderStepResult pre = precoder_step(st.lambda, in, phi, st.v, cfg);
        if (pre.degenerate) ++res.degenerate_precoder;
        VectorXc v_new = pre.v;
        if (v_new.norm() > 0.0) v_new.normalize();
        const double dv = (v_new - st.v).norm();
        st.v = v_new;
        st.ratio = record(k, m > 0 ? &step : nullptr);
        if (m > 0 ? db <= cfg.stop_tol : dv <= cfg.precoder_tol) {
            res.converged = true;
            break;
        }
    }
    st.phases = reactances_to_phases(st.b, hw.reference_impedance);
    st.lambda = lambda_update(in, phi, st.v);
    res.phi = phi;
    res.power = power_breakdown(in, phi, st.v);
    return res;
}

/// Transmit power meeting the covert budget with equality, capped at p_max.
inline double allocate_power(double willie_power, const WillieDetector& det, double p_max = INFINITY) {
    if (!(willie_power > 0.0)) throw DegenerateWardenError("warden power must be positive to allocate power");
    return std::min(covert_budget(det) / willie_power, p_max);
}

}  // namespace ris_covert
