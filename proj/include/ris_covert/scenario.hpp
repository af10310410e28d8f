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

// Reference deployments, the four compared design methods and their Monte
// Carlo evaluation (ergodic rate under the covert budget, empirical warden
// DEP, radiation patterns).

#pragma once

#include "ris_covert/ao_optimizer.hpp"
#include "ris_covert/channel_stats.hpp"
#include "ris_covert/covert_detection.hpp"
#include "ris_covert/parallel.hpp"
#include "ris_covert/ris_multiport.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace ris_covert {

struct Scenario {
    int id = 0;
    double alice_angle = 0.0;      // azimuth of Alice seen from the RIS
    double bob_center = 0.0;
    double willie_center = 0.0;
    double alice_distance = 30.0;  // planar distances from the RIS
    double willie_distance = 30.0;
    double bob_distance = 30.0;
    double willie_halfwidth = 0.0;
    double bob_halfwidth = pi / 128;
    double ris_height = 5.0;
    double node_height = 3.0;
    double carrier = 3.6e9;

    int alice_h = 4, alice_v = 2;  // Alice UPA
    int ris_h = 16, ris_v = 4;     // RIS UPA
    double spacing_h = 0.5;        // in wavelengths
    double spacing_v = 0.75;
    double dipole_length = 0.46;   // in wavelengths
    double dipole_radius = 1.0 / 500;
    double reference_impedance = 50.0;
    double parasitic_resistance = 0.1;

    PropagationParams direct;      // reference_gain filled by build_scenario
    PropagationParams reflected;
    WillieDetector detector;       // covert_slack is overridden per delta
    double noise_bob = 0.0;        // filled by build_scenario unless overridden
    double p_max = INFINITY;

    double wavelength() const { return speed_of_light / carrier; }

    void validate() const {
        for (double a : {alice_angle, bob_center, willie_center})
            detail::require(a > 0.0 && a < pi, "scenario angles must lie in (0, pi)");
        for (double d : {alice_distance, willie_distance, bob_distance})
            detail::require(d > 0.0, "scenario distances must be positive");
        detail::require(willie_halfwidth >= 0.0 && bob_halfwidth >= 0.0, "halfwidths must be >= 0");
        detail::require(carrier > 0.0, "carrier must be positive");
        detail::require(alice_h >= 1 && alice_v >= 1 && ris_h >= 0 && ris_v >= 0, "array sizes must be positive");
        detail::require(noise_bob > 0.0, "Bob noise power must be positive");
        detail::require(p_max > 0.0, "power cap must be positive");
        direct.validate();
        reflected.validate();
    }
};

/// Table row: alice, bob, willie angles, d_A, d_W, full Willie width.
struct ScenarioRow {
    double alice, bob, willie, d_a, d_w, willie_width, d_b;
};

inline const std::array<ScenarioRow, 4>& scenario_table() {
    static const std::array<ScenarioRow, 4> rows{{
        {3 * pi / 4, pi / 8, 3 * pi / 8, 30.0, 30.0, pi / 4, 30.0},
        {pi / 2, pi / 8, pi / 4, 30.0, 30.0, pi / 8, 30.0},
        {3 * pi / 4, 7 * pi / 16, pi / 8, 50.0, 30.0, pi / 4, 45.0},
        {3 * pi / 4, pi / 8, pi / 4, 40.0, 21.0, pi / 16, 30.0},
    }};
    return rows;
}

/// Extra power gain of links that end on the surface, R_rad * G_dipole / |Y0|
/// (ohm^2). It converts the ohm-valued surface channels so that t Delta S is
/// on the same normalized scale as the direct channels.
inline double surface_link_scale(cdouble node_self_impedance, cdouble y0) {
    return node_self_impedance.real() * 1.64 / std::abs(y0);
}

namespace detail {

inline cdouble node_self_impedance(const Scenario& s) {
    const double lam = s.wavelength();
    return dipole_self_impedance(s.dipole_length * lam, s.dipole_radius * lam, lam);
}

inline void fill_defaults(Scenario& s) {
    const double lam = s.wavelength();
    s.direct.rice_factor = 1.0;
    s.direct.pathloss_exponent = 3.5;
    s.direct.angular_spread = pi / 6;
    s.direct.reference_gain = free_space_reference_gain(lam);
    s.reflected.rice_factor = 10.0;
    s.reflected.pathloss_exponent = 2.0;
    s.reflected.angular_spread = pi / 64;
    const cdouble zs = node_self_impedance(s);
    const cdouble y0 = reference_admittance(s.reference_impedance, zs, zs);
    s.reflected.reference_gain = free_space_reference_gain(lam) * surface_link_scale(zs, y0);
}

}  // namespace detail

// ---- deployment geometry ----------------------------------------------------------

struct Deployment {
    Aperture alice;
    Aperture ris;
    PositionRegion bob;
    PositionRegion willie;
    LinkModel alice_bob, alice_willie, ris_bob, ris_willie;
};

inline Deployment make_deployment(const Scenario& s) {
    const double lam = s.wavelength();
    Deployment d;
    d.ris.origin = {0.0, 0.0, s.ris_height};
    if (s.ris_h > 0 && s.ris_v > 0)
        d.ris.geometry = make_planar_array(s.ris_h, s.ris_v, s.spacing_h * lam, s.spacing_v * lam, lam,
                                           s.dipole_length * lam, s.dipole_radius * lam);
    d.alice.geometry = make_planar_array(s.alice_h, s.alice_v, s.spacing_h * lam, s.spacing_v * lam, lam,
                                         s.dipole_length * lam, s.dipole_radius * lam);
    d.alice.origin = polar_point(d.ris.origin, s.alice_distance, s.alice_angle, s.node_height);
    d.bob = {d.ris.origin, s.bob_center, s.bob_halfwidth, s.bob_distance, s.node_height};
    d.willie = {d.ris.origin, s.willie_center, s.willie_halfwidth, s.willie_distance, s.node_height};
    d.alice_bob = {d.alice, s.direct};
    d.alice_willie = {d.alice, s.direct};
    d.ris_bob = {d.ris, s.reflected};
    d.ris_willie = {d.ris, s.reflected};
    return d;
}

/// Sets the Bob noise floor so that the unconstrained direct-link SNR of the
/// scenario-1 deployment is 20 dB at unit power, using the array sizes and
/// propagation parameters of `s`. The warden reference noise follows.
inline void calibrate_bob_noise(Scenario& s) {
    Scenario ref = s;
    const ScenarioRow& r1 = scenario_table()[0];
    ref.alice_angle = r1.alice, ref.bob_center = r1.bob, ref.alice_distance = r1.d_a, ref.bob_distance = r1.d_b;
    const Deployment d = make_deployment(ref);
    const ChannelStatistics rb = position_averaged_stats(d.alice_bob, d.bob);
    Eigen::SelfAdjointEigenSolver<MatrixXc> eig(rb.correlation, Eigen::EigenvaluesOnly);
    s.noise_bob = eig.eigenvalues().maxCoeff() / 100.0;
    s.detector.reference_noise = s.noise_bob;
}

/// Table defaults merged with the hardware / propagation defaults.
inline Scenario build_scenario(int id, bool full_scale = false) {
    detail::require(id >= 1 && id <= 4, "scenario id must be 1..4");
    const ScenarioRow& row = scenario_table()[id - 1];
    Scenario s;
    s.id = id;
    s.alice_angle = row.alice;
    s.bob_center = row.bob;
    s.willie_center = row.willie;
    s.alice_distance = row.d_a;
    s.willie_distance = row.d_w;
    s.bob_distance = row.d_b;
    s.willie_halfwidth = 0.5 * row.willie_width;
    if (full_scale) {
        s.alice_h = 8, s.alice_v = 2;
        s.ris_h = 32, s.ris_v = 4;
    }
    detail::fill_defaults(s);
    s.detector.uncertainty = 2.0;
    calibrate_bob_noise(s);
    return s;
}

// ---- statistics and methods -------------------------------------------------------

enum class Method { sCSI_MP, sCSI_CT, SoA_MP, NoRIS };

inline const std::array<Method, 4>& all_methods() {
    static const std::array<Method, 4> m{Method::sCSI_MP, Method::sCSI_CT, Method::SoA_MP, Method::NoRIS};
    return m;
}

inline std::string method_name(Method m) {
    switch (m) {
        case Method::sCSI_MP: return "scsi-mp";
        case Method::sCSI_CT: return "scsi-ct";
        case Method::SoA_MP: return "soa-mp";
        case Method::NoRIS: return "no-ris";
    }
    return "?";
}

inline Method parse_method(const std::string& s) {
    for (Method m : all_methods())
        if (method_name(m) == s) return m;
    if (s == "wo-ris" || s == "w/o-ris") return Method::NoRIS;
    throw ConfigError("methods", "unknown method '" + s + "' (expected scsi-mp, scsi-ct, soa-mp, no-ris)");
}

inline bool uses_ris(Method m) { return m != Method::NoRIS; }

/// Everything computed once per scenario: geometry, MP hardware, S and the
/// true position-averaged statistics of the four links.
struct ScenarioModel {
    Scenario scenario;
    Deployment deployment;
    RisHardware hardware;  // MP, used for every evaluation
    DesignInputs truth;
};

inline ScenarioModel make_model(const Scenario& s, QuadratureOrders orders = {}) {
    s.validate();
    ScenarioModel mdl;
    mdl.scenario = s;
    mdl.deployment = make_deployment(s);
    const Deployment& d = mdl.deployment;
    const double lam = s.wavelength();
    const auto m = d.ris.geometry.size();
    if (m > 0) {
        mdl.hardware = make_mp_hardware(d.ris.geometry, s.dipole_length * lam, s.dipole_radius * lam,
                                        s.reference_impedance, s.parasitic_resistance);
        mdl.truth.alice_ris = los_matrix(d.alice, d.ris, s.reflected.reference_gain, s.reflected.pathloss_exponent);
        mdl.truth.bob_reflected = position_averaged_stats(d.ris_bob, d.bob, orders);
        mdl.truth.willie_reflected = position_averaged_stats(d.ris_willie, d.willie, orders);
    } else {
        mdl.hardware.impedance_matrix = MatrixXc(0, 0);
        mdl.truth.alice_ris = MatrixXc(0, d.alice.geometry.size());
        mdl.truth.bob_reflected = mdl.truth.willie_reflected = ChannelStatistics::from_correlation(MatrixXc(0, 0));
    }
    mdl.truth.bob_direct = position_averaged_stats(d.alice_bob, d.bob, orders);
    mdl.truth.willie_direct = position_averaged_stats(d.alice_willie, d.willie, orders);
    return mdl;
}

/// Design inputs and optimization hardware of one method.
struct MethodSetup {
    Method method;
    DesignInputs inputs;
    RisHardware hardware;
};

inline MethodSetup prepare_method(const ScenarioModel& mdl, Method method) {
    MethodSetup ms{method, mdl.truth, mdl.hardware};
    switch (method) {
        case Method::sCSI_MP: break;
        case Method::sCSI_CT: ms.hardware = make_ideal_hardware(mdl.hardware, RisModel::CT); break;
        case Method::SoA_MP:
            ms.inputs.willie_direct = ChannelStatistics::isotropic(mdl.truth.willie_direct.size(), mdl.truth.willie_direct.average_gain());
            ms.inputs.willie_reflected =
                ChannelStatistics::isotropic(mdl.truth.willie_reflected.size(), mdl.truth.willie_reflected.average_gain());
            break;
        case Method::NoRIS: {
            const auto n = mdl.truth.tx_size();
            ms.inputs.alice_ris = MatrixXc(0, n);
            ms.inputs.bob_reflected = ms.inputs.willie_reflected = ChannelStatistics::from_correlation(MatrixXc(0, 0));
            ms.hardware = RisHardware{};
            ms.hardware.impedance_matrix = MatrixXc(0, 0);
            break;
        }
    }
    return ms;
}

/// Design (b, v) of a method and the cascade it realizes under the MP forward model.
struct MethodDesign {
    Method method;
    OptimizerResult optimization;
    VectorXd b;        // empty without RIS
    VectorXc v;
    MatrixXc phi_eval; // MP evaluation cascade, M x N (zero for no-ris)
    PowerBreakdown true_power;  // true statistics, MP forward model
};

inline MatrixXc evaluation_cascade(const ScenarioModel& mdl, Method method, const VectorXd& b) {
    if (!uses_ris(method) || mdl.truth.ris_size() == 0) return MatrixXc::Zero(mdl.truth.ris_size(), mdl.truth.tx_size());
    return cascade_for(mdl.hardware, b, mdl.truth.alice_ris);
}

inline MethodDesign design_method(const ScenarioModel& mdl, Method method, const OptimizerConfig& cfg,
                                  std::uint64_t seed) {
    const MethodSetup ms = prepare_method(mdl, method);
    MethodDesign out;
    out.method = method;
    out.optimization = optimize(ms.inputs, ms.hardware, cfg, seed);
    out.b = out.optimization.state.b;
    out.v = out.optimization.state.v;
    out.phi_eval = evaluation_cascade(mdl, method, out.b);
    out.true_power = power_breakdown(mdl.truth, out.phi_eval, out.v);
    return out;
}

// ---- Monte Carlo evaluation ----------------------------------------------------------

struct RateCurvePoint {
    double delta = 0.0;
    double mean_rate = 0.0;
    double ci_halfwidth = 0.0;
    double p_a = 0.0;
    double p_w = 0.0;
    double empirical_dep = 1.0;
    double empirical_dep_se = 0.0;
    bool infeasible = false;
};

struct MethodEvaluation {
    MethodDesign design;
    std::vector<RateCurvePoint> curve;
};

/// Realized direct and reflected channels of one receiver.
struct LinkDraw {
    RowVectorXc direct;
    RowVectorXc reflected;
};

struct EvaluationDraws {
    std::vector<LinkDraw> bob;
    std::vector<LinkDraw> willie;
};

/// Common random numbers shared by all methods and budgets: trial i of Bob
/// uses stream (seed, 1, i), warden draw i uses stream (seed, 2, i). Both
/// channels of a receiver are conditioned on the same sampled position.
inline EvaluationDraws draw_channels(const ScenarioModel& mdl, int trials, int willie_draws, std::uint64_t seed) {
    detail::require(trials >= 1 && willie_draws >= 1, "trial counts must be >= 1");
    const Deployment& d = mdl.deployment;
    const bool ris = mdl.truth.ris_size() > 0;
    auto draw = [&](const LinkModel& direct, const LinkModel& reflected, const PositionRegion& region, Rng& rng) {
        LinkDraw out;
        const Point3 p = region.sample(uniform01(rng));
        out.direct = sample_channel_at(direct, p, rng);
        out.reflected = ris ? sample_channel_at(reflected, p, rng) : RowVectorXc(0);
        return out;
    };
    EvaluationDraws e;
    e.bob.resize(trials);
    e.willie.resize(willie_draws);
    parallel_for(trials, [&](std::size_t i) {
        Rng rng = make_stream(seed, 1, i);
        e.bob[i] = draw(d.alice_bob, d.ris_bob, d.bob, rng);
    });
    parallel_for(willie_draws, [&](std::size_t i) {
        Rng rng = make_stream(seed, 2, i);
        e.willie[i] = draw(d.alice_willie, d.ris_willie, d.willie, rng);
    });
    return e;
}

inline double received_gain(const LinkDraw& c, const MatrixXc& phi, const VectorXc& v) {
    return instantaneous_power(c.direct, c.reflected, phi, v);
}

/// Rate-vs-budget curve of a finished design over pre-drawn channels.
namespace detail {

// two-pass sample mean and unbiased variance
inline std::pair<double, double> mean_and_variance(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    double sum = 0.0;
    for (double v : x) sum += v;
    const double mean = sum / n;
    if (x.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return {mean, ss / (n - 1)};
}

}  // namespace detail

inline std::vector<RateCurvePoint> evaluate_design(const ScenarioModel& mdl, const MethodDesign& design,
                                                   const std::vector<double>& delta_grid, const EvaluationDraws& draws) {
    const Scenario& s = mdl.scenario;
    const double pw = design.true_power.willie();
    std::vector<double> gb(draws.bob.size()), gw(draws.willie.size());
    for (std::size_t i = 0; i < gb.size(); ++i) gb[i] = received_gain(draws.bob[i], design.phi_eval, design.v);
    for (std::size_t i = 0; i < gw.size(); ++i) gw[i] = received_gain(draws.willie[i], design.phi_eval, design.v);
    std::vector<RateCurvePoint> curve;
    for (double delta : delta_grid) {
        RateCurvePoint pt;
        pt.delta = delta;
        pt.p_w = pw;
        WillieDetector det = s.detector;
        det.covert_slack = delta;
        pt.p_a = allocate_power(pw, det, s.p_max);
        pt.infeasible = !(pt.p_a > 0.0);
        std::vector<double> rates(gb.size()), deps(gw.size());
        for (std::size_t i = 0; i < gb.size(); ++i) rates[i] = std::log2(1.0 + pt.p_a * gb[i] / s.noise_bob);
        for (std::size_t i = 0; i < gw.size(); ++i) deps[i] = min_dep(pt.p_a * gw[i], det);
        const auto [rate_mean, rate_var] = detail::mean_and_variance(rates);
        pt.mean_rate = rate_mean;
        pt.ci_halfwidth = 1.96 * std::sqrt(rate_var / static_cast<double>(rates.size()));
        const auto [dep_mean, dep_var] = detail::mean_and_variance(deps);
        pt.empirical_dep = dep_mean;
        pt.empirical_dep_se = std::sqrt(dep_var / static_cast<double>(deps.size()));
        curve.push_back(pt);
    }
    return curve;
}

inline void validate_delta_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw ConfigError("delta", "at least one budget value is required");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0 && grid[i] < 1.0)) throw ConfigError("delta", "values must lie in (0, 1)");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw ConfigError("delta", "values must be strictly increasing");
    }
}

struct EvaluationOptions {
    int trials = 500;
    int willie_draws = 10000;
    std::uint64_t seed = 1;
    OptimizerConfig optimizer;
};

/// Optimizes each method once and evaluates it on shared channel draws.
inline std::vector<MethodEvaluation> evaluate_methods(const ScenarioModel& mdl, const std::vector<Method>& methods,
                                                      const std::vector<double>& delta_grid,
                                                      const EvaluationOptions& opt) {
    validate_delta_grid(delta_grid);
    const EvaluationDraws draws = draw_channels(mdl, opt.trials, opt.willie_draws, opt.seed);
    std::vector<MethodEvaluation> out(methods.size());
    parallel_for(methods.size(), [&](std::size_t i) {
        out[i].design = design_method(mdl, methods[i], opt.optimizer, opt.seed);
    });
    for (std::size_t i = 0; i < methods.size(); ++i) out[i].curve = evaluate_design(mdl, out[i].design, delta_grid, draws);
    return out;
}

inline MethodEvaluation evaluate_method(const ScenarioModel& mdl, Method method, const std::vector<double>& delta_grid,
                                        const EvaluationOptions& opt) {
    return evaluate_methods(mdl, {method}, delta_grid, opt).front();
}

// ---- radiation pattern -------------------------------------------------------------

struct PatternPoint {
    double angle = 0.0;     // azimuth seen from the RIS
    double gain_db = 0.0;   // 10 log10 |a^H Delta S v|^2
    double normalized_db = 0.0;
};

/// Far-field pattern of the surface for reflection matrix `delta` (already the
/// forward model of interest), precoder v.
inline std::vector<PatternPoint> radiation_pattern(const ArrayGeometry& ris, const MatrixXc& delta, const MatrixXc& s,
                                                   const VectorXc& v, const std::vector<double>& angles) {
    detail::require_dims(delta.rows() == ris.size() && delta.cols() == s.rows() && s.cols() == v.size(),
                         "pattern inputs do not conform");
    const VectorXc field = delta * (s * v);
    std::vector<PatternPoint> pts;
    double peak = -INFINITY;
    for (double az : angles) {
        const cdouble y = steering_vector(ris, departure_angle(az)).dot(field);  // a^H x
        PatternPoint p;
        p.angle = az;
        p.gain_db = 10.0 * std::log10(std::max(std::norm(y), 1e-300));
        peak = std::max(peak, p.gain_db);
        pts.push_back(p);
    }
    for (auto& p : pts) p.normalized_db = p.gain_db - peak;
    return pts;
}

inline std::vector<double> angle_grid(int points, double lo = 0.0, double hi = pi) {
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) g[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
    return g;
}

/// MP-evaluated pattern of a designed configuration.
inline std::vector<PatternPoint> design_pattern(const ScenarioModel& mdl, const MethodDesign& design,
                                                const std::vector<double>& angles) {
    return radiation_pattern(mdl.deployment.ris.geometry, reflection_matrix_mp(mdl.hardware, design.b),
                             mdl.truth.alice_ris, design.v, angles);
}

/// Mirror image of Alice's direction with respect to the surface normal (+y).
inline double specular_angle(const Scenario& s) { return pi - s.alice_angle; }

}  // namespace ris_covert
