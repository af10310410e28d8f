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

// Rician far-field channel statistics seen from a transmitter that only knows
// the position prior of the receiver.
//
// Conventions: a channel is a row vector q (1 x aperture size). Its column
// form c = q^H has the steering structure sqrt(gain) * a(aod) for the LOS part,
// and correlation matrices are R = E[c c^H] = E[q^H q], so that the average
// received power of precoder v through q is v^H R v.

#pragma once

#include "ris_covert/geometry.hpp"
#include "ris_covert/quadrature.hpp"
#include "ris_covert/rng.hpp"
#include "ris_covert/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace ris_covert {

struct QuadratureOrders {
    int angular = 64;    // Gauss-Legendre nodes per panel for the NLOS spread
    int position = 128;  // Gauss-Legendre nodes over the position arc
};

/// a(angle)_m = exp(j (2 pi / lambda) x_m sin(angle)).
inline VectorXc steering_vector(const ArrayGeometry& geometry, double angle) {
    const double k = two_pi / geometry.wavelength;
    const double s = std::sin(angle);
    VectorXc a(geometry.size());
    for (int m = 0; m < geometry.size(); ++m) a(m) = std::polar(1.0, k * geometry.element_x[m] * s);
    return a;
}

/// Conditional LOS mean (column form) for departure angle `aod` and large-scale gain `gain`.
inline VectorXc los_mean(const ArrayGeometry& geometry, const PropagationParams& params, double aod, double gain) {
    return std::sqrt(gain * params.los_weight()) * steering_vector(geometry, aod);
}

/// Conditional LOS mean toward a receiver at `position`.
inline VectorXc los_mean(const Aperture& tx, const PropagationParams& params, const Point3& position) {
    const double gain = params.pathloss(distance(tx.origin, position));
    return los_mean(tx.geometry, params, departure_angle(azimuth(tx.origin, position)), gain);
}

namespace detail {

inline int spread_panels(const ArrayGeometry& geometry, double spread) {
    const auto [lo, hi] = std::minmax_element(geometry.element_x.begin(), geometry.element_x.end());
    const double span = *hi - *lo;
    const double max_phase = two_pi / geometry.wavelength * span * spread;
    // at most ~20 rad of phase excursion per panel keeps half-order rules converged
    return std::max(1, static_cast<int>(std::ceil(max_phase / 20.0)));
}

inline MatrixXc nlos_factor_impl(const ArrayGeometry& geometry, const PropagationParams& params, double aod,
                                 double gain, int order) {
    const double spread = params.angular_spread;
    const int panels = spread_panels(geometry, spread);
    const auto rule = quadrature::composite_gauss_legendre(aod - 0.5 * spread, aod + 0.5 * spread, order, panels);
    const double scale = gain * params.nlos_weight() / spread;
    MatrixXc factor(geometry.size(), static_cast<Eigen::Index>(rule.nodes.size()));
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
        factor.col(static_cast<Eigen::Index>(q)) =
            std::sqrt(scale * rule.weights[q]) * steering_vector(geometry, rule.nodes[q]);
    return factor;
}

}  // namespace detail

/// Square-root factor B (aperture x nodes) of the NLOS correlation, B B^H = Sigma.
///
/// The columns are quadrature-weighted steering vectors, so B g with g i.i.d.
/// CN(0, 1) is an exact draw from CN(0, Sigma).
inline MatrixXc nlos_factor(const ArrayGeometry& geometry, const PropagationParams& params, double aod, double gain,
                            int order = 64) {
    detail::require(params.angular_spread > 0.0, "angular spread must be positive");
    detail::require(order >= 2, "angular quadrature order must be >= 2");
    return detail::nlos_factor_impl(geometry, params, aod, gain, order);
}

/// NLOS correlation Sigma(aod) with entries
/// (gain / ((K + 1) spread)) * integral over the spread of exp(j k (x_i - x_j) sin(phi)) dphi.
///
/// The 1/spread normalization keeps the diagonal at gain / (K + 1).
inline MatrixXc nlos_correlation(const ArrayGeometry& geometry, const PropagationParams& params, double aod,
                                 double gain, int order = 64) {
    const MatrixXc full = nlos_factor(geometry, params, aod, gain, order);
    const MatrixXc half = detail::nlos_factor_impl(geometry, params, aod, gain, std::max(2, order / 2));
    MatrixXc sigma = full * full.adjoint();
    const double reference = gain * params.nlos_weight();
    if (reference > 0.0) {
        const double residual = (sigma - half * half.adjoint()).cwiseAbs().maxCoeff() / reference;
        if (residual > 1e-6)
            throw NumericalIntegrationError("angular-spread quadrature did not converge", residual);
    }
    return sigma;
}

inline MatrixXc nlos_correlation(const Aperture& tx, const PropagationParams& params, const Point3& position,
                                 int order = 64) {
    const double gain = params.pathloss(distance(tx.origin, position));
    return nlos_correlation(tx.geometry, params, departure_angle(azimuth(tx.origin, position)), gain, order);
}

/// Second-order statistics of one link: R, a factor T with T^H T = R, and the mean.
struct ChannelStatistics {
    MatrixXc correlation;
    MatrixXc factor;
    VectorXc mean;

    Eigen::Index size() const { return correlation.rows(); }

    /// Builds the eigen-factor T = D^{1/2} U^H of a Hermitian PSD matrix.
    static ChannelStatistics from_correlation(MatrixXc r) {
        ChannelStatistics s;
        r = 0.5 * (r + r.adjoint()).eval();
        s.correlation = r;
        s.mean = VectorXc::Zero(r.rows());
        if (r.rows() == 0) {
            s.factor = MatrixXc(0, 0);
            return s;
        }
        Eigen::SelfAdjointEigenSolver<MatrixXc> eig(r);
        const VectorXd d = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        s.factor = d.asDiagonal() * eig.eigenvectors().adjoint();
        return s;
    }

    /// Isotropic statistics gain * I (i.i.d. Rayleigh assumption).
    static ChannelStatistics isotropic(Eigen::Index n, double gain) {
        ChannelStatistics s;
        s.correlation = gain * MatrixXc::Identity(n, n);
        s.factor = std::sqrt(gain) * MatrixXc::Identity(n, n);
        s.mean = VectorXc::Zero(n);
        return s;
    }

    /// Mean per-element gain, trace(R) / n.
    double average_gain() const { return size() ? correlation.trace().real() / static_cast<double>(size()) : 0.0; }
};

/// A transmitting aperture plus the propagation law of the link it drives.
struct LinkModel {
    Aperture tx;
    PropagationParams params;
};

/// Position-averaged correlation E_p[K/(K+1) beta(p) a a^H + Sigma(p)] over the
/// arc prior, by Gauss-Legendre quadrature in the arc angle. A zero halfwidth
/// is treated as a point mass.
inline ChannelStatistics position_averaged_stats(const LinkModel& link, const PositionRegion& region,
                                                 QuadratureOrders orders = {}) {
    link.tx.geometry.validate();
    link.params.validate();
    region.validate();
    detail::require(orders.position >= 1, "position quadrature needs at least one sample");
    const int n = link.tx.geometry.size();
    MatrixXc r = MatrixXc::Zero(n, n);

    std::vector<double> angles, weights;
    if (region.angular_halfwidth == 0.0) {
        angles = {region.center_angle};
        weights = {1.0};
    } else {
        const auto& gl = quadrature::gauss_legendre(orders.position);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            angles.push_back(region.center_angle + region.angular_halfwidth * gl.nodes[i]);
            weights.push_back(0.5 * gl.weights[i]);
        }
    }
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const Point3 p = region.at(angles[i]);
        const double gain = link.params.pathloss(distance(link.tx.origin, p));
        const double aod = departure_angle(azimuth(link.tx.origin, p));
        const VectorXc mu = los_mean(link.tx.geometry, link.params, aod, gain);
        r.noalias() += weights[i] * (mu * mu.adjoint());
        if (link.params.nlos_weight() > 0.0)
            r += weights[i] * nlos_correlation(link.tx.geometry, link.params, aod, gain, orders.angular);
    }
    return ChannelStatistics::from_correlation(std::move(r));
}

/// Position-averaged large-scale gain E_p[beta(p)].
inline double position_averaged_gain(const LinkModel& link, const PositionRegion& region, int order = 128) {
    if (region.angular_halfwidth == 0.0) return link.params.pathloss(distance(link.tx.origin, region.at(region.center_angle)));
    const auto& gl = quadrature::gauss_legendre(order);
    double beta = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i)
        beta += 0.5 * gl.weights[i] *
                link.params.pathloss(distance(link.tx.origin, region.at(region.center_angle + region.angular_halfwidth * gl.nodes[i])));
    return beta;
}

struct ChannelRealization {
    RowVectorXc vector;
    Point3 conditioning_position;
};

/// Draws a realization of the link toward a receiver at `position`.
///
/// With `random_los_phase` the LOS term carries an independent uniform phase,
/// so the draw is zero-mean and its correlation is unchanged.
inline RowVectorXc sample_channel_at(const LinkModel& link, const Point3& position, Rng& rng, int angular_order = 64,
                                     bool random_los_phase = true) {
    const double gain = link.params.pathloss(distance(link.tx.origin, position));
    const double aod = departure_angle(azimuth(link.tx.origin, position));
    VectorXc c = los_mean(link.tx.geometry, link.params, aod, gain);
    if (random_los_phase) c *= std::polar(1.0, two_pi * uniform01(rng));
    if (link.params.nlos_weight() > 0.0) {
        const MatrixXc factor = nlos_factor(link.tx.geometry, link.params, aod, gain, angular_order);
        VectorXc g(factor.cols());
        for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = complex_normal(rng);
        c.noalias() += factor * g;
    }
    return c.adjoint();
}

/// Draws a receiver position uniformly on the arc, then the conditional Rician channel.
inline ChannelRealization sample_channel(const LinkModel& link, const PositionRegion& region, Rng& rng,
                                         int angular_order = 64, bool random_los_phase = true) {
    ChannelRealization out;
    out.conditioning_position = region.sample(uniform01(rng));
    out.vector = sample_channel_at(link, out.conditioning_position, rng, angular_order, random_los_phase);
    return out;
}

inline ChannelRealization sample_channel(const LinkModel& link, const PositionRegion& region, std::uint64_t seed) {
    Rng rng = make_stream(seed);
    return sample_channel(link, region, rng);
}

/// v^H (R_direct + Phi^H R_reflected Phi) v.
inline double average_power(const MatrixXc& r_direct, const MatrixXc& r_reflected, const MatrixXc& phi,
                            const VectorXc& v) {
    detail::require_dims(r_direct.rows() == v.size() && r_direct.cols() == v.size(),
                         "direct correlation does not match the precoder length");
    detail::require_dims(phi.cols() == v.size() && phi.rows() == r_reflected.rows() &&
                             r_reflected.rows() == r_reflected.cols(),
                         "reflected correlation / cascade dimensions do not conform");
    double p = (v.adjoint() * r_direct * v)(0).real();
    if (phi.rows() > 0) {
        const VectorXc u = phi * v;
        p += (u.adjoint() * r_reflected * u)(0).real();
    }
    return p;
}

/// |(h + t Phi) v|^2 for row channels h (1 x N) and t (1 x M).
inline double instantaneous_power(const RowVectorXc& h, const RowVectorXc& t, const MatrixXc& phi, const VectorXc& v) {
    detail::require_dims(h.size() == v.size() && phi.cols() == v.size() && t.size() == phi.rows(),
                         "channel / cascade / precoder dimensions do not conform");
    cdouble y = (h * v)(0);
    if (phi.rows() > 0) y += (t * (phi * v))(0);
    return std::norm(y);
}

/// Deterministic LOS transmitter-to-surface matrix (surface x transmitter),
/// sqrt(beta(d)) conj(a_rx(aod at rx)) a_tx(aod at tx)^H with 3-D distance d.
///
/// Row m is the row channel from the transmitter to receive element m.
inline MatrixXc los_matrix(const Aperture& tx, const Aperture& rx, double reference_gain, double pathloss_exponent = 2.0) {
    PropagationParams p;
    p.rice_factor = INFINITY;
    p.pathloss_exponent = pathloss_exponent;
    p.reference_gain = reference_gain;
    p.validate();
    const double beta = p.pathloss(distance(tx.origin, rx.origin));
    const VectorXc a_tx = steering_vector(tx.geometry, departure_angle(azimuth(tx.origin, rx.origin)));
    const VectorXc a_rx = steering_vector(rx.geometry, departure_angle(azimuth(rx.origin, tx.origin)));
    return std::sqrt(beta) * a_rx.conjugate() * a_tx.adjoint();
}

/// Relative check used by tests and `validate`: Hermitian and PSD up to tolerance.
inline bool is_hermitian_psd(const MatrixXc& r, double herm_tol = 1e-12, double eig_tol = 1e-10) {
    if (r.rows() != r.cols()) return false;
    if (r.rows() == 0) return true;
    const double scale = std::max(r.norm(), 1e-300);
    if ((r - r.adjoint()).norm() > herm_tol * scale) return false;
    Eigen::SelfAdjointEigenSolver<MatrixXc> eig(0.5 * (r + r.adjoint()), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff() >= -eig_tol * std::abs(r.trace().real());
}

}  // namespace ris_covert
