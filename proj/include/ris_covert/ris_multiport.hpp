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

// Multiport network model of a reflecting surface of loaded thin dipoles:
// induced-EMF impedances, the MP / iMP / CT reflection matrices and the
// load phase <-> reactance algebra.

#pragma once

#include "ris_covert/geometry.hpp"
#include "ris_covert/quadrature.hpp"
#include "ris_covert/types.hpp"

#include <Eigen/LU>

#include <cmath>
#include <map>
#include <ostream>
#include <utility>

namespace ris_covert {

// ---- induced-EMF impedances ------------------------------------------------

/// Mutual impedance between two parallel z-oriented dipoles of equal length
/// (sinusoidal current), at planar distance `rho` and vertical center offset
/// `dz`. With rho equal to the wire radius and dz = 0 this is the self
/// impedance. All lengths in meters.
inline cdouble dipole_mutual_impedance(double length, double wavelength, double rho, double dz,
                                       double rel_tol = 1e-8) {
    detail::require(length > 0.0 && wavelength > 0.0, "dipole length and wavelength must be positive");
    const double h = 0.5 * length;
    const double k = two_pi / wavelength;
    const double skh = std::sin(k * h);
    if (std::abs(skh) < 1e-9)
        throw DegenerateGeometryError("dipole length is a multiple of the wavelength; sinusoidal current has no feed");
    if (rho <= 0.0 && std::abs(dz) <= length)
        throw DegenerateGeometryError("coincident or overlapping dipoles");

    const double ckh = std::cos(k * h);
    auto field = [&](double z) -> cdouble {
        const double zz = z + dz;
        const double r1 = std::hypot(rho, zz - h);
        const double r2 = std::hypot(rho, zz + h);
        const double r0 = std::hypot(rho, zz);
        const cdouble e = std::polar(1.0 / r1, -k * r1) + std::polar(1.0 / r2, -k * r2) -
                          2.0 * ckh * std::polar(1.0 / r0, -k * r0);
        return e * std::sin(k * (h - std::abs(z)));
    };
    std::vector<double> breaks{-h, 0.0, h};
    for (double c : {h - dz, -h - dz, -dz})
        if (c > -h && c < h) breaks.push_back(c);
    double err = 0.0;
    const cdouble integral = quadrature::integrate_complex(field, breaks, rel_tol, &err);
    if (!(err <= 1e-6))
        throw NumericalIntegrationError("induced-EMF integral did not converge", err);
    return j_unit * free_space_impedance / (4.0 * pi * skh * skh) * integral;
}

inline cdouble dipole_self_impedance(double length, double radius, double wavelength) {
    detail::require(radius > 0.0 && radius < length, "dipole radius must be positive and below the length");
    return dipole_mutual_impedance(length, wavelength, radius, 0.0);
}

/// Self and mutual impedances of every element pair of the array, Z_SS.
///
/// Pairs at the same planar / vertical offset share one integral.
inline MatrixXc mutual_impedance_matrix(const ArrayGeometry& g) {
    g.validate();
    const int n = g.size();
    const double quantum = g.wavelength * 1e-9;
    std::map<std::pair<long long, long long>, cdouble> cache;
    auto lookup = [&](double rho, double dz) {
        const auto key = std::make_pair(std::llround(rho / quantum), std::llround(std::abs(dz) / quantum));
        auto it = cache.find(key);
        if (it == cache.end()) {
            const bool self = key.first == 0 && key.second == 0;
            const cdouble z = self ? dipole_self_impedance(g.dipole_length, g.dipole_radius, g.wavelength)
                                   : dipole_mutual_impedance(g.dipole_length, g.wavelength, rho, std::abs(dz));
            it = cache.emplace(key, z).first;
        }
        return it->second;
    };
    MatrixXc z(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double rho = std::abs(g.element_x[i] - g.element_x[j]);
            const double dz = g.element_z[i] - g.element_z[j];
            if (i != j && rho < quantum && std::abs(dz) < quantum) throw DegenerateGeometryError("coincident elements");
            z(i, j) = z(j, i) = lookup(rho, dz);
        }
    }
    return z;
}

/// CSV dump (row, col, re, im) of an impedance matrix.
inline void write_impedance_csv(std::ostream& os, const MatrixXc& z) {
    const auto old = os.precision(17);
    os << "row,col,re,im\n";
    for (Eigen::Index i = 0; i < z.rows(); ++i)
        for (Eigen::Index j = 0; j < z.cols(); ++j) os << i << ',' << j << ',' << z(i, j).real() << ',' << z(i, j).imag() << '\n';
    os.precision(old);
}

// ---- hardware description ----------------------------------------------------

enum class RisModel { MP, iMP, CT };

inline const char* to_string(RisModel m) {
    switch (m) {
        case RisModel::MP: return "MP";
        case RisModel::iMP: return "iMP";
        case RisModel::CT: return "CT";
    }
    return "?";
}

/// Y0 = Z0 / ((Z0 + Z_RR)(Z0 + Z_TT)).
inline cdouble reference_admittance(double z0, cdouble z_rr, cdouble z_tt) { return z0 / ((z0 + z_rr) * (z0 + z_tt)); }

struct RisHardware {
    MatrixXc impedance_matrix;   // Z_SS
    double parasitic_resistance = 0.1;
    double reference_impedance = 50.0;
    cdouble self_impedance_rx{0.0, 0.0};
    cdouble self_impedance_tx{0.0, 0.0};
    cdouble reference_admittance{0.0, 0.0};
    RisModel model = RisModel::MP;

    Eigen::Index size() const { return impedance_matrix.rows(); }

    /// 1 when the load-independent specular term is added explicitly (CT).
    double structural_weight() const { return model == RisModel::CT ? 1.0 : 0.0; }

    /// Ratio Y0 / Z0, the CT reflection amplitude.
    cdouble ct_amplitude() const { return reference_admittance / reference_impedance; }

    void validate() const {
        detail::require(impedance_matrix.rows() == impedance_matrix.cols(), "impedance matrix must be square");
        detail::require(reference_impedance > 0.0, "reference impedance must be positive");
        detail::require(parasitic_resistance >= 0.0, "parasitic resistance must be >= 0");
        if (model == RisModel::MP) detail::require(parasitic_resistance > 0.0, "MP hardware needs r0 > 0");
        const double scale = std::max(impedance_matrix.norm(), 1.0);
        detail::require((impedance_matrix - impedance_matrix.transpose()).norm() <= 1e-12 * scale,
                        "impedance matrix must be complex symmetric");
        for (Eigen::Index i = 0; i < size(); ++i)
            detail::require(impedance_matrix(i, i).real() >= 0.0, "impedance matrix diagonal must be passive");
    }
};

/// Full multiport hardware for the surface `ris`, fed and observed through dipoles
/// shaped like `node_length` x `node_radius`.
inline RisHardware make_mp_hardware(const ArrayGeometry& ris, double node_length, double node_radius, double z0 = 50.0,
                                    double r0 = 0.1) {
    RisHardware hw;
    hw.impedance_matrix = mutual_impedance_matrix(ris);
    hw.parasitic_resistance = r0;
    hw.reference_impedance = z0;
    hw.self_impedance_rx = hw.self_impedance_tx = dipole_self_impedance(node_length, node_radius, ris.wavelength);
    hw.reference_admittance = reference_admittance(z0, hw.self_impedance_rx, hw.self_impedance_tx);
    hw.model = RisModel::MP;
    hw.validate();
    return hw;
}

/// Idealized hardware sharing the terminations of `base`: Z_SS = Z0 I, r0 = 0.
/// `model` selects whether the structural term is included (CT) or not (iMP).
inline RisHardware make_ideal_hardware(const RisHardware& base, RisModel model) {
    detail::require(model != RisModel::MP, "ideal hardware is iMP or CT");
    RisHardware hw = base;
    hw.impedance_matrix = base.reference_impedance * MatrixXc::Identity(base.size(), base.size());
    hw.parasitic_resistance = 0.0;
    hw.model = model;
    return hw;
}

// ---- reactance / phase algebra ------------------------------------------------

/// b = Z0 cot(phi / 2), the reactance whose load reflection coefficient is exp(j phi).
inline double phase_to_reactance(double phase, double z0 = 50.0) {
    detail::require(phase > 0.0 && phase < two_pi, "load phase must lie in (0, 2 pi); phase 0 needs an infinite reactance");
    return z0 / std::tan(0.5 * phase);
}

/// Inverse of phase_to_reactance, returning a phase in (0, 2 pi).
inline double reactance_to_phase(double b, double z0 = 50.0) { return 2.0 * std::atan2(z0, b); }

/// db / dphi = -(b^2 + Z0^2) / (2 Z0).
inline double reactance_phase_derivative(double b, double z0 = 50.0) { return -(b * b + z0 * z0) / (2.0 * z0); }

inline VectorXd phases_to_reactances(const VectorXd& phases, double z0 = 50.0) {
    VectorXd b(phases.size());
    for (Eigen::Index m = 0; m < phases.size(); ++m) b(m) = phase_to_reactance(phases(m), z0);
    return b;
}

inline VectorXd reactances_to_phases(const VectorXd& b, double z0 = 50.0) {
    VectorXd p(b.size());
    for (Eigen::Index m = 0; m < b.size(); ++m) p(m) = reactance_to_phase(b(m), z0);
    return p;
}

// ---- reflection matrices --------------------------------------------------------

/// A = (Z_SS + r0 I + j diag(b))^{-1}, with a reciprocal-condition guard.
inline MatrixXc load_inverse(const RisHardware& hw, const VectorXd& b) {
    detail::require_dims(b.size() == hw.size(), "reactance vector length must match the RIS size");
    MatrixXc z = hw.impedance_matrix;
    z.diagonal().array() += hw.parasitic_resistance;
    z.diagonal() += j_unit * b.cast<cdouble>();
    if (z.rows() == 0) return z;
    Eigen::PartialPivLU<MatrixXc> lu(z);
    const double rc = lu.rcond();
    if (!(rc > 1e-13)) throw IllConditionedHardwareError(rc > 0.0 ? 1.0 / rc : INFINITY);
    return lu.inverse();
}

/// -2 Y0 (Z_SS + r0 I + j diag(b))^{-1}.
inline MatrixXc reflection_matrix_mp(const RisHardware& hw, const VectorXd& b) {
    return -2.0 * hw.reference_admittance * load_inverse(hw, b);
}

/// Diagonal iMP reflection, -2 Y0 / (Z0 + j b_m).
inline MatrixXc reflection_matrix_imp(const RisHardware& hw, const VectorXd& b) {
    detail::require_dims(b.size() == hw.size(), "reactance vector length must match the RIS size");
    MatrixXc d = MatrixXc::Zero(b.size(), b.size());
    for (Eigen::Index m = 0; m < b.size(); ++m) d(m, m) = -2.0 * hw.reference_admittance / (hw.reference_impedance + j_unit * b(m));
    return d;
}

/// Diagonal CT reflection, (Y0 / Z0) exp(j phi_m).
inline MatrixXc reflection_matrix_ct(const RisHardware& hw, const VectorXd& phases) {
    detail::require_dims(phases.size() == hw.size(), "phase vector length must match the RIS size");
    MatrixXc d = MatrixXc::Zero(phases.size(), phases.size());
    for (Eigen::Index m = 0; m < phases.size(); ++m) d(m, m) = hw.ct_amplitude() * std::polar(1.0, phases(m));
    return d;
}

/// Reflection matrix of `hw` at reactances `b`, following its model kind.
/// For ideal kinds the network is diagonal so this reduces to iMP / CT.
inline MatrixXc reflection_matrix(const RisHardware& hw, const VectorXd& b) {
    MatrixXc d = reflection_matrix_mp(hw, b);
    if (hw.model == RisModel::CT) d.diagonal().array() += hw.ct_amplitude();
    return d;
}

/// Partial derivative of the MP reflection matrix with respect to b_m,
/// 2 Y0 A (j e_m e_m^T) A.
inline MatrixXc reflection_sensitivity(const RisHardware& hw, const MatrixXc& a, Eigen::Index m) {
    return 2.0 * j_unit * hw.reference_admittance * (a.col(m) * a.row(m));
}

/// Phi = Delta S.
inline MatrixXc cascade_matrix(const MatrixXc& delta, const MatrixXc& s) {
    detail::require_dims(delta.cols() == s.rows() && delta.rows() == delta.cols(),
                         "reflection matrix must be square and conform with S");
    return delta * s;
}

}  // namespace ris_covert
