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

#include <cmath>
#include <vector>

namespace ris_covert {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline double distance(const Point3& a, const Point3& b) {
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

/// Azimuth of `to` seen from `from`, measured in the xy-plane from the +x axis.
inline double azimuth(const Point3& from, const Point3& to) {
    return std::atan2(to.y - from.y, to.x - from.x);
}

/// Point at polar coordinates (distance, azimuth) around `center` in the xy-plane.
inline Point3 polar_point(const Point3& center, double planar_distance, double azimuth_angle, double height) {
    return {center.x + planar_distance * std::cos(azimuth_angle), center.y + planar_distance * std::sin(azimuth_angle),
            height};
}

/// Departure angle relative to the broadside (+y) of an aperture laid out along x.
///
/// The steering phase of element m is (2 pi / lambda) x_m sin(aod); with
/// aod = azimuth - pi/2 the row channel a(aod)^H carries the physical phase
/// exp(+j k x_m cos(azimuth)) of an exp(-j k r) outgoing wave.
inline double departure_angle(double azimuth_angle) { return azimuth_angle - 0.5 * pi; }

/// Element layout of a uniform planar array of z-oriented thin dipoles.
///
/// Elements are ordered x-fastest: element (ix, iz) has index iz * count_h + ix.
struct ArrayGeometry {
    std::vector<double> element_x;
    std::vector<double> element_z;
    double wavelength = 0.0;
    int count_h = 0;  // elements along x
    int count_v = 0;  // elements along z
    double dipole_length = 0.0;
    double dipole_radius = 0.0;

    int size() const { return static_cast<int>(element_x.size()); }

    void validate() const {
        detail::require(count_h >= 1 && count_v >= 1, "array geometry needs at least one element");
        detail::require(element_x.size() == static_cast<std::size_t>(count_h) * count_v &&
                            element_z.size() == element_x.size(),
                        "array geometry element count must equal count_h * count_v");
        detail::require(wavelength > 0.0, "wavelength must be positive");
        detail::require(dipole_length > 0.0, "dipole length must be positive");
        detail::require(dipole_radius > 0.0 && dipole_radius < dipole_length,
                        "dipole radius must be positive and smaller than the dipole length");
    }
};

/// Centered UPA with spacing dx along x and dz along z.
inline ArrayGeometry make_planar_array(int count_h, int count_v, double dx, double dz, double wavelength,
                                       double dipole_length, double dipole_radius) {
    ArrayGeometry g;
    g.count_h = count_h;
    g.count_v = count_v;
    g.wavelength = wavelength;
    g.dipole_length = dipole_length;
    g.dipole_radius = dipole_radius;
    for (int iz = 0; iz < count_v; ++iz) {
        for (int ix = 0; ix < count_h; ++ix) {
            g.element_x.push_back((ix - 0.5 * (count_h - 1)) * dx);
            g.element_z.push_back((iz - 0.5 * (count_v - 1)) * dz);
        }
    }
    g.validate();
    return g;
}

/// Large-scale propagation description of one link family.
struct PropagationParams {
    double rice_factor = 0.0;         // K >= 0, +inf allowed (pure LOS)
    double pathloss_exponent = 2.0;   // >= 1
    double angular_spread = pi / 6;   // (0, 2 pi]
    double reference_gain = 0.0;      // linear power gain at 1 m

    void validate() const {
        detail::require(rice_factor >= 0.0, "rice factor must be >= 0");
        detail::require(pathloss_exponent >= 1.0, "pathloss exponent must be >= 1");
        detail::require(angular_spread > 0.0 && angular_spread <= two_pi + 1e-12,
                        "angular spread must lie in (0, 2 pi]");
        detail::require(reference_gain > 0.0, "reference gain must be positive");
    }

    double los_weight() const { return std::isinf(rice_factor) ? 1.0 : rice_factor / (rice_factor + 1.0); }
    double nlos_weight() const { return std::isinf(rice_factor) ? 0.0 : 1.0 / (rice_factor + 1.0); }

    double pathloss(double dist) const {
        if (!(dist > 0.0)) throw DegenerateGeometryError("zero transmitter-receiver distance");
        return reference_gain * std::pow(dist, -pathloss_exponent);
    }
};

/// Default reference gain (lambda / 4 pi)^2.
inline double free_space_reference_gain(double wavelength) {
    const double r = wavelength / (4.0 * pi);
    return r * r;
}

/// Uniform-on-arc position prior around a fixed center (the RIS).
struct PositionRegion {
    Point3 center;
    double center_angle = 0.0;       // azimuth of the arc midpoint
    double angular_halfwidth = 0.0;  // >= 0
    double distance = 1.0;           // planar radius of the arc
    double height = 0.0;

    void validate() const {
        detail::require(angular_halfwidth >= 0.0, "angular halfwidth must be >= 0");
        detail::require(distance > 0.0, "region distance must be positive");
    }

    Point3 at(double angle) const { return polar_point(center, distance, angle, height); }

    /// Maps u in [0, 1] to a point on the arc (uniform in angle).
    Point3 sample(double u) const { return at(center_angle + (2.0 * u - 1.0) * angular_halfwidth); }
};

/// An aperture placed in space: array layout plus the position of its phase center.
struct Aperture {
    ArrayGeometry geometry;
    Point3 origin;
};

}  // namespace ris_covert
