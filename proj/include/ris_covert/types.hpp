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

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ris_covert {

using cdouble = std::complex<double>;
using VectorXc = Eigen::VectorXcd;
using RowVectorXc = Eigen::RowVectorXcd;
using MatrixXc = Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cdouble j_unit{0.0, 1.0};
inline constexpr double speed_of_light = 299792458.0;
inline constexpr double free_space_impedance = 376.730313668;

inline constexpr const char* library_version = "0.3.1";

// ---- error hierarchy ------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

class NumericalIntegrationError : public Error {
public:
    NumericalIntegrationError(const std::string& what, double residual)
        : Error(what + " (residual estimate " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class IllConditionedHardwareError : public Error {
public:
    explicit IllConditionedHardwareError(double condition)
        : Error("RIS impedance network is singular or ill-conditioned (condition number ~ " +
                std::to_string(condition) + ")"),
          condition_(condition) {}
    double condition_number() const noexcept { return condition_; }

private:
    double condition_;
};

/// Warden receives no power on average; the power ratio is undefined.
class DegenerateWardenError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& field, const std::string& message)
        : Error("config field '" + field + "': " + message), field_(field) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IoError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require(bool condition, const char* message) {
    if (!condition) throw PreconditionError(message);
}

inline void require_dims(bool condition, const char* message) {
    if (!condition) throw DimensionMismatch(message);
}

}  // namespace detail

}  // namespace ris_covert
