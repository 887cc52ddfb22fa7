// SPDX-License-Identifier: Apache-2.0
//
// irsofdm: wideband IRS-assisted MU-MISO-OFDM beamforming simulator
// Copyright (C) 2026 The irsofdm Authors
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

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace irsofdm {

using cx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Raised when a physical quantity is outside the domain of a model
/// (capacitance out of range, non-positive frequency, non-positive weight).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Inconsistent or unsupported dimensions / scenario settings.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed in a way that should not happen for valid inputs.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Wraps an angle to (-pi, pi].
inline double wrap_phase(double x) {
    double y = std::fmod(x + kPi, kTwoPi);
    if (y <= 0.0) y += kTwoPi;
    return y - kPi;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

}  // namespace irsofdm
