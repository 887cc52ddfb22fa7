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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "irsofdm/common.hpp"

namespace irsofdm {

/// Lumped parallel-resonance circuit of one IRS element (SI units).
struct CircuitParams {
    double L1 = 2.5e-9;      // metal plate inductance [H]
    double L2 = 0.7e-9;      // outer layer inductance [H]
    double R = 1.0;          // loss resistance [Ohm]
    double Z0 = 376.73;      // free-space impedance [Ohm]
    double C_min = 0.47e-12; // varactor capacitance range [F]
    double C_max = 2.35e-12;

    void validate() const;
};

/// Coefficients of the amplitude/phase/frequency fit.  Index 0 holds the
/// amplitude quadratic, 1-2 the phase slope and 3-4 the phase intercept.
struct FitParams {
    std::array<double, 5> a{0.06, 11.27, 10.88, 89.64, 26.11};
    std::array<double, 5> b{0.02, 0.008996, 0.9799, 0.01268, 0.9796};
    std::array<double, 5> c{0.5736, -1.897, -1.471, 0.2899, 1.673};
};

/// OFDM subcarrier layout around the carrier.  Frequencies in GHz.
struct CarrierGrid {
    double f_c = 2.4;
    double bandwidth = 0.1;
    int num_subcarriers = 64;

    void validate() const;

    /// Centre frequency of subcarrier `i` (0-based).
    double frequency(int i) const;

    /// Set when the relative bandwidth leaves the range the fit was made for.
    std::optional<std::string> validity_warning() const;
};

/// The 2^bits uniformly spaced basic phase shifts in [-pi, pi), ascending.
struct PhaseCodebook {
    int bits = 1;
    std::vector<double> values;

    explicit PhaseCodebook(int bits);
};

// Exact circuit response.  `f_hz` in Hz, `capacitance` in farads.
cx impedance(const CircuitParams& params, double capacitance, double f_hz);
cx reflection_coefficient(const CircuitParams& params, double capacitance, double f_hz);
/// Reflection coefficient of an arbitrary load impedance against Z0.
cx reflection_from_impedance(cx z, double z0);

// Simplified fit.  `bps` in radians, `f_ghz` in GHz.
double slope_K(const FitParams& fit, double bps);
double intercept_B(const FitParams& fit, double bps);
/// Affine phase line before wrapping.
double phase_line(const FitParams& fit, double bps, double f_ghz);
/// Reflection phase wrapped to (-pi, pi].
double phase_G(const FitParams& fit, double bps, double f_ghz);
/// Reflection amplitude, clamped to [kAmplitudeFloor, 1].
double amplitude_F(const FitParams& fit, double bps, double f_ghz);

inline constexpr double kAmplitudeFloor = 1e-3;

/// Number of times amplitude_F has clamped the quadratic since start-up
/// (or since the last reset).  Thread-safe.
std::uint64_t amplitude_clamp_events();
void reset_amplitude_clamp_events();

cx reflection_at(const FitParams& fit, const CarrierGrid& grid, double bps, int subcarrier);
cx ideal_reflection_at(double bps, int subcarrier);

/// Which element response is used to map a BPS vector to per-subcarrier
/// reflection coefficients.
enum class ModelTag {
    practical,       // fitted amplitude and phase, both frequency dependent
    ideal,           // unit amplitude, phase = BPS on every subcarrier
    amplitude_only,  // fitted amplitude at f_c, phase = BPS, frequency flat
    off,             // no reflected path at all
};

std::string to_string(ModelTag tag);

/// Element response bundled with the subcarrier grid it is evaluated on.
class ReflectionModel {
public:
    ReflectionModel(ModelTag tag, FitParams fit, CarrierGrid grid);

    ModelTag tag() const { return tag_; }
    const FitParams& fit() const { return fit_; }
    const CarrierGrid& grid() const { return grid_; }

    /// Complex response of one element with BPS `bps` at frequency `f_ghz`.
    cx response(double bps, double f_ghz) const;
    /// Response on subcarrier `i` (0-based).
    cx at(double bps, int subcarrier) const;
    /// N x M matrix of phi_{i,m} for a BPS vector.
    CMat coefficients(const RVec& bps) const;
    ReflectionModel with_tag(ModelTag tag) const { return {tag, fit_, grid_}; }

private:
    ModelTag tag_;
    FitParams fit_;
    CarrierGrid grid_;
};

/// Residual wrap(G(theta, f_c) - theta) on `points` uniformly spaced BPS
/// values; reported as a diagnostic of how closely the fit honours the BPS
/// definition.
std::vector<std::pair<double, double>> bps_residuals(const FitParams& fit, double f_c, int points);

}  // namespace irsofdm
