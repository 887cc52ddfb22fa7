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

#include "irsofdm/reflection_model.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

namespace irsofdm {

namespace {
std::atomic<std::uint64_t> g_clamp_events{0};
}

void CircuitParams::validate() const {
    if (!(L1 > 0.0) || !(L2 > 0.0)) throw ConfigError("circuit inductances must be positive");
    if (!(R >= 0.0)) throw ConfigError("circuit resistance must be non-negative");
    if (!(Z0 > 0.0)) throw ConfigError("free-space impedance must be positive");
    if (!(C_min > 0.0) || !(C_min < C_max)) throw ConfigError("capacitance range must satisfy 0 < C_min < C_max");
}

void CarrierGrid::validate() const {
    if (!(f_c > 0.0)) throw ConfigError("carrier frequency must be positive");
    if (!(bandwidth > 0.0)) throw ConfigError("bandwidth must be positive");
    if (num_subcarriers < 1) throw ConfigError("subcarrier count must be >= 1");
}

double CarrierGrid::frequency(int i) const {
    if (i < 0 || i >= num_subcarriers) throw std::out_of_range("subcarrier index out of range");
    const double n = num_subcarriers;
    return f_c + (static_cast<double>(i + 1) - (n + 1.0) / 2.0) * bandwidth / n;
}

std::optional<std::string> CarrierGrid::validity_warning() const {
    const double rel = bandwidth / f_c;
    if (rel <= 0.05) return std::nullopt;
    std::ostringstream os;
    os << "relative bandwidth B/f_c = " << rel << " exceeds 5%; the simplified reflection fit may be inaccurate";
    return os.str();
}

PhaseCodebook::PhaseCodebook(int b) : bits(b) {
    if (b < 1 || b > 20) throw ConfigError("phase resolution must be between 1 and 20 bits");
    const std::size_t levels = std::size_t{1} << b;
    values.reserve(levels);
    for (std::size_t i = 0; i < levels; ++i)
        values.push_back(kTwoPi * static_cast<double>(i) / static_cast<double>(levels) - kPi);
}

cx impedance(const CircuitParams& params, double capacitance, double f_hz) {
    if (!(f_hz > 0.0)) throw DomainError("frequency must be positive");
    if (capacitance < params.C_min || capacitance > params.C_max)
        throw DomainError("capacitance outside [C_min, C_max]");
    const cx jw{0.0, kTwoPi * f_hz};
    const cx branch = jw * params.L2 + 1.0 / (jw * capacitance) + params.R;
    return jw * params.L1 * branch / (jw * params.L1 + branch);
}

cx reflection_from_impedance(cx z, double z0) {
    const cx den = z + z0;
    if (std::abs(den) == 0.0) throw DomainError("reflection coefficient singular: Z = -Z0");
    return (z - z0) / den;
}

cx reflection_coefficient(const CircuitParams& params, double capacitance, double f_hz) {
    return reflection_from_impedance(impedance(params, capacitance, f_hz), params.Z0);
}

double slope_K(const FitParams& fit, double bps) {
    return fit.a[1] * std::sin(fit.b[1] * bps + fit.c[1]) + fit.a[2] * std::sin(fit.b[2] * bps + fit.c[2]);
}

double intercept_B(const FitParams& fit, double bps) {
    return fit.a[3] * std::sin(fit.b[3] * bps + fit.c[3]) + fit.a[4] * std::sin(fit.b[4] * bps + fit.c[4]);
}

double phase_line(const FitParams& fit, double bps, double f_ghz) {
    return slope_K(fit, bps) * f_ghz + intercept_B(fit, bps);
}

double phase_G(const FitParams& fit, double bps, double f_ghz) { return wrap_phase(phase_line(fit, bps, f_ghz)); }

double amplitude_F(const FitParams& fit, double bps, double f_ghz) {
    const double g = phase_G(fit, bps, f_ghz);
    const double raw = fit.a[0] * g * g + fit.b[0] * g + fit.c[0];
    if (raw > 1.0) {
        g_clamp_events.fetch_add(1, std::memory_order_relaxed);
        return 1.0;
    }
    if (raw < kAmplitudeFloor) {
        g_clamp_events.fetch_add(1, std::memory_order_relaxed);
        return kAmplitudeFloor;
    }
    return raw;
}

std::uint64_t amplitude_clamp_events() { return g_clamp_events.load(std::memory_order_relaxed); }
void reset_amplitude_clamp_events() { g_clamp_events.store(0, std::memory_order_relaxed); }

cx reflection_at(const FitParams& fit, const CarrierGrid& grid, double bps, int subcarrier) {
    const double f = grid.frequency(subcarrier);
    return std::polar(amplitude_F(fit, bps, f), phase_G(fit, bps, f));
}

cx ideal_reflection_at(double bps, int /*subcarrier*/) { return std::polar(1.0, bps); }

std::string to_string(ModelTag tag) {
    switch (tag) {
        case ModelTag::practical: return "practical";
        case ModelTag::ideal: return "ideal";
        case ModelTag::amplitude_only: return "amplitude_only";
        case ModelTag::off: return "off";
    }
    return "unknown";
}

ReflectionModel::ReflectionModel(ModelTag tag, FitParams fit, CarrierGrid grid)
    : tag_(tag), fit_(fit), grid_(grid) {
    grid_.validate();
}

cx ReflectionModel::response(double bps, double f_ghz) const {
    switch (tag_) {
        case ModelTag::practical: return std::polar(amplitude_F(fit_, bps, f_ghz), phase_G(fit_, bps, f_ghz));
        case ModelTag::ideal: return std::polar(1.0, bps);
        case ModelTag::amplitude_only: return std::polar(amplitude_F(fit_, bps, grid_.f_c), bps);
        case ModelTag::off: return cx{0.0, 0.0};
    }
    return cx{0.0, 0.0};
}

cx ReflectionModel::at(double bps, int subcarrier) const { return response(bps, grid_.frequency(subcarrier)); }

CMat ReflectionModel::coefficients(const RVec& bps) const {
    const int n = grid_.num_subcarriers;
    CMat out(n, bps.size());
    for (int i = 0; i < n; ++i) {
        const double f = grid_.frequency(i);
        for (Eigen::Index m = 0; m < bps.size(); ++m) out(i, m) = response(bps[m], f);
    }
    return out;
}

std::vector<std::pair<double, double>> bps_residuals(const FitParams& fit, double f_c, int points) {
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(points));
    for (int p = 0; p < points; ++p) {
        const double theta = points == 1 ? 0.0 : -kPi + kTwoPi * p / (points - 1);
        out.emplace_back(theta, wrap_phase(phase_G(fit, theta, f_c) - theta));
    }
    return out;
}

}  // namespace irsofdm
