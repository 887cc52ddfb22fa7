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

#include <cstdint>
#include <string>

#include "irsofdm/reflection_model.hpp"

namespace irsofdm {

/// Every scalar that defines one simulated scenario.
struct SystemConfig {
    int num_subcarriers = 64;  // N
    int num_antennas = 4;      // N_t
    int num_users = 3;         // K
    int num_elements = 64;     // M, a perfect square (sqrt(M) x sqrt(M) UPA)
    int num_taps = 16;         // D
    int cp_length = 16;        // N_cp
    int num_subbands = 4;      // N_s

    double power_dbw = -5.0;   // total transmit power P [dBW]
    double noise_dbm = -70.0;  // per-subcarrier noise power sigma^2 [dBm]
    double f_c_ghz = 2.4;
    double bandwidth_ghz = 0.1;
    int phase_bits = 0;        // 0 = continuous phase shifters

    double d_bi = 10.0;        // BS - IRS reference distance [m]
    double d_iu = 1.0;         // IRS - user distance [m]
    double d_a = 0.3;          // BS antenna spacing [m]
    double d_i = 0.03;         // IRS element spacing [m]
    double zeta0_db = -30.0;   // attenuation at 1 m
    double exponent_bi = 2.8;
    double exponent_iu = 2.5;
    double exponent_bu = 3.7;

    std::uint64_t seed = 1;

    double power_watts() const { return std::pow(10.0, power_dbw / 10.0); }
    double noise_watts() const { return dbm_to_watts(noise_dbm); }
    CarrierGrid grid() const { return {f_c_ghz, bandwidth_ghz, num_subcarriers}; }
    int upa_side() const;

    void validate() const;
};

/// Full-size reference scenario (N = 64, M = 64, K = 3).
SystemConfig full_defaults();
/// Scaled-down scenario that runs in seconds on a laptop.
SystemConfig desk_defaults();

}  // namespace irsofdm
