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

#include "irsofdm/system_config.hpp"

#include <cmath>

namespace irsofdm {

int SystemConfig::upa_side() const {
    const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(num_elements))));
    if (s < 1 || s * s != num_elements) throw ConfigError("IRS element count must be a perfect square");
    return s;
}

void SystemConfig::validate() const {
    if (num_subcarriers < 1 || num_antennas < 1 || num_users < 1 || num_elements < 1)
        throw ConfigError("N, N_t, K and M must be positive");
    (void)upa_side();
    if (num_taps < 1 || num_taps > cp_length) throw ConfigError("need 1 <= D <= N_cp");
    if (num_taps > num_subcarriers) throw ConfigError("need D <= N");
    if (num_subbands < 1 || num_subcarriers % num_subbands != 0)
        throw ConfigError("sub-band count must divide the subcarrier count");
    if (phase_bits < 0 || phase_bits > 20) throw ConfigError("phase_bits must be in [0, 20]");
    grid().validate();
    if (!(d_bi > 0.0) || !(d_iu > 0.0) || !(d_a > 0.0) || !(d_i > 0.0))
        throw ConfigError("geometry distances must be positive");
    if (zeta0_db > 0.0) throw ConfigError("reference attenuation must be <= 0 dB");
    if (exponent_bi < 2.0 || exponent_iu < 2.0 || exponent_bu < 2.0)
        throw ConfigError("path-loss exponents must be >= 2");
}

SystemConfig full_defaults() { return SystemConfig{}; }

SystemConfig desk_defaults() {
    SystemConfig c;
    c.num_subcarriers = 16;
    c.num_elements = 16;
    c.num_antennas = 4;
    c.num_users = 2;
    c.num_taps = 4;
    c.cp_length = 4;
    c.num_subbands = 4;
    return c;
}

}  // namespace irsofdm
