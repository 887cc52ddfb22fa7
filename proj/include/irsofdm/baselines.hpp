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
#include <vector>

#include "irsofdm/bcd_solver.hpp"

namespace irsofdm {

enum class Scheme { proposed, ideal, amplitude_only, random_theta, no_irs };

std::string to_string(Scheme scheme);
/// Accepts the names produced by to_string (plus "random" for random_theta).
Scheme parse_scheme(const std::string& name);
const std::vector<Scheme>& all_schemes();

/// What every scheme needs besides the channels.
struct Scenario {
    FitParams fit;
    CarrierGrid grid;
    double power = 0.0;  // total budget [W]
    double noise = 0.0;  // per-subcarrier noise power [W]

    static Scenario from(const SystemConfig& config, const FitParams& fit = {});
};

struct SchemeResult {
    Scheme scheme = Scheme::proposed;
    Solution solution;
    double rate = 0.0;  // scored with practical reflections
    int iterations = 0;
    bool converged = false;
    std::vector<TraceEntry> trace;
    std::vector<PowerRecord> power_log;
};

/// The single scoring path shared by all schemes: average sum rate with the
/// practical element response (direct link only for an `off` solution).
double practical_rate(const FreqChannels& channels, const Scenario& scenario, const Solution& solution);

SchemeResult design_proposed(const FreqChannels& channels, const Scenario& scenario, const SolverOptions& opts);
SchemeResult design_ideal(const FreqChannels& channels, const Scenario& scenario, const SolverOptions& opts);
SchemeResult design_amplitude_only(const FreqChannels& channels, const Scenario& scenario,
                                   const SolverOptions& opts);
/// Uniform random BPS vector drawn from `seed`, frozen; only W is optimised.
SchemeResult design_random_theta(const FreqChannels& channels, const Scenario& scenario, const SolverOptions& opts,
                                 std::uint64_t seed);
SchemeResult design_no_irs(const FreqChannels& channels, const Scenario& scenario, const SolverOptions& opts);

/// `seed` is only used by random_theta.
SchemeResult run_scheme(Scheme scheme, const FreqChannels& channels, const Scenario& scenario,
                        const SolverOptions& opts, std::uint64_t seed, const IterationCallback& on_iteration = {});

}  // namespace irsofdm
