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

#include "irsofdm/baselines.hpp"

namespace irsofdm {

std::string to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::proposed: return "proposed";
        case Scheme::ideal: return "ideal";
        case Scheme::amplitude_only: return "amplitude_only";
        case Scheme::random_theta: return "random_theta";
        case Scheme::no_irs: return "no_irs";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& name) {
    for (Scheme s : all_schemes())
        if (to_string(s) == name) return s;
    if (name == "random") return Scheme::random_theta;
    throw ConfigError("unknown scheme '" + name + "'");
}

const std::vector<Scheme>& all_schemes() {
    static const std::vector<Scheme> schemes{Scheme::proposed, Scheme::ideal, Scheme::amplitude_only,
                                             Scheme::random_theta, Scheme::no_irs};
    return schemes;
}

Scenario Scenario::from(const SystemConfig& config, const FitParams& fit) {
    return {fit, config.grid(), config.power_watts(), config.noise_watts()};
}

double practical_rate(const FreqChannels& channels, const Scenario& scenario, const Solution& solution) {
    const ReflectionModel model(solution.model_tag == ModelTag::off ? ModelTag::off : ModelTag::practical,
                                scenario.fit, scenario.grid);
    return average_sum_rate(effective_channels(channels, model, solution.bps), solution.beamformers,
                            scenario.noise);
}

namespace {

SchemeResult run(Scheme scheme, const FreqChannels& channels, const Scenario& scenario, ModelTag tag,
                 const SolverOptions& opts, std::optional<RVec> initial_bps, const IterationCallback& on_iteration = {}) {
    const ReflectionModel model(tag, scenario.fit, scenario.grid);
    SolveResult r =
        solve(channels, model, scenario.power, scenario.noise, opts, std::move(initial_bps), on_iteration);
    SchemeResult out;
    out.scheme = scheme;
    out.solution = std::move(r.solution);
    out.iterations = r.iterations;
    out.converged = r.converged;
    out.trace = std::move(r.state.trace);
    out.power_log = std::move(r.state.power_log);
    out.rate = practical_rate(channels, scenario, out.solution);
    return out;
}

}  // namespace

SchemeResult design_proposed(const FreqChannels& channels, const Scenario& scenario, const SolverOptions& opts) {
    return run_scheme(Scheme::proposed, channels, scenario, opts, 0);
}

SchemeResult design_ideal(const FreqChannels& channels, const Scenario& scenario, const SolverOptions& opts) {
    return run_scheme(Scheme::ideal, channels, scenario, opts, 0);
}

SchemeResult design_amplitude_only(const FreqChannels& channels, const Scenario& scenario,
                                   const SolverOptions& opts) {
    return run_scheme(Scheme::amplitude_only, channels, scenario, opts, 0);
}

SchemeResult design_random_theta(const FreqChannels& channels, const Scenario& scenario, const SolverOptions& opts,
                                 std::uint64_t seed) {
    return run_scheme(Scheme::random_theta, channels, scenario, opts, seed);
}

SchemeResult design_no_irs(const FreqChannels& channels, const Scenario& scenario, const SolverOptions& opts) {
    return run_scheme(Scheme::no_irs, channels, scenario, opts, 0);
}

SchemeResult run_scheme(Scheme scheme, const FreqChannels& channels, const Scenario& scenario,
                        const SolverOptions& opts, std::uint64_t seed, const IterationCallback& on_iteration) {
    SolverOptions frozen = opts;
    frozen.optimize_phases = false;
    switch (scheme) {
        case Scheme::proposed:
            return run(scheme, channels, scenario, ModelTag::practical, opts, std::nullopt, on_iteration);
        case Scheme::ideal: return run(scheme, channels, scenario, ModelTag::ideal, opts, std::nullopt, on_iteration);
        case Scheme::amplitude_only:
            return run(scheme, channels, scenario, ModelTag::amplitude_only, opts, std::nullopt, on_iteration);
        case Scheme::random_theta:
            return run(scheme, channels, scenario, ModelTag::practical, frozen,
                       random_bps(channels.num_elements, opts.phase_bits, seed), on_iteration);
        case Scheme::no_irs:
            return run(scheme, channels.without_reflection(), scenario, ModelTag::off, frozen,
                       RVec::Zero(channels.num_elements), on_iteration);
    }
    throw ConfigError("unknown scheme");
}

}  // namespace irsofdm
