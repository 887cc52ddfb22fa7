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

#include <filesystem>
#include <string>

#include "irsofdm/bench.hpp"

namespace irsofdm {

/// Everything a configuration file can set.  The file is JSON with the
/// optional sections "profile" ("desk" or "full"), "system", "solver",
/// "fit", "circuit" and "sweep"; keys left out keep their defaults and
/// unknown keys are rejected.
struct BenchConfig {
    SweepSpec sweep;  // sweep.base, sweep.solver and sweep.fit carry the scenario
    CircuitParams circuit;
};

BenchConfig parse_bench_config(const std::string& text);
BenchConfig load_bench_config(const std::filesystem::path& path);
/// Fully populated document; parse_bench_config(dump_bench_config(c)) == c.
std::string dump_bench_config(const BenchConfig& config);

}  // namespace irsofdm
