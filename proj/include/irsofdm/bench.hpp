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
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "irsofdm/baselines.hpp"
#include "irsofdm/system_config.hpp"

namespace irsofdm {

enum class SweepAxis { power, elements, antennas, resolution, iterations };

std::string to_string(SweepAxis axis);
SweepAxis parse_axis(const std::string& name);

struct SweepSpec {
    SystemConfig base = desk_defaults();
    SolverOptions solver;
    FitParams fit;
    SweepAxis axis = SweepAxis::power;
    std::vector<double> axis_values{-5.0};
    std::vector<Scheme> schemes{Scheme::proposed};
    int num_seeds = 1;
    std::uint64_t seed_base = 1;
    int threads = 1;  // 0 = hardware concurrency

    void validate() const;
    /// Scenario and solver settings of one axis value.
    SystemConfig config_at(double axis_value) const;
    SolverOptions solver_at(double axis_value) const;
};

struct SweepRecord {
    double axis_value = 0.0;
    Scheme scheme = Scheme::proposed;
    std::uint64_t seed = 0;
    double rate = 0.0;    // NaN marks a failed cell
    int iterations = -1;
    double wall_ms = 0.0;
    std::uint64_t channel_digest = 0;

    bool missing() const { return iterations < 0; }
};

struct TraceRecord {
    double axis_value = 0.0;
    Scheme scheme = Scheme::proposed;
    std::uint64_t seed = 0;
    std::vector<TraceEntry> trace;
};

struct SweepResult {
    SweepAxis axis = SweepAxis::power;
    std::vector<SweepRecord> records;
    std::vector<TraceRecord> traces;  // only filled for the iterations axis
    std::vector<std::string> errors;
    std::uint64_t power_checks = 0;
    std::uint64_t power_violations = 0;

    int failed_cells() const;
};

using LogSink = std::function<void(const std::string&)>;

/// Runs every (axis value, seed) cell on a worker pool.  All schemes of one
/// cell share one channel realization.  Output does not depend on the
/// thread count.
SweepResult run_sweep(const SweepSpec& spec, const LogSink& log = {});

/// True when a beamformer update respected the budget (and met it with
/// equality whenever the multiplier is active).
bool power_record_ok(const PowerRecord& record, double mu_tol);

enum class OutputFormat { csv, json };
OutputFormat parse_format(const std::string& name);

/// Columns: axis, scheme, seed, rate, iters, wall_ms; 12 significant digits.
void emit_csv(const SweepResult& result, std::ostream& out);
void emit_json(const SweepResult& result, std::ostream& out);
void emit(const SweepResult& result, OutputFormat format, const std::string& path);

SweepResult parse_csv(std::istream& in);
SweepResult parse_json(std::istream& in);

/// CSV text without the wall-time column.
std::string csv_payload(const SweepResult& result);

/// Value as printed in the result files ("%.12g", "nan" for NaN).
std::string format_number(double value);

}  // namespace irsofdm
