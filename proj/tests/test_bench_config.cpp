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

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "irsofdm/config_io.hpp"

using namespace irsofdm;
using doctest::Approx;

namespace {

SweepSpec small_sweep() {
    SweepSpec s;
    s.base.num_subcarriers = 8;
    s.base.num_elements = 4;
    s.base.num_subbands = 2;
    s.solver.max_outer_iters = 5;
    s.axis_values = {-10.0, 0.0};
    s.schemes = {Scheme::proposed, Scheme::no_irs};
    s.num_seeds = 2;
    return s;
}

}  // namespace

TEST_CASE("one cell gives one record") {
    SweepSpec s = small_sweep();
    s.axis_values = {-5.0};
    s.schemes = {Scheme::proposed};
    s.num_seeds = 1;
    const SweepResult r = run_sweep(s);
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].axis_value == -5.0);
    CHECK(r.records[0].seed == 1);
    CHECK_FALSE(r.records[0].missing());
    CHECK(r.failed_cells() == 0);
    CHECK(r.power_checks > 0);
    CHECK(r.power_violations == 0);
}

TEST_CASE("empty result prints only the header") {
    std::ostringstream out;
    emit_csv(SweepResult{}, out);
    CHECK(out.str() == "axis,scheme,seed,rate,iters,wall_ms\n");
}

TEST_CASE("CSV and JSON round-trip and agree") {
    const SweepResult r = run_sweep(small_sweep());
    CHECK(r.records.size() == 8);
    std::ostringstream csv, json;
    emit_csv(r, csv);
    emit_json(r, json);
    std::istringstream csv_in(csv.str()), json_in(json.str());
    const SweepResult from_csv = parse_csv(csv_in), from_json = parse_json(json_in);
    REQUIRE(from_csv.records.size() == r.records.size());
    REQUIRE(from_json.records.size() == r.records.size());
    for (std::size_t i = 0; i < r.records.size(); ++i) {
        CHECK(from_csv.records[i].scheme == r.records[i].scheme);
        CHECK(from_csv.records[i].seed == r.records[i].seed);
        CHECK(from_csv.records[i].iterations == r.records[i].iterations);
        CHECK(from_csv.records[i].rate == Approx(r.records[i].rate).epsilon(1e-11));
        CHECK(format_number(from_json.records[i].rate) == format_number(from_csv.records[i].rate));
        CHECK(from_json.records[i].axis_value == from_csv.records[i].axis_value);
    }
    CHECK(csv_payload(from_csv) == csv_payload(from_json));
    CHECK(csv_payload(from_csv) == csv_payload(r));
}

TEST_CASE("sweeps do not depend on the thread count") {
    SweepSpec s = small_sweep();
    const SweepResult one = run_sweep(s);
    s.threads = 3;
    const SweepResult three = run_sweep(s);
    CHECK(csv_payload(one) == csv_payload(three));
    for (std::size_t i = 0; i < one.records.size(); ++i)
        CHECK(one.records[i].channel_digest == three.records[i].channel_digest);
}

TEST_CASE("a failing cell is recorded as missing") {
    SweepSpec s = small_sweep();
    s.axis_values = {4000.0};  // 10^400 W does not fit in a double
    s.num_seeds = 1;
    const SweepResult r = run_sweep(s);
    CHECK(r.failed_cells() > 0);
    CHECK_FALSE(r.errors.empty());
    for (const auto& rec : r.records) {
        CHECK(rec.missing());
        CHECK(std::isnan(rec.rate));
    }
    std::ostringstream csv;
    emit_csv(r, csv);
    CHECK(csv.str().find("nan") != std::string::npos);
    std::istringstream back(csv.str());
    CHECK(parse_csv(back).records.front().missing());
}

TEST_CASE("power audit") {
    CHECK(power_record_ok({1.0, 1.0, 0.5}, 1e-9));
    CHECK(power_record_ok({0.5, 1.0, 0.0}, 1e-9));
    CHECK_FALSE(power_record_ok({1.1, 1.0, 0.0}, 1e-9));
    CHECK_FALSE(power_record_ok({0.5, 1.0, 0.3}, 1e-9));
}

TEST_CASE("axis and format names") {
    for (SweepAxis a : {SweepAxis::power, SweepAxis::elements, SweepAxis::antennas, SweepAxis::resolution,
                        SweepAxis::iterations})
        CHECK(parse_axis(to_string(a)) == a);
    CHECK_THROWS_AS(parse_axis("speed"), ConfigError);
    CHECK(parse_format("csv") == OutputFormat::csv);
    CHECK(parse_format("json") == OutputFormat::json);
    CHECK_THROWS_AS(parse_format("xml"), ConfigError);
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(0.1) == "0.1");
}

TEST_CASE("axis values map onto the scenario") {
    SweepSpec s;
    s.axis = SweepAxis::elements;
    CHECK(s.config_at(36).num_elements == 36);
    s.axis = SweepAxis::antennas;
    CHECK(s.config_at(8).num_antennas == 8);
    s.axis = SweepAxis::power;
    CHECK(s.config_at(7.5).power_dbw == 7.5);
    s.axis = SweepAxis::resolution;
    CHECK(s.solver_at(3).phase_bits == 3);
    s.axis = SweepAxis::iterations;
    CHECK(s.solver_at(12).max_outer_iters == 12);
}

TEST_CASE("config defaults and overrides") {
    const BenchConfig d = parse_bench_config("{}");
    CHECK(d.sweep.base.num_subcarriers == desk_defaults().num_subcarriers);
    CHECK(d.circuit.L1 == CircuitParams{}.L1);

    const BenchConfig full = parse_bench_config(R"({"profile": "full"})");
    CHECK(full.sweep.base.num_subcarriers == 64);
    CHECK(full.sweep.base.num_elements == 64);

    const BenchConfig c = parse_bench_config(R"({
        "system": {"num_elements": 9, "power_dbw": 3.0, "phase_bits": 2},
        "solver": {"max_outer_iters": 7},
        "fit": {"a": [1, 2, 3, 4, 5]},
        "circuit": {"R": 2.0},
        "sweep": {"axis": "antennas", "values": [2, 4], "schemes": ["ideal", "random"], "seeds": 3, "threads": 2}
    })");
    CHECK(c.sweep.base.num_elements == 9);
    CHECK(c.sweep.base.power_dbw == 3.0);
    CHECK(c.sweep.solver.max_outer_iters == 7);
    CHECK(c.sweep.fit.a[4] == 5.0);
    CHECK(c.circuit.R == 2.0);
    CHECK(c.sweep.axis == SweepAxis::antennas);
    CHECK(c.sweep.axis_values == std::vector<double>{2.0, 4.0});
    CHECK(c.sweep.schemes == std::vector<Scheme>{Scheme::ideal, Scheme::random_theta});
    CHECK(c.sweep.num_seeds == 3);
    CHECK(c.sweep.threads == 2);
    CHECK(c.sweep.solver_at(2).phase_bits == 2);

    const BenchConfig back = parse_bench_config(dump_bench_config(c));
    CHECK(dump_bench_config(back) == dump_bench_config(c));
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_bench_config(R"({"system": {"num_elemnts": 9}})"), ConfigError);
    CHECK_THROWS_AS(parse_bench_config(R"({"extra": {}})"), ConfigError);
    CHECK_THROWS_AS(parse_bench_config(R"({"profile": "huge"})"), ConfigError);
    CHECK_THROWS_AS(parse_bench_config(R"({"fit": {"a": [1, 2]}})"), ConfigError);
    CHECK_THROWS_AS(parse_bench_config("not json"), ConfigError);
    CHECK_THROWS_AS(parse_bench_config(R"({"system": {"num_elements": 10}})"), ConfigError);
    CHECK_THROWS(load_bench_config("/nonexistent/config.json"));
}
