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

#include "irsofdm/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace irsofdm {

namespace {

using nlohmann::json;

class Section {
public:
    Section(const json& root, const char* name) : name_(name) {
        if (!root.contains(name)) return;
        obj_ = &root.at(name);
        if (!obj_->is_object()) throw ConfigError(std::string("config section '") + name + "' must be an object");
    }
    ~Section() noexcept(false) {
        if (!obj_ || std::uncaught_exceptions() > 0) return;
        for (const auto& [key, _] : obj_->items())
            if (!seen_.count(key)) throw ConfigError("unknown key '" + key + "' in config section '" + name_ + "'");
    }

    template <class T>
    void get(const char* key, T& target) {
        seen_.insert(key);
        if (!obj_ || !obj_->contains(key)) return;
        try {
            target = obj_->at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError("config key '" + name_ + "." + key + "': " + e.what());
        }
    }

    bool has(const char* key) const { return obj_ && obj_->contains(key); }
    const json& at(const char* key) {
        seen_.insert(key);
        return obj_->at(key);
    }

private:
    std::string name_;
    const json* obj_ = nullptr;
    std::set<std::string> seen_;
};

json system_json(const SystemConfig& c) {
    return {{"num_subcarriers", c.num_subcarriers}, {"num_antennas", c.num_antennas},
            {"num_users", c.num_users},             {"num_elements", c.num_elements},
            {"num_taps", c.num_taps},               {"cp_length", c.cp_length},
            {"num_subbands", c.num_subbands},       {"power_dbw", c.power_dbw},
            {"noise_dbm", c.noise_dbm},             {"f_c_ghz", c.f_c_ghz},
            {"bandwidth_ghz", c.bandwidth_ghz},     {"phase_bits", c.phase_bits},
            {"d_bi", c.d_bi},                       {"d_iu", c.d_iu},
            {"d_a", c.d_a},                         {"d_i", c.d_i},
            {"zeta0_db", c.zeta0_db},               {"exponent_bi", c.exponent_bi},
            {"exponent_iu", c.exponent_iu},         {"exponent_bu", c.exponent_bu},
            {"seed", c.seed}};
}

void read_system(const json& root, SystemConfig& c) {
    Section s(root, "system");
    s.get("num_subcarriers", c.num_subcarriers);
    s.get("num_antennas", c.num_antennas);
    s.get("num_users", c.num_users);
    s.get("num_elements", c.num_elements);
    s.get("num_taps", c.num_taps);
    s.get("cp_length", c.cp_length);
    s.get("num_subbands", c.num_subbands);
    s.get("power_dbw", c.power_dbw);
    s.get("noise_dbm", c.noise_dbm);
    s.get("f_c_ghz", c.f_c_ghz);
    s.get("bandwidth_ghz", c.bandwidth_ghz);
    s.get("phase_bits", c.phase_bits);
    s.get("d_bi", c.d_bi);
    s.get("d_iu", c.d_iu);
    s.get("d_a", c.d_a);
    s.get("d_i", c.d_i);
    s.get("zeta0_db", c.zeta0_db);
    s.get("exponent_bi", c.exponent_bi);
    s.get("exponent_iu", c.exponent_iu);
    s.get("exponent_bu", c.exponent_bu);
    s.get("seed", c.seed);
}

// num_subbands and phase_bits live in "system"; the solver copies them.
json solver_json(const SolverOptions& o) {
    return {{"max_outer_iters", o.max_outer_iters}, {"outer_tol", o.outer_tol},
            {"theta_inner_tol", o.theta_inner_tol}, {"max_theta_sweeps", o.max_theta_sweeps},
            {"mu_tol", o.mu_tol},                   {"golden_eps", o.golden_eps},
            {"initial_step", o.initial_step},       {"record_blocks", o.record_blocks}};
}

void read_solver(const json& root, SolverOptions& o) {
    Section s(root, "solver");
    s.get("max_outer_iters", o.max_outer_iters);
    s.get("outer_tol", o.outer_tol);
    s.get("theta_inner_tol", o.theta_inner_tol);
    s.get("max_theta_sweeps", o.max_theta_sweeps);
    s.get("mu_tol", o.mu_tol);
    s.get("golden_eps", o.golden_eps);
    s.get("initial_step", o.initial_step);
    s.get("record_blocks", o.record_blocks);
}

void read_fit(const json& root, FitParams& f) {
    Section s(root, "fit");
    s.get("a", f.a);
    s.get("b", f.b);
    s.get("c", f.c);
}

json circuit_json(const CircuitParams& c) {
    return {{"L1", c.L1}, {"L2", c.L2}, {"R", c.R}, {"Z0", c.Z0}, {"C_min", c.C_min}, {"C_max", c.C_max}};
}

void read_circuit(const json& root, CircuitParams& c) {
    Section s(root, "circuit");
    s.get("L1", c.L1);
    s.get("L2", c.L2);
    s.get("R", c.R);
    s.get("Z0", c.Z0);
    s.get("C_min", c.C_min);
    s.get("C_max", c.C_max);
}

void read_sweep(const json& root, SweepSpec& sw) {
    Section s(root, "sweep");
    if (s.has("axis")) sw.axis = parse_axis(s.at("axis").get<std::string>());
    s.get("values", sw.axis_values);
    if (s.has("schemes")) {
        sw.schemes.clear();
        for (const auto& name : s.at("schemes")) sw.schemes.push_back(parse_scheme(name.get<std::string>()));
    }
    s.get("seeds", sw.num_seeds);
    s.get("seed_base", sw.seed_base);
    s.get("threads", sw.threads);
}

}  // namespace

BenchConfig parse_bench_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config document must be an object");
    for (const auto& [key, _] : root.items())
        if (key != "profile" && key != "system" && key != "solver" && key != "fit" && key != "circuit" &&
            key != "sweep")
            throw ConfigError("unknown config section '" + key + "'");

    BenchConfig cfg;
    const std::string profile = root.value("profile", std::string("desk"));
    if (profile == "desk")
        cfg.sweep.base = desk_defaults();
    else if (profile == "full")
        cfg.sweep.base = full_defaults();
    else
        throw ConfigError("unknown profile '" + profile + "'");

    read_system(root, cfg.sweep.base);
    read_solver(root, cfg.sweep.solver);
    read_fit(root, cfg.sweep.fit);
    read_circuit(root, cfg.circuit);
    read_sweep(root, cfg.sweep);
    cfg.sweep.solver.num_subbands = cfg.sweep.base.num_subbands;
    cfg.sweep.solver.phase_bits = cfg.sweep.base.phase_bits;
    cfg.sweep.solver.rng_seed = cfg.sweep.base.seed;
    cfg.sweep.base.validate();
    cfg.circuit.validate();
    return cfg;
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_bench_config(ss.str());
}

std::string dump_bench_config(const BenchConfig& c) {
    json schemes = json::array();
    for (Scheme s : c.sweep.schemes) schemes.push_back(to_string(s));
    const json root = {{"system", system_json(c.sweep.base)},
                       {"solver", solver_json(c.sweep.solver)},
                       {"fit", {{"a", c.sweep.fit.a}, {"b", c.sweep.fit.b}, {"c", c.sweep.fit.c}}},
                       {"circuit", circuit_json(c.circuit)},
                       {"sweep",
                        {{"axis", to_string(c.sweep.axis)},
                         {"values", c.sweep.axis_values},
                         {"schemes", schemes},
                         {"seeds", c.sweep.num_seeds},
                         {"seed_base", c.sweep.seed_base},
                         {"threads", c.sweep.threads}}}};
    return root.dump(2) + "\n";
}

}  // namespace irsofdm
