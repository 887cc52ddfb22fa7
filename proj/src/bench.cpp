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

#include "irsofdm/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"

namespace irsofdm {

namespace {

constexpr std::uint64_t kRandomThetaSeedOffset = 0x5eedULL << 32;

int as_int(double v, const char* what) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || r < 0 || r > 1e9) throw ConfigError(std::string(what) + " axis needs integer values");
    return static_cast<int>(r);
}

}  // namespace

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::power: return "power";
        case SweepAxis::elements: return "elements";
        case SweepAxis::antennas: return "antennas";
        case SweepAxis::resolution: return "resolution";
        case SweepAxis::iterations: return "iterations";
    }
    return "unknown";
}

SweepAxis parse_axis(const std::string& name) {
    for (auto a : {SweepAxis::power, SweepAxis::elements, SweepAxis::antennas, SweepAxis::resolution,
                   SweepAxis::iterations})
        if (to_string(a) == name) return a;
    throw ConfigError("unknown sweep axis '" + name + "'");
}

SystemConfig SweepSpec::config_at(double v) const {
    SystemConfig c = base;
    switch (axis) {
        case SweepAxis::power: c.power_dbw = v; break;
        case SweepAxis::elements: c.num_elements = as_int(v, "elements"); break;
        case SweepAxis::antennas: c.num_antennas = as_int(v, "antennas"); break;
        case SweepAxis::resolution: c.phase_bits = as_int(v, "resolution"); break;
        case SweepAxis::iterations: break;
    }
    return c;
}

SolverOptions SweepSpec::solver_at(double v) const {
    SolverOptions o = solver;
    o.num_subbands = config_at(v).num_subbands;
    o.phase_bits = config_at(v).phase_bits;
    if (axis == SweepAxis::iterations) o.max_outer_iters = as_int(v, "iterations");
    return o;
}

void SweepSpec::validate() const {
    if (axis_values.empty()) throw ConfigError("sweep needs at least one axis value");
    if (num_seeds < 1) throw ConfigError("sweep needs at least one seed");
    if (schemes.empty()) throw ConfigError("sweep needs at least one scheme");
    if (threads < 0) throw ConfigError("thread count must be >= 0");
    for (double v : axis_values) {
        config_at(v).validate();
        solver_at(v).validate(config_at(v).num_subcarriers);
    }
}

int SweepResult::failed_cells() const {
    return static_cast<int>(std::count_if(records.begin(), records.end(), [](const auto& r) { return r.missing(); }));
}

bool power_record_ok(const PowerRecord& r, double mu_tol) {
    if (r.power > r.budget + mu_tol) return false;
    if (r.mu > 0.0 && std::abs(r.power - r.budget) > mu_tol) return false;
    return true;
}

SweepResult run_sweep(const SweepSpec& spec, const LogSink& log) {
    spec.validate();
    const std::size_t num_values = spec.axis_values.size();
    const std::size_t num_seeds = static_cast<std::size_t>(spec.num_seeds);
    const std::size_t num_schemes = spec.schemes.size();
    const std::size_t num_cells = num_values * num_seeds;

    SweepResult result;
    result.axis = spec.axis;
    result.records.resize(num_cells * num_schemes);
    if (spec.axis == SweepAxis::iterations) result.traces.resize(num_cells * num_schemes);
    std::vector<std::vector<std::string>> cell_errors(num_cells);
    std::atomic<std::uint64_t> checks{0}, violations{0};
    std::mutex log_mutex;
    const auto emit_log = [&](const std::string& line) {
        if (!log) return;
        std::lock_guard lock(log_mutex);
        log(line);
    };

    const auto run_cell = [&](std::size_t cell) {
        const double value = spec.axis_values[cell / num_seeds];
        const std::uint64_t seed = spec.seed_base + cell % num_seeds;
        const SystemConfig config = spec.config_at(value);
        SolverOptions opts = spec.solver_at(value);
        opts.rng_seed = seed;
        const Scenario scenario = Scenario::from(config, spec.fit);

        std::optional<ChannelSet> channels;
        std::string channel_error;
        try {
            channels = generate_channel_set(config, seed);
        } catch (const std::exception& e) {
            channel_error = e.what();
        }
        const std::uint64_t digest = channels ? channels->digest() : 0;

        for (std::size_t s = 0; s < num_schemes; ++s) {
            const std::size_t slot = cell * num_schemes + s;
            SweepRecord& rec = result.records[slot];
            rec.axis_value = value;
            rec.scheme = spec.schemes[s];
            rec.seed = seed;
            rec.channel_digest = digest;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                if (!channels) throw SolverError("channel generation failed: " + channel_error);
                SchemeResult r = run_scheme(rec.scheme, channels->freq, scenario, opts,
                                            seed ^ kRandomThetaSeedOffset);
                rec.rate = r.rate;
                rec.iterations = r.iterations;
                for (const auto& p : r.power_log) {
                    ++checks;
                    if (!power_record_ok(p, opts.mu_tol)) ++violations;
                }
                if (spec.axis == SweepAxis::iterations)
                    result.traces[slot] = {value, rec.scheme, seed, std::move(r.trace)};
            } catch (const std::exception& e) {
                rec.rate = std::numeric_limits<double>::quiet_NaN();
                rec.iterations = -1;
                cell_errors[cell].push_back("axis=" + format_number(value) + " scheme=" + to_string(rec.scheme) +
                                            " seed=" + std::to_string(seed) + ": " + e.what());
                emit_log("error " + cell_errors[cell].back());
            }
            rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
            char buf[160];
            std::snprintf(buf, sizeof buf, "cell axis=%s scheme=%s seed=%llu channel=%016llx rate=%s iters=%d",
                          format_number(value).c_str(), to_string(rec.scheme).c_str(),
                          static_cast<unsigned long long>(seed), static_cast<unsigned long long>(digest),
                          format_number(rec.rate).c_str(), rec.iterations);
            emit_log(buf);
        }
    };

    unsigned workers = spec.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                         : static_cast<unsigned>(spec.threads);
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, num_cells));
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t c = next++; c < num_cells; c = next++) run_cell(c);
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
    }

    for (auto& e : cell_errors) result.errors.insert(result.errors.end(), e.begin(), e.end());
    result.power_checks = checks;
    result.power_violations = violations;

    const auto key = [](const SweepRecord& r) { return std::tuple(r.axis_value, static_cast<int>(r.scheme), r.seed); };
    std::stable_sort(result.records.begin(), result.records.end(),
                     [&](const auto& a, const auto& b) { return key(a) < key(b); });
    const auto tkey = [](const TraceRecord& r) { return std::tuple(r.axis_value, static_cast<int>(r.scheme), r.seed); };
    std::stable_sort(result.traces.begin(), result.traces.end(),
                     [&](const auto& a, const auto& b) { return tkey(a) < tkey(b); });
    return result;
}

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError("unknown output format '" + name + "'");
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

namespace {

double rounded(double v) { return std::isnan(v) ? v : std::stod(format_number(v)); }

void write_csv(const SweepResult& result, std::ostream& out, bool with_wall_time) {
    out << "axis,scheme,seed,rate,iters" << (with_wall_time ? ",wall_ms" : "") << '\n';
    for (const auto& r : result.records) {
        out << format_number(r.axis_value) << ',' << to_string(r.scheme) << ',' << r.seed << ','
            << format_number(r.rate) << ',' << r.iterations;
        if (with_wall_time) out << ',' << format_number(r.wall_ms);
        out << '\n';
    }
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_double(const std::string& s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ConfigError("malformed number '" + s + "'");
    return v;
}

nlohmann::json number(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(rounded(v)); }
double from_json_number(const nlohmann::json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

void emit_csv(const SweepResult& result, std::ostream& out) { write_csv(result, out, true); }

std::string csv_payload(const SweepResult& result) {
    std::ostringstream ss;
    write_csv(result, ss, false);
    return ss.str();
}

void emit_json(const SweepResult& result, std::ostream& out) {
    nlohmann::json j;
    j["axis"] = to_string(result.axis);
    j["records"] = nlohmann::json::array();
    for (const auto& r : result.records) {
        char digest[17];
        std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(r.channel_digest));
        j["records"].push_back({{"axis", number(r.axis_value)},
                                {"scheme", to_string(r.scheme)},
                                {"seed", r.seed},
                                {"rate", number(r.rate)},
                                {"iters", r.iterations},
                                {"wall_ms", number(r.wall_ms)},
                                {"channel", digest}});
    }
    j["traces"] = nlohmann::json::array();
    for (const auto& t : result.traces) {
        nlohmann::json entries = nlohmann::json::array();
        for (const auto& e : t.trace)
            entries.push_back({{"iteration", e.iteration},
                               {"objective", number(e.objective)},
                               {"sum_rate", number(e.sum_rate)},
                               {"power", number(e.power)},
                               {"wall_ms", number(e.wall_ms)}});
        j["traces"].push_back(
            {{"axis", number(t.axis_value)}, {"scheme", to_string(t.scheme)}, {"seed", t.seed}, {"trace", entries}});
    }
    j["errors"] = result.errors;
    out << j.dump(2) << '\n';
}

void emit(const SweepResult& result, OutputFormat format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    if (format == OutputFormat::csv)
        emit_csv(result, out);
    else
        emit_json(result, out);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

SweepResult parse_csv(std::istream& in) {
    SweepResult result;
    std::string line;
    if (!std::getline(in, line) || line != "axis,scheme,seed,rate,iters,wall_ms")
        throw ConfigError("not a sweep CSV (unexpected header)");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 6) throw ConfigError("malformed sweep CSV row: " + line);
        SweepRecord r;
        r.axis_value = parse_double(f[0]);
        r.scheme = parse_scheme(f[1]);
        r.seed = std::stoull(f[2]);
        r.rate = parse_double(f[3]);
        r.iterations = std::stoi(f[4]);
        r.wall_ms = parse_double(f[5]);
        result.records.push_back(r);
    }
    return result;
}

SweepResult parse_json(std::istream& in) {
    const nlohmann::json j = nlohmann::json::parse(in);
    SweepResult result;
    result.axis = parse_axis(j.at("axis").get<std::string>());
    for (const auto& jr : j.at("records")) {
        SweepRecord r;
        r.axis_value = from_json_number(jr.at("axis"));
        r.scheme = parse_scheme(jr.at("scheme").get<std::string>());
        r.seed = jr.at("seed").get<std::uint64_t>();
        r.rate = from_json_number(jr.at("rate"));
        r.iterations = jr.at("iters").get<int>();
        r.wall_ms = from_json_number(jr.at("wall_ms"));
        r.channel_digest = std::stoull(jr.at("channel").get<std::string>(), nullptr, 16);
        result.records.push_back(r);
    }
    for (const auto& jt : j.at("traces")) {
        TraceRecord t;
        t.axis_value = from_json_number(jt.at("axis"));
        t.scheme = parse_scheme(jt.at("scheme").get<std::string>());
        t.seed = jt.at("seed").get<std::uint64_t>();
        for (const auto& je : jt.at("trace"))
            t.trace.push_back({je.at("iteration").get<int>(), from_json_number(je.at("objective")),
                               from_json_number(je.at("sum_rate")), from_json_number(je.at("power")),
                               from_json_number(je.at("wall_ms"))});
        result.traces.push_back(std::move(t));
    }
    if (j.contains("errors")) result.errors = j.at("errors").get<std::vector<std::string>>();
    return result;
}

}  // namespace irsofdm
