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
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "irsofdm/config_io.hpp"
#include "validation.hpp"

using namespace irsofdm;

namespace {

struct Common {
    std::string config_path;
    std::optional<int> seeds;
    std::vector<std::string> schemes;
    std::optional<std::string> axis;
    std::vector<double> values;
    std::string out;
    std::string format = "csv";
    std::optional<int> threads;
};

BenchConfig load(const Common& c) {
    BenchConfig cfg = c.config_path.empty() ? parse_bench_config("{}") : load_bench_config(c.config_path);
    SweepSpec& s = cfg.sweep;
    if (c.seeds) s.num_seeds = *c.seeds;
    if (!c.schemes.empty()) {
        s.schemes.clear();
        for (const auto& name : c.schemes) s.schemes.push_back(parse_scheme(name));
    }
    if (c.axis) s.axis = parse_axis(*c.axis);
    if (!c.values.empty()) s.axis_values = c.values;
    if (c.threads) s.threads = *c.threads;
    return cfg;
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    return file;
}

int cmd_sweep(const Common& c) {
    const BenchConfig cfg = load(c);
    const OutputFormat format = parse_format(c.format);
    const SweepResult result = run_sweep(cfg.sweep, [](const std::string& line) { std::cerr << line << '\n'; });
    std::ofstream file;
    std::ostream& out = open_out(c.out, file);
    if (format == OutputFormat::csv)
        emit_csv(result, out);
    else
        emit_json(result, out);
    std::cerr << "power checks " << result.power_checks << ", violations " << result.power_violations << '\n';
    if (result.failed_cells() > 0) {
        std::cerr << result.failed_cells() << " failed cell(s)\n";
        return 2;
    }
    return 0;
}

int cmd_trace(const Common& c, std::uint64_t seed) {
    const BenchConfig cfg = load(c);
    const SweepSpec& s = cfg.sweep;
    const double value = s.axis_values.front();
    const SystemConfig config = s.config_at(value);
    SolverOptions opts = s.solver_at(value);
    opts.rng_seed = seed;
    const Scheme scheme = s.schemes.front();
    const ChannelSet channels = generate_channel_set(config, seed);
    std::fprintf(stderr, "channel=%016llx scheme=%s seed=%llu\n", static_cast<unsigned long long>(channels.digest()),
                 to_string(scheme).c_str(), static_cast<unsigned long long>(seed));
    const auto print = [](const TraceEntry& e) {
        std::fprintf(stderr, "iteration=%d objective=%s sum_rate=%s power=%s wall_ms=%s\n", e.iteration,
                     format_number(e.objective).c_str(), format_number(e.sum_rate).c_str(),
                     format_number(e.power).c_str(), format_number(e.wall_ms).c_str());
    };
    const SchemeResult r =
        run_scheme(scheme, channels.freq, Scenario::from(config, s.fit), opts, seed ^ (0x5eedULL << 32), print);
    std::ofstream file;
    std::ostream& out = open_out(c.out, file);
    out << "iteration,objective,sum_rate,power,wall_ms\n";
    for (const auto& e : r.trace)
        out << e.iteration << ',' << format_number(e.objective) << ',' << format_number(e.sum_rate) << ','
            << format_number(e.power) << ',' << format_number(e.wall_ms) << '\n';
    std::fprintf(stderr, "final rate (practical model) %s after %d iterations%s\n", format_number(r.rate).c_str(),
                 r.iterations, r.converged ? "" : " (not converged)");
    return 0;
}

int cmd_dump_model(const Common& c, int theta_points, int freq_points, bool circuit) {
    const BenchConfig cfg = load(c);
    const CarrierGrid grid = cfg.sweep.base.grid();
    if (theta_points < 2 || freq_points < 2) throw ConfigError("need at least two points per axis");
    const double f0 = grid.f_c - grid.bandwidth / 2, f1 = grid.f_c + grid.bandwidth / 2;
    std::ofstream file;
    std::ostream& out = open_out(c.out, file);
    if (circuit) {
        const CircuitParams& cp = cfg.circuit;
        out << "capacitance_pf,f_ghz,amplitude,phase\n";
        for (int a = 0; a < theta_points; ++a)
            for (int b = 0; b < freq_points; ++b) {
                const double C = std::lerp(cp.C_min, cp.C_max, static_cast<double>(a) / (theta_points - 1));
                const double f = f0 + (f1 - f0) * b / (freq_points - 1);
                const cx phi = reflection_coefficient(cp, C, f * 1e9);
                out << format_number(C * 1e12) << ',' << format_number(f) << ',' << format_number(std::abs(phi))
                    << ',' << format_number(std::arg(phi)) << '\n';
            }
        return 0;
    }
    out << "theta,f_ghz,amplitude,phase\n";
    for (int a = 0; a < theta_points; ++a)
        for (int b = 0; b < freq_points; ++b) {
            const double bps = -kPi + kTwoPi * a / (theta_points - 1);
            const double f = f0 + (f1 - f0) * b / (freq_points - 1);
            out << format_number(bps) << ',' << format_number(f) << ','
                << format_number(amplitude_F(cfg.sweep.fit, bps, f)) << ','
                << format_number(phase_G(cfg.sweep.fit, bps, f)) << '\n';
        }
    return 0;
}

int cmd_validate() {
    const auto results = validation::run_all([](const validation::CheckResult& r) {
        std::cout << validation::format_line(r) << std::endl;
    });
    int failed = 0;
    for (const auto& r : results) failed += !r.passed;
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}

void add_common(CLI::App* app, Common& c, bool sweep_flags) {
    app->add_option("--config", c.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app->add_option("--scheme", c.schemes, "scheme(s): proposed, ideal, amplitude_only, random_theta, no_irs")
        ->delimiter(',');
    app->add_option("--axis", c.axis, "sweep axis: power, elements, antennas, resolution, iterations");
    app->add_option("--values", c.values, "axis values (comma separated)")->delimiter(',');
    app->add_option("--out", c.out, "output file (default stdout)");
    if (sweep_flags) {
        app->add_option("--seeds", c.seeds, "number of channel seeds")->check(CLI::PositiveNumber);
        app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        app->add_option("--threads", c.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wideband IRS-assisted MU-MISO-OFDM beamforming simulator"};
    app.require_subcommand(1);

    Common sweep_args, trace_args, dump_args;
    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over one axis; writes CSV or JSON records");
    add_common(sweep, sweep_args, true);

    auto* trace = app.add_subcommand("trace", "Single run; streams the per-iteration objective");
    add_common(trace, trace_args, false);
    std::uint64_t trace_seed = 1;
    trace->add_option("--seed", trace_seed, "channel and initialisation seed");

    auto* dump = app.add_subcommand("dump-model", "Tabulate the element response as CSV");
    dump->add_option("--config", dump_args.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    dump->add_option("--out", dump_args.out, "output file (default stdout)");
    int theta_points = 64, freq_points = 11;
    bool circuit = false;
    dump->add_option("--points", theta_points, "BPS (or capacitance) grid points");
    dump->add_option("--freq-points", freq_points, "frequency grid points across the band");
    dump->add_flag("--circuit", circuit, "tabulate the exact circuit response over capacitance instead");

    auto* validate = app.add_subcommand("validate", "Run the acceptance checks");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*sweep) return cmd_sweep(sweep_args);
        if (*trace) return cmd_trace(trace_args, trace_seed);
        if (*dump) return cmd_dump_model(dump_args, theta_points, freq_points, circuit);
        if (*validate) return cmd_validate();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
