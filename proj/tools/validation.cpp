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

#include "validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>

#include "irsofdm/bench.hpp"

namespace irsofdm::validation {

namespace {

using Clock = std::chrono::steady_clock;

struct PowerAudit {
    std::uint64_t checks = 0;
    std::uint64_t violations = 0;
    double worst_excess = 0.0;

    void add(const std::vector<PowerRecord>& log, double mu_tol) {
        for (const auto& p : log) {
            ++checks;
            if (!power_record_ok(p, mu_tol)) ++violations;
            worst_excess = std::max(worst_excess, p.power - p.budget);
        }
    }
    void add(const SweepResult& r) {
        checks += r.power_checks;
        violations += r.power_violations;
    }
};

PowerAudit& audit() {
    static PowerAudit a;
    return a;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

CMat random_cmat(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMat m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = {n(rng), n(rng)};
    return m;
}

std::vector<CMat> random_beamformers(std::mt19937_64& rng, int n, int nt, int k, double power) {
    std::vector<CMat> w;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        w.push_back(random_cmat(rng, nt, k));
        total += w.back().squaredNorm();
    }
    for (auto& wi : w) wi *= std::sqrt(power / total);
    return w;
}

struct Stats {
    double mean = 0.0;
    double se = 0.0;
};

Stats stats(const std::vector<double>& x) {
    Stats s;
    for (double v : x) s.mean += v;
    s.mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - s.mean) * (v - s.mean);
    if (x.size() > 1) var /= static_cast<double>(x.size() - 1);
    s.se = std::sqrt(var / static_cast<double>(x.size()));
    return s;
}

/// Paired comparison: mean(a - b) >= -SE(a - b).
bool at_least(const std::vector<double>& a, const std::vector<double>& b, Stats* diff) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    *diff = stats(d);
    return diff->mean >= -diff->se;
}

/// rate per (axis value, scheme) over seeds, ordered by seed.
std::map<std::pair<double, Scheme>, std::vector<double>> rates_by_cell(const SweepResult& r) {
    std::map<std::pair<double, Scheme>, std::vector<double>> out;
    for (const auto& rec : r.records) out[{rec.axis_value, rec.scheme}].push_back(rec.rate);
    return out;
}

template <class F>
CheckResult timed(const char* id, const char* title, F&& body) {
    CheckResult r{id, title};
    const auto t0 = Clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

}  // namespace

CheckResult factorization_oracle() {
    return timed("A1", "factorization oracle", [](CheckResult& r) {
        SystemConfig cfg = desk_defaults();
        cfg.num_subcarriers = 8;
        cfg.num_antennas = 2;
        cfg.num_elements = 4;
        cfg.num_users = 2;
        cfg.num_taps = 4;
        cfg.cp_length = 4;
        cfg.num_subbands = 2;
        const ReflectionModel model(ModelTag::practical, FitParams{}, cfg.grid());
        std::mt19937_64 rng(2024);
        double worst = 0.0;
        const int instances = 50;
        for (int t = 0; t < instances; ++t) {
            const ChannelSet cs = generate_channel_set(cfg, 1000 + static_cast<std::uint64_t>(t));
            const RVec bps = random_bps(cfg.num_elements, 0, rng());
            const auto w = random_beamformers(rng, cfg.num_subcarriers, cfg.num_antennas, cfg.num_users, 1.0);
            const CMat symbols = random_cmat(rng, cfg.num_subcarriers, cfg.num_users);
            const CMat noise = CMat::Zero(cfg.num_users, cfg.num_subcarriers);
            const CMat fast = received_signal(effective_channels(cs.freq, model, bps), w, symbols, noise);
            const CMat slow = end_to_end_oracle(cs.taps, model.coefficients(bps), w, symbols, noise);
            worst = std::max(worst, (fast - slow).norm() / slow.norm());
        }
        r.passed = worst <= 1e-9;
        r.detail = fmt("max relative error %.3g over %d instances (limit 1e-9)", worst, instances);
    });
}

CheckResult rate_mse_equivalence() {
    return timed("A2", "rate-MSE equivalence", [](CheckResult& r) {
        const SystemConfig cfg = desk_defaults();
        const ReflectionModel model(ModelTag::practical, FitParams{}, cfg.grid());
        std::mt19937_64 rng(77);
        double worst = 0.0, worst_rho = 0.0;
        const int states = 100;
        for (int t = 0; t < states; ++t) {
            const ChannelSet cs = generate_channel_set(cfg, 5000 + static_cast<std::uint64_t>(t));
            const auto h = effective_channels(cs.freq, model, random_bps(cfg.num_elements, 0, rng()));
            const auto w = random_beamformers(rng, cfg.num_subcarriers, cfg.num_antennas, cfg.num_users,
                                              cfg.power_watts());
            const CMat varpi = update_receivers(h, w, cfg.noise_watts());
            const RMat rho = update_weights(h, w, varpi, cfg.noise_watts());
            const double obj = wmmse_objective(h, w, rho, varpi, cfg.noise_watts());
            worst = std::max(worst, std::abs(obj - average_sum_rate(h, w, cfg.noise_watts())));
            for (int i = 0; i < cfg.num_subcarriers; ++i)
                for (int k = 0; k < cfg.num_users; ++k) {
                    const double expect = 1.0 + sinr(h, w, k, i, cfg.noise_watts());
                    worst_rho = std::max(worst_rho, std::abs(rho(k, i) - expect) / expect);
                }
        }
        r.passed = worst <= 1e-10 && worst_rho <= 1e-10;
        r.detail = fmt("max |objective - rate| %.3g, max rel |rho - (1+SINR)| %.3g over %d states (limit 1e-10)",
                       worst, worst_rho, states);
    });
}

CheckResult monotone_convergence() {
    return timed("A3", "monotone convergence", [](CheckResult& r) {
        const SystemConfig cfg = desk_defaults();
        const Scenario sc = Scenario::from(cfg);
        const ReflectionModel model(ModelTag::practical, sc.fit, sc.grid);
        int converged = 0;
        double worst_drop = 0.0, worst_block_drop = 0.0;
        int iterations_sum = 0;
        const int runs = 20;
        for (int s = 1; s <= runs; ++s) {
            const ChannelSet cs = generate_channel_set(cfg, static_cast<std::uint64_t>(s));
            SolverOptions o;
            o.rng_seed = static_cast<std::uint64_t>(s);
            o.record_blocks = true;
            const SolveResult res = solve(cs.freq, model, sc.power, sc.noise, o);
            audit().add(res.state.power_log, o.mu_tol);
            const auto& tr = res.state.trace;
            for (std::size_t t = 1; t < tr.size(); ++t)
                worst_drop = std::max(worst_drop, tr[t - 1].objective - tr[t].objective);
            const auto& bl = res.state.block_log;
            for (std::size_t t = 1; t < bl.size(); ++t)
                if (bl[t].block != Block::phases)
                    worst_block_drop = std::max(worst_block_drop, bl[t - 1].objective - bl[t].objective);
            if (res.converged && res.iterations <= 50) ++converged;
            iterations_sum += res.iterations;
        }
        r.passed = worst_drop <= 1e-8 && worst_block_drop <= 1e-8 && converged >= 18;
        r.detail = fmt("max per-iteration drop %.3g, max closed-form block drop %.3g (limit 1e-8); "
                       "%d/%d runs reached relative change < 1e-4 within 50 iterations (need 18), mean iterations %.1f",
                       worst_drop, worst_block_drop, converged, runs, iterations_sum / double(runs));
    });
}

CheckResult theta_search_optimality() {
    return timed("A4", "theta-search optimality", [](CheckResult& r) {
        const SystemConfig cfg = desk_defaults();
        const Scenario sc = Scenario::from(cfg);
        const ReflectionModel model(ModelTag::practical, sc.fit, sc.grid);
        const int instances = 500;

        // Instances are solver states: random channel and BPS vector, the
        // solver's own MMSE precoder, optimal receivers and weights.  A second
        // population with arbitrary precoders is reported alongside.
        struct Tally {
            int continuous_ok = 0;
            int discrete_ok = 0;
            double worst_gap = 0.0;
        };
        const auto run = [&](bool solver_states, std::uint64_t seed) {
            std::mt19937_64 rng(seed);
            Tally tally;
            for (int t = 0; t < instances; ++t) {
                const ChannelSet cs = generate_channel_set(cfg, 9000 + static_cast<std::uint64_t>(t));
                const RVec bps = random_bps(cfg.num_elements, 0, rng());
                const auto h = effective_channels(cs.freq, model, bps);
                const auto w = solver_states ? mmse_initialize(h, sc.power, sc.noise)
                                             : random_beamformers(rng, cfg.num_subcarriers, cfg.num_antennas,
                                                                  cfg.num_users, sc.power);
                const CMat varpi = update_receivers(h, w, sc.noise);
                const RMat rho = update_weights(h, w, varpi, sc.noise);
                const auto sub =
                    build_theta_subproblem(cs.freq, w, rho, varpi, model.coefficients(bps), cfg.num_subbands);
                const int m = static_cast<int>(rng() % static_cast<std::uint64_t>(cfg.num_elements));
                const ElementObjective g = element_objective(sub, model, m);

                double grid_min = std::numeric_limits<double>::infinity();
                for (int j = 0; j < 4096; ++j) grid_min = std::min(grid_min, g(-kPi + kTwoPi * j / 4095.0));
                const double gap = g(search_theta_continuous(g, bps[m], SolverOptions{})) - grid_min;
                tally.worst_gap = std::max(tally.worst_gap, gap);
                if (gap <= 1e-6) ++tally.continuous_ok;

                const PhaseCodebook cb(1 + static_cast<int>(rng() % 5));
                std::size_t naive = 0;
                for (std::size_t i = 1; i < cb.values.size(); ++i)
                    if (g(cb.values[i]) < g(cb.values[naive])) naive = i;
                if (search_theta_discrete(g, cb) == cb.values[naive]) ++tally.discrete_ok;
            }
            return tally;
        };
        const Tally main = run(true, 4096);
        const Tally arbitrary = run(false, 4097);
        r.passed = main.continuous_ok >= 0.99 * instances && main.discrete_ok == instances &&
                   arbitrary.discrete_ok == instances;
        r.detail = fmt("continuous within 1e-6 of 4096-point grid minimum: %d/%d solver states (need 99%%), "
                       "worst gap %.3g; discrete equals enumeration: %d/%d; "
                       "[arbitrary precoders: continuous %d/%d, discrete %d/%d]",
                       main.continuous_ok, instances, main.worst_gap, main.discrete_ok, instances,
                       arbitrary.continuous_ok, instances, arbitrary.discrete_ok, instances);
    });
}

CheckResult scheme_ordering() {
    return timed("A5", "scheme ordering", [](CheckResult& r) {
        SweepSpec spec;
        spec.base = desk_defaults();
        spec.axis = SweepAxis::power;
        spec.axis_values = {-5.0};
        spec.schemes = all_schemes();
        spec.num_seeds = 20;
        const SweepResult res = run_sweep(spec);
        audit().add(res);
        auto rates = rates_by_cell(res);
        const auto& p = rates[{-5.0, Scheme::proposed}];
        const auto& i = rates[{-5.0, Scheme::ideal}];
        const auto& rnd = rates[{-5.0, Scheme::random_theta}];
        const auto& no = rates[{-5.0, Scheme::no_irs}];
        const auto& amp = rates[{-5.0, Scheme::amplitude_only}];
        Stats d1, d2, d3;
        const bool ok1 = at_least(p, i, &d1), ok2 = at_least(i, rnd, &d2), ok3 = at_least(rnd, no, &d3);
        r.passed = ok1 && ok2 && ok3 && res.failed_cells() == 0;
        r.detail = fmt("mean rates proposed %.4f, ideal %.4f, amplitude_only %.4f, random_theta %.4f, no_irs %.4f; "
                       "paired gaps %.4f±%.4f, %.4f±%.4f, %.4f±%.4f",
                       stats(p).mean, stats(i).mean, stats(amp).mean, stats(rnd).mean, stats(no).mean, d1.mean, d1.se,
                       d2.mean, d2.se, d3.mean, d3.se);
    });
}

CheckResult resolution_saturation() {
    return timed("A6", "resolution saturation", [](CheckResult& r) {
        SweepSpec spec;
        spec.base = desk_defaults();
        spec.axis = SweepAxis::resolution;
        spec.axis_values = {0, 1, 2, 3, 4};
        spec.schemes = {Scheme::proposed};
        spec.num_seeds = 20;
        const SweepResult res = run_sweep(spec);
        audit().add(res);
        auto rates = rates_by_cell(res);
        const double cont = stats(rates[{0.0, Scheme::proposed}]).mean;
        const double b4 = stats(rates[{4.0, Scheme::proposed}]).mean;
        const double rel_gap = (cont - b4) / cont;
        bool monotone = true;
        std::string means;
        for (int b = 1; b <= 4; ++b) {
            means += fmt(" b=%d %.4f", b, stats(rates[{double(b), Scheme::proposed}]).mean);
            if (b > 1) {
                Stats d;
                monotone = at_least(rates[{double(b), Scheme::proposed}], rates[{double(b - 1), Scheme::proposed}], &d) &&
                           monotone;
            }
        }
        r.passed = std::abs(rel_gap) <= 0.03 && monotone && res.failed_cells() == 0;
        r.detail = fmt("continuous %.4f,%s; b=4 gap %.2f%% (limit 3%%); nondecreasing in b within 1 SE: %s", cont,
                       means.c_str(), 100.0 * rel_gap, monotone ? "yes" : "no");
    });
}

CheckResult passivity_and_model() {
    return timed("A7", "passivity and model sanity", [](CheckResult& r) {
        const CircuitParams cp;
        double max_mag = 0.0;
        for (int a = 0; a < 200; ++a)
            for (int b = 0; b < 200; ++b) {
                const double C = std::lerp(cp.C_min, cp.C_max, a / 199.0);
                const double f = 1.5e9 + 2.0e9 * b / 199.0;
                max_mag = std::max(max_mag, std::abs(reflection_coefficient(cp, C, f)));
            }
        const FitParams fit;
        const CarrierGrid grid;
        double amp_min = 1.0, amp_max = 0.0, lin = 0.0, squint = 0.0;
        for (int t = 0; t < 100; ++t) {
            const double bps = -kPi + kTwoPi * t / 99.0;
            const double f0 = grid.f_c - grid.bandwidth / 2, f1 = grid.f_c + grid.bandwidth / 2;
            const double slope = (phase_line(fit, bps, f1) - phase_line(fit, bps, f0)) / (f1 - f0);
            for (int j = 0; j <= 20; ++j) {
                const double f = f0 + (f1 - f0) * j / 20.0;
                const double a = amplitude_F(fit, bps, f);
                amp_min = std::min(amp_min, a);
                amp_max = std::max(amp_max, a);
                const double pred = phase_line(fit, bps, f0) + slope * (f - f0);
                lin = std::max(lin, std::abs(phase_line(fit, bps, f) - pred) / std::max(1.0, std::abs(pred)));
            }
            squint = std::max(squint, std::abs(wrap_phase(phase_G(fit, bps, f1) - phase_G(fit, bps, f0))));
        }
        r.passed = max_mag <= 1.0 && amp_min > 0.0 && amp_max <= 1.0 && lin < 1e-12 && squint > 0.01;
        r.detail = fmt("max |phi| %.6f on 200x200 (C, f) grid; amplitude in [%.4g, %.4g]; linearity residual %.3g; "
                       "max in-band phase squint %.4f rad",
                       max_mag, amp_min, amp_max, lin, squint);
    });
}

CheckResult power_feasibility() {
    return timed("A8", "power feasibility", [](CheckResult& r) {
        // Extra runs across budgets and schemes on top of whatever earlier checks logged.
        for (double p_dbw : {-20.0, -5.0, 10.0}) {
            SystemConfig cfg = desk_defaults();
            cfg.power_dbw = p_dbw;
            const Scenario sc = Scenario::from(cfg);
            for (int s = 1; s <= 3; ++s) {
                const ChannelSet cs = generate_channel_set(cfg, 300 + static_cast<std::uint64_t>(s));
                for (Scheme scheme : all_schemes()) {
                    SolverOptions o;
                    o.rng_seed = static_cast<std::uint64_t>(s);
                    o.max_outer_iters = 10;
                    const SchemeResult res = run_scheme(scheme, cs.freq, sc, o, 77 + static_cast<std::uint64_t>(s));
                    audit().add(res.power_log, o.mu_tol);
                }
            }
        }
        const PowerAudit& a = audit();
        r.passed = a.checks > 0 && a.violations == 0;
        r.detail = fmt("%llu beamformer updates audited, %llu violations, max excess over budget %.3g W",
                       static_cast<unsigned long long>(a.checks), static_cast<unsigned long long>(a.violations),
                       a.worst_excess);
    });
}

CheckResult determinism() {
    return timed("A9", "determinism", [](CheckResult& r) {
        SweepSpec spec;
        spec.base = desk_defaults();
        spec.axis = SweepAxis::power;
        spec.axis_values = {-10.0, -5.0};
        spec.schemes = {Scheme::proposed, Scheme::random_theta, Scheme::no_irs};
        spec.num_seeds = 3;
        spec.threads = 1;
        const SweepResult first = run_sweep(spec);
        spec.threads = 3;
        const SweepResult second = run_sweep(spec);
        audit().add(first);
        audit().add(second);
        const std::string a = csv_payload(first), b = csv_payload(second);
        r.passed = a == b && first.failed_cells() == 0;
        r.detail = fmt("%zu records, payloads %s (1 vs 3 worker threads)", first.records.size(),
                       a == b ? "identical" : "DIFFER");
    });
}

std::vector<CheckResult> run_all(void (*print)(const CheckResult&)) {
    std::vector<CheckResult> out;
    for (auto check : {factorization_oracle, rate_mse_equivalence, monotone_convergence, theta_search_optimality,
                       scheme_ordering, resolution_saturation, passivity_and_model, determinism, power_feasibility}) {
        out.push_back(check());
    }
    // The power audit runs last so it sees every earlier run; report in criterion order.
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    if (print)
        for (const auto& r : out) print(r);
    return out;
}

std::string format_line(const CheckResult& r) {
    return r.id + " " + (r.passed ? "PASS" : "FAIL") + " " + r.title + ": " + r.detail +
           fmt(" (%.2f s)", r.seconds);
}

}  // namespace irsofdm::validation
