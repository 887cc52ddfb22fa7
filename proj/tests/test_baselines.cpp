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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "irsofdm/baselines.hpp"
#include "test_helpers.hpp"

using namespace irsofdm;
using doctest::Approx;

namespace {

SystemConfig fast_config() {
    SystemConfig c = desk_defaults();
    c.num_subcarriers = 8;
    c.num_elements = 4;
    c.num_subbands = 2;
    return c;
}

// Phase equals the BPS (K = 0, B = 1e6 sin(1e-6 theta)) and the amplitude is
// the constant c1, so every model differs only by that amplitude.
FitParams bps_consistent_fit(double amplitude) {
    FitParams f;
    f.a = {0.0, 0.0, 0.0, 1e6, 0.0};
    f.b = {0.0, 0.0, 0.0, 1e-6, 0.0};
    f.c = {amplitude, 0.0, 0.0, 0.0, 0.0};
    return f;
}

}  // namespace

TEST_CASE("scheme names round-trip") {
    for (Scheme s : all_schemes()) CHECK(parse_scheme(to_string(s)) == s);
    CHECK(parse_scheme("random") == Scheme::random_theta);
    CHECK(to_string(Scheme::no_irs) == "no_irs");
    CHECK(all_schemes().size() == 5);
    CHECK_THROWS_AS(parse_scheme("bogus"), ConfigError);
}

TEST_CASE("no-IRS single-user single-carrier rate has the closed form") {
    SystemConfig cfg = desk_defaults();
    cfg.num_users = 1;
    cfg.num_subcarriers = 1;
    cfg.num_taps = 1;
    cfg.cp_length = 1;
    cfg.num_subbands = 1;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        ChannelSet cs = generate_channel_set(cfg, seed);
        const Scenario sc = Scenario::from(cfg);
        SolverOptions opts;
        opts.num_subbands = 1;
        const SchemeResult r = design_no_irs(cs.freq, sc, opts);
        const double snr = sc.power * cs.freq.direct[0].squaredNorm() / sc.noise;
        CHECK(r.rate == Approx(std::log2(1.0 + snr)).epsilon(1e-8));
        CHECK(r.solution.model_tag == ModelTag::off);

        // Redrawing the IRS links changes nothing.
        std::mt19937_64 rng(seed + 100);
        cs.freq.reflect[0] = testutil::random_cmat(rng, cfg.num_elements, 1);
        cs.freq.bs_irs[0] = testutil::random_cmat(rng, cfg.num_elements, cfg.num_antennas);
        const SchemeResult again = design_no_irs(cs.freq, sc, opts);
        CHECK(again.rate == r.rate);
    }
}

TEST_CASE("random BPS draws pass a Kolmogorov-Smirnov test") {
    const int n = 10000;
    RVec x = random_bps(n, 0, 77);
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        const double cdf = (x[i] + kPi) / (2.0 * kPi);
        d = std::max({d, (i + 1.0) / n - cdf, cdf - static_cast<double>(i) / n});
    }
    CHECK(d < 1.36 / std::sqrt(static_cast<double>(n)));  // 5% critical value

    // The baseline uses exactly that draw and keeps it.
    const SystemConfig cfg = fast_config();
    const ChannelSet cs = generate_channel_set(cfg, 4);
    const SchemeResult r = design_random_theta(cs.freq, Scenario::from(cfg), SolverOptions{}, 99);
    CHECK(r.solution.bps == random_bps(cfg.num_elements, 0, 99));
}

TEST_CASE("amplitude-only response is flat across subcarriers") {
    const SystemConfig cfg = desk_defaults();
    const ReflectionModel m(ModelTag::amplitude_only, FitParams{}, cfg.grid());
    const CMat phi = m.coefficients(random_bps(cfg.num_elements, 0, 3));
    for (int i = 1; i < cfg.num_subcarriers; ++i) CHECK((phi.row(i) - phi.row(0)).norm() == 0.0);
    const ReflectionModel p(ModelTag::practical, FitParams{}, cfg.grid());
    const CMat q = p.coefficients(random_bps(cfg.num_elements, 0, 3));
    CHECK((q.row(cfg.num_subcarriers - 1) - q.row(0)).norm() > 1e-3);
}

TEST_CASE("with a BPS-consistent fit the models coincide") {
    const CarrierGrid grid{2.4, 0.1, 16};
    const FitParams unit = bps_consistent_fit(1.0);
    const ReflectionModel practical(ModelTag::practical, unit, grid), ideal(ModelTag::ideal, unit, grid);
    const ReflectionModel amp(ModelTag::amplitude_only, bps_consistent_fit(0.7), grid),
        prac07(ModelTag::practical, bps_consistent_fit(0.7), grid);
    std::mt19937_64 rng(1);
    const CMat chi = testutil::random_cmat(rng, 4, 1);
    const RVec alpha = RVec::Constant(4, 0.8);
    const ElementObjective gp(chi.col(0), alpha, practical), gi(chi.col(0), alpha, ideal), ga(chi.col(0), alpha, amp),
        gq(chi.col(0), alpha, prac07);
    for (double t = -3.1; t <= 3.1; t += 0.1) {
        CHECK(gp(t) == Approx(gi(t)).epsilon(1e-6));
        CHECK(ga(t) == Approx(gq(t)).epsilon(1e-6));
    }

    // Full designs agree too, until an element reaches the +-pi seam, where
    // rounding in the fitted phase decides which end wins.
    SystemConfig cfg = fast_config();
    const ChannelSet cs = generate_channel_set(cfg, 5);
    Scenario sc = Scenario::from(cfg, bps_consistent_fit(0.7));
    SolverOptions opts;
    opts.max_outer_iters = 3;
    const double a = design_amplitude_only(cs.freq, sc, opts).rate;
    const double p = design_proposed(cs.freq, sc, opts).rate;
    CHECK(a == Approx(p).epsilon(1e-6));
}

TEST_CASE("every scheme is scored with practical reflections") {
    const SystemConfig cfg = fast_config();
    const ChannelSet cs = generate_channel_set(cfg, 6);
    const Scenario sc = Scenario::from(cfg);
    SolverOptions opts;
    opts.max_outer_iters = 10;
    for (Scheme s : all_schemes()) {
        const SchemeResult r = run_scheme(s, cs.freq, sc, opts, 3);
        CHECK(r.scheme == s);
        CHECK(r.rate == Approx(practical_rate(cs.freq, sc, r.solution)).epsilon(1e-14));
        CHECK(r.solution.total_power() <= sc.power * (1.0 + 1e-12));
        CHECK(r.iterations >= 1);
        CHECK(std::isfinite(r.rate));
    }
    // An ideal design evaluated with the ideal model would look better than it scores.
    const SchemeResult ideal = design_ideal(cs.freq, sc, opts);
    const ReflectionModel im(ModelTag::ideal, sc.fit, sc.grid);
    const double designed = average_sum_rate(effective_channels(cs.freq, im, ideal.solution.bps),
                                             ideal.solution.beamformers, sc.noise);
    CHECK(designed != ideal.rate);
}
