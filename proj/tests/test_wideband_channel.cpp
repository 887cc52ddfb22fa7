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
#include <filesystem>
#include <random>

#include "doctest.h"
#include "irsofdm/ofdm_metrics.hpp"
#include "irsofdm/wideband_channel.hpp"
#include "test_helpers.hpp"

using namespace irsofdm;
using doctest::Approx;

namespace {

SystemConfig small_config() {
    SystemConfig c = desk_defaults();
    c.num_subcarriers = 8;
    c.num_antennas = 2;
    c.num_elements = 4;
    c.num_users = 2;
    c.num_taps = 4;
    c.cp_length = 4;
    c.num_subbands = 2;
    return c;
}

// Unnormalised DFT, written out independently of the library.
CMat dft(int n) {
    CMat F(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) F(r, c) = std::polar(1.0, -2.0 * std::acos(-1.0) * r * c / n);
    return F;
}

CMat kron_identity(const CMat& a, int k) {
    CMat out = CMat::Zero(a.rows() * k, a.cols() * k);
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * k, c * k, k, k) = a(r, c) * CMat::Identity(k, k);
    return out;
}

}  // namespace

TEST_CASE("element distances match the scalar oracle") {
    Geometry g;
    g.d_bi = 10.0;
    g.d_iu = 1.0;
    g.d_a = 0.3;
    g.d_i = 0.03;
    g.user_phases = {kPi / 4};
    g.num_elements = 16;
    g.num_antennas = 4;
    const ElementDistances d = element_distances(g, 1, 1, 1, 0);
    CHECK(d.irs_user == Approx(0.9794761830329551).epsilon(1e-14));
    CHECK(d.bs_user == Approx(9.32458387148022).epsilon(1e-14));
    CHECK(d.bs_irs == Approx(10.003689319446101).epsilon(1e-14));
    for (int n = 1; n <= 4; ++n)
        for (int p = 1; p <= 4; ++p)
            for (int q = 1; q <= 4; ++q) CHECK(element_distances(g, n, p, q, 0).bs_irs >= g.d_bi);
    CHECK_THROWS_AS(element_distances(g, 5, 1, 1, 0), std::out_of_range);
    CHECK_THROWS_AS(element_distances(g, 1, 1, 1, 1), std::out_of_range);
    CHECK(element_index(1, 1, 4) == 0);
    CHECK(element_index(2, 3, 4) == 6);
}

TEST_CASE("hand-computed DFT of a two-tap channel") {
    TapChannels t;
    t.num_users = 1;
    t.num_antennas = 1;
    t.num_elements = 1;
    t.num_taps = 2;
    t.direct = {CMat::Ones(1, 2)};
    t.reflect = {CMat::Ones(1, 2)};
    t.bs_irs = {CMat::Ones(1, 1), CMat::Ones(1, 1)};
    const FreqChannels f = taps_to_freq(t, 4);
    const cx expect[4] = {{2, 0}, {1, 1}, {0, 0}, {1, -1}};
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(f.direct[i](0, 0) - expect[i]) < 1e-15);
        CHECK(std::abs(f.reflect[i](0, 0) - expect[i]) < 1e-15);
        CHECK(std::abs(f.bs_irs[i](0, 0) - std::conj(expect[i])) < 1e-15);
    }
}

TEST_CASE("frequency channels diagonalise the explicit cyclic matrices") {
    const SystemConfig cfg = small_config();
    const ChannelSet cs = generate_channel_set(cfg, 11);
    const int N = cfg.num_subcarriers, Nt = cfg.num_antennas, M = cfg.num_elements, D = cfg.num_taps;
    const CMat F = dft(N) / std::sqrt(double(N));
    const auto lag = [N](int r, int c) { return ((r - c) % N + N) % N; };

    CMat G = CMat::Zero(M * N, N * Nt);
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c)
            if (lag(r, c) < D) G.block(r * M, c * Nt, M, Nt) = cs.taps.bs_irs[lag(r, c)];
    const CMat Gf = kron_identity(F, M) * G * kron_identity(F.adjoint(), Nt);
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) {
            const CMat blk = Gf.block(r * M, c * Nt, M, Nt);
            if (r == c)
                CHECK((blk - cs.freq.bs_irs[r]).norm() <= 1e-12 * cs.freq.bs_irs[r].norm());
            else
                CHECK(blk.norm() <= 1e-12 * Gf.norm());
        }

    for (int k = 0; k < cfg.num_users; ++k) {
        CMat Hd = CMat::Zero(N, N * Nt), Hr = CMat::Zero(N, N * M);
        for (int r = 0; r < N; ++r)
            for (int c = 0; c < N; ++c)
                if (lag(r, c) < D) {
                    Hd.block(r, c * Nt, 1, Nt) = cs.taps.direct[k].col(lag(r, c)).adjoint();
                    Hr.block(r, c * M, 1, M) = cs.taps.reflect[k].col(lag(r, c)).adjoint();
                }
        const CMat Hdf = F * Hd * kron_identity(F.adjoint(), Nt);
        const CMat Hrf = F * Hr * kron_identity(F.adjoint(), M);
        for (int i = 0; i < N; ++i) {
            CHECK((Hdf.block(i, i * Nt, 1, Nt) - cs.freq.direct[i].col(k).adjoint()).norm() <=
                  1e-12 * cs.freq.direct[i].norm());
            CHECK((Hrf.block(i, i * M, 1, M) - cs.freq.reflect[i].col(k).adjoint()).norm() <=
                  1e-12 * cs.freq.reflect[i].norm());
            CHECK(Hdf.row(i).norm() == Approx(Hdf.block(i, i * Nt, 1, Nt).norm()).epsilon(1e-10));
        }
    }
}

TEST_CASE("Parseval between taps and subcarriers") {
    const SystemConfig cfg = desk_defaults();
    const ChannelSet cs = generate_channel_set(cfg, 3);
    const int N = cfg.num_subcarriers;
    for (int k = 0; k < cfg.num_users; ++k) {
        double time = cs.taps.direct[k].squaredNorm(), freq = 0.0;
        for (int i = 0; i < N; ++i) freq += cs.freq.direct[i].col(k).squaredNorm();
        CHECK(freq == Approx(N * time).epsilon(1e-12));
    }
    double time = 0.0, freq = 0.0;
    for (const auto& g : cs.taps.bs_irs) time += g.squaredNorm();
    for (const auto& g : cs.freq.bs_irs) freq += g.squaredNorm();
    CHECK(freq == Approx(N * time).epsilon(1e-12));
}

TEST_CASE("tap statistics follow the half-nonzero rule and path loss") {
    SystemConfig cfg = desk_defaults();
    cfg.num_users = 1;
    cfg.num_elements = 4;
    cfg.num_antennas = 2;
    const int D = cfg.num_taps;
    const int trials = 4000;
    std::vector<double> power(static_cast<std::size_t>(D), 0.0);
    for (int s = 0; s < trials; ++s) {
        const ChannelSet cs = generate_channel_set(cfg, 100 + static_cast<std::uint64_t>(s));
        const double xi =
            fading(make_pathloss(cfg), element_distances(cs.geometry, 1, 1, 1, 0).bs_user, cfg.exponent_bu);
        for (int d = 0; d < D; ++d) power[d] += std::norm(cs.taps.direct[0](0, d)) / (xi * xi);
        for (int d = D / 2; d < D; ++d) {
            CHECK(cs.taps.direct[0].col(d).norm() == 0.0);
            CHECK(cs.taps.reflect[0].col(d).norm() == 0.0);
            CHECK(cs.taps.bs_irs[d].norm() == 0.0);
        }
    }
    // Exponential(mean 1/(D/2)) sample mean: standard error 1/(D/2)/sqrt(trials) ~ 0.008.
    for (int d = 0; d < D / 2; ++d) CHECK(power[d] / trials == Approx(2.0 / D).epsilon(0.08));
}

TEST_CASE("tap count rules") {
    SystemConfig cfg = small_config();
    cfg.num_taps = 3;
    CHECK_THROWS_AS(generate_channel_set(cfg, 1), ConfigError);
    cfg.num_taps = 1;
    const ChannelSet one = generate_channel_set(cfg, 1);
    CHECK(one.taps.nonzero_mask == std::vector<bool>{true});
    CHECK(one.taps.direct[0].norm() > 0.0);
    // One tap means a frequency-flat channel.
    for (int i = 1; i < cfg.num_subcarriers; ++i) CHECK((one.freq.direct[i] - one.freq.direct[0]).norm() < 1e-18);
    cfg.num_taps = 6;
    CHECK_THROWS_AS(generate_channel_set(cfg, 1), ConfigError);  // exceeds the cyclic prefix
}

TEST_CASE("channel generation is deterministic per seed") {
    const SystemConfig cfg = desk_defaults();
    const ChannelSet a = generate_channel_set(cfg, 42), b = generate_channel_set(cfg, 42),
                     c = generate_channel_set(cfg, 43);
    CHECK(a.digest() == b.digest());
    CHECK(a.digest() != c.digest());
    for (double p : a.geometry.user_phases) {
        CHECK(p >= 0.0);
        CHECK(p <= kPi);
    }
}

TEST_CASE("binary channel files round-trip") {
    const SystemConfig cfg = desk_defaults();
    const ChannelSet cs = generate_channel_set(cfg, 9);
    const auto path = std::filesystem::temp_directory_path() / "irsofdm_channel_roundtrip.bin";
    save_channel_set(cs, path);
    const ChannelSet back = load_channel_set(path);
    std::filesystem::remove(path);
    CHECK(back.digest() == cs.digest());
    for (int i = 0; i < cfg.num_subcarriers; ++i) {
        CHECK(back.freq.direct[i] == cs.freq.direct[i]);
        CHECK(back.freq.reflect[i] == cs.freq.reflect[i]);
        CHECK(back.freq.bs_irs[i] == cs.freq.bs_irs[i]);
    }
    CHECK_THROWS(load_channel_set(std::filesystem::temp_directory_path() / "irsofdm_missing_file.bin"));
}

TEST_CASE("time-domain transcription equals the per-subcarrier model") {
    const SystemConfig cfg = small_config();
    std::mt19937_64 rng(5);
    for (ModelTag tag : {ModelTag::practical, ModelTag::ideal, ModelTag::amplitude_only}) {
        const ReflectionModel model(tag, FitParams{}, cfg.grid());
        for (int t = 0; t < 5; ++t) {
            const ChannelSet cs = generate_channel_set(cfg, 70 + static_cast<std::uint64_t>(t));
            const RVec bps = RVec::Random(cfg.num_elements) * kPi;
            const auto w = testutil::random_beamformers(rng, cfg.num_subcarriers, cfg.num_antennas, cfg.num_users, 1.0);
            const CMat s = testutil::random_cmat(rng, cfg.num_subcarriers, cfg.num_users);
            const CMat noise = 1e-4 * testutil::random_cmat(rng, cfg.num_users, cfg.num_subcarriers);
            const CMat slow = end_to_end_oracle(cs.taps, model.coefficients(bps), w, s, noise);
            const CMat fast = received_signal(effective_channels(cs.freq, model, bps), w, s, noise);
            CHECK((fast - slow).norm() <= 1e-9 * slow.norm());
        }
    }
}

TEST_CASE("without_reflection keeps only the direct link") {
    const ChannelSet cs = generate_channel_set(desk_defaults(), 2);
    const FreqChannels f = cs.freq.without_reflection();
    for (int i = 0; i < f.num_subcarriers; ++i) {
        CHECK(f.reflect[i].norm() == 0.0);
        CHECK(f.direct[i] == cs.freq.direct[i]);
    }
}
