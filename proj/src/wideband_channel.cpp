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

#include "irsofdm/wideband_channel.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

namespace irsofdm {

int Geometry::side() const {
    const int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(num_elements))));
    if (s < 1 || s * s != num_elements) throw ConfigError("IRS element count must be a perfect square");
    return s;
}

void Geometry::validate() const {
    if (!(d_bi > 0.0) || !(d_iu > 0.0) || !(d_a > 0.0) || !(d_i > 0.0))
        throw ConfigError("geometry distances must be positive");
    if (user_phases.empty()) throw ConfigError("at least one user is required");
    if (num_antennas < 1) throw ConfigError("at least one antenna is required");
    (void)side();
}

void PathLoss::validate() const {
    if (!(zeta0 > 0.0) || zeta0 > 1.0) throw ConfigError("reference attenuation must lie in (0, 1]");
    if (exponent_bi < 2.0 || exponent_iu < 2.0 || exponent_bu < 2.0)
        throw ConfigError("path-loss exponents must be >= 2");
}

ElementDistances element_distances(const Geometry& g, int antenna, int p, int q, int user) {
    const int side = g.side();
    if (antenna < 0 || antenna > g.num_antennas || p < 0 || p > side || q < 0 || q > side)
        throw std::out_of_range("antenna or element coordinate out of range");
    if (user < 0 || user >= static_cast<int>(g.user_phases.size())) throw std::out_of_range("user index out of range");
    const double phi = g.user_phases[static_cast<std::size_t>(user)];
    const double n = antenna;
    const double pp = p;
    const double qq = q;
    const auto sq = [](double x) { return x * x; };
    ElementDistances d{};
    d.irs_user = std::sqrt(sq(pp * g.d_i - g.d_iu * std::cos(phi)) + sq(qq * g.d_i) + sq(g.d_iu * std::sin(phi)));
    d.bs_user = std::sqrt(sq(g.d_bi - g.d_iu * std::sin(phi)) + sq(n * g.d_a) + sq(g.d_iu * std::cos(phi)));
    d.bs_irs = std::sqrt(sq(qq * g.d_i - n * g.d_a) + sq(pp * g.d_i) + sq(g.d_bi));
    return d;
}

double fading(const PathLoss& pathloss, double distance, double exponent) {
    if (!(distance > 0.0)) throw DomainError("distance must be positive");
    return std::sqrt(pathloss.zeta0 * std::pow(distance, -exponent));
}

TapChannels sample_taps(const Geometry& geometry, const PathLoss& pathloss, int num_taps, int cp_length,
                        std::uint64_t seed) {
    geometry.validate();
    pathloss.validate();
    if (num_taps < 1) throw ConfigError("tap count must be >= 1");
    if (num_taps > cp_length) throw ConfigError("tap count must not exceed the cyclic prefix length");
    if (num_taps > 1 && num_taps % 2 != 0) throw ConfigError("half-nonzero tap rule needs an even tap count");

    const int K = static_cast<int>(geometry.user_phases.size());
    const int Nt = geometry.num_antennas;
    const int M = geometry.num_elements;
    const int D = num_taps;
    const int active = D == 1 ? 1 : D / 2;
    const int side = geometry.side();

    TapChannels t;
    t.num_users = K;
    t.num_antennas = Nt;
    t.num_elements = M;
    t.num_taps = D;
    t.nonzero_mask.assign(static_cast<std::size_t>(D), false);
    for (int d = 0; d < active; ++d) t.nonzero_mask[static_cast<std::size_t>(d)] = true;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5 / active));
    const auto cscg = [&] {
        const double re = normal(rng);
        const double im = normal(rng);
        return cx{re, im};
    };

    t.direct.assign(static_cast<std::size_t>(K), CMat::Zero(Nt, D));
    t.reflect.assign(static_cast<std::size_t>(K), CMat::Zero(M, D));
    t.bs_irs.assign(static_cast<std::size_t>(D), CMat::Zero(M, Nt));

    for (int k = 0; k < K; ++k)
        for (int d = 0; d < active; ++d)
            for (int n = 0; n < Nt; ++n) t.direct[k](n, d) = cscg();
    for (int d = 0; d < active; ++d)
        for (int m = 0; m < M; ++m)
            for (int n = 0; n < Nt; ++n) t.bs_irs[d](m, n) = cscg();
    for (int k = 0; k < K; ++k)
        for (int d = 0; d < active; ++d)
            for (int m = 0; m < M; ++m) t.reflect[k](m, d) = cscg();

    for (int k = 0; k < K; ++k) {
        for (int n = 1; n <= Nt; ++n) {
            const double xi = fading(pathloss, element_distances(geometry, n, 1, 1, k).bs_user, pathloss.exponent_bu);
            t.direct[k].row(n - 1) *= xi;
        }
        for (int p = 1; p <= side; ++p)
            for (int q = 1; q <= side; ++q) {
                const double xi =
                    fading(pathloss, element_distances(geometry, 1, p, q, k).irs_user, pathloss.exponent_iu);
                t.reflect[k].row(element_index(p, q, side)) *= xi;
            }
    }
    for (int n = 1; n <= Nt; ++n)
        for (int p = 1; p <= side; ++p)
            for (int q = 1; q <= side; ++q) {
                const double xi = fading(pathloss, element_distances(geometry, n, p, q, 0).bs_irs, pathloss.exponent_bi);
                for (int d = 0; d < D; ++d) t.bs_irs[d](element_index(p, q, side), n - 1) *= xi;
            }
    return t;
}

FreqChannels taps_to_freq(const TapChannels& taps, int num_subcarriers) {
    const int N = num_subcarriers;
    const int D = taps.num_taps;
    if (N < 1) throw ConfigError("subcarrier count must be >= 1");
    if (D > N) throw ConfigError("tap count must not exceed the subcarrier count");

    FreqChannels f;
    f.num_users = taps.num_users;
    f.num_antennas = taps.num_antennas;
    f.num_elements = taps.num_elements;
    f.num_subcarriers = N;
    f.direct.assign(static_cast<std::size_t>(N), CMat::Zero(taps.num_antennas, taps.num_users));
    f.reflect.assign(static_cast<std::size_t>(N), CMat::Zero(taps.num_elements, taps.num_users));
    f.bs_irs.assign(static_cast<std::size_t>(N), CMat::Zero(taps.num_elements, taps.num_antennas));

    // The cyclic matrices of the user links carry conjugated taps, so their
    // conjugated eigenvalues use e^{+j...}; the BS-IRS eigenvalues use e^{-j...}.
    for (int i = 0; i < N; ++i) {
        CVec twiddle(D);
        for (int d = 0; d < D; ++d)
            twiddle[d] = std::polar(1.0, kTwoPi * static_cast<double>((static_cast<long>(i) * d) % N) / N);
        for (int k = 0; k < taps.num_users; ++k) {
            f.direct[i].col(k) = taps.direct[k] * twiddle;
            f.reflect[i].col(k) = taps.reflect[k] * twiddle;
        }
        for (int d = 0; d < D; ++d) f.bs_irs[i] += taps.bs_irs[d] * std::conj(twiddle[d]);
    }
    return f;
}

FreqChannels FreqChannels::without_reflection() const {
    FreqChannels out = *this;
    for (auto& r : out.reflect) r.setZero();
    return out;
}

namespace {

struct Fnv1a {
    std::uint64_t h = 1469598103934665603ULL;
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ULL;
        }
    }
    void matrix(const CMat& m) { bytes(m.data(), sizeof(cx) * static_cast<std::size_t>(m.size())); }
};

}  // namespace

std::uint64_t ChannelSet::digest() const {
    Fnv1a f;
    for (const auto& m : taps.direct) f.matrix(m);
    for (const auto& m : taps.bs_irs) f.matrix(m);
    for (const auto& m : taps.reflect) f.matrix(m);
    f.bytes(geometry.user_phases.data(), sizeof(double) * geometry.user_phases.size());
    return f.h;
}

Geometry make_geometry(const SystemConfig& config, std::vector<double> user_phases) {
    Geometry g;
    g.d_bi = config.d_bi;
    g.d_iu = config.d_iu;
    g.d_a = config.d_a;
    g.d_i = config.d_i;
    g.user_phases = std::move(user_phases);
    g.num_elements = config.num_elements;
    g.num_antennas = config.num_antennas;
    return g;
}

PathLoss make_pathloss(const SystemConfig& config) {
    return {db_to_linear(config.zeta0_db), config.exponent_bi, config.exponent_iu, config.exponent_bu};
}

ChannelSet generate_channel_set(const SystemConfig& config, std::uint64_t seed) {
    config.validate();
    // Separate stream for user placement so tap draws do not depend on K.
    std::mt19937_64 placement(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> angle(0.0, kPi);
    std::vector<double> phases(static_cast<std::size_t>(config.num_users));
    for (auto& p : phases) p = angle(placement);

    ChannelSet cs;
    cs.geometry = make_geometry(config, std::move(phases));
    cs.taps = sample_taps(cs.geometry, make_pathloss(config), config.num_taps, config.cp_length, seed);
    cs.freq = taps_to_freq(cs.taps, config.num_subcarriers);
    return cs;
}

CMat dft_matrix(int n) {
    CMat F(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            F(r, c) = std::polar(scale, -kTwoPi * static_cast<double>((static_cast<long>(r) * c) % n) / n);
    return F;
}

CMat end_to_end_oracle(const TapChannels& taps, const CMat& coefficients, const std::vector<CMat>& beamformers,
                       const CMat& symbols, const CMat& noise) {
    const int N = static_cast<int>(coefficients.rows());
    const int M = taps.num_elements;
    const int Nt = taps.num_antennas;
    const int K = taps.num_users;
    const int D = taps.num_taps;
    if (coefficients.cols() != M || static_cast<int>(beamformers.size()) != N || symbols.rows() != N ||
        symbols.cols() != K || noise.rows() != K || noise.cols() != N || D > N)
        throw ConfigError("end_to_end_oracle: dimension mismatch");
    for (const auto& w : beamformers)
        if (w.rows() != Nt || w.cols() != K) throw ConfigError("end_to_end_oracle: beamformer dimension mismatch");

    const CMat F = dft_matrix(N);
    const CMat Fh = F.adjoint();

    // x = (F^H kron I_Nt) W s
    CVec x_freq(N * Nt);
    for (int i = 0; i < N; ++i) x_freq.segment(i * Nt, Nt) = beamformers[i] * symbols.row(i).transpose();
    CMat idft_tx = CMat::Zero(N * Nt, N * Nt);
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) idft_tx.block(r * Nt, c * Nt, Nt, Nt) = Fh(r, c) * CMat::Identity(Nt, Nt);
    const CVec x_time = idft_tx * x_freq;

    const auto lag = [N](int r, int c) { return ((r - c) % N + N) % N; };

    CMat G_bc = CMat::Zero(M * N, N * Nt);
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c)
            if (const int d = lag(r, c); d < D) G_bc.block(r * M, c * Nt, M, Nt) = taps.bs_irs[d];

    // Each element acts on the waveform as a circular filter whose DFT is its
    // per-subcarrier response: C_m = F^H diag(phi_{:,m}) F.
    CMat Phi = CMat::Zero(M * N, M * N);
    for (int m = 0; m < M; ++m) {
        const CMat Cm = Fh * coefficients.col(m).asDiagonal() * F;
        for (int r = 0; r < N; ++r)
            for (int c = 0; c < N; ++c) Phi(r * M + m, c * M + m) = Cm(r, c);
    }

    CMat out(K, N);
    for (int k = 0; k < K; ++k) {
        CMat Hd = CMat::Zero(N, N * Nt);
        CMat Hr = CMat::Zero(N, N * M);
        for (int r = 0; r < N; ++r)
            for (int c = 0; c < N; ++c)
                if (const int d = lag(r, c); d < D) {
                    Hd.block(r, c * Nt, 1, Nt) = taps.direct[k].col(d).adjoint();
                    Hr.block(r, c * M, 1, M) = taps.reflect[k].col(d).adjoint();
                }
        const CVec y_time = (Hd + Hr * Phi * G_bc) * x_time + Fh * noise.row(k).transpose();
        out.row(k) = (F * y_time).transpose();
    }
    return out;
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
    std::array<unsigned char, 4> b{};
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b.data()), 4);
}

void put_f64(std::ostream& os, double v) {
    const auto u = std::bit_cast<std::uint64_t>(v);
    std::array<unsigned char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
    os.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint32_t get_u32(std::istream& is) {
    std::array<unsigned char, 4> b{};
    if (!is.read(reinterpret_cast<char*>(b.data()), 4)) throw std::runtime_error("channel file truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is) {
    std::array<unsigned char, 8> b{};
    if (!is.read(reinterpret_cast<char*>(b.data()), 8)) throw std::runtime_error("channel file truncated");
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return std::bit_cast<double>(u);
}

void put_matrix(std::ostream& os, const CMat& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            put_f64(os, m(r, c).real());
            put_f64(os, m(r, c).imag());
        }
}

CMat get_matrix(std::istream& is, int rows, int cols) {
    CMat m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const double re = get_f64(is);
            m(r, c) = cx{re, get_f64(is)};
        }
    return m;
}

constexpr char kMagic[8] = {'I', 'R', 'S', 'C', 'H', 'A', 'N', '1'};

}  // namespace

void save_channel_set(const ChannelSet& cs, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    const auto& t = cs.taps;
    os.write(kMagic, sizeof kMagic);
    put_u32(os, static_cast<std::uint32_t>(t.num_users));
    put_u32(os, static_cast<std::uint32_t>(t.num_antennas));
    put_u32(os, static_cast<std::uint32_t>(t.num_elements));
    put_u32(os, static_cast<std::uint32_t>(t.num_taps));
    put_u32(os, static_cast<std::uint32_t>(cs.freq.num_subcarriers));
    put_f64(os, cs.geometry.d_bi);
    put_f64(os, cs.geometry.d_iu);
    put_f64(os, cs.geometry.d_a);
    put_f64(os, cs.geometry.d_i);
    for (double p : cs.geometry.user_phases) put_f64(os, p);
    for (bool b : t.nonzero_mask) os.put(b ? 1 : 0);
    for (const auto& m : t.direct) put_matrix(os, m);
    for (const auto& m : t.bs_irs) put_matrix(os, m);
    for (const auto& m : t.reflect) put_matrix(os, m);
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

ChannelSet load_channel_set(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    char magic[8];
    if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw std::runtime_error("not a channel file: " + path.string());
    ChannelSet cs;
    auto& t = cs.taps;
    t.num_users = static_cast<int>(get_u32(is));
    t.num_antennas = static_cast<int>(get_u32(is));
    t.num_elements = static_cast<int>(get_u32(is));
    t.num_taps = static_cast<int>(get_u32(is));
    const int N = static_cast<int>(get_u32(is));
    auto& g = cs.geometry;
    g.d_bi = get_f64(is);
    g.d_iu = get_f64(is);
    g.d_a = get_f64(is);
    g.d_i = get_f64(is);
    g.num_antennas = t.num_antennas;
    g.num_elements = t.num_elements;
    g.user_phases.resize(static_cast<std::size_t>(t.num_users));
    for (auto& p : g.user_phases) p = get_f64(is);
    t.nonzero_mask.resize(static_cast<std::size_t>(t.num_taps));
    for (std::size_t d = 0; d < t.nonzero_mask.size(); ++d) {
        const int c = is.get();
        if (c == std::char_traits<char>::eof()) throw std::runtime_error("channel file truncated");
        t.nonzero_mask[d] = c != 0;
    }
    for (int k = 0; k < t.num_users; ++k) t.direct.push_back(get_matrix(is, t.num_antennas, t.num_taps));
    for (int d = 0; d < t.num_taps; ++d) t.bs_irs.push_back(get_matrix(is, t.num_elements, t.num_antennas));
    for (int k = 0; k < t.num_users; ++k) t.reflect.push_back(get_matrix(is, t.num_elements, t.num_taps));
    cs.freq = taps_to_freq(t, N);
    return cs;
}

}  // namespace irsofdm
