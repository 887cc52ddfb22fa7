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
#include <filesystem>
#include <vector>

#include "irsofdm/common.hpp"
#include "irsofdm/system_config.hpp"

namespace irsofdm {

/// BS / IRS / user placement.  The BS is a ULA in the y-z plane, the IRS a
/// sqrt(M) x sqrt(M) UPA in the x-y plane, users sit in the x-z plane at
/// distance d_iu from the IRS reference element.
struct Geometry {
    double d_bi = 10.0;
    double d_iu = 1.0;
    double d_a = 0.3;
    double d_i = 0.03;
    std::vector<double> user_phases;
    int num_elements = 16;
    int num_antennas = 4;

    int side() const;
    void validate() const;
};

struct PathLoss {
    double zeta0 = 1e-3;
    double exponent_bi = 2.8;
    double exponent_iu = 2.5;
    double exponent_bu = 3.7;

    void validate() const;
};

struct ElementDistances {
    double irs_user;  // IRS element (p,q) to user k
    double bs_user;   // antenna n to user k
    double bs_irs;    // antenna n to IRS element (p,q)
};

/// Closed-form distances.  `antenna`, `p` and `q` are 1-based array
/// coordinates (0 addresses the reference point); `user` is 0-based.
ElementDistances element_distances(const Geometry& geometry, int antenna, int p, int q, int user);

/// Amplitude attenuation sqrt(zeta0 * d^-exponent).
double fading(const PathLoss& pathloss, double distance, double exponent);

/// Linear IRS element index of UPA coordinates (p, q), both 1-based.
inline int element_index(int p, int q, int side) { return (p - 1) * side + (q - 1); }

/// Time-domain taps of the three links.
struct TapChannels {
    int num_users = 0;
    int num_antennas = 0;
    int num_elements = 0;
    int num_taps = 0;
    std::vector<CMat> direct;   // per user: N_t x D, column d is tap d
    std::vector<CMat> bs_irs;   // per tap: M x N_t
    std::vector<CMat> reflect;  // per user: M x D
    std::vector<bool> nonzero_mask;
};

/// Per-subcarrier channels.  Columns of `direct[i]` and `reflect[i]` are users.
struct FreqChannels {
    int num_users = 0;
    int num_antennas = 0;
    int num_elements = 0;
    int num_subcarriers = 0;
    std::vector<CMat> direct;   // per subcarrier: N_t x K, column k = h^d_{k,i}
    std::vector<CMat> reflect;  // per subcarrier: M x K, column k = h^r_{k,i}
    std::vector<CMat> bs_irs;   // per subcarrier: M x N_t, G_i

    /// Copy with the IRS-user links zeroed.
    FreqChannels without_reflection() const;
};

/// One channel realization in both representations.
struct ChannelSet {
    Geometry geometry;
    TapChannels taps;
    FreqChannels freq;

    /// FNV-1a digest of the tap bytes; equal digests mean identical channels.
    std::uint64_t digest() const;
};

/// Draws CSCG taps on the first D/2 delays (variance 1/(D/2) each) and
/// scales every scalar by the fading of its own antenna/element distance.
TapChannels sample_taps(const Geometry& geometry, const PathLoss& pathloss, int num_taps, int cp_length,
                        std::uint64_t seed);

/// Eigenvalues of the cyclic channel matrices on the N-point grid.
FreqChannels taps_to_freq(const TapChannels& taps, int num_subcarriers);

Geometry make_geometry(const SystemConfig& config, std::vector<double> user_phases);
PathLoss make_pathloss(const SystemConfig& config);

/// Full realization for (config, seed): user angles, taps, frequency channels.
ChannelSet generate_channel_set(const SystemConfig& config, std::uint64_t seed);

/// Literal block-cyclic time-domain model.  Builds the N x NN_t, MN x NN_t and
/// N x NM block-cyclic matrices and the NM x NM IRS operator, transmits the
/// IDFT of the precoded symbols, adds noise and returns the DFT of the
/// received samples (K x N).  Intended for small N only.
///
/// `coefficients` is N x M (phi_{i,m}); `symbols` is N x K; `noise` is K x N
/// and given in the frequency domain.
CMat end_to_end_oracle(const TapChannels& taps, const CMat& coefficients, const std::vector<CMat>& beamformers,
                       const CMat& symbols, const CMat& noise);

/// Unitary DFT matrix F(m,n) = exp(-j 2 pi m n / N) / sqrt(N), 0-based.
CMat dft_matrix(int n);

/// Binary replay format, all little-endian: magic "IRSCHAN1"; uint32 dims
/// K, N_t, M, D, N; float64 d_bi, d_iu, d_a, d_i; K float64 user phases;
/// D uint8 nonzero flags; then the direct (K x [N_t x D]), BS-IRS
/// (D x [M x N_t]) and IRS-user (K x [M x D]) taps, each matrix row-major as
/// float64 (re, im) pairs.  Frequency channels are recomputed on load.
void save_channel_set(const ChannelSet& channels, const std::filesystem::path& path);
ChannelSet load_channel_set(const std::filesystem::path& path);

}  // namespace irsofdm
