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

#include <vector>

#include "irsofdm/common.hpp"
#include "irsofdm/reflection_model.hpp"
#include "irsofdm/wideband_channel.hpp"

namespace irsofdm {

/// Optimisation variables: one N_t x K precoder per subcarrier and the BPS
/// vector.  `model_tag` names the response the BPS vector was designed for.
struct Solution {
    std::vector<CMat> beamformers;
    RVec bps;
    ModelTag model_tag = ModelTag::practical;

    double total_power() const;
};

/// Composite channels per subcarrier: column k of entry i is
/// h_{k,i} = h^d_{k,i} + G_i^H Phi_i^H h^r_{k,i}, i.e. the conjugate transpose
/// of the row that multiplies W_i s_i at user k.  Recompute after any BPS change.
using EffectiveChannels = std::vector<CMat>;

CVec effective_channel(const FreqChannels& channels, const ReflectionModel& model, const RVec& bps, int user,
                       int subcarrier);
EffectiveChannels effective_channels(const FreqChannels& channels, const ReflectionModel& model, const RVec& bps);
/// Same, with the per-subcarrier reflection coefficients already evaluated (N x M).
EffectiveChannels effective_channels(const FreqChannels& channels, const CMat& coefficients);

double sinr(const EffectiveChannels& h, const std::vector<CMat>& w, int user, int subcarrier, double noise);

/// (1/N) sum_i sum_k log2(1 + SINR_{k,i}) in bit/s/Hz.
double average_sum_rate(const EffectiveChannels& h, const std::vector<CMat>& w, double noise);

/// Modified MSE of user k on subcarrier i for receive scalar `receiver`.
double mse(const EffectiveChannels& h, const std::vector<CMat>& w, cx receiver, int user, int subcarrier,
           double noise);

/// Weighted-MSE objective (1/N) sum (log2 rho - (rho MSE - 1) / ln 2), in bits.
/// `weights` and `receivers` are K x N.  Equals the average sum rate when
/// rho = 1/MSE and the receivers are the MMSE receivers.
double wmmse_objective(const EffectiveChannels& h, const std::vector<CMat>& w, const RMat& weights,
                       const CMat& receivers, double noise);

/// Noisy per-subcarrier received samples y_{k,i} = h_{k,i}^H W_i s_i + n_{k,i}
/// (K x N).  `symbols` is N x K, `noise` K x N.
CMat received_signal(const EffectiveChannels& h, const std::vector<CMat>& w, const CMat& symbols, const CMat& noise);

}  // namespace irsofdm
