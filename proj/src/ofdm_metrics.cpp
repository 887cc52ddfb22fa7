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

#include "irsofdm/ofdm_metrics.hpp"

#include <cmath>
#include <numbers>

namespace irsofdm {

double Solution::total_power() const {
    double p = 0.0;
    for (const auto& w : beamformers) p += w.squaredNorm();
    return p;
}

CVec effective_channel(const FreqChannels& ch, const ReflectionModel& model, const RVec& bps, int user,
                       int subcarrier) {
    if (user < 0 || user >= ch.num_users || subcarrier < 0 || subcarrier >= ch.num_subcarriers)
        throw std::out_of_range("effective_channel: index out of range");
    const auto i = static_cast<std::size_t>(subcarrier);
    CVec h = ch.direct[i].col(user);
    if (model.tag() == ModelTag::off) return h;
    CVec phi(bps.size());
    for (Eigen::Index m = 0; m < bps.size(); ++m) phi[m] = model.at(bps[m], subcarrier);
    // (h^r)^H Phi G  ->  conjugate transpose G^H conj(Phi) h^r
    h += ch.bs_irs[i].adjoint() * phi.conjugate().cwiseProduct(ch.reflect[i].col(user));
    return h;
}

EffectiveChannels effective_channels(const FreqChannels& ch, const CMat& coefficients) {
    EffectiveChannels out(static_cast<std::size_t>(ch.num_subcarriers));
    for (int i = 0; i < ch.num_subcarriers; ++i) {
        const auto s = static_cast<std::size_t>(i);
        const CVec phi_conj = coefficients.row(i).adjoint();
        out[s] = ch.direct[s] + ch.bs_irs[s].adjoint() * (phi_conj.asDiagonal() * ch.reflect[s]);
    }
    return out;
}

EffectiveChannels effective_channels(const FreqChannels& ch, const ReflectionModel& model, const RVec& bps) {
    if (model.tag() == ModelTag::off) return ch.direct;
    return effective_channels(ch, model.coefficients(bps));
}

double sinr(const EffectiveChannels& h, const std::vector<CMat>& w, int user, int subcarrier, double noise) {
    const auto i = static_cast<std::size_t>(subcarrier);
    const Eigen::RowVectorXcd gains = h[i].col(user).adjoint() * w[i];
    const double signal = std::norm(gains[user]);
    const double interference = gains.squaredNorm() - signal;
    return signal / (interference + noise);
}

double average_sum_rate(const EffectiveChannels& h, const std::vector<CMat>& w, double noise) {
    double total = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const CMat gains = h[i].adjoint() * w[i];  // (k, p) = h_k^H w_p
        for (Eigen::Index k = 0; k < gains.rows(); ++k) {
            const double signal = std::norm(gains(k, k));
            const double interference = gains.row(k).squaredNorm() - signal;
            total += std::log2(1.0 + signal / (interference + noise));
        }
    }
    return total / static_cast<double>(h.size());
}

double mse(const EffectiveChannels& h, const std::vector<CMat>& w, cx receiver, int user, int subcarrier,
           double noise) {
    const auto i = static_cast<std::size_t>(subcarrier);
    const Eigen::RowVectorXcd gains = h[i].col(user).adjoint() * w[i];
    const double r2 = std::norm(receiver);
    return r2 * gains.squaredNorm() - 2.0 * std::real(std::conj(receiver) * gains[user]) + r2 * noise + 1.0;
}

double wmmse_objective(const EffectiveChannels& h, const std::vector<CMat>& w, const RMat& weights,
                       const CMat& receivers, double noise) {
    const int N = static_cast<int>(h.size());
    double total = 0.0;
    for (int i = 0; i < N; ++i)
        for (Eigen::Index k = 0; k < weights.rows(); ++k) {
            const double rho = weights(k, i);
            if (!(rho > 0.0)) throw DomainError("MSE weights must be positive");
            const double e = mse(h, w, receivers(k, i), static_cast<int>(k), i, noise);
            total += std::log2(rho) - (rho * e - 1.0) / std::numbers::ln2;
        }
    return total / N;
}

CMat received_signal(const EffectiveChannels& h, const std::vector<CMat>& w, const CMat& symbols, const CMat& noise) {
    const auto N = static_cast<Eigen::Index>(h.size());
    const Eigen::Index K = symbols.cols();
    CMat y(K, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        const auto s = static_cast<std::size_t>(i);
        y.col(i) = h[s].adjoint() * (w[s] * symbols.row(i).transpose()) + noise.col(i);
    }
    return y;
}

}  // namespace irsofdm
