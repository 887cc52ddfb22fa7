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
#include <functional>
#include <optional>
#include <vector>

#include "irsofdm/common.hpp"
#include "irsofdm/ofdm_metrics.hpp"
#include "irsofdm/reflection_model.hpp"
#include "irsofdm/wideband_channel.hpp"

namespace irsofdm {

struct SolverOptions {
    int max_outer_iters = 50;
    double outer_tol = 1e-4;        // relative change of the WMMSE objective
    double theta_inner_tol = 1e-4;  // relative change of the BPS sub-problem objective
    int max_theta_sweeps = 10;
    double mu_tol = 1e-9;           // power residual of the multiplier bisection, times min(1, P)
    double golden_eps = 1e-4;       // final bracket width of the golden-section phase [rad]
    double initial_step = 0.1;      // first step of the success-failure phase [rad]
    int num_subbands = 4;
    int phase_bits = 0;             // 0 = continuous phase shifters
    std::uint64_t rng_seed = 1;     // initial BPS draw
    bool optimize_phases = true;    // false freezes the BPS vector (W-only WMMSE)
    bool record_blocks = false;     // log the objective after every block update

    void validate(int num_subcarriers) const;
};

struct TraceEntry {
    int iteration = 0;
    double objective = 0.0;  // WMMSE objective after the iteration [bit/s/Hz]
    double sum_rate = 0.0;   // average sum rate under the design model
    double power = 0.0;
    double wall_ms = 0.0;
};

struct PowerRecord {
    double power = 0.0;
    double budget = 0.0;
    double mu = 0.0;
};

enum class Block { weights, receivers, beamformers, phases };

struct BlockRecord {
    int iteration = 0;
    Block block = Block::weights;
    double objective = 0.0;
};

/// Variables of the alternating optimisation.  `weights` (rho) is K x N and
/// strictly positive, `receivers` (varpi) K x N.
struct BlockState {
    RMat weights;
    CMat receivers;
    std::vector<CMat> beamformers;
    RVec bps;
    std::vector<TraceEntry> trace;
    std::vector<PowerRecord> power_log;
    std::vector<BlockRecord> block_log;
    int theta_search_regressions = 0;  // per-element moves that would raise the exact sub-problem (rejected)
};

/// rho_{k,i} = 1 / MSE_{k,i} with the current receivers.
RMat update_weights(const EffectiveChannels& h, const std::vector<CMat>& w, const CMat& receivers, double noise);

/// MMSE receivers varpi_{k,i} = h^H w_k / (sum_p |h^H w_p|^2 + sigma^2).
CMat update_receivers(const EffectiveChannels& h, const std::vector<CMat>& w, double noise);

struct BeamformerUpdate {
    std::vector<CMat> beamformers;
    double mu = 0.0;
    double power = 0.0;
};

/// Weighted-MMSE precoders under the total power budget; the multiplier is
/// found by bisection and the returned solution is always on the feasible side.
BeamformerUpdate update_beamformers(const EffectiveChannels& h, const RMat& weights, const CMat& receivers,
                                    double power_budget, double mu_tol);

/// Quadratic form of the BPS sub-problem: for every subcarrier,
/// phi^H A phi - 2 Re{phi^H b} + constant equals sum_k rho_k MSE_k minus the
/// terms that do not depend on the reflection coefficients phi.
struct ThetaSubproblem {
    std::vector<CMat> A;        // per subcarrier, M x M Hermitian PSD
    std::vector<CVec> b;        // per subcarrier, length M
    RVec constant;              // per subcarrier
    int num_subbands = 1;
    CMat chi_bar;               // N_s x M, sub-band averaged chi for the current phi
    RMat alpha_bar;             // N_s x M, sub-band averaged A(m,m)
};

ThetaSubproblem build_theta_subproblem(const FreqChannels& channels, const std::vector<CMat>& w,
                                       const RMat& weights, const CMat& receivers, const CMat& coefficients,
                                       int num_subbands);

/// Recomputes chi_bar/alpha_bar of `sub` for reflection coefficients `coefficients`.
void refresh_subband_aggregates(ThetaSubproblem& sub, const CMat& coefficients);

/// (1/N) sum_i phi_i^H A_i phi_i - 2 Re{phi_i^H b_i}.
double theta_objective(const ThetaSubproblem& sub, const CMat& coefficients);

/// One-dimensional objective g(theta) of a single element on the sub-band grid.
class ElementObjective {
public:
    ElementObjective(CVec chi_bar, RVec alpha_bar, const ReflectionModel& model);

    double operator()(double bps) const;
    const CVec& chi_bar() const { return chi_bar_; }
    const std::vector<double>& frequencies() const { return freqs_; }

private:
    CVec chi_bar_;
    RVec alpha_bar_;
    ReflectionModel model_;
    std::vector<double> freqs_;
};

ElementObjective element_objective(const ThetaSubproblem& sub, const ReflectionModel& model, int element);
double g_theta(const ThetaSubproblem& sub, const ReflectionModel& model, int element, double bps);

/// Success-failure bracketing, golden-section refinement and a final
/// comparison against the two ends of [-pi, pi].
double search_theta_continuous(const ElementObjective& g, double start, const SolverOptions& opts);

/// Exhaustive search over the codebook; ties go to the smallest value.
double search_theta_discrete(const ElementObjective& g, const PhaseCodebook& codebook);

struct ThetaUpdateStats {
    int sweeps = 0;
    double objective_before = 0.0;
    double objective_after = 0.0;
    int regressions = 0;  // candidates rejected because the exact objective went up
};

/// Element-by-element BPS update with every other element fixed, repeated
/// until the sub-problem objective settles.
RVec update_theta(const FreqChannels& channels, const ReflectionModel& model, const std::vector<CMat>& w,
                  const RMat& weights, const CMat& receivers, const RVec& bps, const SolverOptions& opts,
                  ThetaUpdateStats* stats = nullptr);

/// Regularised MMSE precoder scaled to use exactly the power budget.
std::vector<CMat> mmse_initialize(const EffectiveChannels& h, double power_budget, double noise);

/// Uniform draw of an initial BPS vector (continuous or codebook).
RVec random_bps(int num_elements, int phase_bits, std::uint64_t seed);

struct SolveResult {
    Solution solution;
    BlockState state;
    int iterations = 0;
    bool converged = false;
};

using IterationCallback = std::function<void(const TraceEntry&)>;

/// Alternating rho -> varpi -> W -> Theta updates until the relative change
/// of the WMMSE objective drops below `outer_tol`.
SolveResult solve(const FreqChannels& channels, const ReflectionModel& model, double power_budget, double noise,
                  const SolverOptions& opts, std::optional<RVec> initial_bps = std::nullopt,
                  const IterationCallback& on_iteration = {});

}  // namespace irsofdm
