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

#include "irsofdm/bcd_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

namespace irsofdm {

void SolverOptions::validate(int num_subcarriers) const {
    if (max_outer_iters < 1) throw ConfigError("max_outer_iters must be >= 1");
    if (max_theta_sweeps < 1) throw ConfigError("max_theta_sweeps must be >= 1");
    if (!(outer_tol > 0.0) || !(theta_inner_tol > 0.0) || !(mu_tol > 0.0) || !(golden_eps > 0.0) ||
        !(initial_step > 0.0))
        throw ConfigError("solver tolerances and step sizes must be positive");
    if (num_subbands < 1 || num_subcarriers % num_subbands != 0)
        throw ConfigError("sub-band count must divide the subcarrier count");
    if (phase_bits < 0 || phase_bits > 20) throw ConfigError("phase_bits must be in [0, 20]");
}

RMat update_weights(const EffectiveChannels& h, const std::vector<CMat>& w, const CMat& receivers, double noise) {
    const auto K = receivers.rows();
    const auto N = static_cast<Eigen::Index>(h.size());
    RMat rho(K, N);
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index k = 0; k < K; ++k) {
            const double e = mse(h, w, receivers(k, i), static_cast<int>(k), static_cast<int>(i), noise);
            if (!(e > 0.0)) throw SolverError("non-positive MSE in weight update");
            rho(k, i) = 1.0 / e;
        }
    return rho;
}

CMat update_receivers(const EffectiveChannels& h, const std::vector<CMat>& w, double noise) {
    const auto N = static_cast<Eigen::Index>(h.size());
    const Eigen::Index K = h.empty() ? 0 : h[0].cols();
    CMat varpi(K, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        const auto s = static_cast<std::size_t>(i);
        const CMat gains = h[s].adjoint() * w[s];
        for (Eigen::Index k = 0; k < K; ++k) varpi(k, i) = gains(k, k) / (gains.row(k).squaredNorm() + noise);
    }
    return varpi;
}

BeamformerUpdate update_beamformers(const EffectiveChannels& h, const RMat& weights, const CMat& receivers,
                                    double power_budget, double mu_tol) {
    const auto N = h.size();
    struct Spectral {
        CMat U;
        RVec lambda;
        CMat T;         // U^H R
        RVec row_energy;
    };
    std::vector<Spectral> spec(N);
    double lambda_max = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        const CMat heq = h[i] * receivers.col(col).asDiagonal();  // varpi_k h_k
        const CMat R = heq * weights.col(col).asDiagonal();       // rho_k varpi_k h_k
        const CMat J = heq * weights.col(col).asDiagonal() * heq.adjoint();
        Eigen::SelfAdjointEigenSolver<CMat> eig(J);
        if (eig.info() != Eigen::Success) throw SolverError("eigendecomposition failed in beamformer update");
        spec[i].U = eig.eigenvectors();
        spec[i].lambda = eig.eigenvalues();
        spec[i].T = spec[i].U.adjoint() * R;
        spec[i].row_energy = spec[i].T.rowwise().squaredNorm();
        lambda_max = std::max(lambda_max, spec[i].lambda.maxCoeff());
    }
    // Directions with (numerically) zero eigenvalue carry no signal energy.
    const double floor = 1e-12 * lambda_max;

    const auto power_at = [&](double mu) {
        double p = 0.0;
        for (const auto& s : spec)
            for (Eigen::Index j = 0; j < s.lambda.size(); ++j)
                if (s.lambda[j] > floor) p += s.row_energy[j] / ((s.lambda[j] + mu) * (s.lambda[j] + mu));
        return p;
    };

    double mu = 0.0;
    if (lambda_max > 0.0 && power_at(0.0) > power_budget) {
        double lo = 0.0;
        double hi = 1.0;
        while (power_at(hi) > power_budget) {
            lo = hi;
            hi *= 2.0;
            if (!std::isfinite(hi)) throw SolverError("multiplier bracket could not be established");
        }
        // Relative to the budget, but never looser than mu_tol in absolute terms.
        const double tol = mu_tol * std::min(1.0, power_budget);
        for (int it = 0; it < 2000; ++it) {
            const double p_hi = power_at(hi);
            if (power_budget - p_hi <= tol) break;
            if (hi - lo <= 1e-15 * hi) break;
            const double mid = 0.5 * (lo + hi);
            if (power_at(mid) > power_budget)
                lo = mid;
            else
                hi = mid;
        }
        mu = hi;
    }

    BeamformerUpdate out;
    out.mu = mu;
    out.beamformers.reserve(N);
    for (const auto& s : spec) {
        RVec inv(s.lambda.size());
        for (Eigen::Index j = 0; j < s.lambda.size(); ++j) inv[j] = s.lambda[j] > floor ? 1.0 / (s.lambda[j] + mu) : 0.0;
        out.beamformers.push_back(s.U * (inv.cast<cx>().asDiagonal() * s.T));
    }
    out.power = 0.0;
    for (const auto& w : out.beamformers) out.power += w.squaredNorm();
    return out;
}

ThetaSubproblem build_theta_subproblem(const FreqChannels& ch, const std::vector<CMat>& w, const RMat& weights,
                                       const CMat& receivers, const CMat& coefficients, int num_subbands) {
    const int N = ch.num_subcarriers;
    const int M = ch.num_elements;
    const int K = ch.num_users;
    if (num_subbands < 1 || N % num_subbands != 0) throw ConfigError("sub-band count must divide the subcarrier count");

    ThetaSubproblem sub;
    sub.num_subbands = num_subbands;
    sub.A.assign(static_cast<std::size_t>(N), CMat::Zero(M, M));
    sub.b.assign(static_cast<std::size_t>(N), CVec::Zero(M));
    sub.constant = RVec::Zero(N);
    for (int i = 0; i < N; ++i) {
        const auto s = static_cast<std::size_t>(i);
        const CMat gw_conj = (ch.bs_irs[s] * w[s]).conjugate();  // column p: conj(G_i w_p)
        const CMat hd = ch.direct[s].adjoint() * w[s];           // (k, p): (h^d_k)^H w_p
        for (int k = 0; k < K; ++k) {
            const double rho = weights(k, i);
            const cx varpi = receivers(k, i);
            const double v2 = std::norm(varpi);
            const CMat V = ch.reflect[s].col(k).asDiagonal() * gw_conj;  // column p: v_{k,p,i}
            sub.A[s].noalias() += (rho * v2) * (V * V.adjoint());
            sub.b[s] += rho * (varpi * V.col(k) - v2 * (V * hd.row(k).transpose()));
            sub.constant[i] += rho * (v2 * hd.row(k).squaredNorm() - 2.0 * std::real(std::conj(varpi) * hd(k, k)));
        }
    }
    refresh_subband_aggregates(sub, coefficients);
    return sub;
}

void refresh_subband_aggregates(ThetaSubproblem& sub, const CMat& coefficients) {
    const auto N = static_cast<int>(sub.A.size());
    const auto M = coefficients.cols();
    const int S = N / sub.num_subbands;
    sub.chi_bar = CMat::Zero(sub.num_subbands, M);
    sub.alpha_bar = RMat::Zero(sub.num_subbands, M);
    for (int i = 0; i < N; ++i) {
        const auto s = static_cast<std::size_t>(i);
        const CVec phi = coefficients.row(i).transpose();
        const CVec y = sub.A[s] * phi;
        const int band = i / S;
        for (Eigen::Index m = 0; m < M; ++m) {
            const cx chi = y[m] - sub.A[s](m, m) * phi[m] - sub.b[s][m];
            sub.chi_bar(band, m) += chi / static_cast<double>(S);
            sub.alpha_bar(band, m) += std::real(sub.A[s](m, m)) / S;
        }
    }
}

double theta_objective(const ThetaSubproblem& sub, const CMat& coefficients) {
    double total = 0.0;
    for (std::size_t i = 0; i < sub.A.size(); ++i) {
        const CVec phi = coefficients.row(static_cast<Eigen::Index>(i)).transpose();
        total += std::real(phi.dot(sub.A[i] * phi)) - 2.0 * std::real(phi.dot(sub.b[i]));
    }
    return total / static_cast<double>(sub.A.size());
}

ElementObjective::ElementObjective(CVec chi_bar, RVec alpha_bar, const ReflectionModel& model)
    : chi_bar_(std::move(chi_bar)), alpha_bar_(std::move(alpha_bar)), model_(model) {
    const auto ns = static_cast<int>(chi_bar_.size());
    const CarrierGrid bands{model.grid().f_c, model.grid().bandwidth, ns};
    freqs_.reserve(static_cast<std::size_t>(ns));
    for (int s = 0; s < ns; ++s) freqs_.push_back(bands.frequency(s));
}

double ElementObjective::operator()(double bps) const {
    double g = 0.0;
    for (std::size_t s = 0; s < freqs_.size(); ++s) {
        const auto j = static_cast<Eigen::Index>(s);
        const cx r = model_.response(bps, freqs_[s]);
        // 2|chi| F cos(angle(chi) - G) + alpha F^2
        g += 2.0 * std::real(chi_bar_[j] * std::conj(r)) + alpha_bar_[j] * std::norm(r);
    }
    return g;
}

ElementObjective element_objective(const ThetaSubproblem& sub, const ReflectionModel& model, int element) {
    return {sub.chi_bar.col(element), sub.alpha_bar.col(element), model};
}

double g_theta(const ThetaSubproblem& sub, const ReflectionModel& model, int element, double bps) {
    return element_objective(sub, model, element)(bps);
}

double search_theta_continuous(const ElementObjective& g, double start, const SolverOptions& opts) {
    const auto clip = [](double x) { return std::clamp(x, -kPi, kPi); };

    // Phase 1: success-failure bracketing.
    double h = opts.initial_step;
    double t1 = clip(start);
    double t2 = clip(t1 + h);
    if (t2 == t1) {
        h = -h;
        t2 = clip(t1 + h);
    }
    double g1 = g(t1);
    double g2 = g(t2);
    if (!(g2 < g1)) {
        h = -h;
        std::swap(t1, t2);
        std::swap(g1, g2);
    }
    double lo = std::min(t1, t2);
    double hi = std::max(t1, t2);
    for (int it = 0; it < 64; ++it) {
        const double t3 = clip(t2 + h);
        if (t3 == t2) {  // ran into the edge of [-pi, pi] while still descending
            lo = std::min(t1, t2);
            hi = std::max(t1, t2);
            break;
        }
        const double g3 = g(t3);
        lo = std::min(t1, t3);
        hi = std::max(t1, t3);
        if (g2 <= g3) break;
        h *= 2.0;
        t1 = t2;
        t2 = t3;
        g2 = g3;
    }

    // Phase 2: golden section.
    double tl = lo + 0.382 * (hi - lo);
    double tr = lo + 0.618 * (hi - lo);
    double gl = g(tl);
    double gr = g(tr);
    while (hi - lo > opts.golden_eps) {
        if (gl <= gr) {
            hi = tr;
            tr = tl;
            gr = gl;
            tl = lo + 0.382 * (hi - lo);
            gl = g(tl);
        } else {
            lo = tl;
            tl = tr;
            gl = gr;
            tr = lo + 0.618 * (hi - lo);
            gr = g(tr);
        }
    }
    const double interior = 0.5 * (lo + hi);

    // Phase 3: compare with the interval ends; ties keep the interior point, then -pi.
    double best = interior;
    double g_best = g(interior);
    if (const double gm = g(-kPi); gm < g_best) {
        best = -kPi;
        g_best = gm;
    }
    if (const double gp = g(kPi); gp < g_best) best = kPi;
    return best;
}

double search_theta_discrete(const ElementObjective& g, const PhaseCodebook& codebook) {
    if (codebook.values.empty()) throw ConfigError("empty phase codebook");
    double best = codebook.values.front();
    double g_best = g(best);
    for (std::size_t i = 1; i < codebook.values.size(); ++i) {
        const double v = g(codebook.values[i]);
        if (v < g_best) {
            g_best = v;
            best = codebook.values[i];
        }
    }
    return best;
}

RVec update_theta(const FreqChannels& ch, const ReflectionModel& model, const std::vector<CMat>& w,
                  const RMat& weights, const CMat& receivers, const RVec& bps, const SolverOptions& opts,
                  ThetaUpdateStats* stats) {
    const int N = ch.num_subcarriers;
    const int M = ch.num_elements;
    const int S = N / opts.num_subbands;
    RVec theta = bps;
    CMat phi = model.coefficients(theta);
    ThetaSubproblem sub = build_theta_subproblem(ch, w, weights, receivers, phi, opts.num_subbands);

    std::optional<PhaseCodebook> codebook;
    if (opts.phase_bits > 0) codebook.emplace(opts.phase_bits);
    const bool closed_form = !codebook && model.tag() == ModelTag::ideal;

    // Running products A_i phi_i, refreshed by one column after each element change.
    std::vector<CVec> a_phi(static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) a_phi[static_cast<std::size_t>(i)] = sub.A[static_cast<std::size_t>(i)] * phi.row(i).transpose();

    ThetaUpdateStats st;
    double previous = theta_objective(sub, phi);
    st.objective_before = previous;
    CVec chi_bar(opts.num_subbands);
    RVec alpha_bar(opts.num_subbands);
    CVec chi_i(N);
    for (int sweep = 0; sweep < opts.max_theta_sweeps; ++sweep) {
        for (int m = 0; m < M; ++m) {
            chi_bar.setZero();
            alpha_bar.setZero();
            cx chi_total{0.0, 0.0};
            for (int i = 0; i < N; ++i) {
                const auto s = static_cast<std::size_t>(i);
                const cx chi = a_phi[s][m] - sub.A[s](m, m) * phi(i, m) - sub.b[s][m];
                chi_i[i] = chi;
                chi_total += chi;
                chi_bar[i / S] += chi / static_cast<double>(S);
                alpha_bar[i / S] += std::real(sub.A[s](m, m)) / S;
            }
            const ElementObjective g(chi_bar, alpha_bar, model);
            double candidate = 0.0;
            if (codebook)
                candidate = search_theta_discrete(g, *codebook);
            else if (closed_form)
                candidate = wrap_phase((chi_total == cx{0.0, 0.0} ? 0.0 : std::arg(chi_total)) + kPi);
            else
                candidate = search_theta_continuous(g, theta[m], opts);

            if (candidate == theta[m]) continue;
            // The search sees sub-band averages; accept only if the exact quadratic does not go up.
            double delta = 0.0;
            for (int i = 0; i < N; ++i) {
                const auto s = static_cast<std::size_t>(i);
                const double a = std::real(sub.A[s](m, m));
                const cx d = model.at(candidate, i) - phi(i, m);
                delta += 2.0 * std::real(std::conj(d) * (chi_i[i] + a * phi(i, m))) + a * std::norm(d);
            }
            if (delta > 0.0) {
                ++st.regressions;
                continue;
            }
            theta[m] = candidate;
            for (int i = 0; i < N; ++i) {
                const auto s = static_cast<std::size_t>(i);
                const cx updated = model.at(candidate, i);
                a_phi[s] += sub.A[s].col(m) * (updated - phi(i, m));
                phi(i, m) = updated;
            }
        }
        ++st.sweeps;
        double current = 0.0;
        for (int i = 0; i < N; ++i) {
            const auto s = static_cast<std::size_t>(i);
            const CVec p = phi.row(i).transpose();
            current += std::real(p.dot(a_phi[s])) - 2.0 * std::real(p.dot(sub.b[s]));
        }
        current /= N;
        const double change = std::abs(current - previous);
        previous = current;
        if (change < opts.theta_inner_tol * std::max(std::abs(current), 1e-300)) break;
    }
    st.objective_after = previous;
    if (stats) *stats = st;
    return theta;
}

std::vector<CMat> mmse_initialize(const EffectiveChannels& h, double power_budget, double noise) {
    std::vector<CMat> w;
    w.reserve(h.size());
    double total = 0.0;
    for (const auto& hi : h) {
        const CMat psi = hi * hi.adjoint() + noise * CMat::Identity(hi.rows(), hi.rows());
        Eigen::LLT<CMat> llt(psi);
        if (llt.info() != Eigen::Success) throw SolverError("MMSE initialisation: singular covariance");
        w.push_back(llt.solve(hi));
        total += w.back().squaredNorm();
    }
    if (!(total > 0.0)) throw SolverError("MMSE initialisation produced an all-zero precoder");
    const double scale = std::sqrt(power_budget / total);
    for (auto& wi : w) wi *= scale;
    return w;
}

RVec random_bps(int num_elements, int phase_bits, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    RVec theta(num_elements);
    if (phase_bits > 0) {
        const PhaseCodebook cb(phase_bits);
        std::uniform_int_distribution<std::size_t> pick(0, cb.values.size() - 1);
        for (auto& t : theta) t = cb.values[pick(rng)];
    } else {
        std::uniform_real_distribution<double> u(-kPi, kPi);
        for (auto& t : theta) t = u(rng);
    }
    return theta;
}

SolveResult solve(const FreqChannels& ch, const ReflectionModel& model, double power_budget, double noise,
                  const SolverOptions& opts, std::optional<RVec> initial_bps, const IterationCallback& on_iteration) {
    opts.validate(ch.num_subcarriers);
    if (model.grid().num_subcarriers != ch.num_subcarriers)
        throw ConfigError("reflection model grid does not match the channel subcarrier count");
    if (!(power_budget > 0.0) || !(noise > 0.0) || !std::isfinite(power_budget) || !std::isfinite(noise))
        throw ConfigError("power budget and noise must be positive and finite");

    const auto t0 = std::chrono::steady_clock::now();
    const auto elapsed_ms = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    };

    SolveResult res;
    BlockState& st = res.state;
    st.bps = initial_bps ? *initial_bps : random_bps(ch.num_elements, opts.phase_bits, opts.rng_seed);
    if (st.bps.size() != ch.num_elements) throw ConfigError("initial BPS vector has the wrong length");

    EffectiveChannels h = effective_channels(ch, model, st.bps);
    st.beamformers = mmse_initialize(h, power_budget, noise);
    st.receivers = update_receivers(h, st.beamformers, noise);
    st.weights = update_weights(h, st.beamformers, st.receivers, noise);

    const auto total_power = [&] {
        double p = 0.0;
        for (const auto& w : st.beamformers) p += w.squaredNorm();
        return p;
    };
    const auto log_block = [&](int it, Block b) {
        if (opts.record_blocks)
            st.block_log.push_back({it, b, wmmse_objective(h, st.beamformers, st.weights, st.receivers, noise)});
    };

    double previous = wmmse_objective(h, st.beamformers, st.weights, st.receivers, noise);
    st.trace.push_back({0, previous, average_sum_rate(h, st.beamformers, noise), total_power(), elapsed_ms()});
    if (on_iteration) on_iteration(st.trace.back());
    if (opts.record_blocks) st.block_log.push_back({0, Block::phases, previous});

    for (int it = 1; it <= opts.max_outer_iters; ++it) {
        st.weights = update_weights(h, st.beamformers, st.receivers, noise);
        log_block(it, Block::weights);
        st.receivers = update_receivers(h, st.beamformers, noise);
        log_block(it, Block::receivers);
        BeamformerUpdate bf = update_beamformers(h, st.weights, st.receivers, power_budget, opts.mu_tol);
        st.beamformers = std::move(bf.beamformers);
        st.power_log.push_back({bf.power, power_budget, bf.mu});
        log_block(it, Block::beamformers);
        if (opts.optimize_phases && model.tag() != ModelTag::off) {
            ThetaUpdateStats ts;
            st.bps = update_theta(ch, model, st.beamformers, st.weights, st.receivers, st.bps, opts, &ts);
            st.theta_search_regressions += ts.regressions;
            h = effective_channels(ch, model, st.bps);
            log_block(it, Block::phases);
        }

        const double current = wmmse_objective(h, st.beamformers, st.weights, st.receivers, noise);
        st.trace.push_back({it, current, average_sum_rate(h, st.beamformers, noise), total_power(), elapsed_ms()});
        if (on_iteration) on_iteration(st.trace.back());
        res.iterations = it;
        if (std::abs(current - previous) < opts.outer_tol * std::max(std::abs(previous), 1e-300)) {
            res.converged = true;
            break;
        }
        previous = current;
    }

    res.solution.beamformers = st.beamformers;
    res.solution.bps = st.bps;
    res.solution.model_tag = model.tag();
    return res;
}

}  // namespace irsofdm
