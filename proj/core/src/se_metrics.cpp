// SPDX-License-Identifier: Apache-2.0
//
// gensm-mimo: hybrid precoding for GenSM-aided mmWave MIMO
// Copyright (C) 2026 gensm-mimo contributors
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

#include "gensm/se_metrics.hpp"

#include <cmath>

#include "gensm/errors.hpp"
#include "gensm/linalg.hpp"

namespace gensm {

namespace {
constexpr double kLn2 = 0.69314718055994530942;
} // namespace

namespace detail {

MixtureContext build_mixture(const arma::cx_mat &h, const PowerAllocation &lambda,
                             const AnalogVector &a, const SystemConfig &cfg,
                             bool with_pairs)
{
    const CovarianceSet set = covariance_set(h, a, lambda, cfg);
    MixtureContext ctx;
    ctx.m = cfg.m;
    ctx.n_r = cfg.n_r;
    ctx.sigma_n_sq = cfg.sigma_n_sq;
    ctx.chol.resize(cfg.m);
    ctx.logdet.resize(cfg.m);
    for (arma::uword mi = 0; mi < cfg.m; ++mi)
    {
        arma::cx_mat f = set.sigmas[mi];
        if (!cholesky_lower_inplace(f))
            throw NumericalFailure("build_mixture: Sigma_m is not positive definite");
        ctx.logdet[mi] = logdet_from_factor(f);
        ctx.chol[mi] = std::move(f);
    }
    if (with_pairs)
    {
        ctx.pair_logdet.set_size(cfg.m, cfg.m);
        for (arma::uword n = 0; n < cfg.m; ++n)
            for (arma::uword t = n; t < cfg.m; ++t)
            {
                arma::cx_mat s = set.sigmas[n] + set.sigmas[t];
                if (!cholesky_lower_inplace(s))
                    throw NumericalFailure(
                        "build_mixture: Sigma_n + Sigma_t is not positive definite");
                const double ld = logdet_from_factor(s);
                ctx.pair_logdet(n, t) = ld;
                ctx.pair_logdet(t, n) = ld;
            }
    }
    return ctx;
}

double rlb_bits_from_pairs(const arma::mat &pair_logdet, arma::uword n_r,
                           double sigma_n_sq)
{
    const arma::uword m = pair_logdet.n_rows;
    std::vector<double> neg(m);
    double acc = 0.0;
    for (arma::uword n = 0; n < m; ++n)
    {
        for (arma::uword t = 0; t < m; ++t)
            neg[t] = -pair_logdet(n, t);
        acc += log_sum_exp(neg);
    }
    const double nat = std::log(static_cast<double>(m)) -
                       static_cast<double>(n_r) * (1.0 + std::log(sigma_n_sq)) -
                       acc / static_cast<double>(m);
    return nat / kLn2;
}

double rlb_value_bits(const arma::cx_mat &h, const PowerAllocation &lambda,
                      const AnalogVector &a, const SystemConfig &cfg)
{
    const CovarianceSet set = covariance_set(h, a, lambda, cfg);
    arma::mat pair_logdet(cfg.m, cfg.m);
    for (arma::uword n = 0; n < cfg.m; ++n)
        for (arma::uword t = n; t < cfg.m; ++t)
        {
            arma::cx_mat s = set.sigmas[n] + set.sigmas[t];
            if (!cholesky_lower_inplace(s))
                throw NumericalFailure(
                    "rlb_value_bits: Sigma_n + Sigma_t is not positive definite");
            const double ld = logdet_from_factor(s);
            pair_logdet(n, t) = ld;
            pair_logdet(t, n) = ld;
        }
    return rlb_bits_from_pairs(pair_logdet, cfg.n_r, cfg.sigma_n_sq);
}

double spatial_mi_sample_bits(const MixtureContext &ctx, std::uint64_t seed,
                              std::uint64_t i)
{
    Rng rng = Rng::substream(seed, {i});
    const arma::uword m = static_cast<arma::uword>(rng.uniform_index(ctx.m));

    // y = L_m z with z ~ CN(0, I)
    arma::cx_vec z(ctx.n_r);
    for (arma::uword k = 0; k < ctx.n_r; ++k)
        z(k) = rng.cnormal();
    arma::cx_vec y(ctx.n_r, arma::fill::zeros);
    const arma::cx_mat &lm = ctx.chol[m];
    for (arma::uword c = 0; c < ctx.n_r; ++c)
    {
        const cx_double zc = z(c);
        for (arma::uword r = c; r < ctx.n_r; ++r)
            y(r) += lm(r, c) * zc;
    }

    // log densities up to the common -N_R ln(pi) constant
    std::vector<double> logp(ctx.m);
    for (arma::uword t = 0; t < ctx.m; ++t)
        logp[t] = -ctx.logdet[t] - quadratic_form_from_factor(ctx.chol[t], y);
    const double mix = log_sum_exp(logp) - std::log(static_cast<double>(ctx.m));
    return (logp[m] - mix) / kLn2;
}

} // namespace detail

SeEstimate se_lower_bound(const arma::cx_mat &h, const PowerAllocation &lambda,
                          const AnalogVector &a, const SystemConfig &cfg)
{
    lambda.validate(cfg);
    return {detail::rlb_value_bits(h, lambda, a, cfg), SeKind::closed_form, 0, 0.0};
}

SeEstimate conditional_mi(const arma::cx_mat &h, const PowerAllocation &lambda,
                          const AnalogVector &a, const SystemConfig &cfg)
{
    const auto ctx = detail::build_mixture(h, lambda, a, cfg, /*with_pairs=*/false);
    double acc = 0.0;
    for (arma::uword mi = 0; mi < cfg.m; ++mi)
        acc += ctx.logdet[mi] - static_cast<double>(cfg.n_r) * std::log(cfg.sigma_n_sq);
    return {acc / (static_cast<double>(cfg.m) * kLn2), SeKind::closed_form, 0, 0.0};
}

SeEstimate spatial_mi_mc(const arma::cx_mat &h, const PowerAllocation &lambda,
                         const AnalogVector &a, const SystemConfig &cfg,
                         std::size_t n_samples, std::uint64_t seed)
{
    if (n_samples < 100)
        throw std::invalid_argument("spatial_mi_mc: n_samples must be >= 100");
    if (cfg.m == 1)
        return {0.0, SeKind::monte_carlo, n_samples, 0.0};

    const auto ctx = detail::build_mixture(h, lambda, a, cfg, /*with_pairs=*/false);
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i)
    {
        const double v = detail::spatial_mi_sample_bits(ctx, seed, i);
        sum += v;
        sumsq += v * v;
    }
    const double n = static_cast<double>(n_samples);
    const double mean = sum / n;
    const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
    return {mean, SeKind::monte_carlo, n_samples, std::sqrt(var / n)};
}

SeEstimate true_se_mc(const arma::cx_mat &h, const PowerAllocation &lambda,
                      const AnalogVector &a, const SystemConfig &cfg,
                      std::size_t n_samples, std::uint64_t seed)
{
    const SeEstimate cond = conditional_mi(h, lambda, a, cfg);
    const SeEstimate spatial = spatial_mi_mc(h, lambda, a, cfg, n_samples, seed);
    return {cond.value + spatial.value, SeKind::monte_carlo, spatial.n_samples,
            spatial.std_error};
}

SeEstimate shifted_approximation(const SeEstimate &rlb, const SystemConfig &cfg)
{
    if (rlb.kind != SeKind::closed_form)
        throw std::invalid_argument("shifted_approximation: input must be closed form");
    return {rlb.value - bound_gap_bits(cfg), SeKind::closed_form, 0, 0.0};
}

} // namespace gensm
