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
//
// Spectral-efficiency metrics for the GenSM mixture channel: the
// closed-form lower bound, the conditional (stream) mutual information,
// and Monte-Carlo estimation of the spatial mutual information. All
// determinant-like quantities are handled as Hermitian-factorization
// log-determinants combined through max-shifted log-sum-exp; internals use
// natural logs and convert to bits at the boundary.

#ifndef GENSM_SE_METRICS_HPP
#define GENSM_SE_METRICS_HPP

#define ARMA_DONT_USE_WRAPPER
#include <armadillo>

#include <cstdint>
#include <vector>

#include "gensm/system.hpp"

namespace gensm {

enum class SeKind { closed_form, monte_carlo };

/// A spectral-efficiency value in bits/s/Hz with its provenance.
struct SeEstimate {
    double value = 0.0;
    SeKind kind = SeKind::closed_form;
    std::size_t n_samples = 0; ///< Monte-Carlo sample count (0 for closed form)
    double std_error = 0.0;    ///< batch-mean standard error (0 for closed form)
};

/// Closed-form lower bound on the achievable SE (log-domain evaluation).
SeEstimate se_lower_bound(const arma::cx_mat &h, const PowerAllocation &lambda,
                          const AnalogVector &a, const SystemConfig &cfg);

/// Conditional mutual information I(y; x | m) = (1/M) sum_m log2|Sigma_m / sigma_n^2|.
SeEstimate conditional_mi(const arma::cx_mat &h, const PowerAllocation &lambda,
                          const AnalogVector &a, const SystemConfig &cfg);

/// Monte-Carlo estimate of the spatial mutual information I(y; m).
///
/// Every sample derives its own counter-indexed substream from `seed`, so
/// the estimate is independent of how the sample range is partitioned
/// across workers. Requires n_samples >= 100.
SeEstimate spatial_mi_mc(const arma::cx_mat &h, const PowerAllocation &lambda,
                         const AnalogVector &a, const SystemConfig &cfg,
                         std::size_t n_samples, std::uint64_t seed);

/// True SE estimate I(y; x, m) = I(y; x|m) + I(y; m); the Monte-Carlo part
/// contributes the uncertainty.
SeEstimate true_se_mc(const arma::cx_mat &h, const PowerAllocation &lambda,
                      const AnalogVector &a, const SystemConfig &cfg,
                      std::size_t n_samples, std::uint64_t seed);

/// Constant-shift approximation of the true SE from a closed-form bound.
SeEstimate shifted_approximation(const SeEstimate &rlb, const SystemConfig &cfg);

/// The asymptotic bound gap N_R (1 - log2 e), a negative quantity.
inline double bound_gap_bits(const SystemConfig &cfg)
{
    return static_cast<double>(cfg.n_r) * (1.0 - 1.4426950408889634074);
}

namespace detail {

/// Factorized Gaussian mixture for one (H, lambda, a) point: Cholesky
/// factors and log-determinants of every Sigma_m, plus the pairwise
/// ln|Sigma_n + Sigma_t| table.
struct MixtureContext {
    arma::uword m = 0;
    arma::uword n_r = 0;
    double sigma_n_sq = 1.0;
    std::vector<arma::cx_mat> chol;    ///< lower factors of Sigma_m
    std::vector<double> logdet;        ///< ln|Sigma_m|
    arma::mat pair_logdet;             ///< ln|Sigma_n + Sigma_t|, symmetric
};

MixtureContext build_mixture(const arma::cx_mat &h, const PowerAllocation &lambda,
                             const AnalogVector &a, const SystemConfig &cfg,
                             bool with_pairs);

/// R_LB in bits from a pairwise log-determinant table.
double rlb_bits_from_pairs(const arma::mat &pair_logdet, arma::uword n_r,
                           double sigma_n_sq);

/// R_LB value only (bits); cheaper entry point for optimizer line searches.
double rlb_value_bits(const arma::cx_mat &h, const PowerAllocation &lambda,
                      const AnalogVector &a, const SystemConfig &cfg);

/// Per-sample spatial-MI log ratio (bits) for counter index `i`; exposed so
/// partition invariance can be exercised directly.
double spatial_mi_sample_bits(const MixtureContext &ctx, std::uint64_t seed,
                              std::uint64_t i);

} // namespace detail

} // namespace gensm

#endif
