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

#ifndef GENSM_SYSTEM_HPP
#define GENSM_SYSTEM_HPP

#define ARMA_DONT_USE_WRAPPER
#include <armadillo>

#include <complex>
#include <cstdint>
#include <vector>

#include "gensm/errors.hpp"
#include "gensm/rng.hpp"

namespace gensm {

using cx_double = std::complex<double>;

/// Transmitter/receiver dimensioning plus the derived antenna-group
/// combination (AGC) table.
///
/// The N_T transmit antennas are split into n_m groups of n_k antennas;
/// each transmission activates one combination of n_rf groups out of the
/// n_m available, and the number of signalable combinations is rounded
/// down to a power of two. When the binomial count is not a power of two,
/// the lexicographically smallest subsets are kept (deterministic choice;
/// only the count is structurally fixed).
struct SystemConfig {
    arma::uword n_t = 0;  ///< transmit antennas
    arma::uword n_r = 0;  ///< receive antennas
    arma::uword n_k = 0;  ///< antennas per group
    arma::uword n_m = 0;  ///< antenna groups
    arma::uword n_rf = 0; ///< RF chains
    arma::uword n_s = 0;  ///< data streams (n_s <= n_rf)
    double rho = 1.0;        ///< average transmit power (linear)
    double sigma_n_sq = 1.0; ///< noise variance (linear)

    arma::uword m = 0;               ///< AGC count, 2^floor(log2 C(n_m, n_rf))
    std::vector<arma::uvec> agc_table; ///< m index vectors, 1-based, strictly increasing

    double snr_db() const { return 10.0 * std::log10(rho / sigma_n_sq); }

    /// Same dimensioning with transmit power set from an SNR in dB
    /// (sigma_n_sq kept fixed).
    SystemConfig with_snr_db(double snr_db) const;
};

/// Validate dimensions and build the AGC table.
SystemConfig derive_config(arma::uword n_t, arma::uword n_r, arma::uword n_k,
                           arma::uword n_m, arma::uword n_rf, arma::uword n_s,
                           double rho, double sigma_n_sq);

/// C(n, k) with overflow guard; used by the AGC enumeration.
std::uint64_t binomial(arma::uword n, arma::uword k);

/// AG-selection matrix for one index vector: columns of I_{n_m} picked by u,
/// Kronecker-expanded by an all-ones n_k block. Result is n_t x n_rf with
/// C^T C = n_k I.
arma::mat selection_matrix(const arma::uvec &u, arma::uword n_k, arma::uword n_m);

/// Joint power allocation for the digital precoder set: m blocks of n_s
/// nonnegative entries summing to m * n_s. Only lambda (the squared diagonal
/// of each D_m) is stored; the signs of the D_m entries never enter any
/// (co)variance expression.
struct PowerAllocation {
    arma::vec lambda;

    arma::vec block(arma::uword block_index, const SystemConfig &cfg) const
    {
        return lambda.subvec(block_index * cfg.n_s, (block_index + 1) * cfg.n_s - 1);
    }

    static PowerAllocation uniform(const SystemConfig &cfg)
    {
        return {arma::vec(cfg.m * cfg.n_s, arma::fill::ones)};
    }

    /// Random feasible point: iid uniform entries rescaled onto the simplex.
    static PowerAllocation random(const SystemConfig &cfg, Rng &rng);

    /// Throws InvalidDimensions if entries are negative or the total power
    /// is off the constraint (rel. tol. 1e-9).
    void validate(const SystemConfig &cfg) const;
};

enum class AnalogMode {
    relaxed,  ///< inside the l_inf ball of radius 1/sqrt(n_k)
    projected ///< |a_i| = 1/sqrt(n_k) exactly
};

/// Diagonal of the analog precoder matrix A.
struct AnalogVector {
    arma::cx_vec a;
    AnalogMode mode = AnalogMode::projected;

    /// Phase-zero unit-modulus vector (the trivial precoder A = I/sqrt(n_k)).
    static AnalogVector trivial(const SystemConfig &cfg)
    {
        return {arma::cx_vec(cfg.n_t, arma::fill::ones) / std::sqrt(double(cfg.n_k)),
                AnalogMode::projected};
    }

    /// Random phases with modulus exactly 1/sqrt(n_k).
    static AnalogVector random_phases(const SystemConfig &cfg, Rng &rng);

    /// Element-wise phase projection onto the unit-modulus set.
    AnalogVector projected_to_phases(const SystemConfig &cfg) const;
};

/// Received-signal covariance for one AGC:
///   sigma_n^2 I + (rho / n_s) H A C diag(lambda) C^H A^H H^H,
/// re-symmetrized to machine precision. Only the first n_s chains carry
/// streams when n_s < n_rf.
arma::cx_mat covariance(const arma::cx_mat &h, const AnalogVector &a,
                        const arma::mat &c_m, const arma::vec &lambda_m,
                        const SystemConfig &cfg);

/// Effective per-AGC stream channels W_m = H A C_m (first n_s columns),
/// built without materializing the selection matrices.
std::vector<arma::cx_mat> effective_channels(const arma::cx_mat &h,
                                             const AnalogVector &a,
                                             const SystemConfig &cfg);

/// All m covariance matrices for a precoder pair.
struct CovarianceSet {
    std::vector<arma::cx_mat> sigmas;
};

CovarianceSet covariance_set(const arma::cx_mat &h, const AnalogVector &a,
                             const PowerAllocation &lambda, const SystemConfig &cfg);

/// One draw of y = sqrt(rho) H A C_m D_m x + n with x ~ CN(0, I/n_s) and
/// n ~ CN(0, sigma_n^2 I).
arma::cx_vec sample_received(const arma::cx_mat &h, const AnalogVector &a,
                             const arma::mat &c_m, const arma::vec &lambda_m,
                             const SystemConfig &cfg, Rng &rng);

} // namespace gensm

#endif
