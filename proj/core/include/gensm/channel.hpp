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

#ifndef GENSM_CHANNEL_HPP
#define GENSM_CHANNEL_HPP

#define ARMA_DONT_USE_WRAPPER
#include <armadillo>

#include <cstdint>
#include <string>
#include <vector>

#include "gensm/rng.hpp"
#include "gensm/system.hpp"

namespace gensm {

/// Clustered Saleh-Valenzuela channel parameters.
///
/// Ray azimuths are Laplacian around a per-cluster mean drawn uniformly
/// inside the corresponding sector; rays leaving the sector are zeroed by
/// the antenna gain mask rather than truncated. elevation_spread_deg is
/// accepted for completeness but a horizontal ULA response does not depend
/// on elevation, so it never affects the realization.
struct ChannelParams {
    arma::uword n_cl = 8;   ///< scattering clusters
    arma::uword n_ray = 10; ///< rays per cluster
    arma::vec cluster_power{arma::vec{1.0}}; ///< sigma_alpha^2 per cluster (size 1 broadcasts)
    double angle_spread_deg = 7.5;
    double elevation_spread_deg = 7.5; ///< unused by the ULA response
    double tx_sector_min_deg = -30.0;
    double tx_sector_max_deg = 30.0;
    double rx_sector_min_deg = -180.0;
    double rx_sector_max_deg = 180.0;
    double wavelength = 0.005;
    double spacing = 0.010; ///< element spacing, default 2 * wavelength

    void validate() const;
    double cluster_power_at(arma::uword p) const
    {
        return cluster_power.n_elem == 1 ? cluster_power(0) : cluster_power(p);
    }
};

enum class NormMode : std::uint8_t {
    per_realization = 0, ///< ||H||_F^2 = n_r * n_t exactly for every draw
    expectation = 1      ///< closed-form gamma, exact only on ensemble average
};

struct ChannelRealization {
    arma::cx_mat h;
    std::uint64_t seed = 0;
    NormMode norm_mode = NormMode::per_realization;
};

/// Normalized ULA steering vector, element u = exp(j u (2pi/lambda) d sin(angle)) / sqrt(U).
arma::cx_vec array_response(double angle_deg, arma::uword u, double spacing,
                            double wavelength);

/// Laplacian azimuth sample whose standard deviation equals spread_deg.
double sample_laplacian_angle(double mean_deg, double spread_deg, Rng &rng);

/// One channel draw. All-masked or rank-deficient (rank < n_s) realizations
/// are rejected and redrawn from the same stream; after 100 consecutive
/// failures the sector/config combination is reported as degenerate.
ChannelRealization sample_channel(const SystemConfig &cfg, const ChannelParams &params,
                                  std::uint64_t seed,
                                  NormMode mode = NormMode::per_realization);

namespace detail {

/// One propagation path before masking.
struct PathDraw {
    double tx_deg = 0.0;
    double rx_deg = 0.0;
    cx_double gain{0.0, 0.0};
};

std::vector<PathDraw> draw_paths(const ChannelParams &params, Rng &rng);

/// Sum of masked rank-one path contributions, no normalization. n_unmasked
/// reports how many paths survived both sector masks.
arma::cx_mat assemble_unnormalized(const std::vector<PathDraw> &paths,
                                   const ChannelParams &params, arma::uword n_r,
                                   arma::uword n_t, arma::uword *n_unmasked = nullptr);

} // namespace detail

/// In-memory channel ensemble with its generation metadata.
struct ChannelEnsemble {
    arma::uword n_r = 0;
    arma::uword n_t = 0;
    NormMode norm_mode = NormMode::per_realization;
    std::vector<ChannelRealization> items;
};

/// Draw n_channels realizations with counter-derived per-channel seeds.
ChannelEnsemble sample_ensemble(const SystemConfig &cfg, const ChannelParams &params,
                                arma::uword n_channels, std::uint64_t master_seed,
                                NormMode mode = NormMode::per_realization);

/// Binary ensemble file: magic, dimensions, norm mode, then per realization
/// the seed and the row-major (real, imag) float64 entries. Round trips are
/// bit-exact.
void save_ensemble(const std::string &path, const ChannelEnsemble &ensemble);
ChannelEnsemble load_ensemble(const std::string &path);

} // namespace gensm

#endif
