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

#ifndef GENSM_PARAM_SELECT_HPP
#define GENSM_PARAM_SELECT_HPP

#define ARMA_DONT_USE_WRAPPER
#include <armadillo>

#include <cstdint>
#include <utility>
#include <vector>

#include "gensm/optimizer.hpp"
#include "gensm/system.hpp"

namespace gensm {

/// One antenna-partition candidate and its averaged optimized bound.
struct PartitionCandidate {
    arma::uword n_k = 0;
    arma::uword n_m = 0;
    double mean_rlb = 0.0; ///< mean optimized projected R_LB, bits/s/Hz
    std::size_t n_channels = 0;
    double std_error = 0.0;
    bool winner = false;
};

/// All (n_k, n_m) divisor pairs of n_t with n_m >= n_rf, n_m ascending.
std::vector<std::pair<arma::uword, arma::uword>> enumerate_partitions(arma::uword n_t,
                                                                      arma::uword n_rf);

struct SelectParamsResult {
    PartitionCandidate winner;
    std::vector<PartitionCandidate> table;
    std::size_t n_skipped = 0; ///< total optimizer failures skipped
    /// Optimized precoders per candidate x channel (kept when requested so
    /// the sweep experiment can reuse the winner's precoders).
    std::vector<std::vector<HybridResult>> precoders;
};

/// Run the hybrid optimizer for every partition candidate over the same
/// paired channel ensemble and pick the candidate maximizing the average
/// optimized bound; ties break toward smaller n_m. Fails if more than 10%
/// of a candidate's channels are skipped.
SelectParamsResult select_params(const SystemConfig &base_cfg,
                                 const std::vector<arma::cx_mat> &channels,
                                 double snr_db, const DigitalOptParams &dparams,
                                 const AnalogOptParams &aparams,
                                 std::uint64_t master_seed,
                                 bool collect_precoders = false);

} // namespace gensm

#endif
