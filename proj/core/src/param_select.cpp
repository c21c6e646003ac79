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

#include "gensm/param_select.hpp"

#include <cmath>
#include <string>

#include "gensm/errors.hpp"

namespace gensm {

std::vector<std::pair<arma::uword, arma::uword>> enumerate_partitions(arma::uword n_t,
                                                                      arma::uword n_rf)
{
    if (n_t < 1 || n_rf < 1 || n_t < n_rf)
        throw InvalidDimensions("enumerate_partitions: need n_t >= n_rf >= 1");
    std::vector<std::pair<arma::uword, arma::uword>> out;
    for (arma::uword n_m = 1; n_m <= n_t; ++n_m)
    {
        if (n_t % n_m != 0 || n_m < n_rf)
            continue;
        out.emplace_back(n_t / n_m, n_m);
    }
    if (out.empty())
        throw NoFeasiblePartition("enumerate_partitions: no divisor pair with n_m >= n_rf");
    return out;
}

SelectParamsResult select_params(const SystemConfig &base_cfg,
                                 const std::vector<arma::cx_mat> &channels,
                                 double snr_db, const DigitalOptParams &dparams,
                                 const AnalogOptParams &aparams,
                                 std::uint64_t master_seed, bool collect_precoders)
{
    if (channels.empty())
        throw std::invalid_argument("select_params: channel ensemble must be nonempty");

    const auto candidates = enumerate_partitions(base_cfg.n_t, base_cfg.n_rf);
    SelectParamsResult res;
    res.table.reserve(candidates.size());
    if (collect_precoders)
        res.precoders.resize(candidates.size());

    for (std::size_t ci = 0; ci < candidates.size(); ++ci)
    {
        const auto [n_k, n_m] = candidates[ci];
        const SystemConfig cfg =
            derive_config(base_cfg.n_t, base_cfg.n_r, n_k, n_m, base_cfg.n_rf,
                          base_cfg.n_s, base_cfg.rho, base_cfg.sigma_n_sq)
                .with_snr_db(snr_db);

        double sum = 0.0, sumsq = 0.0;
        std::size_t ok = 0, skipped = 0;
        if (collect_precoders)
            res.precoders[ci].resize(channels.size());
        for (std::size_t j = 0; j < channels.size(); ++j)
        {
            Rng rng = Rng::substream(master_seed, {0x50534c43ULL, ci, j});
            try
            {
                const PowerAllocation lambda0 = PowerAllocation::random(cfg, rng);
                const AnalogVector a0 = AnalogVector::random_phases(cfg, rng);
                HybridResult hr =
                    optimize_hybrid(channels[j], lambda0, a0, cfg, dparams, aparams);
                sum += hr.rlb_projected;
                sumsq += hr.rlb_projected * hr.rlb_projected;
                ++ok;
                if (collect_precoders)
                    res.precoders[ci][j] = std::move(hr);
            }
            catch (const NumericalFailure &)
            {
                ++skipped;
            }
        }
        res.n_skipped += skipped;
        if (skipped * 10 > channels.size())
            throw NumericalFailure("select_params: candidate (" + std::to_string(n_k) +
                                   ", " + std::to_string(n_m) + ") skipped more than 10% of channels");

        PartitionCandidate cand;
        cand.n_k = n_k;
        cand.n_m = n_m;
        cand.n_channels = ok;
        cand.mean_rlb = sum / static_cast<double>(ok);
        const double var =
            ok > 1 ? std::max(0.0, (sumsq - static_cast<double>(ok) * cand.mean_rlb *
                                                cand.mean_rlb) /
                                       (static_cast<double>(ok) - 1.0))
                   : 0.0;
        cand.std_error = std::sqrt(var / static_cast<double>(ok));
        res.table.push_back(cand);
    }

    // argmax; candidates are n_m-ascending, strict inequality keeps the
    // smaller n_m on ties
    std::size_t best = 0;
    for (std::size_t i = 1; i < res.table.size(); ++i)
        if (res.table[i].mean_rlb > res.table[best].mean_rlb)
            best = i;
    res.table[best].winner = true;
    res.winner = res.table[best];
    return res;
}

} // namespace gensm
