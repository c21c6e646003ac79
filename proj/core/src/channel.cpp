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

#include "gensm/channel.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "gensm/errors.hpp"

namespace gensm {

namespace {
constexpr char kEnsembleMagic[8] = {'G', 'S', 'M', 'C', 'H', 'A', 'N', '1'};
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
constexpr int kMaxRedraws = 100;
} // namespace

void ChannelParams::validate() const
{
    if (n_cl < 1 || n_ray < 1)
        throw InvalidDimensions("ChannelParams: n_cl and n_ray must be >= 1");
    if (cluster_power.n_elem != 1 && cluster_power.n_elem != n_cl)
        throw InvalidDimensions("ChannelParams: cluster_power must have 1 or n_cl entries");
    if (cluster_power.min() <= 0.0)
        throw InvalidDimensions("ChannelParams: cluster powers must be positive");
    if (!(angle_spread_deg > 0.0))
        throw InvalidDimensions("ChannelParams: angle_spread_deg must be positive");
    if (!(tx_sector_min_deg < tx_sector_max_deg))
        throw InvalidDimensions("ChannelParams: tx sector min must be < max");
    if (!(rx_sector_min_deg < rx_sector_max_deg))
        throw InvalidDimensions("ChannelParams: rx sector min must be < max");
    if (!(wavelength > 0.0) || !(spacing > 0.0))
        throw InvalidDimensions("ChannelParams: wavelength and spacing must be positive");
}

arma::cx_vec array_response(double angle_deg, arma::uword u, double spacing,
                            double wavelength)
{
    if (u < 1)
        throw InvalidDimensions("array_response: element count must be >= 1");
    const double phase_step =
        2.0 * arma::datum::pi / wavelength * spacing * std::sin(angle_deg * kDegToRad);
    const double scale = 1.0 / std::sqrt(static_cast<double>(u));
    arma::cx_vec b(u);
    for (arma::uword i = 0; i < u; ++i)
    {
        const double ph = phase_step * static_cast<double>(i);
        b(i) = cx_double(scale * std::cos(ph), scale * std::sin(ph));
    }
    return b;
}

double sample_laplacian_angle(double mean_deg, double spread_deg, Rng &rng)
{
    if (!(spread_deg > 0.0))
        throw InvalidDimensions("sample_laplacian_angle: spread must be positive");
    // scale b = spread / sqrt(2) makes the distribution's std equal the spread
    return rng.laplacian(mean_deg, spread_deg / std::sqrt(2.0));
}

namespace detail {

std::vector<PathDraw> draw_paths(const ChannelParams &params, Rng &rng)
{
    std::vector<PathDraw> paths;
    paths.reserve(params.n_cl * params.n_ray);
    for (arma::uword p = 0; p < params.n_cl; ++p)
    {
        const double mean_tx = rng.uniform(params.tx_sector_min_deg, params.tx_sector_max_deg);
        const double mean_rx = rng.uniform(params.rx_sector_min_deg, params.rx_sector_max_deg);
        const double sigma = std::sqrt(params.cluster_power_at(p));
        for (arma::uword q = 0; q < params.n_ray; ++q)
        {
            PathDraw d;
            d.tx_deg = sample_laplacian_angle(mean_tx, params.angle_spread_deg, rng);
            d.rx_deg = sample_laplacian_angle(mean_rx, params.angle_spread_deg, rng);
            d.gain = sigma * rng.cnormal();
            paths.push_back(d);
        }
    }
    return paths;
}

arma::cx_mat assemble_unnormalized(const std::vector<PathDraw> &paths,
                                   const ChannelParams &params, arma::uword n_r,
                                   arma::uword n_t, arma::uword *n_unmasked)
{
    arma::cx_mat h(n_r, n_t, arma::fill::zeros);
    arma::uword kept = 0;
    for (const auto &d : paths)
    {
        const bool tx_in = d.tx_deg >= params.tx_sector_min_deg &&
                           d.tx_deg <= params.tx_sector_max_deg;
        const bool rx_in = d.rx_deg >= params.rx_sector_min_deg &&
                           d.rx_deg <= params.rx_sector_max_deg;
        if (!tx_in || !rx_in)
            continue; // antenna gain mask zeroes the path
        ++kept;
        const arma::cx_vec bt = array_response(d.tx_deg, n_t, params.spacing, params.wavelength);
        const arma::cx_vec br = array_response(d.rx_deg, n_r, params.spacing, params.wavelength);
        for (arma::uword j = 0; j < n_t; ++j)
        {
            const cx_double c = d.gain * std::conj(bt(j));
            for (arma::uword i = 0; i < n_r; ++i)
                h(i, j) += c * br(i);
        }
    }
    if (n_unmasked != nullptr)
        *n_unmasked = kept;
    return h;
}

} // namespace detail

ChannelRealization sample_channel(const SystemConfig &cfg, const ChannelParams &params,
                                  std::uint64_t seed, NormMode mode)
{
    params.validate();
    Rng rng(seed);
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt)
    {
        const auto paths = detail::draw_paths(params, rng);
        arma::uword kept = 0;
        arma::cx_mat h = detail::assemble_unnormalized(paths, params, cfg.n_r, cfg.n_t, &kept);
        if (kept == 0)
            continue;

        if (mode == NormMode::per_realization)
        {
            const double fn = arma::norm(h, "fro");
            if (fn == 0.0)
                continue;
            h *= std::sqrt(static_cast<double>(cfg.n_r * cfg.n_t)) / fn;
        }
        else
        {
            const double total_power = arma::accu(params.cluster_power.n_elem == 1
                                                      ? arma::vec(params.n_cl, arma::fill::value(
                                                                                   params.cluster_power(0)))
                                                      : params.cluster_power) *
                                       static_cast<double>(params.n_ray);
            h *= std::sqrt(static_cast<double>(cfg.n_r * cfg.n_t) / total_power);
        }

        if (arma::rank(h) < cfg.n_s)
            continue;
        return {std::move(h), seed, mode};
    }
    throw DegenerateChannel(
        "sample_channel: 100 consecutive draws were all-masked or rank-deficient; "
        "sector/config combination is inconsistent");
}

ChannelEnsemble sample_ensemble(const SystemConfig &cfg, const ChannelParams &params,
                                arma::uword n_channels, std::uint64_t master_seed,
                                NormMode mode)
{
    ChannelEnsemble e;
    e.n_r = cfg.n_r;
    e.n_t = cfg.n_t;
    e.norm_mode = mode;
    e.items.reserve(n_channels);
    for (arma::uword i = 0; i < n_channels; ++i)
    {
        const std::uint64_t seed = Rng::substream(master_seed, {0x4348414eULL, i}).next_u64();
        e.items.push_back(sample_channel(cfg, params, seed, mode));
    }
    return e;
}

namespace {

template <typename T> void write_pod(std::ofstream &os, const T &v)
{
    os.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T> void read_pod(std::ifstream &is, T &v)
{
    is.read(reinterpret_cast<char *>(&v), sizeof(T));
}

} // namespace

void save_ensemble(const std::string &path, const ChannelEnsemble &ensemble)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw IoError("save_ensemble: cannot open '" + path + "' for writing");
    os.write(kEnsembleMagic, sizeof(kEnsembleMagic));
    write_pod(os, static_cast<std::uint32_t>(ensemble.n_r));
    write_pod(os, static_cast<std::uint32_t>(ensemble.n_t));
    write_pod(os, static_cast<std::uint32_t>(ensemble.items.size()));
    write_pod(os, static_cast<std::uint8_t>(ensemble.norm_mode));
    for (const auto &item : ensemble.items)
    {
        if (item.h.n_rows != ensemble.n_r || item.h.n_cols != ensemble.n_t)
            throw DimensionMismatch("save_ensemble: realization shape mismatch");
        write_pod(os, item.seed);
        for (arma::uword i = 0; i < ensemble.n_r; ++i)
            for (arma::uword j = 0; j < ensemble.n_t; ++j)
            {
                write_pod(os, item.h(i, j).real());
                write_pod(os, item.h(i, j).imag());
            }
    }
    if (!os)
        throw IoError("save_ensemble: write to '" + path + "' failed");
}

ChannelEnsemble load_ensemble(const std::string &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("load_ensemble: cannot open '" + path + "'");
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kEnsembleMagic, sizeof(magic)) != 0)
        throw IoError("load_ensemble: '" + path + "' is not a channel ensemble file");
    std::uint32_t n_r = 0, n_t = 0, count = 0;
    std::uint8_t mode = 0;
    read_pod(is, n_r);
    read_pod(is, n_t);
    read_pod(is, count);
    read_pod(is, mode);
    if (!is || n_r == 0 || n_t == 0 || mode > 1)
        throw IoError("load_ensemble: malformed header in '" + path + "'");

    ChannelEnsemble e;
    e.n_r = n_r;
    e.n_t = n_t;
    e.norm_mode = static_cast<NormMode>(mode);
    e.items.resize(count);
    for (auto &item : e.items)
    {
        read_pod(is, item.seed);
        item.norm_mode = e.norm_mode;
        item.h.set_size(n_r, n_t);
        for (arma::uword i = 0; i < n_r; ++i)
            for (arma::uword j = 0; j < n_t; ++j)
            {
                double re = 0.0, im = 0.0;
                read_pod(is, re);
                read_pod(is, im);
                item.h(i, j) = cx_double(re, im);
            }
        if (!is)
            throw IoError("load_ensemble: truncated data in '" + path + "'");
    }
    return e;
}

} // namespace gensm
