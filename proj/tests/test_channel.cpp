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

#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gensm/channel.hpp"
#include "gensm/errors.hpp"

using namespace gensm;

namespace {
const SystemConfig kTableOne = derive_config(8, 8, 2, 4, 2, 2, 1.0, 1.0);
}

TEST_CASE("array response closed-form values")
{
    SUBCASE("broadside: all elements in phase")
    {
        const arma::cx_vec b = array_response(0.0, 4, 0.0025, 0.005);
        for (arma::uword i = 0; i < 4; ++i)
        {
            CHECK(b(i).real() == doctest::Approx(0.5).epsilon(1e-15));
            CHECK(b(i).imag() == doctest::Approx(0.0).epsilon(1e-15));
        }
    }
    SUBCASE("single element is [1] at any angle")
    {
        for (double ang : {-71.0, 0.0, 13.5, 89.0})
        {
            const arma::cx_vec b = array_response(ang, 1, 0.0025, 0.005);
            CHECK(std::abs(b(0) - cx_double(1.0, 0.0)) < 1e-15);
        }
    }
    SUBCASE("30 degrees, two half-wavelength elements")
    {
        // second element phase = (2pi/lambda) d sin(30deg) = pi/2
        const arma::cx_vec b = array_response(30.0, 2, 0.0025, 0.005);
        const double s = 1.0 / std::sqrt(2.0);
        CHECK(std::abs(b(0) - cx_double(s, 0.0)) < 1e-14);
        CHECK(std::abs(b(1) - cx_double(0.0, s)) < 1e-14);
    }
    SUBCASE("unit Euclidean norm for all angles and sizes")
    {
        for (double ang = -180.0; ang <= 180.0; ang += 7.3)
            for (arma::uword u : {1, 2, 5, 16})
                CHECK(arma::norm(array_response(ang, u, 0.01, 0.005)) ==
                      doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("laplacian angle sampler moments")
{
    Rng rng(77);
    const double mean = -12.0, spread = 7.5;
    double sum = 0.0, sumsq = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i)
    {
        const double x = sample_laplacian_angle(mean, spread, rng);
        sum += x;
        sumsq += (x - mean) * (x - mean);
    }
    const double emp_mean = sum / n;
    const double emp_std = std::sqrt(sumsq / n);
    CHECK(std::abs(emp_std - spread) < 0.01 * spread);
    CHECK(std::abs(emp_mean - mean) < 0.1 * spread);
}

TEST_CASE("sampled channels are normalized and reproducible")
{
    const ChannelParams params;
    SUBCASE("Frobenius normalization is exact per draw")
    {
        for (std::uint64_t seed : {1ULL, 2ULL, 99ULL, 12345ULL})
        {
            const ChannelRealization ch = sample_channel(kTableOne, params, seed);
            const double f2 = std::pow(arma::norm(ch.h, "fro"), 2);
            CHECK(f2 == doctest::Approx(64.0).epsilon(1e-12));
            CHECK(ch.seed == seed);
        }
    }
    SUBCASE("identical seed gives bit-identical H")
    {
        const ChannelRealization a = sample_channel(kTableOne, params, 42);
        const ChannelRealization b = sample_channel(kTableOne, params, 42);
        REQUIRE(a.h.n_elem == b.h.n_elem);
        for (arma::uword i = 0; i < a.h.n_elem; ++i)
            CHECK(a.h(i) == b.h(i));
    }
    SUBCASE("single path gives a rank-one matrix")
    {
        ChannelParams p1 = params;
        p1.n_cl = 1;
        p1.n_ray = 1;
        const SystemConfig cfg = derive_config(8, 8, 2, 4, 1, 1, 1.0, 1.0);
        const ChannelRealization ch = sample_channel(cfg, p1, 5);
        CHECK(arma::rank(ch.h) == 1);
    }
    SUBCASE("rank supports the stream count")
    {
        for (std::uint64_t seed = 0; seed < 20; ++seed)
        {
            const ChannelRealization ch = sample_channel(kTableOne, params, seed);
            CHECK(arma::rank(ch.h) >= kTableOne.n_s);
        }
    }
}

TEST_CASE("expectation normalization mode")
{
    const ChannelParams params;
    const ChannelRealization a =
        sample_channel(kTableOne, params, 77, NormMode::expectation);
    const ChannelRealization b =
        sample_channel(kTableOne, params, 77, NormMode::expectation);
    CHECK(a.norm_mode == NormMode::expectation);
    for (arma::uword i = 0; i < a.h.n_elem; ++i)
        CHECK(a.h(i) == b.h(i));
    // per-draw Frobenius norm is no longer pinned but stays in a sane range
    const double f2 = std::pow(arma::norm(a.h, "fro"), 2);
    CHECK(f2 > 0.0);
    CHECK(f2 != doctest::Approx(64.0).epsilon(1e-12));

    // ensemble average approaches n_r * n_t (masking removes some power, so
    // the check is loose and one-sided)
    double mean_f2 = 0.0;
    const int n = 200;
    for (int k = 0; k < n; ++k)
    {
        const ChannelRealization ch =
            sample_channel(kTableOne, params, 1000 + k, NormMode::expectation);
        mean_f2 += std::pow(arma::norm(ch.h, "fro"), 2) / n;
    }
    CHECK(mean_f2 > 20.0);
    CHECK(mean_f2 < 80.0);
}

TEST_CASE("elevation inputs never affect the realization")
{
    ChannelParams a, b;
    a.elevation_spread_deg = 7.5;
    b.elevation_spread_deg = 55.0;
    const ChannelRealization ha = sample_channel(kTableOne, a, 31);
    const ChannelRealization hb = sample_channel(kTableOne, b, 31);
    for (arma::uword i = 0; i < ha.h.n_elem; ++i)
        CHECK(ha.h(i) == hb.h(i));
}

TEST_CASE("gain mask zeroes out-of-sector paths exactly")
{
    ChannelParams params;
    params.angle_spread_deg = 40.0; // wide spread so many rays leave the sector
    Rng rng(8);
    const auto paths = detail::draw_paths(params, rng);

    arma::uword kept = 0;
    const arma::cx_mat h = detail::assemble_unnormalized(paths, params, 8, 8, &kept);
    REQUIRE(kept > 0);
    REQUIRE(kept < paths.size());

    // manual re-assembly keeping only in-sector paths
    arma::cx_mat manual(8, 8, arma::fill::zeros);
    for (const auto &d : paths)
    {
        if (d.tx_deg < params.tx_sector_min_deg || d.tx_deg > params.tx_sector_max_deg)
            continue;
        if (d.rx_deg < params.rx_sector_min_deg || d.rx_deg > params.rx_sector_max_deg)
            continue;
        const arma::cx_vec bt = array_response(d.tx_deg, 8, params.spacing, params.wavelength);
        const arma::cx_vec br = array_response(d.rx_deg, 8, params.spacing, params.wavelength);
        manual += d.gain * br * bt.t();
    }
    CHECK(arma::norm(arma::cx_mat(h - manual), "fro") < 1e-13 * arma::norm(manual, "fro"));
}

TEST_CASE("degenerate sector/config combinations are rejected")
{
    SUBCASE("everything masked")
    {
        ChannelParams p;
        p.tx_sector_min_deg = 0.0;
        p.tx_sector_max_deg = 1e-9;
        p.angle_spread_deg = 1e7; // rays land essentially anywhere
        CHECK_THROWS_AS(sample_channel(kTableOne, p, 3), DegenerateChannel);
    }
    SUBCASE("rank can never reach n_s")
    {
        ChannelParams p;
        p.n_cl = 1;
        p.n_ray = 1; // rank-1 channel against n_s = 2
        CHECK_THROWS_AS(sample_channel(kTableOne, p, 3), DegenerateChannel);
    }
}

TEST_CASE("parameter validation")
{
    ChannelParams p;
    p.n_cl = 0;
    CHECK_THROWS_AS(p.validate(), InvalidDimensions);
    p = ChannelParams{};
    p.tx_sector_min_deg = 10.0;
    p.tx_sector_max_deg = -10.0;
    CHECK_THROWS_AS(p.validate(), InvalidDimensions);
    p = ChannelParams{};
    p.angle_spread_deg = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidDimensions);
    p = ChannelParams{};
    p.cluster_power = arma::vec{1.0, 1.0, 1.0}; // wrong length for n_cl=8
    CHECK_THROWS_AS(p.validate(), InvalidDimensions);
}

TEST_CASE("ensemble files round trip bit exactly")
{
    const ChannelParams params;
    const ChannelEnsemble out = sample_ensemble(kTableOne, params, 5, 424242);
    REQUIRE(out.items.size() == 5);

    const std::string path = "test_channel_ensemble.bin";
    save_ensemble(path, out);
    const ChannelEnsemble in = load_ensemble(path);

    CHECK(in.n_r == out.n_r);
    CHECK(in.n_t == out.n_t);
    CHECK(in.norm_mode == out.norm_mode);
    REQUIRE(in.items.size() == out.items.size());
    for (std::size_t k = 0; k < in.items.size(); ++k)
    {
        CHECK(in.items[k].seed == out.items[k].seed);
        for (arma::uword i = 0; i < out.items[k].h.n_elem; ++i)
        {
            // bit-exact: compare the raw doubles
            CHECK(in.items[k].h(i).real() == out.items[k].h(i).real());
            CHECK(in.items[k].h(i).imag() == out.items[k].h(i).imag());
        }
    }
    std::remove(path.c_str());
}

TEST_CASE("loading garbage fails cleanly")
{
    const std::string path = "test_channel_garbage.bin";
    {
        std::ofstream os(path, std::ios::binary);
        os << "not a channel file at all";
    }
    CHECK_THROWS_AS(load_ensemble(path), IoError);
    CHECK_THROWS_AS(load_ensemble("does_not_exist.bin"), IoError);
    std::remove(path.c_str());
}
