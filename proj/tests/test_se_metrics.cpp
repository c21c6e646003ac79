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

#include "gensm/channel.hpp"
#include "gensm/linalg.hpp"
#include "gensm/se_metrics.hpp"

using namespace gensm;

namespace {

constexpr double kOneMinusLog2E = 1.0 - 1.4426950408889634074;

// Direct evaluation of the closed-form bound with raw determinants; the
// independent oracle for the log-domain path (valid at moderate SNR only).
double naive_rlb_bits(const arma::cx_mat &h, const PowerAllocation &lambda,
                      const AnalogVector &a, const SystemConfig &cfg)
{
    const CovarianceSet set = covariance_set(h, a, lambda, cfg);
    double acc = 0.0;
    for (arma::uword n = 0; n < cfg.m; ++n)
    {
        double s = 0.0;
        for (arma::uword t = 0; t < cfg.m; ++t)
            s += 1.0 / std::abs(arma::det(arma::cx_mat(set.sigmas[n] + set.sigmas[t])));
        acc += std::log2(s);
    }
    return std::log2(cfg.m / std::pow(2.71828182845904523536 * cfg.sigma_n_sq,
                                      static_cast<double>(cfg.n_r))) -
           acc / static_cast<double>(cfg.m);
}

// I_LB(y;m) via raw determinants, for the decomposition cross-check.
double naive_spatial_lb_bits(const arma::cx_mat &h, const PowerAllocation &lambda,
                             const AnalogVector &a, const SystemConfig &cfg)
{
    const CovarianceSet set = covariance_set(h, a, lambda, cfg);
    double acc = 0.0;
    for (arma::uword n = 0; n < cfg.m; ++n)
    {
        double s = 0.0;
        const double dn = std::abs(arma::det(set.sigmas[n]));
        for (arma::uword t = 0; t < cfg.m; ++t)
            s += dn / std::abs(arma::det(arma::cx_mat(set.sigmas[n] + set.sigmas[t])));
        acc += std::log2(s);
    }
    return std::log2(static_cast<double>(cfg.m)) -
           static_cast<double>(cfg.n_r) * 1.4426950408889634074 -
           acc / static_cast<double>(cfg.m);
}

struct Instance {
    SystemConfig cfg;
    arma::cx_mat h;
    PowerAllocation lambda;
    AnalogVector a;
};

Instance random_instance(double snr_db, std::uint64_t seed)
{
    Instance inst{derive_config(8, 8, 2, 4, 2, 2, 1.0, 1.0).with_snr_db(snr_db), {}, {}, {}};
    const ChannelParams params;
    inst.h = sample_channel(inst.cfg, params, seed).h;
    Rng rng = Rng::substream(seed, {0x5345ULL});
    inst.lambda = PowerAllocation::random(inst.cfg, rng);
    inst.a = AnalogVector::random_phases(inst.cfg, rng);
    return inst;
}

} // namespace

TEST_CASE("zero transmit power collapses the bound to N_R(1 - log2 e)")
{
    const SystemConfig cfg = derive_config(8, 8, 2, 4, 2, 2, 0.0, 1.0);
    const ChannelParams params;
    const arma::cx_mat h = sample_channel(cfg, params, 11).h;
    const SeEstimate rlb =
        se_lower_bound(h, PowerAllocation::uniform(cfg), AnalogVector::trivial(cfg), cfg);
    CHECK(rlb.value == doctest::Approx(8.0 * kOneMinusLog2E).epsilon(1e-14));
    CHECK(rlb.kind == SeKind::closed_form);

    // shifted approximation lands exactly at zero
    CHECK(shifted_approximation(rlb, cfg).value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(conditional_mi(h, PowerAllocation::uniform(cfg), AnalogVector::trivial(cfg), cfg)
              .value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("closed-form bound matches the raw-determinant oracle at 5 dB")
{
    for (std::uint64_t seed : {7ULL, 8ULL, 9ULL})
    {
        const Instance inst = random_instance(5.0, seed);
        const double got = se_lower_bound(inst.h, inst.lambda, inst.a, inst.cfg).value;
        const double want = naive_rlb_bits(inst.h, inst.lambda, inst.a, inst.cfg);
        CHECK(std::abs(got - want) < 1e-10 * std::abs(want));
    }
}

TEST_CASE("M = 1 collapses the bound to the single-term closed form")
{
    const SystemConfig cfg = derive_config(8, 8, 4, 2, 2, 2, 1.0, 1.0).with_snr_db(3.0);
    REQUIRE(cfg.m == 1);
    const ChannelParams params;
    const arma::cx_mat h = sample_channel(cfg, params, 4).h;
    Rng rng(5);
    const PowerAllocation lambda = PowerAllocation::random(cfg, rng);
    const AnalogVector a = AnalogVector::random_phases(cfg, rng);

    const double rlb = se_lower_bound(h, lambda, a, cfg).value;
    const double cond = conditional_mi(h, lambda, a, cfg).value;
    CHECK(rlb ==
          doctest::Approx(8.0 * kOneMinusLog2E + cond).epsilon(1e-12));

    // exact gap: true SE (= conditional MI at M = 1) minus bound
    const SeEstimate truese = true_se_mc(h, lambda, a, cfg, 1000, 1);
    CHECK(truese.value == doctest::Approx(cond).epsilon(1e-15));
    CHECK(truese.value - rlb == doctest::Approx(-8.0 * kOneMinusLog2E).epsilon(1e-10));
}

TEST_CASE("conditional MI reduces to scalar Shannon capacity")
{
    // n_t = n_r = n_k = n_m = n_rf = n_s = 1, so M = 1 and the effective
    // channel is the scalar h * a.
    const SystemConfig cfg = derive_config(1, 1, 1, 1, 1, 1, 3.7, 1.3);
    arma::cx_mat h(1, 1);
    h(0, 0) = cx_double(0.8, -0.45);
    const PowerAllocation lambda{arma::vec{1.0}};
    const AnalogVector a = AnalogVector::trivial(cfg);
    const double expected =
        std::log2(1.0 + cfg.rho * std::norm(h(0, 0) * a.a(0)) / cfg.sigma_n_sq);
    CHECK(conditional_mi(h, lambda, a, cfg).value ==
          doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("bound decomposition: R_LB = I(y;x|m) + I_LB(y;m)")
{
    for (std::uint64_t seed : {21ULL, 22ULL})
    {
        const Instance inst = random_instance(2.0, seed);
        const double rlb = se_lower_bound(inst.h, inst.lambda, inst.a, inst.cfg).value;
        const double cond = conditional_mi(inst.h, inst.lambda, inst.a, inst.cfg).value;
        const double ilb = naive_spatial_lb_bits(inst.h, inst.lambda, inst.a, inst.cfg);
        CHECK(cond == doctest::Approx(rlb - ilb).epsilon(1e-9));
    }
}

TEST_CASE("spatial MI Monte Carlo behavior")
{
    SUBCASE("M = 1 is exactly zero with zero variance")
    {
        const SystemConfig cfg = derive_config(8, 8, 4, 2, 2, 2, 1.0, 1.0);
        const ChannelParams params;
        const arma::cx_mat h = sample_channel(cfg, params, 4).h;
        const SeEstimate est = spatial_mi_mc(h, PowerAllocation::uniform(cfg),
                                             AnalogVector::trivial(cfg), cfg, 500, 9);
        CHECK(est.value == 0.0);
        CHECK(est.std_error == 0.0);
        CHECK(est.n_samples == 500);
    }
    SUBCASE("very high SNR saturates at log2 M")
    {
        const Instance inst = random_instance(60.0, 31);
        const SeEstimate est =
            spatial_mi_mc(inst.h, inst.lambda, inst.a, inst.cfg, 20000, 13);
        CHECK(std::abs(est.value - 2.0) <= std::max(3.0 * est.std_error, 1e-9));
    }
    SUBCASE("zero power carries no spatial information")
    {
        Instance inst = random_instance(0.0, 33);
        inst.cfg.rho = 0.0;
        const SeEstimate est =
            spatial_mi_mc(inst.h, inst.lambda, inst.a, inst.cfg, 5000, 13);
        CHECK(std::abs(est.value) <= std::max(3.0 * est.std_error, 1e-12));
    }
    SUBCASE("sample count below 100 is rejected")
    {
        const Instance inst = random_instance(0.0, 35);
        CHECK_THROWS_AS(
            spatial_mi_mc(inst.h, inst.lambda, inst.a, inst.cfg, 99, 1),
            std::invalid_argument);
    }
}

TEST_CASE("estimate is invariant to how the sample range is partitioned")
{
    const Instance inst = random_instance(5.0, 55);
    const auto ctx =
        detail::build_mixture(inst.h, inst.lambda, inst.a, inst.cfg, false);

    const std::size_t n = 2000;
    const SeEstimate whole =
        spatial_mi_mc(inst.h, inst.lambda, inst.a, inst.cfg, n, 99);

    // re-accumulate the same counters in two independently iterated halves
    double acc = 0.0;
    for (std::size_t i = 0; i < n / 2; ++i)
        acc += detail::spatial_mi_sample_bits(ctx, 99, i);
    for (std::size_t i = n / 2; i < n; ++i)
        acc += detail::spatial_mi_sample_bits(ctx, 99, i);
    CHECK(acc / static_cast<double>(n) == doctest::Approx(whole.value).epsilon(1e-15));

    // and a rerun with the same seed is bit-identical
    const SeEstimate again =
        spatial_mi_mc(inst.h, inst.lambda, inst.a, inst.cfg, n, 99);
    CHECK(again.value == whole.value);
    CHECK(again.std_error == whole.std_error);
}

TEST_CASE("true SE dominates the bound on random instances")
{
    for (std::uint64_t seed : {101ULL, 102ULL, 103ULL, 104ULL})
    {
        const Instance inst = random_instance(seed % 2 ? 0.0 : 8.0, seed);
        const double rlb = se_lower_bound(inst.h, inst.lambda, inst.a, inst.cfg).value;
        const SeEstimate mc =
            true_se_mc(inst.h, inst.lambda, inst.a, inst.cfg, 20000, seed);
        CHECK(rlb <= mc.value + 3.0 * mc.std_error);
    }
}

TEST_CASE("conditional MI increases strictly with transmit power")
{
    const Instance inst = random_instance(0.0, 61);
    double prev = -1.0;
    for (double snr : {-10.0, 0.0, 10.0, 20.0})
    {
        const SystemConfig cfg = inst.cfg.with_snr_db(snr);
        const double v = conditional_mi(inst.h, inst.lambda, inst.a, cfg).value;
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("log-domain evaluation stays finite at 100 dB")
{
    const Instance inst = random_instance(100.0, 71);
    const double v = se_lower_bound(inst.h, inst.lambda, inst.a, inst.cfg).value;
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
    const SeEstimate sp = spatial_mi_mc(inst.h, inst.lambda, inst.a, inst.cfg, 500, 3);
    CHECK(std::isfinite(sp.value));
}

TEST_CASE("shifted approximation bookkeeping")
{
    const SystemConfig cfg = derive_config(8, 8, 2, 4, 2, 2, 1.0, 1.0);
    CHECK(bound_gap_bits(cfg) == doctest::Approx(8.0 * kOneMinusLog2E).epsilon(1e-15));
    CHECK(std::abs(bound_gap_bits(cfg)) == doctest::Approx(3.5415603).epsilon(1e-6));

    SeEstimate mc{1.0, SeKind::monte_carlo, 100, 0.1};
    CHECK_THROWS_AS(shifted_approximation(mc, cfg), std::invalid_argument);
}
