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

#include <benchmark/benchmark.h>

#include "gensm/channel.hpp"
#include "gensm/optimizer.hpp"
#include "gensm/se_metrics.hpp"

using namespace gensm;

namespace {

struct Fixture {
    SystemConfig cfg;
    arma::cx_mat h;
    PowerAllocation lambda;
    AnalogVector a;
};

Fixture make_fixture(arma::uword n_k, arma::uword n_m, arma::uword n_rf)
{
    Fixture f{derive_config(8, 8, n_k, n_m, n_rf, n_rf, 1.0, 1.0).with_snr_db(5.0),
              {}, {}, {}};
    const ChannelParams cp;
    f.h = sample_channel(f.cfg, cp, 7).h;
    Rng rng(11);
    f.lambda = PowerAllocation::random(f.cfg, rng);
    f.a = AnalogVector::random_phases(f.cfg, rng);
    return f;
}

void bm_rlb_m4(benchmark::State &state)
{
    const Fixture f = make_fixture(2, 4, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(detail::rlb_value_bits(f.h, f.lambda, f.a, f.cfg));
}
BENCHMARK(bm_rlb_m4);

void bm_rlb_m16(benchmark::State &state)
{
    const Fixture f = make_fixture(1, 8, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(detail::rlb_value_bits(f.h, f.lambda, f.a, f.cfg));
}
BENCHMARK(bm_rlb_m16);

void bm_grad_lambda_m4(benchmark::State &state)
{
    const Fixture f = make_fixture(2, 4, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(grad_rlb_lambda(f.h, f.lambda, f.a, f.cfg));
}
BENCHMARK(bm_grad_lambda_m4);

void bm_grad_a_m4(benchmark::State &state)
{
    const Fixture f = make_fixture(2, 4, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(grad_rlb_a(f.h, f.lambda, f.a, f.cfg));
}
BENCHMARK(bm_grad_a_m4);

void bm_spatial_mi_sample(benchmark::State &state)
{
    const Fixture f = make_fixture(2, 4, 2);
    const auto ctx = detail::build_mixture(f.h, f.lambda, f.a, f.cfg, false);
    std::uint64_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(detail::spatial_mi_sample_bits(ctx, 9, i++));
}
BENCHMARK(bm_spatial_mi_sample);

void bm_sample_channel(benchmark::State &state)
{
    const SystemConfig cfg = derive_config(8, 8, 2, 4, 2, 2, 1.0, 1.0);
    const ChannelParams cp;
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_channel(cfg, cp, seed++));
}
BENCHMARK(bm_sample_channel);

void bm_optimize_hybrid(benchmark::State &state)
{
    const Fixture f = make_fixture(2, 4, 2);
    for (auto _ : state)
    {
        Rng rng(3);
        benchmark::DoNotOptimize(
            optimize_hybrid(f.h, PowerAllocation::random(f.cfg, rng),
                            AnalogVector::random_phases(f.cfg, rng), f.cfg,
                            DigitalOptParams{}, AnalogOptParams{}));
    }
}
BENCHMARK(bm_optimize_hybrid)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
