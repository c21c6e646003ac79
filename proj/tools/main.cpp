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

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gensm/channel.hpp"
#include "gensm/harness.hpp"
#include "gensm/optimizer.hpp"
#include "gensm/param_select.hpp"
#include "gensm/se_metrics.hpp"

using namespace gensm;

namespace {

struct CommonOpts {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::vector<double> snr_db;
    std::size_t channels = 0;
    std::size_t mc_samples = 0;
};

void add_common(CLI::App *cmd, CommonOpts &opts)
{
    cmd->add_option("--config", opts.config, "experiment config file (INI sections)");
    cmd->add_option("--out", opts.out, "output file path");
    cmd->add_option("--seed", opts.seed, "master seed")->each([&opts](const std::string &) {
        opts.seed_set = true;
    });
    cmd->add_option("--snr-db", opts.snr_db, "SNR grid in dB")->delimiter(',');
    cmd->add_option("--channels", opts.channels, "channel ensemble size");
    cmd->add_option("--mc-samples", opts.mc_samples, "Monte-Carlo samples per SE point");
}

ExperimentSpec load_spec(const CommonOpts &opts)
{
    ExperimentSpec spec = opts.config.empty() ? ExperimentSpec::defaults()
                                              : ExperimentSpec::from_file(opts.config);
    if (opts.seed_set)
        spec.master_seed = opts.seed;
    if (!opts.snr_db.empty())
        spec.snr_db = opts.snr_db;
    if (opts.channels > 0)
        spec.n_channels = opts.channels;
    if (opts.mc_samples > 0)
        spec.mc_samples = opts.mc_samples;
    if (!opts.out.empty())
        spec.out_path = opts.out;
    return spec;
}

int run_evaluate(const CommonOpts &opts)
{
    ExperimentSpec spec = load_spec(opts);
    const std::uint64_t ch_seed =
        Rng::substream(spec.master_seed, {0x4348414eULL, 0}).next_u64();

    std::printf("# single-channel SE at trivial precoding (master seed %llu)\n",
                static_cast<unsigned long long>(spec.master_seed));
    std::printf("%10s %12s %12s %12s %18s %12s\n", "snr_db", "rlb", "shifted",
                "cond_mi", "spatial_mi_mc", "true_se");
    for (const double snr : spec.snr_db)
    {
        const SystemConfig cfg = spec.system_config(snr);
        const ChannelRealization ch = sample_channel(cfg, spec.channel, ch_seed);
        const PowerAllocation lambda = PowerAllocation::uniform(cfg);
        const AnalogVector a = AnalogVector::trivial(cfg);

        const SeEstimate rlb = se_lower_bound(ch.h, lambda, a, cfg);
        const SeEstimate shifted = shifted_approximation(rlb, cfg);
        const SeEstimate cond = conditional_mi(ch.h, lambda, a, cfg);
        const std::uint64_t mc_seed =
            Rng::substream(spec.master_seed, {0x4d43ULL, 0}).next_u64();
        const SeEstimate spatial =
            spatial_mi_mc(ch.h, lambda, a, cfg, spec.mc_samples, mc_seed);
        std::printf("%10.2f %12.6f %12.6f %12.6f %10.4f +- %.4f %12.6f\n", snr,
                    rlb.value, shifted.value, cond.value, spatial.value,
                    spatial.std_error, cond.value + spatial.value);
    }
    return 0;
}

int run_optimize(const CommonOpts &opts, std::size_t n_inits)
{
    ExperimentSpec spec = load_spec(opts);
    if (spec.out_path == "experiment.csv" && opts.out.empty())
        spec.out_path = "trace.csv";

    if (n_inits > 1)
    {
        spec.kind = ExperimentKind::convergence;
        spec.n_inits = n_inits;
        run_experiment(spec);
        std::printf("wrote %zu-init convergence traces to %s\n", n_inits,
                    spec.out_path.c_str());
        return 0;
    }

    const double snr = spec.snr_db.front();
    const SystemConfig cfg = spec.system_config(snr);
    const std::uint64_t ch_seed =
        Rng::substream(spec.master_seed, {0x4348414eULL, 0}).next_u64();
    const ChannelRealization ch = sample_channel(cfg, spec.channel, ch_seed);

    Rng rng = Rng::substream(spec.master_seed, {0x494e4954ULL, 0});
    const PowerAllocation lambda0 = PowerAllocation::random(cfg, rng);
    const AnalogVector a0 = AnalogVector::random_phases(cfg, rng);
    const HybridResult hr = optimize_hybrid(ch.h, lambda0, a0, cfg, spec.digital_opt,
                                            spec.analog_opt, spec.max_outer,
                                            spec.eps_outer);

    std::ofstream os(spec.out_path);
    if (!os)
    {
        std::fprintf(stderr, "cannot open %s\n", spec.out_path.c_str());
        return 1;
    }
    hr.trace.write_csv(os);

    const std::uint64_t mc_seed = Rng::substream(spec.master_seed, {0x4d43ULL, 0}).next_u64();
    const auto [rlb0, mc0] = no_precoding_baseline(ch.h, cfg, spec.mc_samples, mc_seed);
    const double shift = bound_gap_bits(cfg);
    std::printf("snr_db            : %.2f\n", snr);
    std::printf("rlb (projected)   : %.6f bits/s/Hz\n", hr.rlb_projected);
    std::printf("shifted rlb       : %.6f bits/s/Hz\n", hr.rlb_projected - shift);
    std::printf("no-precoding rlb  : %.6f (shifted %.6f)\n", rlb0.value,
                rlb0.value - shift);
    std::printf("improvement       : %.2f%% (shifted)\n",
                100.0 * (hr.rlb_projected - rlb0.value) / (rlb0.value - shift));
    std::printf("phase steps       : %zu (converged: %s)\n", hr.outer_phases,
                hr.converged ? "yes" : "no");
    std::printf("trace             : %s (%zu accepted steps)\n", spec.out_path.c_str(),
                hr.trace.records.size());
    return 0;
}

int run_kind(const CommonOpts &opts, ExperimentKind kind)
{
    ExperimentSpec spec = load_spec(opts);
    spec.kind = kind;
    run_experiment(spec);
    std::printf("wrote %s\n", spec.out_path.c_str());
    return 0;
}

int run_channel_gen(const CommonOpts &opts)
{
    ExperimentSpec spec = load_spec(opts);
    if (spec.out_path == "experiment.csv" && opts.out.empty())
        spec.out_path = "channels.bin";
    const SystemConfig cfg = spec.system_config(spec.snr_db.front());
    const ChannelEnsemble ens =
        sample_ensemble(cfg, spec.channel, spec.n_channels, spec.master_seed);
    save_ensemble(spec.out_path, ens);
    std::printf("wrote %zu %llux%llu realizations to %s\n", ens.items.size(),
                static_cast<unsigned long long>(ens.n_r),
                static_cast<unsigned long long>(ens.n_t), spec.out_path.c_str());
    return 0;
}

int run_gradcheck(const CommonOpts &opts)
{
    const ExperimentSpec spec = load_spec(opts);
    const GradientSuiteResult res = run_gradient_suite(50, spec.master_seed);
    std::printf("max relative finite-difference errors over 50 instances:\n");
    std::printf("  grad_rlb_lambda     : %.3e\n", res.rlb_lambda);
    std::printf("  grad_rlb_a          : %.3e\n", res.rlb_a);
    std::printf("  grad_barrier_lambda : %.3e\n", res.barrier_lambda);
    std::printf("  grad_barrier_a      : %.3e\n", res.barrier_a);
    const bool ok = res.worst() < 1e-5;
    std::printf("gradcheck %s (threshold 1e-5)\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"GenSM-aided mmWave MIMO hybrid precoding toolbox"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::size_t n_inits = 0;
    std::string sweep_kind = "se_sweep";
    std::string vary;

    CLI::App *evaluate = app.add_subcommand("evaluate", "single-point SE of one channel");
    add_common(evaluate, opts);

    CLI::App *optimize =
        app.add_subcommand("optimize", "hybrid precoder optimization on one channel");
    add_common(optimize, opts);
    optimize->add_option("--inits", n_inits, "number of random initial points");

    CLI::App *sweep = app.add_subcommand("sweep", "SE-vs-SNR sweep experiment");
    add_common(sweep, opts);
    sweep->add_option("--kind", sweep_kind, "se_sweep or bound_tightness");

    CLI::App *cdf = app.add_subcommand("cdf", "CDF over random inits or channels");
    add_common(cdf, opts);
    cdf->add_option("--inits", n_inits, "number of random initial points");
    cdf->add_option("--vary", vary, "inits or channels");

    CLI::App *table = app.add_subcommand("param-table", "optimal (n_k, n_m) table");
    add_common(table, opts);

    CLI::App *chan = app.add_subcommand("channel-gen", "export a channel ensemble");
    add_common(chan, opts);

    CLI::App *grad = app.add_subcommand("gradcheck", "finite-difference gradient suites");
    add_common(grad, opts);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (evaluate->parsed())
            return run_evaluate(opts);
        if (optimize->parsed())
            return run_optimize(opts, n_inits == 0 ? 1 : n_inits);
        if (sweep->parsed())
            return run_kind(opts, experiment_kind_from_string(sweep_kind));
        if (cdf->parsed())
        {
            ExperimentSpec spec = load_spec(opts);
            spec.kind = ExperimentKind::init_cdf;
            if (!vary.empty())
                spec.cdf_vary = vary;
            if (n_inits > 0)
                spec.n_inits = n_inits;
            run_experiment(spec);
            std::printf("wrote %s\n", spec.out_path.c_str());
            return 0;
        }
        if (table->parsed())
            return run_kind(opts, ExperimentKind::param_table);
        if (chan->parsed())
            return run_channel_gen(opts);
        if (grad->parsed())
            return run_gradcheck(opts);
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
