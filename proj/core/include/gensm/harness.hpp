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
// Experiment orchestration: SNR sweeps, bound-tightness curves, convergence
// traces, initial-point/channel CDFs and the partition table, all emitted
// as seeded, reproducible CSV files.

#ifndef GENSM_HARNESS_HPP
#define GENSM_HARNESS_HPP

#define ARMA_DONT_USE_WRAPPER
#include <armadillo>

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gensm/channel.hpp"
#include "gensm/optimizer.hpp"
#include "gensm/param_select.hpp"
#include "gensm/se_metrics.hpp"
#include "gensm/system.hpp"

namespace gensm {

enum class ExperimentKind {
    bound_tightness, ///< R, R_LB and shifted approximation vs SNR
    convergence,     ///< optimizer traces for a handful of random inits
    init_cdf,        ///< CDF of the final SE over random inits or channels
    se_sweep,        ///< optimized / unoptimized / waterfilling / no-precoding SE vs SNR
    param_table      ///< partition winners per SNR
};

const char *to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string &s);

/// Everything needed to reproduce one experiment byte-for-byte.
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::se_sweep;

    // [system]; rho is set per sweep point from the SNR grid with
    // sigma_n_sq pinned, so only the dimensions live here.
    arma::uword n_t = 8, n_r = 8, n_k = 2, n_m = 4, n_rf = 2, n_s = 2;
    double sigma_n_sq = 1.0;

    ChannelParams channel;
    DigitalOptParams digital_opt;
    AnalogOptParams analog_opt;
    std::size_t max_outer = 30;
    double eps_outer = 1e-4;

    // [experiment]
    std::vector<double> snr_db{5.0};
    std::size_t n_channels = 1;
    std::size_t mc_samples = 20000;
    std::size_t n_inits = 4;
    std::uint64_t master_seed = 1;
    std::string out_path = "experiment.csv";
    std::string cdf_vary = "inits"; ///< "inits" or "channels"

    SystemConfig system_config(double snr_db_value) const;

    void validate() const;

    /// Table I dimensioning with desk-scale experiment defaults.
    static ExperimentSpec defaults();
    static ExperimentSpec from_file(const std::string &path);
};

/// Parsed structured-text config: [section] blocks of key = value lines.
class IniFile {
  public:
    static IniFile parse(std::istream &is);
    static IniFile parse_file(const std::string &path);

    bool has(const std::string &section, const std::string &key) const;
    std::string get_str(const std::string &section, const std::string &key,
                        const std::string &fallback) const;
    double get_double(const std::string &section, const std::string &key,
                      double fallback) const;
    std::uint64_t get_u64(const std::string &section, const std::string &key,
                          std::uint64_t fallback) const;
    std::vector<double> get_double_list(const std::string &section, const std::string &key,
                                        const std::vector<double> &fallback) const;

  private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// SE of the trivial precoding pair (all-ones power allocation, phase-zero
/// analog vector): closed-form bound plus Monte-Carlo true SE.
std::pair<SeEstimate, SeEstimate> no_precoding_baseline(const arma::cx_mat &h,
                                                        const SystemConfig &cfg,
                                                        std::size_t mc_samples,
                                                        std::uint64_t seed);

/// Waterfilling capacity over the top n_s singular modes of H under total
/// power rho.
SeEstimate waterfilling_baseline(const arma::cx_mat &h, arma::uword n_s, double rho,
                                 double sigma_n_sq);

/// Run one experiment and write its output file(s). Throws on invariant
/// violations or if more than 10% of cells had to be skipped.
void run_experiment(const ExperimentSpec &spec);

/// Deterministic parallel map: fn(i) for i in [0, n). Work items must only
/// write state owned by index i; any exception is rethrown on the caller.
/// Thread count comes from GENSM_THREADS (default: hardware concurrency).
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn);

namespace detail {

/// Deterministic CSV writer: "# key=value" preamble, header row, then rows
/// printed with %.17g so reruns are byte-identical.
class CsvWriter {
  public:
    CsvWriter(const std::string &path, const ExperimentSpec &spec,
              const std::vector<std::string> &columns);

    void row(const std::vector<std::string> &cells);
    static std::string num(double v);
    static std::string num(std::size_t v);

  private:
    std::string path_;
    std::ofstream os_;
    std::size_t n_columns_;
};

} // namespace detail

} // namespace gensm

#endif
