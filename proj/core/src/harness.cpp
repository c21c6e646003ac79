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

#include "gensm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "gensm/errors.hpp"
#include "gensm/linalg.hpp"

namespace gensm {

namespace {

// substream tags
constexpr std::uint64_t kTagChannel = 0x4348414eULL; // matches sample_ensemble
constexpr std::uint64_t kTagInit = 0x494e4954ULL;
constexpr std::uint64_t kTagMc = 0x4d43ULL;

struct Welford {
    double sum = 0.0, sumsq = 0.0;
    std::size_t n = 0;
    void add(double v)
    {
        sum += v;
        sumsq += v * v;
        ++n;
    }
    double mean() const { return sum / static_cast<double>(n); }
    double std_error() const
    {
        if (n < 2)
            return 0.0;
        const double m = mean();
        const double var =
            std::max(0.0, (sumsq - static_cast<double>(n) * m * m) / (static_cast<double>(n) - 1.0));
        return std::sqrt(var / static_cast<double>(n));
    }
};

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

const char *to_string(ExperimentKind kind)
{
    switch (kind)
    {
    case ExperimentKind::bound_tightness: return "bound_tightness";
    case ExperimentKind::convergence: return "convergence";
    case ExperimentKind::init_cdf: return "init_cdf";
    case ExperimentKind::se_sweep: return "se_sweep";
    case ExperimentKind::param_table: return "param_table";
    }
    return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string &s)
{
    if (s == "bound_tightness")
        return ExperimentKind::bound_tightness;
    if (s == "convergence")
        return ExperimentKind::convergence;
    if (s == "init_cdf")
        return ExperimentKind::init_cdf;
    if (s == "se_sweep")
        return ExperimentKind::se_sweep;
    if (s == "param_table")
        return ExperimentKind::param_table;
    throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

IniFile IniFile::parse(std::istream &is)
{
    IniFile f;
    std::string line, section;
    while (std::getline(is, line))
    {
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[')
        {
            if (line.back() != ']')
                throw IoError("config: malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw IoError("config: expected key = value, got '" + line + "'");
        f.sections_[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return f;
}

IniFile IniFile::parse_file(const std::string &path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError("config: cannot open '" + path + "'");
    return parse(is);
}

bool IniFile::has(const std::string &section, const std::string &key) const
{
    const auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string IniFile::get_str(const std::string &section, const std::string &key,
                             const std::string &fallback) const
{
    const auto s = sections_.find(section);
    if (s == sections_.end())
        return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

double IniFile::get_double(const std::string &section, const std::string &key,
                           double fallback) const
{
    if (!has(section, key))
        return fallback;
    const std::string v = get_str(section, key, "");
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size())
        throw IoError("config: [" + section + "] " + key + " is not a number: '" + v + "'");
    return d;
}

std::uint64_t IniFile::get_u64(const std::string &section, const std::string &key,
                               std::uint64_t fallback) const
{
    if (!has(section, key))
        return fallback;
    const std::string v = get_str(section, key, "");
    std::size_t pos = 0;
    const std::uint64_t u = std::stoull(v, &pos);
    if (pos != v.size())
        throw IoError("config: [" + section + "] " + key + " is not an integer: '" + v + "'");
    return u;
}

std::vector<double> IniFile::get_double_list(const std::string &section,
                                             const std::string &key,
                                             const std::vector<double> &fallback) const
{
    if (!has(section, key))
        return fallback;
    std::vector<double> out;
    std::string v = get_str(section, key, "");
    std::replace(v.begin(), v.end(), ',', ' ');
    std::istringstream ss(v);
    double d;
    while (ss >> d)
        out.push_back(d);
    if (!ss.eof())
        throw IoError("config: [" + section + "] " + key + " is not a numeric list");
    return out;
}

SystemConfig ExperimentSpec::system_config(double snr_db_value) const
{
    const double rho = sigma_n_sq * std::pow(10.0, snr_db_value / 10.0);
    return derive_config(n_t, n_r, n_k, n_m, n_rf, n_s, rho, sigma_n_sq);
}

void ExperimentSpec::validate() const
{
    if (n_channels < 1)
        throw std::invalid_argument("ExperimentSpec: n_channels must be >= 1");
    if (snr_db.empty())
        throw std::invalid_argument("ExperimentSpec: snr grid must be nonempty");
    if (n_inits < 1)
        throw std::invalid_argument("ExperimentSpec: n_inits must be >= 1");
    if (cdf_vary != "inits" && cdf_vary != "channels")
        throw std::invalid_argument("ExperimentSpec: cdf_vary must be 'inits' or 'channels'");
    if (out_path.empty())
        throw std::invalid_argument("ExperimentSpec: output path must be set");
    channel.validate();
    digital_opt.validate();
    analog_opt.validate();
    (void)system_config(snr_db.front()); // dimension check
}

ExperimentSpec ExperimentSpec::defaults()
{
    return {};
}

ExperimentSpec ExperimentSpec::from_file(const std::string &path)
{
    const IniFile ini = IniFile::parse_file(path);
    ExperimentSpec s;

    s.n_t = static_cast<arma::uword>(ini.get_u64("system", "n_t", s.n_t));
    s.n_r = static_cast<arma::uword>(ini.get_u64("system", "n_r", s.n_r));
    s.n_k = static_cast<arma::uword>(ini.get_u64("system", "n_k", s.n_k));
    s.n_m = static_cast<arma::uword>(ini.get_u64("system", "n_m", s.n_m));
    s.n_rf = static_cast<arma::uword>(ini.get_u64("system", "n_rf", s.n_rf));
    s.n_s = static_cast<arma::uword>(ini.get_u64("system", "n_s", s.n_rf));
    s.sigma_n_sq = ini.get_double("system", "sigma_n_sq", s.sigma_n_sq);

    ChannelParams &c = s.channel;
    c.n_cl = static_cast<arma::uword>(ini.get_u64("channel", "n_cl", c.n_cl));
    c.n_ray = static_cast<arma::uword>(ini.get_u64("channel", "n_ray", c.n_ray));
    c.cluster_power = arma::vec{ini.get_double("channel", "sigma_alpha_sq", 1.0)};
    c.angle_spread_deg = ini.get_double("channel", "angle_spread_deg", c.angle_spread_deg);
    c.elevation_spread_deg =
        ini.get_double("channel", "elevation_spread_deg", c.elevation_spread_deg);
    c.tx_sector_min_deg = ini.get_double("channel", "tx_sector_min_deg", c.tx_sector_min_deg);
    c.tx_sector_max_deg = ini.get_double("channel", "tx_sector_max_deg", c.tx_sector_max_deg);
    c.rx_sector_min_deg = ini.get_double("channel", "rx_sector_min_deg", c.rx_sector_min_deg);
    c.rx_sector_max_deg = ini.get_double("channel", "rx_sector_max_deg", c.rx_sector_max_deg);
    c.wavelength = ini.get_double("channel", "wavelength", c.wavelength);
    c.spacing = ini.get_double("channel", "spacing", 2.0 * c.wavelength);

    DigitalOptParams &d = s.digital_opt;
    d.t_b = ini.get_double("digital_opt", "t_b", d.t_b);
    d.eps_halt = ini.get_double("digital_opt", "eps_halt", d.eps_halt);
    d.max_iters = static_cast<std::size_t>(ini.get_u64("digital_opt", "max_iters", d.max_iters));
    d.alpha = ini.get_double("digital_opt", "alpha", d.alpha);
    d.beta = ini.get_double("digital_opt", "beta", d.beta);

    AnalogOptParams &a = s.analog_opt;
    a.p0 = ini.get_double("analog_opt", "p0", a.p0);
    a.delta_p = ini.get_double("analog_opt", "delta_p", a.delta_p);
    a.p_max = ini.get_double("analog_opt", "p_max", a.p_max);
    a.t_b = ini.get_double("analog_opt", "t_b", a.t_b);
    a.eps_halt = ini.get_double("analog_opt", "eps_halt", a.eps_halt);
    a.max_iters = static_cast<std::size_t>(ini.get_u64("analog_opt", "max_iters", a.max_iters));
    a.alpha = ini.get_double("analog_opt", "alpha", a.alpha);
    a.beta = ini.get_double("analog_opt", "beta", a.beta);

    s.max_outer = static_cast<std::size_t>(ini.get_u64("experiment", "max_outer", s.max_outer));
    s.eps_outer = ini.get_double("experiment", "eps_outer", s.eps_outer);
    s.kind = experiment_kind_from_string(
        ini.get_str("experiment", "kind", to_string(s.kind)));
    s.snr_db = ini.get_double_list("experiment", "snr_db", s.snr_db);
    s.n_channels = static_cast<std::size_t>(ini.get_u64("experiment", "n_channels", s.n_channels));
    s.mc_samples = static_cast<std::size_t>(ini.get_u64("experiment", "mc_samples", s.mc_samples));
    s.n_inits = static_cast<std::size_t>(ini.get_u64("experiment", "n_inits", s.n_inits));
    s.master_seed = ini.get_u64("experiment", "master_seed", s.master_seed);
    s.out_path = ini.get_str("experiment", "out", s.out_path);
    s.cdf_vary = ini.get_str("experiment", "cdf_vary", s.cdf_vary);
    s.validate();
    return s;
}

std::pair<SeEstimate, SeEstimate> no_precoding_baseline(const arma::cx_mat &h,
                                                        const SystemConfig &cfg,
                                                        std::size_t mc_samples,
                                                        std::uint64_t seed)
{
    const PowerAllocation lambda = PowerAllocation::uniform(cfg);
    const AnalogVector a = AnalogVector::trivial(cfg);
    return {se_lower_bound(h, lambda, a, cfg),
            true_se_mc(h, lambda, a, cfg, mc_samples, seed)};
}

SeEstimate waterfilling_baseline(const arma::cx_mat &h, arma::uword n_s, double rho,
                                 double sigma_n_sq)
{
    arma::vec sv;
    if (!arma::svd(sv, h))
        throw NumericalFailure("waterfilling_baseline: SVD failed");
    const double tol = static_cast<double>(std::max(h.n_rows, h.n_cols)) *
                       std::numeric_limits<double>::epsilon() * sv.max();
    arma::uword rank = 0;
    for (arma::uword i = 0; i < sv.n_elem; ++i)
        if (sv(i) > tol)
            ++rank;
    if (rank < n_s)
        throw RankDeficient("waterfilling_baseline: rank(H) < n_s");

    arma::vec gain(n_s);
    for (arma::uword i = 0; i < n_s; ++i)
        gain(i) = sv(i) * sv(i) / sigma_n_sq;

    // active-set waterfilling over the strongest modes
    arma::uword active = n_s;
    double level = 0.0;
    for (; active >= 1; --active)
    {
        double inv_sum = 0.0;
        for (arma::uword i = 0; i < active; ++i)
            inv_sum += 1.0 / gain(i);
        level = (rho + inv_sum) / static_cast<double>(active);
        if (level - 1.0 / gain(active - 1) > 0.0)
            break;
    }
    double cap = 0.0;
    for (arma::uword i = 0; i < active; ++i)
    {
        const double p = level - 1.0 / gain(i);
        cap += std::log2(1.0 + p * gain(i));
    }
    return {cap, SeKind::closed_form, 0, 0.0};
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn)
{
    unsigned threads = std::thread::hardware_concurrency();
    if (const char *env = std::getenv("GENSM_THREADS"))
    {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1)
            threads = static_cast<unsigned>(v);
    }
    if (threads < 1)
        threads = 1;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

    if (threads <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr eptr;
    std::mutex eptr_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            while (!failed.load(std::memory_order_relaxed))
            {
                const std::size_t i = next.fetch_add(1);
                if (i >= n)
                    return;
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(eptr_mutex);
                    if (!eptr)
                        eptr = std::current_exception();
                    failed.store(true);
                }
            }
        });
    for (auto &th : pool)
        th.join();
    if (eptr)
        std::rethrow_exception(eptr);
}

namespace detail {

std::string CsvWriter::num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string CsvWriter::num(std::size_t v)
{
    return std::to_string(v);
}

CsvWriter::CsvWriter(const std::string &path, const ExperimentSpec &spec,
                     const std::vector<std::string> &columns)
    : path_(path), os_(path, std::ios::trunc), n_columns_(columns.size())
{
    if (!os_)
        throw IoError("CsvWriter: cannot open '" + path + "' for writing");
    os_ << "# gensm-mimo experiment output\n";
    os_ << "# kind=" << to_string(spec.kind) << " master_seed=" << spec.master_seed
        << "\n";
    os_ << "# n_t=" << spec.n_t << " n_r=" << spec.n_r << " n_k=" << spec.n_k
        << " n_m=" << spec.n_m << " n_rf=" << spec.n_rf << " n_s=" << spec.n_s
        << " sigma_n_sq=" << num(spec.sigma_n_sq) << "\n";
    os_ << "# n_cl=" << spec.channel.n_cl << " n_ray=" << spec.channel.n_ray
        << " angle_spread_deg=" << num(spec.channel.angle_spread_deg)
        << " tx_sector=[" << num(spec.channel.tx_sector_min_deg) << ","
        << num(spec.channel.tx_sector_max_deg) << "]"
        << " rx_sector=[" << num(spec.channel.rx_sector_min_deg) << ","
        << num(spec.channel.rx_sector_max_deg) << "]\n";
    os_ << "# t_b=" << num(spec.digital_opt.t_b) << " eps_halt="
        << num(spec.digital_opt.eps_halt) << " p0=" << num(spec.analog_opt.p0)
        << " delta_p=" << num(spec.analog_opt.delta_p) << " p_max="
        << num(spec.analog_opt.p_max) << "\n";
    os_ << "# n_channels=" << spec.n_channels << " mc_samples=" << spec.mc_samples
        << " n_inits=" << spec.n_inits << "\n";
    os_ << "# snr_db=";
    for (std::size_t i = 0; i < spec.snr_db.size(); ++i)
        os_ << (i ? "," : "") << num(spec.snr_db[i]);
    os_ << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        os_ << (i ? "," : "") << columns[i];
    os_ << "\n";
}

void CsvWriter::row(const std::vector<std::string> &cells)
{
    if (cells.size() != n_columns_)
        throw std::logic_error("CsvWriter: row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i)
        os_ << (i ? "," : "") << cells[i];
    os_ << "\n";
    if (!os_)
        throw IoError("CsvWriter: write to '" + path_ + "' failed");
}

} // namespace detail

namespace {

using detail::CsvWriter;

void check_skip_fraction(std::size_t skipped, std::size_t total, const char *what)
{
    if (skipped * 10 > total)
        throw NumericalFailure(std::string(what) +
                               ": more than 10% of cells were skipped (" +
                               std::to_string(skipped) + "/" + std::to_string(total) + ")");
}

void run_bound_tightness(const ExperimentSpec &spec)
{
    const SystemConfig base = spec.system_config(spec.snr_db.front());
    const ChannelEnsemble ens =
        sample_ensemble(base, spec.channel, spec.n_channels, spec.master_seed);

    struct Cell {
        double rlb = 0.0, shifted = 0.0, mc = 0.0, diff = 0.0;
        bool ok = false;
    };
    const std::size_t n_snr = spec.snr_db.size();
    std::vector<Cell> cells(n_snr * spec.n_channels);
    parallel_for(cells.size(), [&](std::size_t idx) {
        const std::size_t si = idx / spec.n_channels;
        const std::size_t ci = idx % spec.n_channels;
        const SystemConfig cfg = spec.system_config(spec.snr_db[si]);
        const std::uint64_t mc_seed = Rng::substream(spec.master_seed, {kTagMc, idx}).next_u64();
        try
        {
            const auto [rlb, mc] =
                no_precoding_baseline(ens.items[ci].h, cfg, spec.mc_samples, mc_seed);
            Cell c;
            c.rlb = rlb.value;
            c.shifted = shifted_approximation(rlb, cfg).value;
            c.mc = mc.value;
            c.diff = c.shifted - c.mc;
            c.ok = true;
            cells[idx] = c;
        }
        catch (const NumericalFailure &)
        {
            cells[idx].ok = false;
        }
    });

    CsvWriter csv(spec.out_path, spec,
                  {"snr_db", "rlb", "shifted_rlb", "true_se", "true_se_std_error",
                   "diff", "diff_std_error", "n_channels", "mc_samples"});
    std::size_t skipped = 0;
    for (std::size_t si = 0; si < n_snr; ++si)
    {
        Welford rlb, shifted, mc, diff;
        for (std::size_t ci = 0; ci < spec.n_channels; ++ci)
        {
            const Cell &c = cells[si * spec.n_channels + ci];
            if (!c.ok)
            {
                ++skipped;
                continue;
            }
            rlb.add(c.rlb);
            shifted.add(c.shifted);
            mc.add(c.mc);
            diff.add(c.diff);
        }
        if (mc.n == 0)
            continue;
        csv.row({CsvWriter::num(spec.snr_db[si]), CsvWriter::num(rlb.mean()),
                 CsvWriter::num(shifted.mean()), CsvWriter::num(mc.mean()),
                 CsvWriter::num(mc.std_error()), CsvWriter::num(diff.mean()),
                 CsvWriter::num(diff.std_error()), CsvWriter::num(mc.n),
                 CsvWriter::num(spec.mc_samples)});
    }
    check_skip_fraction(skipped, cells.size(), "bound_tightness");
}

void run_convergence(const ExperimentSpec &spec)
{
    const double snr = spec.snr_db.front();
    const SystemConfig cfg = spec.system_config(snr);
    const std::uint64_t ch_seed = Rng::substream(spec.master_seed, {kTagChannel, 0}).next_u64();
    const ChannelRealization ch = sample_channel(cfg, spec.channel, ch_seed);

    std::vector<HybridResult> runs(spec.n_inits);
    parallel_for(spec.n_inits, [&](std::size_t k) {
        Rng rng = Rng::substream(spec.master_seed, {kTagInit, k});
        const PowerAllocation lambda0 = PowerAllocation::random(cfg, rng);
        const AnalogVector a0 = AnalogVector::random_phases(cfg, rng);
        runs[k] = optimize_hybrid(ch.h, lambda0, a0, cfg, spec.digital_opt,
                                  spec.analog_opt, spec.max_outer, spec.eps_outer);
    });

    CsvWriter csv(spec.out_path, spec,
                  {"init", "iteration", "phase", "cost", "step", "grad_norm"});
    for (std::size_t k = 0; k < runs.size(); ++k)
        for (const auto &rec : runs[k].trace.records)
            csv.row({CsvWriter::num(k), CsvWriter::num(rec.iter),
                     rec.phase == OptPhase::digital ? "digital" : "analog",
                     CsvWriter::num(rec.rlb), CsvWriter::num(rec.step),
                     CsvWriter::num(rec.grad_norm)});
}

void run_init_cdf(const ExperimentSpec &spec)
{
    CsvWriter csv(spec.out_path, spec,
                  spec.cdf_vary == "inits"
                      ? std::vector<std::string>{"snr_db", "rank", "shifted_rlb", "cdf"}
                      : std::vector<std::string>{"snr_db", "rank", "ogensm_se",
                                                 "nogensm_se", "cdf"});

    for (const double snr : spec.snr_db)
    {
        const SystemConfig cfg = spec.system_config(snr);
        if (spec.cdf_vary == "inits")
        {
            const std::uint64_t ch_seed =
                Rng::substream(spec.master_seed, {kTagChannel, 0}).next_u64();
            const ChannelRealization ch = sample_channel(cfg, spec.channel, ch_seed);
            std::vector<double> finals(spec.n_inits);
            parallel_for(spec.n_inits, [&](std::size_t k) {
                Rng rng = Rng::substream(spec.master_seed, {kTagInit, k});
                const PowerAllocation lambda0 = PowerAllocation::random(cfg, rng);
                const AnalogVector a0 = AnalogVector::random_phases(cfg, rng);
                const HybridResult hr =
                    optimize_hybrid(ch.h, lambda0, a0, cfg, spec.digital_opt,
                                    spec.analog_opt, spec.max_outer, spec.eps_outer);
                finals[k] = hr.rlb_projected - bound_gap_bits(cfg);
            });
            std::sort(finals.begin(), finals.end());
            for (std::size_t i = 0; i < finals.size(); ++i)
                csv.row({CsvWriter::num(snr), CsvWriter::num(i),
                         CsvWriter::num(finals[i]),
                         CsvWriter::num((static_cast<double>(i) + 1.0) /
                                        static_cast<double>(finals.size()))});
        }
        else
        {
            const ChannelEnsemble ens =
                sample_ensemble(cfg, spec.channel, spec.n_channels, spec.master_seed);
            std::vector<double> opt(spec.n_channels), trivial(spec.n_channels);
            parallel_for(spec.n_channels, [&](std::size_t j) {
                Rng rng = Rng::substream(spec.master_seed, {kTagInit, j});
                const PowerAllocation lambda0 = PowerAllocation::random(cfg, rng);
                const AnalogVector a0 = AnalogVector::random_phases(cfg, rng);
                const HybridResult hr =
                    optimize_hybrid(ens.items[j].h, lambda0, a0, cfg, spec.digital_opt,
                                    spec.analog_opt, spec.max_outer, spec.eps_outer);
                const std::uint64_t mc_seed =
                    Rng::substream(spec.master_seed, {kTagMc, j}).next_u64();
                opt[j] = true_se_mc(ens.items[j].h, hr.lambda, hr.a, cfg,
                                    spec.mc_samples, mc_seed)
                             .value;
                trivial[j] = no_precoding_baseline(ens.items[j].h, cfg, spec.mc_samples,
                                                   mc_seed)
                                 .second.value;
            });
            std::sort(opt.begin(), opt.end());
            std::sort(trivial.begin(), trivial.end());
            for (std::size_t i = 0; i < opt.size(); ++i)
                csv.row({CsvWriter::num(snr), CsvWriter::num(i), CsvWriter::num(opt[i]),
                         CsvWriter::num(trivial[i]),
                         CsvWriter::num((static_cast<double>(i) + 1.0) /
                                        static_cast<double>(opt.size()))});
        }
    }
}

void run_se_sweep(const ExperimentSpec &spec)
{
    const SystemConfig base = spec.system_config(spec.snr_db.front());
    const ChannelEnsemble ens =
        sample_ensemble(base, spec.channel, spec.n_channels, spec.master_seed);
    std::vector<arma::cx_mat> hs;
    hs.reserve(ens.items.size());
    for (const auto &item : ens.items)
        hs.push_back(item.h);

    CsvWriter csv(spec.out_path, spec,
                  {"snr_db", "n_k", "n_m", "ogensm_se", "ogensm_se_std_error",
                   "nogensm_se", "nogensm_se_std_error", "wp_se", "wp_se_std_error",
                   "nopre_se", "nopre_se_std_error", "n_channels", "mc_samples"});

    std::size_t skipped = 0, total_cells = 0;
    for (std::size_t si = 0; si < spec.snr_db.size(); ++si)
    {
        const double snr = spec.snr_db[si];
        const SelectParamsResult sel =
            select_params(base, hs, snr, spec.digital_opt, spec.analog_opt,
                          spec.master_seed, /*collect_precoders=*/true);
        skipped += sel.n_skipped;

        std::size_t winner_idx = 0;
        for (std::size_t i = 0; i < sel.table.size(); ++i)
            if (sel.table[i].winner)
                winner_idx = i;
        const SystemConfig wcfg =
            derive_config(spec.n_t, spec.n_r, sel.winner.n_k, sel.winner.n_m, spec.n_rf,
                          spec.n_s, 1.0, spec.sigma_n_sq)
                .with_snr_db(snr);
        const SystemConfig ncfg = spec.system_config(snr);

        struct Cell {
            double o = 0.0, no = 0.0, wp = 0.0, npre = 0.0;
            bool ok = false;
        };
        std::vector<Cell> cells(hs.size());
        const auto &winners = sel.precoders[winner_idx];
        parallel_for(hs.size(), [&](std::size_t j) {
            const std::uint64_t mc_seed =
                Rng::substream(spec.master_seed, {kTagMc, si, j}).next_u64();
            try
            {
                Cell c;
                c.o = true_se_mc(hs[j], winners[j].lambda, winners[j].a, wcfg,
                                 spec.mc_samples, mc_seed)
                          .value;
                c.no = no_precoding_baseline(hs[j], wcfg, spec.mc_samples, mc_seed)
                           .second.value;
                c.wp = waterfilling_baseline(hs[j], spec.n_s, wcfg.rho, spec.sigma_n_sq).value;
                c.npre = no_precoding_baseline(hs[j], ncfg, spec.mc_samples, mc_seed)
                             .second.value;
                c.ok = true;
                cells[j] = c;
            }
            catch (const NumericalFailure &)
            {
                cells[j].ok = false;
            }
            catch (const RankDeficient &)
            {
                cells[j].ok = false;
            }
        });

        Welford o, no, wp, npre, diff;
        for (const Cell &c : cells)
        {
            ++total_cells;
            if (!c.ok)
            {
                ++skipped;
                continue;
            }
            o.add(c.o);
            no.add(c.no);
            wp.add(c.wp);
            npre.add(c.npre);
            diff.add(c.o - c.no);
        }
        if (o.n == 0)
            throw NumericalFailure("se_sweep: no surviving channels at one SNR point");

        // optimization must not lose to its own initialization family
        if (diff.mean() < -3.0 * diff.std_error())
            throw NumericalFailure(
                "se_sweep: optimized SE fell below the unoptimized baseline at snr_db=" +
                std::to_string(snr));

        csv.row({CsvWriter::num(snr), CsvWriter::num(std::size_t(sel.winner.n_k)),
                 CsvWriter::num(std::size_t(sel.winner.n_m)), CsvWriter::num(o.mean()),
                 CsvWriter::num(o.std_error()), CsvWriter::num(no.mean()),
                 CsvWriter::num(no.std_error()), CsvWriter::num(wp.mean()),
                 CsvWriter::num(wp.std_error()), CsvWriter::num(npre.mean()),
                 CsvWriter::num(npre.std_error()), CsvWriter::num(o.n),
                 CsvWriter::num(spec.mc_samples)});
    }
    check_skip_fraction(skipped, std::max<std::size_t>(total_cells, 1), "se_sweep");
}

void run_param_table(const ExperimentSpec &spec)
{
    const SystemConfig base = spec.system_config(spec.snr_db.front());
    const ChannelEnsemble ens =
        sample_ensemble(base, spec.channel, spec.n_channels, spec.master_seed);
    std::vector<arma::cx_mat> hs;
    hs.reserve(ens.items.size());
    for (const auto &item : ens.items)
        hs.push_back(item.h);

    CsvWriter csv(spec.out_path, spec,
                  {"n_rf", "n_t", "n_r", "snr_db", "n_k", "n_m", "mean_rlb",
                   "std_error", "winner_flag"});
    for (const double snr : spec.snr_db)
    {
        const SelectParamsResult sel = select_params(base, hs, snr, spec.digital_opt,
                                                     spec.analog_opt, spec.master_seed);
        for (const PartitionCandidate &cand : sel.table)
            csv.row({CsvWriter::num(std::size_t(spec.n_rf)),
                     CsvWriter::num(std::size_t(spec.n_t)),
                     CsvWriter::num(std::size_t(spec.n_r)), CsvWriter::num(snr),
                     CsvWriter::num(std::size_t(cand.n_k)),
                     CsvWriter::num(std::size_t(cand.n_m)), CsvWriter::num(cand.mean_rlb),
                     CsvWriter::num(cand.std_error),
                     CsvWriter::num(std::size_t(cand.winner ? 1 : 0))});
    }
}

} // namespace

void run_experiment(const ExperimentSpec &spec)
{
    spec.validate();
    switch (spec.kind)
    {
    case ExperimentKind::bound_tightness: return run_bound_tightness(spec);
    case ExperimentKind::convergence: return run_convergence(spec);
    case ExperimentKind::init_cdf: return run_init_cdf(spec);
    case ExperimentKind::se_sweep: return run_se_sweep(spec);
    case ExperimentKind::param_table: return run_param_table(spec);
    }
}

} // namespace gensm
