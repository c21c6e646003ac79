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

#include "gensm/optimizer.hpp"

#include <cmath>
#include <optional>

#include "gensm/errors.hpp"
#include "gensm/linalg.hpp"

namespace gensm {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kLog2E = 1.4426950408889634074;
constexpr int kMaxBacktracks = 80;
constexpr double kAnalogEntryMargin = 0.5;

// Pairwise factorization context shared by both analytic gradients.
struct PairContext {
    std::vector<arma::cx_mat> w;         // effective channels, N_R x N_S
    std::vector<arma::cx_mat> pair_chol; // lower factors of Sigma_n + Sigma_t, n <= t
    arma::mat weights;                   // v(n,t) = |S_n+S_t|^{-1} / sum_t' |S_n+S_t'|^{-1}
    arma::uword m = 0;

    arma::uword pair_index(arma::uword n, arma::uword t) const
    {
        if (n > t)
            std::swap(n, t);
        return n * m - n * (n - 1) / 2 + (t - n);
    }
    const arma::cx_mat &factor(arma::uword n, arma::uword t) const
    {
        return pair_chol[pair_index(n, t)];
    }
};

PairContext build_pair_context(const arma::cx_mat &h, const PowerAllocation &lambda,
                               const AnalogVector &a, const SystemConfig &cfg)
{
    const CovarianceSet set = covariance_set(h, a, lambda, cfg);
    PairContext ctx;
    ctx.m = cfg.m;
    ctx.w = effective_channels(h, a, cfg);
    ctx.pair_chol.resize(cfg.m * (cfg.m + 1) / 2);
    arma::mat pair_logdet(cfg.m, cfg.m);
    for (arma::uword n = 0; n < cfg.m; ++n)
        for (arma::uword t = n; t < cfg.m; ++t)
        {
            arma::cx_mat s = set.sigmas[n] + set.sigmas[t];
            if (!cholesky_lower_inplace(s))
                throw NumericalFailure(
                    "pair context: Sigma_n + Sigma_t is not positive definite");
            const double ld = logdet_from_factor(s);
            pair_logdet(n, t) = ld;
            pair_logdet(t, n) = ld;
            ctx.pair_chol[ctx.pair_index(n, t)] = std::move(s);
        }
    ctx.weights.set_size(cfg.m, cfg.m);
    std::vector<double> neg(cfg.m);
    for (arma::uword n = 0; n < cfg.m; ++n)
    {
        for (arma::uword t = 0; t < cfg.m; ++t)
            neg[t] = -pair_logdet(n, t);
        const double lse = log_sum_exp(neg);
        for (arma::uword t = 0; t < cfg.m; ++t)
            ctx.weights(n, t) = std::exp(neg[t] - lse);
    }
    return ctx;
}

double barrier_sum(const arma::vec &lambda)
{
    double s = 0.0;
    for (arma::uword i = 0; i < lambda.n_elem; ++i)
        s += std::log(lambda(i));
    return s;
}

// Backtracking line search with a warm-started trial step and forward
// expansion. Backtracking alone stalls here: an unscaled gradient step
// usually leaves the barrier's feasible set, so the accepted step length
// says nothing about curvature and the relative-step halting rule can fire
// while ascent is still available. Expanding an immediately-accepted step
// until the Armijo test fails restores a meaningful step length.
//
// `objective` returns the barrier objective at x + eta * dir, or nullopt
// when the trial point is infeasible (treated as -inf).
struct LineSearchOutcome {
    bool accepted = false;
    double eta = 0.0;
    double objective = 0.0;
};

LineSearchOutcome armijo_search(const std::function<std::optional<double>(double)> &objective,
                                double f0, double slope, double eta_start, double alpha,
                                double beta)
{
    constexpr int kMaxExpansions = 40;
    double eta = eta_start;
    std::optional<double> val;
    int bt = 0;
    for (; bt < kMaxBacktracks; ++bt)
    {
        val = objective(eta);
        if (val && *val >= f0 + alpha * eta * slope)
            break;
        eta *= beta;
    }
    if (bt == kMaxBacktracks)
        return {};
    if (bt == 0)
    {
        // first trial accepted; expand while the Armijo test keeps passing
        for (int ex = 0; ex < kMaxExpansions; ++ex)
        {
            const double eta_up = eta / beta;
            const std::optional<double> up = objective(eta_up);
            if (!up || !(*up >= f0 + alpha * eta_up * slope) || !(*up >= *val))
                break;
            eta = eta_up;
            val = up;
        }
    }
    return {true, eta, *val};
}

std::optional<double> try_rlb(const arma::cx_mat &h, const PowerAllocation &lambda,
                              const AnalogVector &a, const SystemConfig &cfg)
{
    try
    {
        return detail::rlb_value_bits(h, lambda, a, cfg);
    }
    catch (const NumericalFailure &)
    {
        return std::nullopt;
    }
}

} // namespace

void DigitalOptParams::validate() const
{
    if (!(t_b > 0.0))
        throw std::invalid_argument("DigitalOptParams: t_b must be positive");
    if (!(eps_halt > 0.0))
        throw std::invalid_argument("DigitalOptParams: eps_halt must be positive");
    if (!(alpha > 0.0 && alpha < 0.5))
        throw std::invalid_argument("DigitalOptParams: alpha must be in (0, 0.5)");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("DigitalOptParams: beta must be in (0, 1)");
}

void AnalogOptParams::validate() const
{
    if (!(p0 >= 2.0))
        throw std::invalid_argument("AnalogOptParams: p0 must be >= 2");
    if (!(delta_p > 0.0))
        throw std::invalid_argument("AnalogOptParams: delta_p must be positive");
    if (!(p_max >= p0))
        throw std::invalid_argument("AnalogOptParams: p_max must be >= p0");
    if (!(t_b > 0.0))
        throw std::invalid_argument("AnalogOptParams: t_b must be positive");
    if (!(eps_halt > 0.0))
        throw std::invalid_argument("AnalogOptParams: eps_halt must be positive");
    if (!(alpha > 0.0 && alpha < 0.5))
        throw std::invalid_argument("AnalogOptParams: alpha must be in (0, 0.5)");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("AnalogOptParams: beta must be in (0, 1)");
}

void OptTrace::append(const OptTrace &other)
{
    for (TraceRecord rec : other.records)
    {
        rec.iter = records.size();
        records.push_back(rec);
    }
    max_iters_hit = max_iters_hit || other.max_iters_hit;
}

void OptTrace::write_csv(std::ostream &os) const
{
    os << "iteration,phase,cost,step,grad_norm\n";
    char buf[160];
    for (const auto &rec : records)
    {
        std::snprintf(buf, sizeof(buf), "%zu,%s,%.17g,%.17g,%.17g\n", rec.iter,
                      rec.phase == OptPhase::digital ? "digital" : "analog", rec.rlb,
                      rec.step, rec.grad_norm);
        os << buf;
    }
}

arma::vec grad_rlb_lambda(const arma::cx_mat &h, const PowerAllocation &lambda,
                          const AnalogVector &a, const SystemConfig &cfg)
{
    const PairContext ctx = build_pair_context(h, lambda, a, cfg);
    const double pref = cfg.rho * kLog2E /
                        (static_cast<double>(cfg.m) * static_cast<double>(cfg.n_s));
    arma::vec g(cfg.m * cfg.n_s, arma::fill::zeros);
    for (arma::uword mi = 0; mi < cfg.m; ++mi)
        for (arma::uword n = 0; n < cfg.m; ++n)
        {
            const double coef = ctx.weights(n, mi) + ctx.weights(mi, n);
            if (coef == 0.0)
                continue;
            arma::cx_mat x = ctx.w[mi];
            forward_subst_inplace(ctx.factor(n, mi), x);
            for (arma::uword s = 0; s < cfg.n_s; ++s)
            {
                double d = 0.0;
                for (arma::uword r = 0; r < cfg.n_r; ++r)
                    d += std::norm(x(r, s));
                g(mi * cfg.n_s + s) += coef * d;
            }
        }
    return pref * g;
}

arma::vec grad_barrier_lambda(const arma::vec &lambda, double t_b)
{
    arma::vec q(lambda.n_elem);
    for (arma::uword i = 0; i < lambda.n_elem; ++i)
    {
        if (!(lambda(i) > 0.0))
            throw BoundaryViolation("grad_barrier_lambda: lambda must be strictly positive");
        q(i) = 1.0 / (t_b * lambda(i));
    }
    return q;
}

arma::vec project_tangent(const arma::vec &g)
{
    return g - arma::mean(g);
}

arma::cx_vec grad_rlb_a(const arma::cx_mat &h, const PowerAllocation &lambda,
                        const AnalogVector &a, const SystemConfig &cfg)
{
    const PairContext ctx = build_pair_context(h, lambda, a, cfg);
    const double pref = cfg.rho * kLog2E /
                        (static_cast<double>(cfg.m) * static_cast<double>(cfg.n_s));
    arma::cx_vec g(cfg.n_t, arma::fill::zeros);
    arma::vec group_w(cfg.n_m);
    for (arma::uword n = 0; n < cfg.m; ++n)
        for (arma::uword t = n; t < cfg.m; ++t)
        {
            const double coef =
                n == t ? ctx.weights(n, n) : ctx.weights(n, t) + ctx.weights(t, n);
            if (coef == 0.0)
                continue;
            arma::cx_mat x = h;
            forward_subst_inplace(ctx.factor(n, t), x);
            const arma::cx_mat y = x.t() * x; // H^H (Sigma_n + Sigma_t)^{-1} H

            group_w.zeros();
            const arma::vec ln = lambda.block(n, cfg);
            const arma::vec lt = lambda.block(t, cfg);
            for (arma::uword r = 0; r < cfg.n_s; ++r)
            {
                group_w(cfg.agc_table[n](r) - 1) += ln(r);
                group_w(cfg.agc_table[t](r) - 1) += lt(r);
            }
            for (arma::uword gi = 0; gi < cfg.n_m; ++gi)
            {
                if (group_w(gi) == 0.0)
                    continue;
                const arma::uword lo = gi * cfg.n_k;
                const arma::uword hi = lo + cfg.n_k - 1;
                const arma::cx_vec s = y.submat(lo, lo, hi, hi) * a.a.subvec(lo, hi);
                g.subvec(lo, hi) += (coef * group_w(gi)) * s;
            }
        }
    return pref * g;
}

arma::cx_vec grad_barrier_a(const arma::cx_vec &a, double p, double t_b, arma::uword n_k)
{
    const double radius = 1.0 / std::sqrt(static_cast<double>(n_k));
    const double np = lp_norm(a, p);
    if (!(np < radius))
        throw BoundaryViolation("grad_barrier_a: ||a||_p must be strictly inside the ball");
    if (np == 0.0)
        return arma::cx_vec(a.n_elem, arma::fill::zeros);

    // ||a||^{1-p} |a_i|^{p-2} a_i rewritten as (|a_i|/||a||)^{p-2} a_i / ||a||
    // so that large p cannot overflow.
    arma::cx_vec g(a.n_elem);
    const double denom = 2.0 * t_b * (radius - np);
    for (arma::uword i = 0; i < a.n_elem; ++i)
    {
        const double r = std::abs(a(i)) / np;
        g(i) = -std::pow(r, p - 2.0) * a(i) / (np * denom);
    }
    return g;
}

std::pair<PowerAllocation, OptTrace> optimize_digital(const arma::cx_mat &h,
                                                      const AnalogVector &a,
                                                      const PowerAllocation &lambda0,
                                                      const SystemConfig &cfg,
                                                      const DigitalOptParams &params)
{
    params.validate();
    lambda0.validate(cfg);
    if (lambda0.lambda.min() <= 0.0)
        throw BoundaryViolation("optimize_digital: initial point must be strictly positive");

    PowerAllocation cur{lambda0.lambda};
    double rlb = detail::rlb_value_bits(h, cur, a, cfg);
    double fb = rlb + barrier_sum(cur.lambda) / params.t_b;

    OptTrace trace;
    double eta_start = 1.0;
    std::size_t iter = 0;
    for (; iter < params.max_iters; ++iter)
    {
        const arma::vec g =
            grad_rlb_lambda(h, cur, a, cfg) + grad_barrier_lambda(cur.lambda, params.t_b);
        const arma::vec dir = project_tangent(g);
        const double dn = arma::norm(dir);
        if (dn == 0.0)
            break;
        const double dd = arma::dot(g, dir);

        std::vector<std::pair<double, double>> rlb_at; // (eta, rlb) of feasible trials
        const auto objective = [&](double eta) -> std::optional<double> {
            const arma::vec trial = cur.lambda + eta * dir;
            if (!(trial.min() > 0.0))
                return std::nullopt;
            const auto r = try_rlb(h, PowerAllocation{trial}, a, cfg);
            if (!r)
                return std::nullopt;
            rlb_at.emplace_back(eta, *r);
            return *r + barrier_sum(trial) / params.t_b;
        };
        const LineSearchOutcome ls =
            armijo_search(objective, fb, dd, eta_start, params.alpha, params.beta);
        if (!ls.accepted)
            break; // step length has collapsed; treat as converged
        if (ls.eta * dn <= params.eps_halt * arma::norm(cur.lambda))
            break; // halting rule fires before the update is applied

        cur.lambda += ls.eta * dir;
        fb = ls.objective;
        for (const auto &[eta, value] : rlb_at)
            if (eta == ls.eta)
                rlb = value;
        eta_start = ls.eta;
        trace.records.push_back(
            {trace.records.size(), OptPhase::digital, rlb, rlb, fb, ls.eta, dn, 0.0});
    }
    trace.max_iters_hit = (iter == params.max_iters);

    // remove roundoff drift from the equality constraint
    cur.lambda *= static_cast<double>(cfg.m * cfg.n_s) / arma::accu(cur.lambda);
    return {cur, trace};
}

namespace {

struct AnalogRun {
    AnalogVector relaxed;
    OptTrace trace;
};

AnalogRun run_analog_ascent(const arma::cx_mat &h, const PowerAllocation &lambda,
                            const AnalogVector &a0, const SystemConfig &cfg,
                            const AnalogOptParams &params, double entry_margin)
{
    params.validate();
    lambda.validate(cfg);
    if (a0.a.n_elem != cfg.n_t)
        throw DimensionMismatch("optimize_analog: a0 must have n_t entries");

    const double radius = 1.0 / std::sqrt(static_cast<double>(cfg.n_k));
    AnalogVector cur{a0.a, AnalogMode::relaxed};

    // Inputs on or outside the lp ball (any unit-modulus vector is) are pulled
    // strictly inside before the barrier can be evaluated. The margin matters:
    // a near-boundary start caps every step at the tiny wall-limited length
    // eta ~ (radius - ||a||_p) / ||grad||, so a fresh start needs room for its
    // phase alignment while a re-entry from a converged round should stay put.
    {
        const double np = lp_norm(cur.a, params.p0);
        if (np >= radius * (1.0 - entry_margin))
            cur.a *= radius * (1.0 - entry_margin) / np;
    }

    OptTrace trace;
    double rlb = detail::rlb_value_bits(h, lambda, cur, cfg);
    double p = params.p0;
    double gb = rlb + std::log(radius - lp_norm(cur.a, p)) / params.t_b;

    std::size_t total_iters = 0;
    bool ran_out = false;
    double eta_start = 1.0;
    while (true)
    {
        // inner ascent at the current p
        while (true)
        {
            if (total_iters >= params.max_iters)
            {
                ran_out = true;
                break;
            }
            ++total_iters;
            const arma::cx_vec g_rlb = grad_rlb_a(h, lambda, cur, cfg);
            if (arma::norm(g_rlb) == 0.0)
                break; // no signal to optimize; barrier-only motion is pointless
            const arma::cx_vec g =
                g_rlb + grad_barrier_a(cur.a, p, params.t_b, cfg.n_k);
            const double dn = arma::norm(g);
            if (dn == 0.0)
                break;
            const double dd = 2.0 * dn * dn; // 2 Re(g^H g)

            std::vector<std::pair<double, double>> rlb_at;
            const auto objective = [&](double eta) -> std::optional<double> {
                const arma::cx_vec trial = cur.a + eta * g;
                const double np = lp_norm(trial, p);
                if (!(np < radius))
                    return std::nullopt;
                const auto r =
                    try_rlb(h, lambda, AnalogVector{trial, AnalogMode::relaxed}, cfg);
                if (!r)
                    return std::nullopt;
                rlb_at.emplace_back(eta, *r);
                return *r + std::log(radius - np) / params.t_b;
            };
            const LineSearchOutcome ls =
                armijo_search(objective, gb, dd, eta_start, params.alpha, params.beta);
            if (!ls.accepted)
                break;
            if (ls.eta * dn <= params.eps_halt * arma::norm(cur.a))
                break;

            cur.a += ls.eta * g;
            gb = ls.objective;
            for (const auto &[eta, value] : rlb_at)
                if (eta == ls.eta)
                    rlb = value;
            eta_start = ls.eta;
            const AnalogVector proj = cur.projected_to_phases(cfg);
            const double rlb_proj = detail::rlb_value_bits(h, lambda, proj, cfg);
            trace.records.push_back({trace.records.size(), OptPhase::analog, rlb_proj,
                                     rlb, gb, ls.eta, dn, p});
        }
        if (ran_out || p >= params.p_max)
            break;
        p += params.delta_p;
        // ||a||_p is nonincreasing in p, so the iterate stays feasible; the
        // barrier value must be refreshed for the new exponent.
        gb = rlb + std::log(radius - lp_norm(cur.a, p)) / params.t_b;
    }
    trace.max_iters_hit = ran_out;
    return {cur, std::move(trace)};
}

} // namespace

std::pair<AnalogVector, OptTrace> optimize_analog(const arma::cx_mat &h,
                                                  const PowerAllocation &lambda,
                                                  const AnalogVector &a0,
                                                  const SystemConfig &cfg,
                                                  const AnalogOptParams &params)
{
    AnalogRun run = run_analog_ascent(h, lambda, a0, cfg, params, kAnalogEntryMargin);
    return {run.relaxed.projected_to_phases(cfg), std::move(run.trace)};
}

HybridResult optimize_hybrid(const arma::cx_mat &h, const PowerAllocation &lambda0,
                             const AnalogVector &a0, const SystemConfig &cfg,
                             const DigitalOptParams &dparams,
                             const AnalogOptParams &aparams, std::size_t max_outer,
                             double eps_outer)
{
    HybridResult res;
    res.lambda = lambda0;

    // The relaxed analog iterate is the alternation state; the phase
    // projection is applied once for the returned precoder (and to evaluate
    // the convergence metric), not between phases.
    AnalogVector relaxed = a0;
    double r_prev =
        detail::rlb_value_bits(h, res.lambda, relaxed.projected_to_phases(cfg), cfg);
    for (std::size_t outer = 0; outer < max_outer; ++outer)
    {
        auto [lam, tr_d] = optimize_digital(h, relaxed, res.lambda, cfg, dparams);
        res.lambda = std::move(lam);
        res.trace.append(tr_d);
        ++res.outer_phases;

        AnalogRun run = run_analog_ascent(h, res.lambda, relaxed, cfg, aparams,
                                          kAnalogEntryMargin);
        relaxed = std::move(run.relaxed);
        res.trace.append(run.trace);
        ++res.outer_phases;

        const double r_now =
            detail::rlb_value_bits(h, res.lambda, relaxed.projected_to_phases(cfg), cfg);
        if (std::abs(r_now - r_prev) <= eps_outer * std::max(std::abs(r_prev), 1.0))
        {
            res.a = relaxed.projected_to_phases(cfg);
            res.rlb_projected = r_now;
            res.converged = true;
            return res;
        }
        r_prev = r_now;
    }
    res.a = relaxed.projected_to_phases(cfg);
    res.rlb_projected = r_prev;
    res.converged = false;
    return res;
}

double finite_diff_check(const std::function<double(const arma::vec &)> &cost,
                         const std::function<arma::vec(const arma::vec &)> &grad,
                         const arma::vec &x, double h)
{
    const arma::vec g = grad(x);
    double worst = 0.0;
    arma::vec pt = x;
    for (arma::uword i = 0; i < x.n_elem; ++i)
    {
        pt(i) = x(i) + h;
        const double up = cost(pt);
        pt(i) = x(i) - h;
        const double dn = cost(pt);
        pt(i) = x(i);
        const double num = (up - dn) / (2.0 * h);
        worst = std::max(worst, std::abs(g(i) - num) / std::max(std::abs(num), 1e-12));
    }
    return worst;
}

double finite_diff_check(const std::function<double(const arma::cx_vec &)> &cost,
                         const std::function<arma::cx_vec(const arma::cx_vec &)> &grad,
                         const arma::cx_vec &x, double h)
{
    const arma::cx_vec g = grad(x);
    double worst = 0.0;
    arma::cx_vec pt = x;
    for (arma::uword i = 0; i < x.n_elem; ++i)
    {
        // real coordinate
        pt(i) = x(i) + cx_double(h, 0.0);
        double up = cost(pt);
        pt(i) = x(i) - cx_double(h, 0.0);
        double dn = cost(pt);
        double num = (up - dn) / (2.0 * h);
        worst = std::max(worst,
                         std::abs(2.0 * g(i).real() - num) / std::max(std::abs(num), 1e-12));
        // imaginary coordinate
        pt(i) = x(i) + cx_double(0.0, h);
        up = cost(pt);
        pt(i) = x(i) - cx_double(0.0, h);
        dn = cost(pt);
        pt(i) = x(i);
        num = (up - dn) / (2.0 * h);
        worst = std::max(worst,
                         std::abs(2.0 * g(i).imag() - num) / std::max(std::abs(num), 1e-12));
    }
    return worst;
}

GradientSuiteResult run_gradient_suite(std::size_t n_instances, std::uint64_t seed)
{
    // dimension tuples (n_t, n_r, n_k, n_m, n_rf) with M capped at 4
    constexpr arma::uword dims[][5] = {
        {8, 8, 2, 4, 2}, {8, 4, 2, 4, 2}, {4, 2, 1, 4, 2},
        {4, 4, 1, 4, 1}, {8, 8, 4, 2, 2}, {6, 4, 3, 2, 2},
    };
    constexpr std::size_t n_dims = sizeof(dims) / sizeof(dims[0]);

    GradientSuiteResult res;
    for (std::size_t k = 0; k < n_instances; ++k)
    {
        Rng rng = Rng::substream(seed, {0x47524144ULL, k});
        const auto &d = dims[k % n_dims];
        const double snr_db = rng.uniform(-5.0, 10.0);
        const SystemConfig cfg =
            derive_config(d[0], d[1], d[2], d[3], d[4], d[4], 1.0, 1.0).with_snr_db(snr_db);

        arma::cx_mat h(cfg.n_r, cfg.n_t);
        for (auto &v : h)
            v = rng.cnormal();
        const PowerAllocation lambda = PowerAllocation::random(cfg, rng);
        AnalogVector a = AnalogVector::random_phases(cfg, rng);
        a.a *= 0.8;
        a.mode = AnalogMode::relaxed;

        const auto cost_l = [&](const arma::vec &x) {
            return detail::rlb_value_bits(h, PowerAllocation{x}, a, cfg);
        };
        const auto grad_l = [&](const arma::vec &x) {
            return grad_rlb_lambda(h, PowerAllocation{x}, a, cfg);
        };
        res.rlb_lambda =
            std::max(res.rlb_lambda, finite_diff_check(cost_l, grad_l, lambda.lambda, 1e-6));

        const auto cost_a = [&](const arma::cx_vec &x) {
            return detail::rlb_value_bits(h, lambda, AnalogVector{x, AnalogMode::relaxed}, cfg);
        };
        const auto grad_a = [&](const arma::cx_vec &x) {
            return grad_rlb_a(h, lambda, AnalogVector{x, AnalogMode::relaxed}, cfg);
        };
        res.rlb_a = std::max(res.rlb_a, finite_diff_check(cost_a, grad_a, a.a, 1e-6));

        const double t_b = 64.0;
        const auto cost_bl = [&](const arma::vec &x) {
            double s = 0.0;
            for (const double v : x)
                s += std::log(v);
            return s / t_b;
        };
        const auto grad_bl = [&](const arma::vec &x) { return grad_barrier_lambda(x, t_b); };
        res.barrier_lambda = std::max(
            res.barrier_lambda, finite_diff_check(cost_bl, grad_bl, lambda.lambda, 1e-6));

        // near-uniform moduli keep every coordinate's derivative resolvable
        // by central differences even at large p
        const double p = (k % 3 == 0) ? 2.0 : (k % 3 == 1 ? 32.0 : 64.0);
        const double radius = 1.0 / std::sqrt(static_cast<double>(cfg.n_k));
        arma::cx_vec ab(cfg.n_t);
        for (auto &v : ab)
            v = std::polar(0.95 + 0.05 * rng.uniform(),
                           rng.uniform(-arma::datum::pi, arma::datum::pi));
        ab *= 0.8 * radius / lp_norm(ab, p);
        const auto cost_ba = [&](const arma::cx_vec &x) {
            return std::log(radius - lp_norm(x, p)) / t_b;
        };
        const auto grad_ba = [&](const arma::cx_vec &x) {
            return grad_barrier_a(x, p, t_b, cfg.n_k);
        };
        res.barrier_a =
            std::max(res.barrier_a, finite_diff_check(cost_ba, grad_ba, ab, 1e-6));
    }
    return res;
}

} // namespace gensm
