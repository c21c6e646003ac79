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

#include "gensm/system.hpp"

#include <cmath>
#include <string>

#include "gensm/linalg.hpp"

namespace gensm {

std::uint64_t binomial(arma::uword n, arma::uword k)
{
    if (k > n)
        return 0;
    if (k > n - k)
        k = n - k;
    std::uint64_t c = 1;
    for (arma::uword i = 0; i < k; ++i)
    {
        if (c > UINT64_MAX / (n - i))
            throw InvalidDimensions("binomial: coefficient overflows 64 bits");
        c = c * (n - i) / (i + 1);
    }
    return c;
}

namespace {

// First `count` k-subsets of {1..n} in lexicographic order.
std::vector<arma::uvec> lexicographic_subsets(arma::uword n, arma::uword k,
                                              std::uint64_t count)
{
    std::vector<arma::uvec> out;
    out.reserve(count);
    arma::uvec u(k);
    for (arma::uword i = 0; i < k; ++i)
        u(i) = i + 1;
    while (out.size() < count)
    {
        out.push_back(u);
        // advance to the next subset
        arma::sword i = static_cast<arma::sword>(k) - 1;
        while (i >= 0 && u(i) == n - k + 1 + static_cast<arma::uword>(i))
            --i;
        if (i < 0)
            break;
        ++u(i);
        for (arma::uword j = static_cast<arma::uword>(i) + 1; j < k; ++j)
            u(j) = u(j - 1) + 1;
    }
    return out;
}

} // namespace

SystemConfig derive_config(arma::uword n_t, arma::uword n_r, arma::uword n_k,
                           arma::uword n_m, arma::uword n_rf, arma::uword n_s,
                           double rho, double sigma_n_sq)
{
    if (n_t < 1 || n_r < 1 || n_k < 1 || n_m < 1 || n_rf < 1 || n_s < 1)
        throw InvalidDimensions("derive_config: all counts must be >= 1");
    if (n_t != n_k * n_m)
        throw InvalidDimensions("derive_config: n_t must equal n_k * n_m (got n_t=" +
                                std::to_string(n_t) + ", n_k*n_m=" +
                                std::to_string(n_k * n_m) + ")");
    if (n_m < n_rf)
        throw InvalidDimensions("derive_config: n_m must be >= n_rf");
    if (n_s > n_rf)
        throw InvalidDimensions("derive_config: n_s must be <= n_rf");
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw InvalidDimensions("derive_config: rho must be finite and >= 0");
    if (!(sigma_n_sq > 0.0) || !std::isfinite(sigma_n_sq))
        throw InvalidDimensions("derive_config: sigma_n_sq must be finite and > 0");

    SystemConfig cfg;
    cfg.n_t = n_t;
    cfg.n_r = n_r;
    cfg.n_k = n_k;
    cfg.n_m = n_m;
    cfg.n_rf = n_rf;
    cfg.n_s = n_s;
    cfg.rho = rho;
    cfg.sigma_n_sq = sigma_n_sq;

    const std::uint64_t total = binomial(n_m, n_rf);
    std::uint64_t m = 1;
    while (m * 2 <= total)
        m *= 2;
    cfg.m = static_cast<arma::uword>(m);
    cfg.agc_table = lexicographic_subsets(n_m, n_rf, m);
    return cfg;
}

SystemConfig SystemConfig::with_snr_db(double snr_db) const
{
    SystemConfig out = *this;
    out.rho = sigma_n_sq * std::pow(10.0, snr_db / 10.0);
    return out;
}

arma::mat selection_matrix(const arma::uvec &u, arma::uword n_k, arma::uword n_m)
{
    const arma::uword n_rf = u.n_elem;
    if (n_rf == 0)
        throw InvalidIndices("selection_matrix: empty index vector");
    for (arma::uword r = 0; r < n_rf; ++r)
    {
        if (u(r) < 1 || u(r) > n_m)
            throw InvalidIndices("selection_matrix: index out of [1, n_m]");
        if (r > 0 && u(r) <= u(r - 1))
            throw InvalidIndices("selection_matrix: indices must be strictly increasing");
    }
    arma::mat c(n_k * n_m, n_rf, arma::fill::zeros);
    for (arma::uword r = 0; r < n_rf; ++r)
    {
        const arma::uword g = u(r) - 1;
        for (arma::uword k = 0; k < n_k; ++k)
            c(g * n_k + k, r) = 1.0;
    }
    return c;
}

PowerAllocation PowerAllocation::random(const SystemConfig &cfg, Rng &rng)
{
    arma::vec l(cfg.m * cfg.n_s);
    for (arma::uword i = 0; i < l.n_elem; ++i)
        l(i) = rng.uniform();
    l *= static_cast<double>(cfg.m * cfg.n_s) / arma::accu(l);
    return {l};
}

void PowerAllocation::validate(const SystemConfig &cfg) const
{
    if (lambda.n_elem != cfg.m * cfg.n_s)
        throw InvalidDimensions("PowerAllocation: length must be m * n_s");
    if (lambda.min() < 0.0)
        throw InvalidDimensions("PowerAllocation: entries must be nonnegative");
    const double total = static_cast<double>(cfg.m * cfg.n_s);
    if (std::abs(arma::accu(lambda) - total) > 1e-9 * total)
        throw InvalidDimensions("PowerAllocation: total power must equal m * n_s");
}

AnalogVector AnalogVector::random_phases(const SystemConfig &cfg, Rng &rng)
{
    arma::cx_vec a(cfg.n_t);
    const double r = 1.0 / std::sqrt(static_cast<double>(cfg.n_k));
    for (arma::uword i = 0; i < cfg.n_t; ++i)
    {
        const double th = rng.uniform(-arma::datum::pi, arma::datum::pi);
        a(i) = cx_double(r * std::cos(th), r * std::sin(th));
    }
    return {a, AnalogMode::projected};
}

AnalogVector AnalogVector::projected_to_phases(const SystemConfig &cfg) const
{
    arma::cx_vec out(a.n_elem);
    const double r = 1.0 / std::sqrt(static_cast<double>(cfg.n_k));
    for (arma::uword i = 0; i < a.n_elem; ++i)
    {
        const double th = std::arg(a(i));
        out(i) = cx_double(r * std::cos(th), r * std::sin(th));
    }
    return {out, AnalogMode::projected};
}

arma::cx_mat covariance(const arma::cx_mat &h, const AnalogVector &a,
                        const arma::mat &c_m, const arma::vec &lambda_m,
                        const SystemConfig &cfg)
{
    if (h.n_rows != cfg.n_r || h.n_cols != cfg.n_t)
        throw DimensionMismatch("covariance: H must be n_r x n_t");
    if (a.a.n_elem != cfg.n_t)
        throw DimensionMismatch("covariance: analog vector must have n_t entries");
    if (c_m.n_rows != cfg.n_t || c_m.n_cols != cfg.n_rf)
        throw DimensionMismatch("covariance: selection matrix must be n_t x n_rf");
    if (lambda_m.n_elem != cfg.n_s)
        throw DimensionMismatch("covariance: lambda block must have n_s entries");
    if (lambda_m.min() < 0.0)
        throw DimensionMismatch("covariance: lambda block must be nonnegative");

    const arma::cx_mat ha = h * arma::diagmat(a.a);
    const arma::cx_mat w = ha * arma::cx_mat(c_m.cols(0, cfg.n_s - 1),
                                             arma::mat(cfg.n_t, cfg.n_s, arma::fill::zeros));
    arma::cx_mat sigma(cfg.n_r, cfg.n_r, arma::fill::zeros);
    sigma.diag() += cfg.sigma_n_sq;
    sigma += (cfg.rho / static_cast<double>(cfg.n_s)) * w * arma::diagmat(lambda_m) * w.t();
    symmetrize_inplace(sigma);
    return sigma;
}

std::vector<arma::cx_mat> effective_channels(const arma::cx_mat &h,
                                             const AnalogVector &a,
                                             const SystemConfig &cfg)
{
    if (h.n_rows != cfg.n_r || h.n_cols != cfg.n_t)
        throw DimensionMismatch("effective_channels: H must be n_r x n_t");
    arma::cx_mat ha = h;
    for (arma::uword j = 0; j < cfg.n_t; ++j)
        ha.col(j) *= a.a(j);

    std::vector<arma::cx_mat> w(cfg.m);
    for (arma::uword mi = 0; mi < cfg.m; ++mi)
    {
        arma::cx_mat wm(cfg.n_r, cfg.n_s, arma::fill::zeros);
        for (arma::uword r = 0; r < cfg.n_s; ++r)
        {
            const arma::uword g = cfg.agc_table[mi](r) - 1;
            for (arma::uword k = 0; k < cfg.n_k; ++k)
                wm.col(r) += ha.col(g * cfg.n_k + k);
        }
        w[mi] = std::move(wm);
    }
    return w;
}

CovarianceSet covariance_set(const arma::cx_mat &h, const AnalogVector &a,
                             const PowerAllocation &lambda, const SystemConfig &cfg)
{
    const auto w = effective_channels(h, a, cfg);
    const double scale = cfg.rho / static_cast<double>(cfg.n_s);
    CovarianceSet set;
    set.sigmas.resize(cfg.m);
    for (arma::uword mi = 0; mi < cfg.m; ++mi)
    {
        const arma::vec lm = lambda.block(mi, cfg);
        arma::cx_mat sigma(cfg.n_r, cfg.n_r, arma::fill::zeros);
        sigma.diag() += cfg.sigma_n_sq;
        for (arma::uword s = 0; s < cfg.n_s; ++s)
        {
            const double c = scale * lm(s);
            if (c == 0.0)
                continue;
            const arma::cx_vec col = w[mi].col(s);
            for (arma::uword j = 0; j < cfg.n_r; ++j)
            {
                const cx_double cj = c * std::conj(col(j));
                for (arma::uword i = 0; i < cfg.n_r; ++i)
                    sigma(i, j) += col(i) * cj;
            }
        }
        symmetrize_inplace(sigma);
        set.sigmas[mi] = std::move(sigma);
    }
    return set;
}

arma::cx_vec sample_received(const arma::cx_mat &h, const AnalogVector &a,
                             const arma::mat &c_m, const arma::vec &lambda_m,
                             const SystemConfig &cfg, Rng &rng)
{
    if (lambda_m.n_elem != cfg.n_s)
        throw DimensionMismatch("sample_received: lambda block must have n_s entries");
    arma::cx_vec x(cfg.n_s);
    const double xs = 1.0 / std::sqrt(static_cast<double>(cfg.n_s));
    for (arma::uword s = 0; s < cfg.n_s; ++s)
        x(s) = xs * rng.cnormal();

    // D_m x with D_m = diag(sqrt(lambda_m))
    arma::cx_vec dx(cfg.n_s);
    for (arma::uword s = 0; s < cfg.n_s; ++s)
        dx(s) = std::sqrt(lambda_m(s)) * x(s);

    const arma::cx_mat cs(c_m.cols(0, cfg.n_s - 1),
                          arma::mat(cfg.n_t, cfg.n_s, arma::fill::zeros));
    arma::cx_vec t = arma::diagmat(a.a) * (cs * dx);
    arma::cx_vec y = std::sqrt(cfg.rho) * (h * t);
    const double ns = std::sqrt(cfg.sigma_n_sq);
    for (arma::uword i = 0; i < cfg.n_r; ++i)
        y(i) += ns * rng.cnormal();
    return y;
}

} // namespace gensm
