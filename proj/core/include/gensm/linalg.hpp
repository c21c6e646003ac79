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
// Small dense Hermitian kernels used on the hot path. The covariance
// matrices here are N_R x N_R with N_R ~ 8, where LAPACK call overhead
// dominates; everything determinant-like flows through these factorized
// log-domain routines.

#ifndef GENSM_LINALG_HPP
#define GENSM_LINALG_HPP

#define ARMA_DONT_USE_WRAPPER
#include <armadillo>

#include <cmath>
#include <complex>
#include <span>

#include "gensm/errors.hpp"

namespace gensm {

using cx_double = std::complex<double>;

/// In-place lower Cholesky factorization of a Hermitian matrix.
/// Only the lower triangle of `a` is referenced; on success the lower
/// triangle holds L with A = L L^H. Returns false if a pivot is not
/// strictly positive (matrix not positive definite).
inline bool cholesky_lower_inplace(arma::cx_mat &a)
{
    const arma::uword n = a.n_rows;
    if (a.n_cols != n)
        throw DimensionMismatch("cholesky_lower_inplace: matrix must be square");
    for (arma::uword j = 0; j < n; ++j)
    {
        double d = a(j, j).real();
        for (arma::uword k = 0; k < j; ++k)
            d -= std::norm(a(j, k));
        if (!(d > 0.0) || !std::isfinite(d))
            return false;
        const double ljj = std::sqrt(d);
        a(j, j) = ljj;
        const double inv = 1.0 / ljj;
        for (arma::uword i = j + 1; i < n; ++i)
        {
            cx_double s = a(i, j);
            for (arma::uword k = 0; k < j; ++k)
                s -= a(i, k) * std::conj(a(j, k));
            a(i, j) = s * inv;
        }
    }
    // Zero the strict upper triangle so the factor can be used as a plain matrix.
    for (arma::uword j = 1; j < n; ++j)
        for (arma::uword i = 0; i < j; ++i)
            a(i, j) = 0.0;
    return true;
}

/// ln|A| from the lower Cholesky factor of A.
inline double logdet_from_factor(const arma::cx_mat &l)
{
    double s = 0.0;
    for (arma::uword i = 0; i < l.n_rows; ++i)
        s += std::log(l(i, i).real());
    return 2.0 * s;
}

/// ln|A| of a Hermitian positive-definite matrix (copies, factorizes).
inline double hermitian_logdet(arma::cx_mat a)
{
    if (!cholesky_lower_inplace(a))
        throw NumericalFailure("hermitian_logdet: matrix is not positive definite");
    return logdet_from_factor(a);
}

/// Solve L x = b in place for lower-triangular L.
inline void forward_subst_inplace(const arma::cx_mat &l, arma::cx_vec &b)
{
    const arma::uword n = l.n_rows;
    if (b.n_elem != n)
        throw DimensionMismatch("forward_subst_inplace: size mismatch");
    for (arma::uword i = 0; i < n; ++i)
    {
        cx_double s = b(i);
        for (arma::uword k = 0; k < i; ++k)
            s -= l(i, k) * b(k);
        b(i) = s / l(i, i);
    }
}

/// Solve L X = B column-wise for lower-triangular L (B overwritten).
inline void forward_subst_inplace(const arma::cx_mat &l, arma::cx_mat &b)
{
    const arma::uword n = l.n_rows;
    if (b.n_rows != n)
        throw DimensionMismatch("forward_subst_inplace: size mismatch");
    for (arma::uword c = 0; c < b.n_cols; ++c)
        for (arma::uword i = 0; i < n; ++i)
        {
            cx_double s = b(i, c);
            for (arma::uword k = 0; k < i; ++k)
                s -= l(i, k) * b(k, c);
            b(i, c) = s / l(i, i);
        }
}

/// Solve L^H x = b in place (L lower-triangular, back substitution).
inline void backward_subst_inplace(const arma::cx_mat &l, arma::cx_vec &b)
{
    const arma::uword n = l.n_rows;
    if (b.n_elem != n)
        throw DimensionMismatch("backward_subst_inplace: size mismatch");
    for (arma::uword ii = n; ii-- > 0;)
    {
        cx_double s = b(ii);
        for (arma::uword k = ii + 1; k < n; ++k)
            s -= std::conj(l(k, ii)) * b(k);
        b(ii) = s / std::conj(l(ii, ii));
    }
}

/// y^H A^{-1} y given the lower Cholesky factor of A.
inline double quadratic_form_from_factor(const arma::cx_mat &l, const arma::cx_vec &y)
{
    arma::cx_vec w = y;
    forward_subst_inplace(l, w);
    double q = 0.0;
    for (arma::uword i = 0; i < w.n_elem; ++i)
        q += std::norm(w(i));
    return q;
}

/// Max-shifted ln(sum(exp(v))). Returns -inf for an empty span.
inline double log_sum_exp(std::span<const double> v)
{
    double m = -std::numeric_limits<double>::infinity();
    for (double x : v)
        if (x > m)
            m = x;
    if (!std::isfinite(m))
        return m;
    double s = 0.0;
    for (double x : v)
        s += std::exp(x - m);
    return m + std::log(s);
}

/// (A + A^H) / 2, stopping Hermitian drift before factorization.
inline void symmetrize_inplace(arma::cx_mat &a)
{
    const arma::uword n = a.n_rows;
    for (arma::uword j = 0; j < n; ++j)
    {
        a(j, j) = cx_double(a(j, j).real(), 0.0);
        for (arma::uword i = j + 1; i < n; ++i)
        {
            const cx_double m = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = m;
            a(j, i) = std::conj(m);
        }
    }
}

/// lp norm of a complex vector, max-normalized so large p does not overflow.
inline double lp_norm(const arma::cx_vec &a, double p)
{
    double m = 0.0;
    for (arma::uword i = 0; i < a.n_elem; ++i)
        m = std::max(m, std::abs(a(i)));
    if (m == 0.0)
        return 0.0;
    double s = 0.0;
    for (arma::uword i = 0; i < a.n_elem; ++i)
        s += std::pow(std::abs(a(i)) / m, p);
    return m * std::pow(s, 1.0 / p);
}

} // namespace gensm

#endif
