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
#include <vector>

#include "gensm/linalg.hpp"
#include "gensm/rng.hpp"

using namespace gensm;

namespace {

arma::cx_mat random_hpd(arma::uword n, Rng &rng, double ridge = 1.0)
{
    arma::cx_mat a(n, n);
    for (arma::uword j = 0; j < n; ++j)
        for (arma::uword i = 0; i < n; ++i)
            a(i, j) = rng.cnormal();
    arma::cx_mat s = a * a.t();
    s.diag() += ridge;
    symmetrize_inplace(s);
    return s;
}

} // namespace

TEST_CASE("cholesky factor reconstructs the matrix")
{
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial)
    {
        const arma::uword n = 1 + rng.uniform_index(8);
        const arma::cx_mat s = random_hpd(n, rng);
        arma::cx_mat l = s;
        REQUIRE(cholesky_lower_inplace(l));
        CHECK(arma::norm(arma::cx_mat(l * l.t() - s), "fro") <
              1e-11 * arma::norm(s, "fro"));
    }
}

TEST_CASE("cholesky rejects an indefinite matrix")
{
    arma::cx_mat s(2, 2, arma::fill::zeros);
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    CHECK_FALSE(cholesky_lower_inplace(s));
}

TEST_CASE("log-determinant matches the LAPACK route")
{
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial)
    {
        const arma::uword n = 2 + rng.uniform_index(7);
        const arma::cx_mat s = random_hpd(n, rng);
        cx_double ld_ref;
        double sign = 0.0;
        REQUIRE(arma::log_det(ld_ref, sign, s));
        CHECK(hermitian_logdet(s) == doctest::Approx(ld_ref.real()).epsilon(1e-11));
    }
}

TEST_CASE("hermitian_logdet throws on a non-PD input")
{
    arma::cx_mat s(3, 3, arma::fill::zeros);
    CHECK_THROWS_AS(hermitian_logdet(s), NumericalFailure);
}

TEST_CASE("forward and backward substitution solve the factored system")
{
    Rng rng(3);
    const arma::cx_mat s = random_hpd(6, rng);
    arma::cx_mat l = s;
    REQUIRE(cholesky_lower_inplace(l));
    arma::cx_vec b(6);
    for (auto &v : b)
        v = rng.cnormal();

    arma::cx_vec x = b;
    forward_subst_inplace(l, x);
    backward_subst_inplace(l, x); // now x = S^{-1} b
    CHECK(arma::norm(arma::cx_vec(s * x - b)) < 1e-10 * arma::norm(b));

    const double q = quadratic_form_from_factor(l, b);
    const double q_ref = std::real(arma::cdot(b, arma::cx_vec(arma::solve(s, b))));
    CHECK(q == doctest::Approx(q_ref).epsilon(1e-10));
}

TEST_CASE("log_sum_exp survives extreme magnitudes")
{
    const std::vector<double> big = {-70000.0, -70001.0, -70050.0};
    const double r = log_sum_exp(big);
    CHECK(std::isfinite(r));
    CHECK(r == doctest::Approx(-70000.0 + std::log(1.0 + std::exp(-1.0) + std::exp(-50.0)))
                   .epsilon(1e-12));

    const std::vector<double> huge = {90000.0, 89999.0};
    CHECK(std::isfinite(log_sum_exp(huge)));
    CHECK(log_sum_exp(std::vector<double>{}) ==
          -std::numeric_limits<double>::infinity());
}

TEST_CASE("lp_norm agrees with the naive form at small p and never overflows")
{
    Rng rng(4);
    arma::cx_vec a(8);
    for (auto &v : a)
        v = rng.cnormal();
    CHECK(lp_norm(a, 2.0) == doctest::Approx(arma::norm(a, 2)).epsilon(1e-12));

    // enormous exponent: limit is the max modulus
    double maxmod = 0.0;
    for (const auto &v : a)
        maxmod = std::max(maxmod, std::abs(v));
    const double big = lp_norm(a, 4000.0);
    CHECK(std::isfinite(big));
    CHECK(big == doctest::Approx(maxmod).epsilon(1e-2));
    CHECK(lp_norm(arma::cx_vec(5, arma::fill::zeros), 32.0) == 0.0);
}

TEST_CASE("lp_norm is nonincreasing in p")
{
    Rng rng(5);
    arma::cx_vec a(6);
    for (auto &v : a)
        v = rng.cnormal();
    double prev = lp_norm(a, 2.0);
    for (double p = 12.0; p <= 92.0; p += 10.0)
    {
        const double cur = lp_norm(a, p);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}
