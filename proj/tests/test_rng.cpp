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

#include "gensm/rng.hpp"

using gensm::Rng;

TEST_CASE("same seed reproduces the same stream")
{
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i)
        CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("substreams depend on the full path")
{
    Rng a = Rng::substream(7, {1, 2});
    Rng b = Rng::substream(7, {1, 3});
    Rng c = Rng::substream(7, {2, 2});
    Rng a2 = Rng::substream(7, {1, 2});
    CHECK(a.next_u64() == a2.next_u64());
    CHECK(a.next_u64() != b.next_u64());
    CHECK(b.next_u64() != c.next_u64());
}

TEST_CASE("uniform stays in [0, 1) and is roughly flat")
{
    Rng rng(3);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
    {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) < 0.01);
}

TEST_CASE("uniform_index covers the range")
{
    Rng rng(11);
    int counts[5] = {0, 0, 0, 0, 0};
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        ++counts[rng.uniform_index(5)];
    for (int c : counts)
        CHECK(std::abs(c - n / 5) < n / 50);
}

TEST_CASE("normal moments")
{
    Rng rng(5);
    double sum = 0.0, sumsq = 0.0;
    const int n = 500000;
    for (int i = 0; i < n; ++i)
    {
        const double z = rng.normal();
        sum += z;
        sumsq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sumsq / n - 1.0) < 0.02);
}

TEST_CASE("complex normal has unit total variance")
{
    Rng rng(6);
    double pw = 0.0, re = 0.0, im = 0.0;
    const int n = 500000;
    for (int i = 0; i < n; ++i)
    {
        const auto z = rng.cnormal();
        pw += std::norm(z);
        re += z.real();
        im += z.imag();
    }
    CHECK(std::abs(pw / n - 1.0) < 0.02);
    CHECK(std::abs(re / n) < 0.01);
    CHECK(std::abs(im / n) < 0.01);
}

TEST_CASE("laplacian moments match mean and scale")
{
    Rng rng(8);
    const double mean = 3.0, scale = 2.0;
    double sum = 0.0, sumsq = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i)
    {
        const double x = rng.laplacian(mean, scale);
        sum += x;
        sumsq += (x - mean) * (x - mean);
    }
    const double sd = std::sqrt(sumsq / n);
    CHECK(std::abs(sum / n - mean) < 0.02);
    CHECK(std::abs(sd - scale * std::sqrt(2.0)) < 0.03); // std of Laplace(b) is b*sqrt(2)
}
