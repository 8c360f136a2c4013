// SPDX-License-Identifier: Apache-2.0
//
// scf3d: spatial correlation and mutual information of 3D MIMO channels
// Copyright (C) 2026 The scf3d authors
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

#include "oracles.hpp"
#include "scf3d/rng.hpp"
#include "scf3d/sampling.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

using namespace scf3d;
using Catch::Matchers::WithinAbs;
using oracle::deg;
using oracle::pi;

namespace
{
    // Kolmogorov-Smirnov distance between samples and a CDF tabulated on a fine grid.
    double ks_distance(std::vector<double> xs, const std::function<double(double)> &pdf, double lo, double hi)
    {
        std::sort(xs.begin(), xs.end());
        const int grid = 20000;
        std::vector<double> cdf(grid + 1, 0.0);
        const double h = (hi - lo) / grid;
        for (int i = 1; i <= grid; ++i)
        {
            const double a = lo + (i - 1) * h;
            cdf[i] = cdf[i - 1] + h / 6.0 * (pdf(a) + 4.0 * pdf(a + 0.5 * h) + pdf(a + h));
        }
        double worst = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k)
        {
            const double t = std::clamp((xs[k] - lo) / h, 0.0, double(grid));
            const int i = std::min(int(t), grid - 1);
            const double f = (cdf[i] + (t - i) * (cdf[i + 1] - cdf[i])) / cdf[grid];
            worst = std::max({worst, std::abs(f - double(k) / xs.size()), std::abs(f - double(k + 1) / xs.size())});
        }
        return worst;
    }

    // 99.9% critical value of the KS statistic.
    double ks_critical(std::size_t n) { return 1.95 / std::sqrt(double(n)); }
}

TEST_CASE("Philox4x32-10 known-answer vectors", "[rng]")
{
    using A = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are reproducible and distinct", "[rng]")
{
    RandomStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
    for (int i = 0; i < 100; ++i)
    {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        CHECK(x != c.next_u64());
        CHECK(x != d.next_u64());
    }
}

TEST_CASE("uniform and normal variates have the expected moments", "[rng]")
{
    RandomStream r(1, 0);
    const int n = 200000;
    double su = 0, su2 = 0, sn = 0, sn2 = 0, sc = 0, sr = 0, si = 0;
    std::complex<double> sz2 = 0;
    double lo = 1, hi = 0;
    for (int i = 0; i < n; ++i)
    {
        const double u = r.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        su += u;
        su2 += u * u;
        const double g = r.normal();
        sn += g;
        sn2 += g * g;
        const auto z = r.complex_normal();
        sc += std::norm(z);
        sr += z.real() * z.real();
        si += z.imag() * z.imag();
        sz2 += z * z;
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    CHECK_THAT(su / n, WithinAbs(0.5, 0.003));
    CHECK_THAT(su2 / n - 0.25, WithinAbs(1.0 / 12.0, 0.002));
    CHECK_THAT(sn / n, WithinAbs(0.0, 0.01));
    CHECK_THAT(sn2 / n, WithinAbs(1.0, 0.01));
    CHECK_THAT(sc / n, WithinAbs(1.0, 0.01));
    CHECK_THAT(sr / n, WithinAbs(0.5, 0.01));
    CHECK_THAT(si / n, WithinAbs(0.5, 0.01));
    CHECK_THAT(std::abs(sz2) / n, WithinAbs(0.0, 0.01));
}

TEST_CASE("von Mises sampler follows the density", "[sampling]")
{
    for (auto [mu, kappa] : {std::pair{2 * pi / 3, 5.0}, {0.0, 0.5}, {-3.0, 40.0}, {1.0, 0.0}})
    {
        const AngleSampler s(AngularDensity::von_mises(mu, kappa));
        std::vector<double> xs(20000);
        for (std::size_t i = 0; i < xs.size(); ++i)
        {
            RandomStream r(5, i);
            auto &x = xs[i];
            x = s(r);
            REQUIRE(x > -pi - 1e-12);
            REQUIRE(x <= pi + 1e-12);
        }
        INFO("mu = " << mu << ", kappa = " << kappa);
        CHECK(ks_distance(xs, [&](double p) { return oracle::von_mises(p, mu, kappa); }, -pi, pi) < ks_critical(xs.size()));
    }
}

TEST_CASE("Laplacian elevation sampler follows the density including sin(theta)", "[sampling]")
{
    for (auto [theta0, sigma] : {std::pair{deg(90), deg(7)}, {deg(130), deg(25)}, {deg(97), deg(3)}, {deg(20), deg(40)}})
    {
        const AngleSampler s(AngularDensity::laplacian_elevation(theta0, sigma));
        RandomStream r(9, 2);
        std::vector<double> xs(20000);
        for (auto &x : xs)
        {
            x = s(r);
            REQUIRE(x >= 0.0);
            REQUIRE(x <= pi);
        }
        INFO("theta0 = " << theta0 << ", sigma = " << sigma);
        CHECK(ks_distance(xs, [&](double t) { return oracle::laplacian(t, theta0, sigma); }, 0.0, pi) <
              ks_critical(xs.size()));
    }
}

TEST_CASE("uniform, point-mass and tabulated samplers", "[sampling]")
{
    RandomStream r(3, 0);
    const AngleSampler u(AngularDensity::uniform(Axis::azimuth, -1.0, 2.0));
    std::vector<double> xs(10000);
    for (auto &x : xs)
        x = u(r);
    CHECK(ks_distance(xs, [](double) { return 1.0; }, -1.0, 2.0) < ks_critical(xs.size()));

    const AngleSampler pm(AngularDensity::uniform(Axis::elevation, 1.2, 1.2));
    CHECK(pm(r) == 1.2);

    std::vector<double> a, v;
    for (int i = 0; i <= 100; ++i)
    {
        a.push_back(0.5 + 2.0 * i / 100.0);
        v.push_back(1.0 + std::sin(a.back()));
    }
    const AngleSampler t(AngularDensity::tabulated(Axis::elevation, a, v));
    for (auto &x : xs)
        x = t(r);
    CHECK(ks_distance(xs, [](double x) { return 1.0 + std::sin(x); }, 0.5, 2.5) < ks_critical(xs.size()));
}

TEST_CASE("sampler output depends only on the stream", "[sampling][property]")
{
    const AngleSampler s(AngularDensity::laplacian_elevation(deg(95), deg(5)));
    RandomStream a(11, 7), b(11, 7);
    for (int i = 0; i < 1000; ++i)
        CHECK(s(a) == s(b));
}
