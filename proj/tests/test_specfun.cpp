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
#include "scf3d/specfun.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace scf3d;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("spherical Bessel matches std::sph_bessel", "[specfun]")
{
    for (double x : {1e-3, 0.3, 1.0, 2.5, 7.0, 15.0, 31.4, 60.0, 120.0})
        for (unsigned n = 0; n <= 80; ++n)
        {
            const double ref = std::sph_bessel(n, x);
            INFO("n = " << n << ", x = " << x);
            CHECK_THAT(spherical_bessel_j(int(n), x), WithinAbs(ref, 1e-13 * std::max(1.0, std::abs(ref))));
        }
}

TEST_CASE("spherical Bessel below the turning point follows the power series", "[specfun]")
{
    for (double x : {0.5, 4.0, 11.0, 20.0})
        for (int n = int(x) + 5; n <= 150; n += 7)
        {
            const double ref = oracle::sph_bessel_series(n, x);
            INFO("n = " << n << ", x = " << x);
            CHECK_THAT(spherical_bessel_j(n, x), WithinRel(ref, 1e-11) || WithinAbs(ref, 1e-300));
        }
}

TEST_CASE("all-order spherical Bessel agrees with single-order evaluation", "[specfun]")
{
    for (double x : {0.0, 0.7, 9.0, 44.0, 95.0})
    {
        const auto all = spherical_bessel_j_all(280, x);
        REQUIRE(all.size() == 281);
        for (int n = 0; n <= 280; n += 3)
            CHECK_THAT(all[n], WithinAbs(spherical_bessel_j(n, x), 1e-15));
    }
    CHECK(spherical_bessel_j(0, 0.0) == 1.0);
    CHECK(spherical_bessel_j(3, 0.0) == 0.0);
}

TEST_CASE("Legendre polynomials match std::legendre", "[specfun]")
{
    for (double x : {-1.0, -0.7, 0.0, 0.2, 0.99, 1.0})
        for (unsigned n = 0; n <= 60; ++n)
            CHECK_THAT(legendre_p(int(n), x), WithinAbs(std::legendre(n, x), 1e-13));
}

TEST_CASE("normalized associated Legendre matches std::assoc_legendre", "[specfun]")
{
    for (double x : {-0.9, -0.3, 0.0, 0.45, 0.8})
        for (unsigned n = 0; n <= 40; ++n)
            for (unsigned m = 0; m <= n; ++m)
            {
                const double norm = std::sqrt((n + 0.5) * std::exp(std::lgamma(n - m + 1.0) - std::lgamma(n + m + 1.0)));
                const double ref = norm * std::assoc_legendre(n, m, x);
                INFO("n = " << n << ", m = " << m << ", x = " << x);
                CHECK_THAT(assoc_legendre_pbar(int(n), int(m), x), WithinAbs(ref, 1e-12));
            }
    CHECK_THROWS_AS(assoc_legendre_pbar(3, 4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(assoc_legendre_pbar(3, 1, 1.5), std::invalid_argument);
}

TEST_CASE("trigonometric expansions reproduce the Legendre functions of cos x", "[specfun]")
{
    for (int n : {0, 1, 2, 7, 15, 40, 140})
        for (double x : {0.1, 0.9, 1.7, 2.9, 4.4})
        {
            INFO("n = " << n << ", x = " << x);
            CHECK_THAT(trig_expansion(TrigKind::even_legendre, n)(x), WithinAbs(legendre_p(2 * n, std::cos(x)), 1e-12));
            for (int m : {0, 1, n / 2, n})
            {
                if (m > n)
                    continue;
                std::vector<double> col(2 * n - 2 * m + 1);
                assoc_legendre_pbar_column(2 * m, 2 * n, std::cos(x), std::sin(x), col.data());
                CHECK_THAT(trig_expansion(TrigKind::even_associated, n, m)(x), WithinAbs(col.back(), 1e-11));
                if (m >= 1)
                {
                    std::vector<double> c2(2 * n - 2 * m + 1);
                    assoc_legendre_pbar_column(2 * m - 1, 2 * n - 1, std::cos(x), std::sin(x), c2.data());
                    CHECK_THAT(trig_expansion(TrigKind::odd_associated, n, m)(x), WithinAbs(c2.back(), 1e-11));
                }
            }
        }
}

TEST_CASE("even Legendre expansion coefficients follow the product rule", "[specfun]")
{
    // P_2n(cos x) = sum p_k p_{2n-k} cos((2n - 2k) x) with p_k = C(2k, k) / 4^k.
    auto p = [](int k) { return std::exp(std::lgamma(2.0 * k + 1.0) - 2.0 * std::lgamma(k + 1.0) - 2.0 * k * std::log(2.0)); };
    for (int n : {1, 3, 10, 50})
    {
        const auto &e = trig_expansion(TrigKind::even_legendre, n);
        CHECK_THAT(e.coefficients[0], WithinAbs(p(n) * p(n), 1e-14));
        for (int k = 1; k <= n; ++k)
            CHECK_THAT(e.coefficients[k], WithinAbs(2.0 * p(n - k) * p(n + k), 1e-12));
        CHECK_THAT(legendre_trig_p(n), WithinAbs(p(n), 1e-13));
    }
}

TEST_CASE("complex error function matches reference values", "[specfun]")
{
    struct Ref
    {
        double x, y, re, im;
    };
    // Reference values computed once at 30 significant digits.
    const Ref refs[] = {
        {0.5, 0.5, 0.64261291485482053, 0.45788139443519222},
        {1.5, -2.0, -0.10504928977401753, -0.69951168616312446},
        {-3.0, 0.7, -1.0000105155899484, -3.3723540554640896e-5},
        {0.1, 4.0, 896390.58842697168, 918683.22696144983},
        {5.0, 1.0, 1.0000000000029598, -2.8460183820855939e-12},
        {2.0, -6.5, 1825837220685158.1, -2896818528982144.5},
        {0.0, 1.0, 0.0, 1.6504257587975429},
    };
    for (const auto &r : refs)
    {
        const auto z = erf_complex({r.x, r.y});
        const double scale = std::max(1.0, std::abs(std::complex<double>(r.re, r.im)));
        INFO("z = " << r.x << " + " << r.y << "i");
        CHECK_THAT(z.real(), WithinAbs(r.re, 1e-13 * scale));
        CHECK_THAT(z.imag(), WithinAbs(r.im, 1e-13 * scale));
    }
    CHECK_THROWS_AS(erf_complex({40.0, 0.0}), std::range_error);
}

TEST_CASE("scaled complementary error function matches reference values", "[specfun]")
{
    struct Ref
    {
        double x, y, re, im;
    };
    const Ref refs[] = {
        {0.5, 0.5, 0.53315670791217491, -0.23048823138445841},
        {3.0, -2.0, 0.13075746966984857, 0.081112650477456653},
        {10.0, 25.0, 0.0077950931226014815, -0.019460817964174917},
        {0.0, 5.0, 1.3887943864964021e-11, -0.11524596183093659},
        {25.0, -1.0, 0.022513693583265217, 0.00089911486563682045},
        {1.0, 0.0, 0.427583576155807, 0.0},
    };
    for (const auto &r : refs)
    {
        const auto z = erfcx_complex({(long double)r.x, (long double)r.y});
        INFO("z = " << r.x << " + " << r.y << "i");
        CHECK_THAT(double(z.real()), WithinAbs(r.re, 1e-14));
        CHECK_THAT(double(z.imag()), WithinAbs(r.im, 1e-14));
    }
}

TEST_CASE("exp-erf difference agrees with direct evaluation where that is safe", "[specfun]")
{
    using cld = std::complex<long double>;
    for (auto [p, z1, z2] : {std::tuple{cld(0.3L, 0.1L), cld(0.4L, 0.2L), cld(1.1L, -0.3L)},
                             std::tuple{cld(-1.0L, 2.0L), cld(2.0L, 1.0L), cld(0.5L, 0.5L)},
                             std::tuple{cld(0.0L, 0.0L), cld(-1.5L, 0.3L), cld(-0.2L, -0.7L)}})
    {
        const std::complex<double> direct =
            std::exp(std::complex<double>(p)) * (erf_complex(std::complex<double>(z1)) - erf_complex(std::complex<double>(z2)));
        const cld v = exp_erf_difference(p, z1, z2);
        CHECK_THAT(double(v.real()), WithinAbs(direct.real(), 1e-13));
        CHECK_THAT(double(v.imag()), WithinAbs(direct.imag(), 1e-13));
    }
}

TEST_CASE("modified Bessel functions match std::cyl_bessel_i", "[specfun]")
{
    for (double x : {1e-6, 0.05, 0.8, 1.0, 3.0, 5.0, 20.0, 80.0, 300.0})
        for (int n = 0; n <= 60; n += 3)
        {
            const double ref = std::cyl_bessel_i(double(n), x);
            if (ref == 0.0 || !std::isfinite(ref) || ref < 1e-290)
                continue;
            INFO("n = " << n << ", x = " << x);
            CHECK_THAT(modified_bessel_i(n, x), WithinRel(ref, 1e-12));
            CHECK_THAT(modified_bessel_i_scaled(n, x), WithinRel(ref * std::exp(-x), 1e-12));
            CHECK_THAT(modified_bessel_i_ratio(n, x), WithinRel(ref / std::cyl_bessel_i(0.0, x), 1e-12));
        }
    // Large arguments stay finite through the scaled form.
    CHECK(std::isfinite(modified_bessel_i_scaled(5, 2e4)));
    CHECK_THAT(modified_bessel_i_ratio(1, 1e4), WithinRel(1.0 - 0.5 / 1e4, 1e-6));
}
